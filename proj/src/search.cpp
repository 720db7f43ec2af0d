#include "cslearn/search.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <utility>

#include "cslearn/errors.hpp"
#include "json.hpp"

namespace cslearn {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

int name_index(const std::vector<std::string>& names, const std::string& name) {
    for (std::size_t i = 0; i < names.size(); ++i)
        if (names[i] == name) return int(i);
    fail(Errc::UnknownVariable, "unknown variable '" + name + "'");
}

void check_scorer_matches(const CategoricalDataset& ds, const GraphScorer& scorer) {
    if (scorer.node_count() != ds.variable_count() || scorer.node_names() != ds.column_names())
        fail(Errc::NodeSetMismatch, "scorer was built over a different variable set");
}

std::vector<int> ascending_parents(const AdjacencyMatrix& adj, int v) {
    std::vector<int> ps;
    for (int u = 0; u < adj.size(); ++u)
        if (adj.at(u, v)) ps.push_back(u);
    return ps;
}

std::vector<int> with_parent(const std::vector<int>& ps, int add) {
    std::vector<int> out;
    out.reserve(ps.size() + 1);
    bool placed = false;
    for (int p : ps) {
        if (!placed && add < p) {
            out.push_back(add);
            placed = true;
        }
        out.push_back(p);
    }
    if (!placed) out.push_back(add);
    return out;
}

std::vector<int> without_parent(const std::vector<int>& ps, int drop) {
    std::vector<int> out;
    out.reserve(ps.size() - 1);
    for (int p : ps)
        if (p != drop) out.push_back(p);
    return out;
}

std::vector<Edge> edges_of(const AdjacencyMatrix& adj) {
    std::vector<Edge> es;
    for (int i = 0; i < adj.size(); ++i)
        for (int j = 0; j < adj.size(); ++j)
            if (adj.at(i, j)) es.push_back({i, j});
    return es;  // row-major scan is already (from, to) sorted
}

// One random DAG: uniform topological permutation, forward slots kept with
// probability 2/n when the mask allows them, then random trimming down to
// the in-degree cap.
AdjacencyMatrix random_dag_bits(Rng& rng, int n, const AdjacencyMatrix& allowed, int cap) {
    std::vector<int> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    for (int i = n - 1; i > 0; --i) {
        int j = int(rng.below(std::uint64_t(i) + 1));
        std::swap(perm[i], perm[j]);
    }
    AdjacencyMatrix adj(n);
    double p = n > 0 ? 2.0 / n : 0.0;
    for (int a = 0; a < n; ++a)
        for (int b = a + 1; b < n; ++b) {
            int from = perm[a];
            int to = perm[b];
            if (allowed.at(from, to) && rng.bernoulli(p)) adj.set(from, to, true);
        }
    for (int v = 0; v < n; ++v) {
        while (adj.in_degree(v) > cap) {
            std::vector<int> ps = ascending_parents(adj, v);
            int drop = ps[std::size_t(rng.below(ps.size()))];
            adj.set(drop, v, false);
        }
    }
    return adj;
}

int tournament(Rng& rng, const std::vector<double>& scores, int rounds) {
    int best = int(rng.below(scores.size()));
    for (int k = 1; k < rounds; ++k) {
        int c = int(rng.below(scores.size()));
        if (scores[c] > scores[best] || (scores[c] == scores[best] && c < best)) best = c;
    }
    return best;
}

AdjacencyMatrix uniform_crossover(const Dag& a, const Dag& b, Rng& rng) {
    int n = a.node_count();
    AdjacencyMatrix child(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            if (i == j) continue;
            const Dag& donor = rng.bernoulli(0.5) ? a : b;
            if (donor.has_edge(i, j)) child.set(i, j, true);
        }
    return child;
}

AdjacencyMatrix donor_crossover(const Dag& a, const Dag& b, const std::vector<int>& sources) {
    int n = a.node_count();
    AdjacencyMatrix child(n);
    for (int v = 0; v < n; ++v) {
        const Dag& donor = sources[std::size_t(v)] == 0 ? a : b;
        for (int u = 0; u < n; ++u)
            if (u != v && donor.has_edge(u, v)) child.set(u, v, true);
    }
    return child;
}

AdjacencyMatrix parent_based_crossover(const Dag& a, const Dag& b, Rng& rng) {
    std::vector<int> sources(std::size_t(a.node_count()));
    for (int& s : sources) s = rng.bernoulli(0.5) ? 0 : 1;
    return donor_crossover(a, b, sources);
}

bool valid_sources(const std::vector<int>& sources, int n) {
    if (int(sources.size()) != n) return false;
    for (int s : sources)
        if (s != 0 && s != 1) return false;
    return true;
}

// Per-slot flips followed by a reversal sweep over the post-flip edge list.
// The sweep draws one coin per listed edge whether or not the edge is still
// present, so the number of draws depends only on the snapshot.
AdjacencyMatrix bit_flip_mutation(const Dag& g, Rng& rng, double rate) {
    AdjacencyMatrix adj = g.adjacency();
    int n = adj.size();
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (i != j && rng.bernoulli(rate)) adj.set(i, j, !adj.at(i, j));
    std::vector<Edge> snapshot = edges_of(adj);
    for (const Edge& e : snapshot) {
        if (!rng.bernoulli(rate)) continue;
        if (!adj.at(e.from, e.to)) continue;
        adj.set(e.from, e.to, false);
        adj.set(e.to, e.from, true);
    }
    return adj;
}

// Whether the op makes structural sense on g (indices in range, edge
// present/absent as the op kind needs).  Cycles are not checked here; the
// repair pass owns those.
std::optional<AdjacencyMatrix> apply_if_applicable(const Dag& g, const EdgeOp& op) {
    int n = g.node_count();
    if (op.from < 0 || op.from >= n || op.to < 0 || op.to >= n || op.from == op.to)
        return std::nullopt;
    AdjacencyMatrix adj = g.adjacency();
    switch (op.kind) {
    case EdgeOp::Kind::Add:
        if (adj.at(op.from, op.to)) return std::nullopt;
        adj.set(op.from, op.to, true);
        return adj;
    case EdgeOp::Kind::Remove:
        if (!adj.at(op.from, op.to)) return std::nullopt;
        adj.set(op.from, op.to, false);
        return adj;
    case EdgeOp::Kind::Reverse:
        if (!adj.at(op.from, op.to) || adj.at(op.to, op.from)) return std::nullopt;
        adj.set(op.from, op.to, false);
        adj.set(op.to, op.from, true);
        return adj;
    }
    return std::nullopt;
}

AdjacencyMatrix mutate(const Dag& g, Rng& rng, double rate, MutationKind kind,
                       SuggestionOracle& oracle, MutationGoal goal) {
    if (kind == MutationKind::Oracle) {
        if (auto op = oracle.propose_mutation(g, goal)) {
            if (auto adj = apply_if_applicable(g, *op)) return std::move(*adj);
        }
    }
    return bit_flip_mutation(g, rng, rate);
}

// Drops parents past the cap, each time keeping the reduced set with the
// best local score (first candidate wins ties, i.e. the smallest parent
// index is dropped).
Dag trim_indegree(Dag g, GraphScorer& scorer, int cap) {
    AdjacencyMatrix adj = g.adjacency();
    int n = adj.size();
    bool changed = false;
    for (int v = 0; v < n; ++v) {
        std::vector<int> ps = ascending_parents(adj, v);
        while (int(ps.size()) > cap) {
            std::size_t best_k = 0;
            double best_local = -kInf;
            bool have = false;
            for (std::size_t k = 0; k < ps.size(); ++k) {
                double s = scorer.local(v, without_parent(ps, ps[k]));
                if (std::isnan(s)) s = -kInf;
                if (!have || s > best_local) {
                    best_k = k;
                    best_local = s;
                    have = true;
                }
            }
            adj.set(ps[best_k], v, false);
            ps.erase(ps.begin() + std::ptrdiff_t(best_k));
            changed = true;
        }
    }
    return changed ? Dag(g.node_names(), adj) : g;
}

GenerationStats population_stats(int gen, const std::vector<double>& scores) {
    double best = -kInf;
    double sum = 0.0;
    for (double s : scores) {
        best = std::max(best, s);
        sum += s;
    }
    return {gen, best, sum / double(scores.size())};
}

// Memoized full-graph evaluation.  Repeats are free; a fresh graph costs
// one unit of budget and nullopt means the budget is gone.
std::optional<double> evaluate(SearchState& st, GraphScorer& scorer, const Dag& g) {
    detail::GraphKey key{g.adjacency().words()};
    if (auto it = st.memo.find(key); it != st.memo.end()) return it->second;
    if (st.evaluations >= st.cfg.budget) {
        st.budget_exhausted = true;
        return std::nullopt;
    }
    double s = scorer.total(g);
    ++st.evaluations;
    st.memo.emplace(std::move(key), s);
    if (!st.best || better_graph(s, g, st.best_score, *st.best)) {
        st.best = g;
        st.best_score = s;
    }
    return s;
}

nlohmann::json ga_provenance(const GaConfig& cfg, const GraphScorer& scorer,
                             const SuggestionOracle& oracle) {
    return {
        {"algorithm", "ga"},
        {"population_size", cfg.population_size},
        {"tournament_size", cfg.tournament_size},
        {"elitism_count", cfg.elitism_count},
        {"crossover_rate", cfg.crossover_rate},
        {"mutation_rate", cfg.mutation_rate},
        {"max_indegree", cfg.max_indegree},
        {"crossover", to_string(cfg.crossover)},
        {"mutation", to_string(cfg.mutation)},
        {"init", to_string(cfg.init)},
        {"tau", cfg.tau},
        {"budget", cfg.budget},
        {"seed", cfg.seed},
        {"scorer", scorer.describe()},
        {"oracle", oracle.name()},
    };
}

} // namespace

CrossoverKind crossover_kind_from_string(std::string_view s) {
    if (s == "uniform") return CrossoverKind::Uniform;
    if (s == "parent_based") return CrossoverKind::ParentBased;
    if (s == "oracle") return CrossoverKind::Oracle;
    fail(Errc::Config, "unknown crossover kind '" + std::string(s) + "'");
}

MutationKind mutation_kind_from_string(std::string_view s) {
    if (s == "bit_flip") return MutationKind::BitFlip;
    if (s == "oracle") return MutationKind::Oracle;
    fail(Errc::Config, "unknown mutation kind '" + std::string(s) + "'");
}

InitKind init_kind_from_string(std::string_view s) {
    if (s == "random") return InitKind::Random;
    if (s == "oracle_pruned") return InitKind::OraclePruned;
    fail(Errc::Config, "unknown init kind '" + std::string(s) + "'");
}

std::string to_string(CrossoverKind k) {
    switch (k) {
    case CrossoverKind::Uniform: return "uniform";
    case CrossoverKind::ParentBased: return "parent_based";
    case CrossoverKind::Oracle: return "oracle";
    }
    fail(Errc::Internal, "bad CrossoverKind");
}

std::string to_string(MutationKind k) {
    switch (k) {
    case MutationKind::BitFlip: return "bit_flip";
    case MutationKind::Oracle: return "oracle";
    }
    fail(Errc::Internal, "bad MutationKind");
}

std::string to_string(InitKind k) {
    switch (k) {
    case InitKind::Random: return "random";
    case InitKind::OraclePruned: return "oracle_pruned";
    }
    fail(Errc::Internal, "bad InitKind");
}

void GaConfig::validate() const {
    if (population_size < 2) fail(Errc::Config, "population_size must be at least 2");
    if (tournament_size < 1 || tournament_size > population_size)
        fail(Errc::Config, "tournament_size must lie in [1, population_size]");
    if (elitism_count < 0 || elitism_count >= population_size)
        fail(Errc::Config, "elitism_count must lie in [0, population_size)");
    if (!(crossover_rate >= 0.0 && crossover_rate <= 1.0))
        fail(Errc::Config, "crossover_rate must lie in [0, 1]");
    if (!(mutation_rate >= 0.0 && mutation_rate <= 1.0))
        fail(Errc::Config, "mutation_rate must lie in [0, 1] (0 selects the default)");
    if (max_indegree < 1) fail(Errc::Config, "max_indegree must be at least 1");
    if (!(tau >= 0.0 && tau <= 1.0)) fail(Errc::Config, "tau must lie in [0, 1]");
    if (budget < population_size)
        fail(Errc::Config, "budget must cover at least the initial population");
}

bool better_graph(double cand_score, const Dag& cand, double best_score, const Dag& best) {
    if (std::isnan(cand_score)) return false;
    if (std::isnan(best_score)) return true;
    if (std::isinf(cand_score) || std::isinf(best_score)) {
        if (cand_score != best_score) return cand_score > best_score;
        return cand.edges() < best.edges();
    }
    double tol = 1e-9 * std::max({1.0, std::abs(cand_score), std::abs(best_score)});
    if (cand_score - best_score > tol) return true;
    if (best_score - cand_score > tol) return false;
    return cand.edges() < best.edges();
}

AdjacencyMatrix plausibility_mask(const std::vector<std::string>& names,
                                  const std::vector<PairPlausibility>& pairs, double tau) {
    if (!(tau >= 0.0 && tau <= 1.0)) fail(Errc::Config, "tau must lie in [0, 1]");
    int n = int(names.size());
    std::vector<double> pl(std::size_t(n) * std::size_t(n), 0.5);
    for (const PairPlausibility& p : pairs) {
        int i = name_index(names, p.from);
        int j = name_index(names, p.to);
        if (i == j) fail(Errc::Config, "plausibility entry references a self-loop");
        pl[std::size_t(i) * std::size_t(n) + std::size_t(j)] = p.plausibility;
    }
    AdjacencyMatrix mask(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (i != j && pl[std::size_t(i) * std::size_t(n) + std::size_t(j)] >= tau)
                mask.set(i, j, true);
    return mask;
}

std::vector<Dag> init_population(const GaConfig& cfg, const std::vector<std::string>& names,
                                 const AdjacencyMatrix& allowed) {
    cfg.validate();
    int n = int(names.size());
    if (allowed.size() != n) fail(Errc::NodeSetMismatch, "mask size does not match the variable set");

    // Nodes the mask would isolate get all their slots back; the isolated
    // set is read off the input mask before any re-allowing happens.
    std::vector<int> isolated;
    for (int v = 0; v < n; ++v) {
        bool incident = false;
        for (int u = 0; u < n && !incident; ++u)
            if (u != v && (allowed.at(u, v) || allowed.at(v, u))) incident = true;
        if (!incident && n > 1) isolated.push_back(v);
    }
    AdjacencyMatrix effective = allowed;
    for (int v : isolated)
        for (int u = 0; u < n; ++u)
            if (u != v) {
                effective.set(u, v, true);
                effective.set(v, u, true);
            }

    std::vector<Dag> pop;
    pop.reserve(std::size_t(cfg.population_size));
    for (int i = 0; i < cfg.population_size; ++i) {
        Rng rng = Rng::derive(cfg.seed, kStreamInit, std::uint64_t(i));
        pop.emplace_back(names, random_dag_bits(rng, n, effective, cfg.max_indegree));
    }
    return pop;
}

Dag repair_cycles(const std::vector<std::string>& names, AdjacencyMatrix adj,
                  SuggestionOracle& oracle, GraphScorer& scorer) {
    if (int(names.size()) != adj.size())
        fail(Errc::NodeSetMismatch, "name list does not match the adjacency size");
    for (;;) {
        std::vector<Edge> cycle = find_cycle(adj);
        if (cycle.empty()) break;

        Edge victim{};
        bool chosen = false;
        if (auto pick = oracle.propose_cycle_break(names, edges_of(adj), cycle)) {
            for (const Edge& e : cycle)
                if (e == *pick) {
                    victim = e;
                    chosen = true;
                    break;
                }
        }
        if (!chosen) {
            // Cheapest deletion: maximize local(to, parents minus from)
            // minus local(to, parents) over the cycle, scanning edges in
            // (from, to) order so ties pick the lexicographically smallest.
            std::vector<Edge> ordered = cycle;
            std::sort(ordered.begin(), ordered.end());
            double best_delta = -kInf;
            for (const Edge& e : ordered) {
                std::vector<int> ps = ascending_parents(adj, e.to);
                double delta = scorer.local(e.to, without_parent(ps, e.from)) -
                               scorer.local(e.to, ps);
                if (!std::isfinite(delta)) delta = -kInf;
                if (!chosen || delta > best_delta) {
                    victim = e;
                    best_delta = delta;
                    chosen = true;
                }
            }
        }
        adj.set(victim.from, victim.to, false);
    }
    return Dag(names, adj);
}

SearchState init_search(const GaConfig& cfg, const CategoricalDataset& ds, GraphScorer& scorer,
                        SuggestionOracle& oracle, const OracleContext* ctx) {
    cfg.validate();
    check_scorer_matches(ds, scorer);

    SearchState st;
    st.cfg = cfg;
    st.names = scorer.node_names();
    int n = int(st.names.size());
    if (st.cfg.mutation_rate <= 0.0)
        st.cfg.mutation_rate = std::min(1.0, 2.0 / double(n) / double(n));

    if (cfg.init == InitKind::OraclePruned) {
        OracleContext local_ctx;
        if (ctx)
            local_ctx = *ctx;
        else
            local_ctx.names = st.names;
        st.allowed = plausibility_mask(st.names, oracle.pair_plausibilities(local_ctx), cfg.tau);
    } else {
        st.allowed = AdjacencyMatrix(n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                if (i != j) st.allowed.set(i, j, true);
    }

    st.population = init_population(st.cfg, st.names, st.allowed);
    st.scores.reserve(st.population.size());
    st.best_score = -kInf;
    for (const Dag& g : st.population) {
        auto s = evaluate(st, scorer, g);
        if (!s) fail(Errc::Internal, "budget cannot cover the initial population");
        st.scores.push_back(*s);
    }
    st.history.push_back(population_stats(0, st.scores));
    return st;
}

bool step_generation(SearchState& st, GraphScorer& scorer, SuggestionOracle& oracle) {
    if (st.budget_exhausted || st.evaluations >= st.cfg.budget) return false;
    const GaConfig& cfg = st.cfg;
    int pop = cfg.population_size;
    int next_gen = st.generation + 1;
    MutationGoal goal = (next_gen % 2 == 1) ? MutationGoal::Diversify : MutationGoal::Refine;

    std::vector<int> order(static_cast<std::size_t>(pop));
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return st.scores[std::size_t(a)] > st.scores[std::size_t(b)]; });

    std::vector<Dag> next_pop;
    std::vector<double> next_scores;
    next_pop.reserve(std::size_t(pop));
    next_scores.reserve(std::size_t(pop));
    for (int k = 0; k < cfg.elitism_count; ++k) {
        next_pop.push_back(st.population[std::size_t(order[std::size_t(k)])]);
        next_scores.push_back(st.scores[std::size_t(order[std::size_t(k)])]);
    }

    for (int slot = 0; slot < pop - cfg.elitism_count; ++slot) {
        Rng rng = Rng::derive(cfg.seed, kStreamVariation, std::uint64_t(next_gen),
                              std::uint64_t(slot));
        int ia = tournament(rng, st.scores, cfg.tournament_size);
        int ib = tournament(rng, st.scores, cfg.tournament_size);
        const Dag& pa = st.population[std::size_t(ia)];
        const Dag& pb = st.population[std::size_t(ib)];

        AdjacencyMatrix bits;
        if (rng.bernoulli(cfg.crossover_rate)) {
            switch (cfg.crossover) {
            case CrossoverKind::Uniform:
                bits = uniform_crossover(pa, pb, rng);
                break;
            case CrossoverKind::ParentBased:
                bits = parent_based_crossover(pa, pb, rng);
                break;
            case CrossoverKind::Oracle: {
                auto sources = oracle.propose_crossover(pa, pb);
                if (sources && valid_sources(*sources, int(st.names.size())))
                    bits = donor_crossover(pa, pb, *sources);
                else
                    bits = uniform_crossover(pa, pb, rng);
                break;
            }
            }
        } else {
            bits = pa.adjacency();
        }

        Dag child = repair_cycles(st.names, std::move(bits), oracle, scorer);
        AdjacencyMatrix mutated = mutate(child, rng, cfg.mutation_rate, cfg.mutation, oracle, goal);
        Dag offspring = repair_cycles(st.names, std::move(mutated), oracle, scorer);
        offspring = trim_indegree(std::move(offspring), scorer, cfg.max_indegree);

        auto s = evaluate(st, scorer, offspring);
        if (!s) return false;  // the partial generation is discarded
        next_pop.push_back(std::move(offspring));
        next_scores.push_back(*s);
    }

    st.population = std::move(next_pop);
    st.scores = std::move(next_scores);
    st.generation = next_gen;
    st.history.push_back(population_stats(next_gen, st.scores));
    return true;
}

SearchResult run_search(const GaConfig& cfg, const CategoricalDataset& ds, GraphScorer& scorer,
                        SuggestionOracle& oracle, const OracleContext* ctx) {
    SearchState st = init_search(cfg, ds, scorer, oracle, ctx);
    // The generation count is capped at the budget so a run whose
    // population collapses onto already-seen graphs still terminates.
    for (std::int64_t g = 0; g < cfg.budget; ++g)
        if (!step_generation(st, scorer, oracle)) break;

    SearchResult r;
    r.best_graph = *st.best;
    r.best_score = st.best_score;
    r.evaluations_used = st.evaluations;
    r.history = std::move(st.history);
    r.provenance = ga_provenance(st.cfg, scorer, oracle).dump();
    return r;
}

SearchResult hill_climb(const CategoricalDataset& ds, GraphScorer& scorer, RngSeed seed,
                        std::int64_t budget) {
    if (budget < 1) fail(Errc::Config, "budget must be at least 1");
    check_scorer_matches(ds, scorer);
    const std::vector<std::string>& names = scorer.node_names();
    int n = int(names.size());

    AdjacencyMatrix adj(n);
    std::vector<std::vector<int>> parents(static_cast<std::size_t>(n));
    std::vector<double> locals(static_cast<std::size_t>(n));
    double total = 0.0;
    for (int v = 0; v < n; ++v) {
        locals[std::size_t(v)] = scorer.local(v, {});
        total += locals[std::size_t(v)];
    }
    std::int64_t evals = 1;  // the start graph
    std::vector<GenerationStats> history{{0, total, total}};

    auto reachable = [&adj, n](int src, int dst) {
        std::vector<char> seen(std::size_t(n), 0);
        std::vector<int> stack{src};
        seen[std::size_t(src)] = 1;
        while (!stack.empty()) {
            int u = stack.back();
            stack.pop_back();
            if (u == dst) return true;
            for (int w = 0; w < n; ++w)
                if (adj.at(u, w) && !seen[std::size_t(w)]) {
                    seen[std::size_t(w)] = 1;
                    stack.push_back(w);
                }
        }
        return false;
    };

    int step = 0;
    while (evals < budget) {
        // Moves are enumerated in a fixed (from, to) scan, Remove before
        // Reverse on occupied slots; the first strict improvement past the
        // tolerance wins ties, so the walk is deterministic.
        constexpr double kTol = 1e-9;
        double best_delta = kTol;
        bool found = false;
        EdgeOp best_op;
        for (int from = 0; from < n; ++from)
            for (int to = 0; to < n; ++to) {
                if (from == to) continue;
                auto consider = [&](EdgeOp::Kind kind, double delta) {
                    if (std::isnan(delta) || !(delta > best_delta)) return;
                    best_delta = delta;
                    best_op = {kind, from, to};
                    found = true;
                };
                if (!adj.at(from, to)) {
                    if (adj.at(to, from)) continue;  // the reverse move owns this pair
                    if (reachable(to, from)) continue;
                    consider(EdgeOp::Kind::Add,
                             scorer.local(to, with_parent(parents[std::size_t(to)], from)) -
                                 locals[std::size_t(to)]);
                } else {
                    double drop_to = scorer.local(to, without_parent(parents[std::size_t(to)], from)) -
                                     locals[std::size_t(to)];
                    consider(EdgeOp::Kind::Remove, drop_to);
                    adj.set(from, to, false);
                    bool cyclic = reachable(from, to);
                    adj.set(from, to, true);
                    if (!cyclic)
                        consider(EdgeOp::Kind::Reverse,
                                 drop_to +
                                     scorer.local(from, with_parent(parents[std::size_t(from)], to)) -
                                     locals[std::size_t(from)]);
                }
            }
        if (!found) break;

        auto refresh = [&](int v) {
            double fresh = scorer.local(v, parents[std::size_t(v)]);
            total += fresh - locals[std::size_t(v)];
            locals[std::size_t(v)] = fresh;
        };
        switch (best_op.kind) {
        case EdgeOp::Kind::Add:
            adj.set(best_op.from, best_op.to, true);
            parents[std::size_t(best_op.to)] = with_parent(parents[std::size_t(best_op.to)], best_op.from);
            refresh(best_op.to);
            break;
        case EdgeOp::Kind::Remove:
            adj.set(best_op.from, best_op.to, false);
            parents[std::size_t(best_op.to)] = without_parent(parents[std::size_t(best_op.to)], best_op.from);
            refresh(best_op.to);
            break;
        case EdgeOp::Kind::Reverse:
            adj.set(best_op.from, best_op.to, false);
            adj.set(best_op.to, best_op.from, true);
            parents[std::size_t(best_op.to)] = without_parent(parents[std::size_t(best_op.to)], best_op.from);
            parents[std::size_t(best_op.from)] = with_parent(parents[std::size_t(best_op.from)], best_op.to);
            refresh(best_op.to);
            refresh(best_op.from);
            break;
        }
        ++evals;
        ++step;
        history.push_back({step, total, total});
    }

    SearchResult r;
    r.best_graph = Dag(names, adj);
    r.best_score = scorer.total(r.best_graph);  // one clean sum, not the accumulated deltas
    r.evaluations_used = evals;
    r.history = std::move(history);
    r.provenance = nlohmann::json{{"algorithm", "hill_climb"},
                                  {"budget", budget},
                                  {"seed", seed},
                                  {"scorer", scorer.describe()}}
                       .dump();
    return r;
}

SearchResult random_search(const CategoricalDataset& ds, GraphScorer& scorer, RngSeed seed,
                           std::int64_t budget, int max_indegree) {
    if (budget < 1) fail(Errc::Config, "budget must be at least 1");
    if (max_indegree < 1) fail(Errc::Config, "max_indegree must be at least 1");
    check_scorer_matches(ds, scorer);
    const std::vector<std::string>& names = scorer.node_names();
    int n = int(names.size());

    AdjacencyMatrix allowed(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (i != j) allowed.set(i, j, true);

    std::unordered_map<detail::GraphKey, double, detail::GraphKeyHash> memo;
    std::int64_t evals = 0;
    std::optional<Dag> best;
    double best_score = -kInf;
    std::vector<GenerationStats> history;

    // Small spaces run out of distinct graphs before the budget does; the
    // draw cap keeps that case finite.
    std::int64_t draw_cap = budget * 64;
    for (std::int64_t k = 0; k < draw_cap && evals < budget; ++k) {
        Rng rng = Rng::derive(seed, kStreamInit, std::uint64_t(k));
        Dag g(names, random_dag_bits(rng, n, allowed, max_indegree));
        detail::GraphKey key{g.adjacency().words()};
        if (memo.contains(key)) continue;
        double s = scorer.total(g);
        ++evals;
        memo.emplace(std::move(key), s);
        if (!best || better_graph(s, g, best_score, *best)) {
            best = std::move(g);
            best_score = s;
        }
        history.push_back({int(evals), best_score, s});
    }
    if (!best) fail(Errc::Internal, "random search evaluated nothing");

    SearchResult r;
    r.best_graph = *std::move(best);
    r.best_score = best_score;
    r.evaluations_used = evals;
    r.history = std::move(history);
    r.provenance = nlohmann::json{{"algorithm", "random_search"},
                                  {"budget", budget},
                                  {"max_indegree", max_indegree},
                                  {"seed", seed},
                                  {"scorer", scorer.describe()}}
                       .dump();
    return r;
}

} // namespace cslearn
