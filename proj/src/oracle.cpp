#include "cslearn/oracle.hpp"

#include <algorithm>

#include "cslearn/errors.hpp"
#include "cslearn/independence.hpp"

namespace cslearn {

namespace {

class NullOracle final : public SuggestionOracle {
public:
    std::string name() const override { return "null"; }
    std::vector<PairPlausibility> pair_plausibilities(const OracleContext&) override { return {}; }
    std::optional<EdgeOp> propose_mutation(const Dag&, MutationGoal) override { return std::nullopt; }
    std::optional<std::vector<int>> propose_crossover(const Dag&, const Dag&) override {
        return std::nullopt;
    }
    std::optional<Edge> propose_cycle_break(const std::vector<std::string>&, const std::vector<Edge>&,
                                            const std::vector<Edge>&) override {
        return std::nullopt;
    }
};

class RandomOracle final : public SuggestionOracle {
public:
    explicit RandomOracle(RngSeed seed) : rng_(Rng::derive(seed, kStreamOracle)) {}

    std::string name() const override { return "random"; }

    std::vector<PairPlausibility> pair_plausibilities(const OracleContext&) override { return {}; }

    std::optional<EdgeOp> propose_mutation(const Dag& g, MutationGoal) override {
        const int n = g.node_count();
        if (n < 2) return std::nullopt;
        int from = int(rng_.below(std::uint64_t(n)));
        int to = int(rng_.below(std::uint64_t(n - 1)));
        if (to >= from) ++to;
        EdgeOp op;
        op.from = from;
        op.to = to;
        if (!g.has_edge(from, to))
            op.kind = EdgeOp::Kind::Add;  // may still create a cycle: engine's problem
        else
            op.kind = rng_.bernoulli(0.5) ? EdgeOp::Kind::Remove : EdgeOp::Kind::Reverse;
        return op;
    }

    std::optional<std::vector<int>> propose_crossover(const Dag& a, const Dag&) override {
        std::vector<int> sources(a.node_count());
        for (int& s : sources) s = int(rng_.below(2));
        return sources;
    }

    std::optional<Edge> propose_cycle_break(const std::vector<std::string>&, const std::vector<Edge>&,
                                            const std::vector<Edge>& cycle) override {
        if (cycle.empty()) return std::nullopt;
        return cycle[rng_.below(cycle.size())];
    }

private:
    Rng rng_;
};

class KnowledgeOracle final : public SuggestionOracle {
public:
    explicit KnowledgeOracle(KnowledgeFile knowledge) : kf_(std::move(knowledge)) {}

    std::string name() const override { return "knowledge"; }

    std::vector<PairPlausibility> pair_plausibilities(const OracleContext&) override {
        std::vector<PairPlausibility> out = kf_.plausibilities;
        auto listed = [&out](const std::string& from, const std::string& to) {
            for (const PairPlausibility& p : out)
                if (p.from == from && p.to == to) return true;
            return false;
        };
        for (const EdgeConstraint& c : kf_.constraints.items())
            if (!listed(c.from, c.to))
                out.push_back({c.from, c.to, c.kind == ConstraintKind::Required ? 1.0 : 0.0});
        return out;
    }

    std::optional<EdgeOp> propose_mutation(const Dag& g, MutationGoal goal) override {
        std::vector<EdgeOp> adds, reverses, removes;
        for (const EdgeConstraint& c : kf_.constraints.items()) {
            int from, to;
            try {
                from = g.node_index(c.from);
                to = g.node_index(c.to);
            } catch (const Error&) {
                continue;  // constraint talks about a variable this graph lacks
            }
            if (c.kind == ConstraintKind::Required) {
                if (g.has_edge(from, to)) continue;
                if (g.has_edge(to, from))
                    reverses.push_back({EdgeOp::Kind::Reverse, to, from});
                else
                    adds.push_back({EdgeOp::Kind::Add, from, to});
            } else if (g.has_edge(from, to)) {
                removes.push_back({EdgeOp::Kind::Remove, from, to});
            }
        }
        // Diversification pushes towards new edges first; refinement cleans
        // up violations first.  Constraint file order breaks ties.
        std::vector<const std::vector<EdgeOp>*> ordered;
        if (goal == MutationGoal::Diversify)
            ordered = {&adds, &reverses, &removes};
        else
            ordered = {&removes, &reverses, &adds};
        for (const auto* bucket : ordered)
            if (!bucket->empty()) return bucket->front();
        return std::nullopt;
    }

    std::optional<std::vector<int>> propose_crossover(const Dag&, const Dag&) override {
        return std::nullopt;
    }

    std::optional<Edge> propose_cycle_break(const std::vector<std::string>& names,
                                            const std::vector<Edge>&,
                                            const std::vector<Edge>& cycle) override {
        auto kind_of = [this, &names](const Edge& e) -> std::optional<ConstraintKind> {
            for (const EdgeConstraint& c : kf_.constraints.items())
                if (names[e.from] == c.from && names[e.to] == c.to) return c.kind;
            return std::nullopt;
        };
        for (const Edge& e : cycle)  // best: delete an edge believed wrong
            if (kind_of(e) == ConstraintKind::Forbidden) return e;
        for (const Edge& e : cycle)  // next: delete an edge with no backing
            if (!kind_of(e).has_value()) return e;
        return cycle.empty() ? std::nullopt : std::optional<Edge>(cycle.front());
    }

private:
    KnowledgeFile kf_;
};

// Shared shape of the two data-driven initialization oracles.
class PairScoreOracle : public SuggestionOracle {
public:
    std::vector<PairPlausibility> pair_plausibilities(const OracleContext&) override { return pairs_; }
    std::optional<EdgeOp> propose_mutation(const Dag&, MutationGoal) override { return std::nullopt; }
    std::optional<std::vector<int>> propose_crossover(const Dag&, const Dag&) override {
        return std::nullopt;
    }
    std::optional<Edge> propose_cycle_break(const std::vector<std::string>&, const std::vector<Edge>&,
                                            const std::vector<Edge>&) override {
        return std::nullopt;
    }

protected:
    void set_pair(const std::string& a, const std::string& b, double plausibility) {
        pairs_.push_back({a, b, plausibility});
        pairs_.push_back({b, a, plausibility});
    }

private:
    std::vector<PairPlausibility> pairs_;
};

class CiInitOracle final : public PairScoreOracle {
public:
    CiInitOracle(const CategoricalDataset& ds, double alpha) : alpha_(alpha) {
        for (int i = 0; i < ds.variable_count(); ++i)
            for (int j = i + 1; j < ds.variable_count(); ++j) {
                bool dependent = !g2_test(ds, i, j, {}, alpha).independent;
                set_pair(ds.variable(i).name, ds.variable(j).name, dependent ? 1.0 : 0.0);
            }
    }
    std::string name() const override { return "ci_init(alpha=" + std::to_string(alpha_) + ")"; }

private:
    double alpha_;
};

class MiInitOracle final : public PairScoreOracle {
public:
    MiInitOracle(const CategoricalDataset& ds, double quantile) : quantile_(quantile) {
        if (quantile < 0.0 || quantile > 1.0)
            fail(Errc::Config, "mi_init_oracle: quantile must be in [0, 1]");
        struct Entry {
            int i, j;
            double mi;
        };
        std::vector<Entry> entries;
        for (int i = 0; i < ds.variable_count(); ++i)
            for (int j = i + 1; j < ds.variable_count(); ++j)
                entries.push_back({i, j, mutual_information(ds, i, j)});
        if (entries.empty()) return;

        std::vector<double> sorted;
        for (const Entry& e : entries) sorted.push_back(e.mi);
        std::sort(sorted.begin(), sorted.end());
        double h = double(sorted.size() - 1) * quantile;
        std::size_t lo = std::size_t(h);
        double threshold = sorted[lo];
        if (lo + 1 < sorted.size()) threshold += (h - double(lo)) * (sorted[lo + 1] - sorted[lo]);

        for (const Entry& e : entries)
            set_pair(ds.variable(e.i).name, ds.variable(e.j).name, e.mi >= threshold ? 1.0 : 0.0);
    }
    std::string name() const override { return "mi_init(quantile=" + std::to_string(quantile_) + ")"; }

private:
    double quantile_;
};

} // namespace

std::unique_ptr<SuggestionOracle> null_oracle() { return std::make_unique<NullOracle>(); }

std::unique_ptr<SuggestionOracle> random_oracle(RngSeed seed) {
    return std::make_unique<RandomOracle>(seed);
}

std::unique_ptr<SuggestionOracle> knowledge_oracle(KnowledgeFile knowledge) {
    return std::make_unique<KnowledgeOracle>(std::move(knowledge));
}

std::unique_ptr<SuggestionOracle> ci_init_oracle(const CategoricalDataset& ds, double alpha) {
    return std::make_unique<CiInitOracle>(ds, alpha);
}

std::unique_ptr<SuggestionOracle> mi_init_oracle(const CategoricalDataset& ds, double quantile) {
    return std::make_unique<MiInitOracle>(ds, quantile);
}

} // namespace cslearn
