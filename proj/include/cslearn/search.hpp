#ifndef CSLEARN_SEARCH_HPP
#define CSLEARN_SEARCH_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "cslearn/dataset.hpp"
#include "cslearn/graph.hpp"
#include "cslearn/oracle.hpp"
#include "cslearn/rng.hpp"
#include "cslearn/scoring.hpp"

namespace cslearn {

// Where oracle advice may enter the genetic search.  Every oracle-flavoured
// operator degrades to its classical counterpart (drawing from the same
// per-child stream) whenever the proposal is missing or fails validation,
// so a null oracle reproduces the classical run bit for bit.
enum class CrossoverKind { Uniform, ParentBased, Oracle };
enum class MutationKind { BitFlip, Oracle };
enum class InitKind { Random, OraclePruned };

CrossoverKind crossover_kind_from_string(std::string_view s);
MutationKind mutation_kind_from_string(std::string_view s);
InitKind init_kind_from_string(std::string_view s);
std::string to_string(CrossoverKind k);
std::string to_string(MutationKind k);
std::string to_string(InitKind k);

struct GaConfig {
    int population_size = 50;
    int tournament_size = 3;
    int elitism_count = 1;
    double crossover_rate = 0.9;
    double mutation_rate = 0.0;  // 0 selects the default 2 / n^2 per-slot rate
    int max_indegree = 4;        // keep equal to the scorer's cap
    CrossoverKind crossover = CrossoverKind::Uniform;
    MutationKind mutation = MutationKind::BitFlip;
    InitKind init = InitKind::Random;
    double tau = 0.2;  // plausibility below tau prunes an edge slot at init
    std::int64_t budget = 1000;  // distinct full-graph score evaluations
    RngSeed seed = 0;

    void validate() const;  // throws Errc::Config
};

struct GenerationStats {
    int generation = 0;  // 0 is the initial population
    double best = 0.0;   // best score in the population
    double mean = 0.0;
};

struct SearchResult {
    Dag best_graph;
    double best_score = 0.0;
    std::int64_t evaluations_used = 0;
    std::vector<GenerationStats> history;
    std::string provenance;  // JSON: algorithm, config, scorer, oracle
};

// True when (cand_score, cand) should replace (best_score, best).  Scores
// within 1e-9 relative tolerance count as tied; ties go to the graph whose
// sorted edge list is lexicographically smaller, so the winner of a run is
// a pure function of the evaluated set.
bool better_graph(double cand_score, const Dag& cand, double best_score, const Dag& best);

// Allowed edge-slot mask from oracle beliefs: slot (i, j) survives iff its
// plausibility (default 0.5 when unmentioned) reaches tau.  Unknown names
// throw.
AdjacencyMatrix plausibility_mask(const std::vector<std::string>& names,
                                  const std::vector<PairPlausibility>& pairs, double tau);

// Random DAGs for generation zero.  Individual i draws from
// derive(seed, kStreamInit, i): a uniform topological permutation, then each
// forward slot allowed by the mask with probability 2/n, then random removal
// of incoming edges down to the in-degree cap.  A node the mask would
// isolate completely gets its incident slots re-allowed first; pruning may
// bias the search but must never disconnect it.
std::vector<Dag> init_population(const GaConfig& cfg, const std::vector<std::string>& names,
                                 const AdjacencyMatrix& allowed);

// Deletes edges until acyclic.  Each cycle found is broken by the oracle's
// choice when that choice lies on the cycle, otherwise by the cycle edge
// whose removal costs the least local score (ties to the lexicographically
// smallest (from, to)).  Acyclic input comes back unchanged.
Dag repair_cycles(const std::vector<std::string>& names, AdjacencyMatrix adj,
                  SuggestionOracle& oracle, GraphScorer& scorer);

// One GA run.  `ds` must be the dataset the scorer was built over; the
// search itself only consults the scorer.  Evaluations are counted per
// distinct graph (repeats hit a memo) and the run stops when the budget is
// exhausted, finishing no generation partially.  `ctx`, when given, lets
// the oracle see variable descriptions and background text.
SearchResult run_search(const GaConfig& cfg, const CategoricalDataset& ds, GraphScorer& scorer,
                        SuggestionOracle& oracle, const OracleContext* ctx = nullptr);

// Greedy add/remove/reverse ascent from the empty graph.  Each accepted
// move costs one evaluation (the start graph costs the first); stops at a
// local optimum or when the budget runs out.  Improvement must exceed 1e-9
// to count, so independent data yields the empty graph.
SearchResult hill_climb(const CategoricalDataset& ds, GraphScorer& scorer, RngSeed seed,
                        std::int64_t budget);

// Scores graphs drawn from the same proposal distribution as generation
// zero (all slots allowed) until `budget` distinct graphs are evaluated.
// The equal-budget baseline oracle-guided runs are judged against.
// History rows record (running evaluation count, best so far, draw's score).
SearchResult random_search(const CategoricalDataset& ds, GraphScorer& scorer, RngSeed seed,
                           std::int64_t budget, int max_indegree = 4);

namespace detail {

struct GraphKey {
    std::vector<std::uint64_t> words;
    bool operator==(const GraphKey&) const = default;
};

struct GraphKeyHash {
    std::size_t operator()(const GraphKey& k) const {
        std::uint64_t h = 0xcbf29ce484222325ull;
        for (std::uint64_t w : k.words) {
            h ^= w;
            h *= 0x100000001b3ull;
        }
        return std::size_t(h);
    }
};

} // namespace detail

// Search state exposed for stepwise driving and tests; run_search is a thin
// loop over step_generation.
struct SearchState {
    GaConfig cfg;  // mutation_rate already resolved
    std::vector<std::string> names;
    AdjacencyMatrix allowed;
    std::vector<Dag> population;
    std::vector<double> scores;
    int generation = 0;
    std::int64_t evaluations = 0;
    bool budget_exhausted = false;
    std::optional<Dag> best;
    double best_score = 0.0;
    std::vector<GenerationStats> history;
    std::unordered_map<detail::GraphKey, double, detail::GraphKeyHash> memo;
};

SearchState init_search(const GaConfig& cfg, const CategoricalDataset& ds, GraphScorer& scorer,
                        SuggestionOracle& oracle, const OracleContext* ctx = nullptr);

// Builds generation state.generation + 1.  Returns false (leaving the
// previous population in place) when the budget dies mid-generation.
bool step_generation(SearchState& state, GraphScorer& scorer, SuggestionOracle& oracle);

} // namespace cslearn

#endif
