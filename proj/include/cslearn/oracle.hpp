#ifndef CSLEARN_ORACLE_HPP
#define CSLEARN_ORACLE_HPP

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "cslearn/constraints.hpp"
#include "cslearn/dataset.hpp"
#include "cslearn/graph.hpp"
#include "cslearn/rng.hpp"

namespace cslearn {

// What an oracle may know about the problem besides the graphs it is shown.
struct OracleContext {
    std::vector<std::string> names;
    std::map<std::string, std::string> descriptions;
    std::string background;
};

enum class MutationGoal { Diversify, Refine };

// Advisory interface.  Oracles shape where the search looks; they never see
// scores and nothing they return is trusted: the engine validates every
// proposal and falls back to its classical operator when an oracle returns
// nothing or nonsense.  Returning std::nullopt (or an empty list) is always
// legal and means "no opinion".
class SuggestionOracle {
public:
    virtual ~SuggestionOracle() = default;

    virtual std::string name() const = 0;

    // Directed edge beliefs in [0, 1] used to prune initial populations.
    // Pairs not mentioned default to 0.5.
    virtual std::vector<PairPlausibility> pair_plausibilities(const OracleContext& ctx) = 0;

    // An edge edit for the given structure.
    virtual std::optional<EdgeOp> propose_mutation(const Dag& g, MutationGoal goal) = 0;

    // Per-node donor choice for crossover: entry v selects the parent graph
    // (0 = a, 1 = b) contributing node v's incoming edges.
    virtual std::optional<std::vector<int>> propose_crossover(const Dag& a, const Dag& b) = 0;

    // Which edge of `cycle` to delete from a cyclic intermediate structure,
    // described by its node names and full edge list.
    virtual std::optional<Edge> propose_cycle_break(const std::vector<std::string>& names,
                                                    const std::vector<Edge>& edges,
                                                    const std::vector<Edge>& cycle) = 0;
};

// No opinions ever; a run guided by it must match the classical run bit for
// bit.
std::unique_ptr<SuggestionOracle> null_oracle();

// Arbitrary (possibly invalid) proposals from a private stream; exists to
// demonstrate that oracle quality cannot corrupt score decisions.
std::unique_ptr<SuggestionOracle> random_oracle(RngSeed seed);

// Replays the beliefs of a knowledge document.  Constraints without an
// explicit plausibility entry imply 1 (required) or 0 (forbidden).
std::unique_ptr<SuggestionOracle> knowledge_oracle(KnowledgeFile knowledge);

// Marks a pair plausible (1) unless a marginal G^2 test at `alpha` calls it
// independent (0).  Initialization-only: proposes nothing else.
std::unique_ptr<SuggestionOracle> ci_init_oracle(const CategoricalDataset& ds, double alpha);

// Marks the pairs whose mutual information reaches the given quantile of
// all pairwise values.  Initialization-only.
std::unique_ptr<SuggestionOracle> mi_init_oracle(const CategoricalDataset& ds, double quantile);

} // namespace cslearn

#endif
