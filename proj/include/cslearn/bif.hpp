#ifndef CSLEARN_BIF_HPP
#define CSLEARN_BIF_HPP

#include <string>
#include <string_view>
#include <vector>

#include "cslearn/dataset.hpp"
#include "cslearn/graph.hpp"

namespace cslearn {

// Conditional probability table for one node.  parents are node indices in
// ascending order.  Rows are indexed by the mixed-radix configuration of the
// parent values with the first (smallest-index) parent most significant;
// probs[cfg * cardinality + k] is P(child = k | parents = cfg).
struct Cpt {
    std::vector<int> parents;
    std::vector<double> probs;

    int row_count(int cardinality) const { return int(probs.size()) / cardinality; }
};

// Discrete Bayesian network: DAG + per-node label sets + CPTs.
// Invariants checked at construction: CPT dimensions match parent
// cardinalities and every probability row sums to 1 within 1e-9.
class BayesNet {
public:
    BayesNet(Dag graph, std::vector<Variable> variables, std::vector<Cpt> cpts);

    const Dag& graph() const { return graph_; }
    int node_count() const { return graph_.node_count(); }
    const Variable& variable(int node) const { return vars_[node]; }
    const std::vector<Variable>& variables() const { return vars_; }
    const Cpt& cpt(int node) const { return cpts_[node]; }

    // Row index into the node's CPT for a full assignment of parent values.
    int parent_config(int node, const std::vector<std::uint8_t>& values) const;

private:
    Dag graph_;
    std::vector<Variable> vars_;
    std::vector<Cpt> cpts_;
};

std::vector<Edge> edges_of(const BayesNet& net);

// Parses the discrete subset of the BIF format: network header, `variable`
// blocks with `type discrete`, and `probability` blocks given either as a
// flat `table` or as per-configuration rows `(label, ...) p0, p1, ...;`.
// `property` lines are ignored.  Rows may deviate from unit sum by up to
// 1e-6 and are renormalized; larger deviations are rejected.
BayesNet parse_bif(std::string_view text);
BayesNet parse_bif_file(const std::string& path);

} // namespace cslearn

#endif
