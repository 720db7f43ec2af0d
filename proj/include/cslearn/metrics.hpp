#ifndef CSLEARN_METRICS_HPP
#define CSLEARN_METRICS_HPP

#include "cslearn/constraints.hpp"
#include "cslearn/graph.hpp"

namespace cslearn {

struct EdgeConfusion {
    long long tp = 0, fp = 0, fn = 0;              // directed edges
    long long tp_skel = 0, fp_skel = 0, fn_skel = 0;  // adjacencies, direction ignored
};

struct F1Scores {
    double precision = 0.0, recall = 0.0, f1 = 0.0;
    double precision_skel = 0.0, recall_skel = 0.0, f1_skel = 0.0;
    EdgeConfusion counts;
};

// Structural Hamming distance: one unit per missing edge, per extra edge and
// per reversed edge.  Graphs must share the same node names; differing name
// order is aligned by name.
int shd(const Dag& learned, const Dag& truth);

// Directed and skeleton precision/recall/F1 of `learned` against `truth`.
// Conventions for empty denominators: precision with no predicted edges and
// recall with no true edges are 1; F1 of two empty graphs is 1, otherwise
// 0/0 cases propagate to 0 when either component is 0.
F1Scores edge_f1(const Dag& learned, const Dag& truth);

struct PriorAuditStats {
    int constraint_count = 0;   // required-edge constraints considered
    int wrong_count = 0;        // those whose edge is absent from the truth
    int accepted_wrong = 0;     // wrong ones present in the learned graph
    double wrong_prior_proportion = 0.0;      // wrong_count / constraint_count
    double rejected_wrong_prior_proportion = 0.0;  // 1 - accepted/wrong
};

// How a learned graph treated required-edge priors that contradict the
// ground truth.  A wrong prior counts as rejected when its edge is absent
// from the learned graph.  Forbidden-edge constraints are ignored here.
PriorAuditStats prior_audit_stats(const ConstraintSet& constraints, const Dag& learned,
                                  const Dag& truth);

} // namespace cslearn

#endif
