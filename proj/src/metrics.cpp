#include "cslearn/metrics.hpp"

#include <algorithm>

#include "cslearn/errors.hpp"

namespace cslearn {

namespace {

// Maps truth node indices onto the learned graph's index space, insisting on
// identical name sets.
std::vector<int> alignment(const Dag& learned, const Dag& truth) {
    if (learned.node_count() != truth.node_count())
        fail(Errc::NodeSetMismatch, "graphs have different node counts");
    std::vector<int> map(truth.node_count());
    for (int v = 0; v < truth.node_count(); ++v) {
        const std::string& name = truth.node_names()[v];
        bool found = false;
        for (int u = 0; u < learned.node_count(); ++u) {
            if (learned.node_names()[u] == name) {
                map[v] = u;
                found = true;
                break;
            }
        }
        if (!found) fail(Errc::NodeSetMismatch, "node '" + name + "' missing from learned graph");
    }
    return map;
}

AdjacencyMatrix remap(const Dag& truth, const std::vector<int>& map) {
    AdjacencyMatrix adj(truth.node_count());
    for (const Edge& e : truth.edges()) adj.set(map[e.from], map[e.to], true);
    return adj;
}

} // namespace

int shd(const Dag& learned, const Dag& truth) {
    AdjacencyMatrix t = remap(truth, alignment(learned, truth));
    const AdjacencyMatrix& l = learned.adjacency();
    const int n = l.size();
    int dist = 0;
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            bool lij = l.at(i, j), lji = l.at(j, i);
            bool tij = t.at(i, j), tji = t.at(j, i);
            if (lij == tij && lji == tji) continue;
            // Any disagreement on an unordered pair costs one unit, so a
            // reversed edge counts the same as a missing or spurious one.
            ++dist;
        }
    }
    return dist;
}

F1Scores edge_f1(const Dag& learned, const Dag& truth) {
    AdjacencyMatrix t = remap(truth, alignment(learned, truth));
    const AdjacencyMatrix& l = learned.adjacency();
    const int n = l.size();

    EdgeConfusion c;
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            if (i == j) continue;
            bool lij = l.at(i, j), tij = t.at(i, j);
            if (lij && tij) ++c.tp;
            if (lij && !tij) ++c.fp;
            if (!lij && tij) ++c.fn;
            if (i < j) {
                bool la = lij || l.at(j, i), ta = tij || t.at(j, i);
                if (la && ta) ++c.tp_skel;
                if (la && !ta) ++c.fp_skel;
                if (!la && ta) ++c.fn_skel;
            }
        }
    }

    auto ratio = [](long long num, long long den) { return den == 0 ? 1.0 : double(num) / double(den); };
    auto f1_of = [](double p, double r) { return p + r == 0.0 ? 0.0 : 2.0 * p * r / (p + r); };

    F1Scores out;
    out.counts = c;
    out.precision = ratio(c.tp, c.tp + c.fp);
    out.recall = ratio(c.tp, c.tp + c.fn);
    out.f1 = (c.tp + c.fp + c.fn) == 0 ? 1.0 : f1_of(out.precision, out.recall);
    out.precision_skel = ratio(c.tp_skel, c.tp_skel + c.fp_skel);
    out.recall_skel = ratio(c.tp_skel, c.tp_skel + c.fn_skel);
    out.f1_skel = (c.tp_skel + c.fp_skel + c.fn_skel) == 0 ? 1.0 : f1_of(out.precision_skel, out.recall_skel);
    return out;
}

PriorAuditStats prior_audit_stats(const ConstraintSet& constraints, const Dag& learned,
                                  const Dag& truth) {
    AdjacencyMatrix t = remap(truth, alignment(learned, truth));
    PriorAuditStats out;
    for (const auto& c : constraints.resolve(learned.node_names())) {
        if (c.kind != ConstraintKind::Required) continue;
        ++out.constraint_count;
        if (t.at(c.from, c.to)) continue;  // prior agrees with the truth
        ++out.wrong_count;
        if (learned.has_edge(c.from, c.to)) ++out.accepted_wrong;
    }
    if (out.constraint_count > 0)
        out.wrong_prior_proportion = double(out.wrong_count) / double(out.constraint_count);
    if (out.wrong_count > 0)
        out.rejected_wrong_prior_proportion =
            double(out.wrong_count - out.accepted_wrong) / double(out.wrong_count);
    return out;
}

} // namespace cslearn
