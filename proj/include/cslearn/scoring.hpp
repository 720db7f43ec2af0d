#ifndef CSLEARN_SCORING_HPP
#define CSLEARN_SCORING_HPP

#include <mutex>
#include <optional>
#include <string>
#include <unordered_map>

#include "cslearn/constraints.hpp"
#include "cslearn/dataset.hpp"
#include "cslearn/graph.hpp"

namespace cslearn {

// All families are larger-is-better log scores in nats.
//
//   bic   sum_jk N_ijk ln(N_ijk / N_ij)  -  (r-1) q / 2 * ln N
//   bdeu  sum_j [ lnG(a_j) - lnG(a_j + N_j) + sum_k lnG(a_jk + N_jk) - lnG(a_jk) ]
//         with a_jk = ess / (r q), a_j = ess / q
//   mdl   bic minus |parents| * ln(n) per node, charging for the parent-set
//         encoding on top of the half-log-N parameter cost
//
// 0 ln 0 counts as 0.  r is the child cardinality, q the number of parent
// configurations, N_ij / N_ijk the observed counts, n the variable count.
enum class ScoreFamily { Bic, Bdeu, Mdl };

ScoreFamily score_family_from_string(std::string_view s);
std::string to_string(ScoreFamily f);

struct ScoreHyper {
    double ess = 1.0;      // BDeu equivalent sample size
    int max_indegree = 4;  // graphs exceeding this score -infinity

    void validate() const;
};

struct LocalScoreKey {
    int child = 0;
    std::vector<int> parents;  // strictly ascending
    bool operator==(const LocalScoreKey&) const = default;
};

struct LocalScoreKeyHash {
    std::size_t operator()(const LocalScoreKey& k) const {
        std::size_t h = std::size_t(k.child) * 0x9e3779b97f4a7c15ull;
        for (int p : k.parents) h = (h ^ std::size_t(p + 1)) * 0x100000001b3ull;
        return h;
    }
};

// Memo for local scores.  One cache belongs to one (family, dataset, hyper)
// combination; nothing in the key distinguishes them.
class ScoreCache {
public:
    std::optional<double> lookup(const LocalScoreKey& key) const;
    void insert(const LocalScoreKey& key, double value);
    std::size_t size() const;

private:
    mutable std::mutex mu_;
    std::unordered_map<LocalScoreKey, double, LocalScoreKeyHash> map_;
};

double local_score(ScoreFamily family, const CategoricalDataset& ds, const LocalScoreKey& key,
                   const ScoreHyper& hyper);

double total_score(ScoreFamily family, const CategoricalDataset& ds, const Dag& g,
                   const ScoreHyper& hyper, ScoreCache* cache = nullptr);

// Data score plus the soft constraint term.  This is the blended objective
// the audit mode exists to probe; the prior term rewards conforming to
// stated edge beliefs whether or not the data supports them.
double audit_score(ScoreFamily family, const CategoricalDataset& ds, const Dag& g,
                   const ConstraintSet& constraints, const ScoreHyper& hyper,
                   ScoreCache* cache = nullptr);

// What the search consumes.  total() decides; local() serves delta
// computations and repair heuristics.
class GraphScorer {
public:
    virtual ~GraphScorer() = default;
    virtual int node_count() const = 0;
    virtual const std::vector<std::string>& node_names() const = 0;
    virtual double total(const Dag& g) = 0;
    virtual double local(int child, const std::vector<int>& parents) = 0;
    virtual std::string describe() const = 0;
};

class DataScorer final : public GraphScorer {
public:
    DataScorer(ScoreFamily family, const CategoricalDataset& ds, ScoreHyper hyper);

    int node_count() const override { return ds_.variable_count(); }
    const std::vector<std::string>& node_names() const override { return names_; }
    double total(const Dag& g) override;
    double local(int child, const std::vector<int>& parents) override;
    std::string describe() const override;

private:
    ScoreFamily family_;
    const CategoricalDataset& ds_;
    ScoreHyper hyper_;
    std::vector<std::string> names_;
    ScoreCache cache_;
};

// Wraps a DataScorer and adds the constraint term.  Each edge constraint is
// attributed to its child node so local() still sums to total(); that
// attribution is exactly the decomposability assumption the blended score
// gets away with only because constraints here mention single edges.
class AuditScorer final : public GraphScorer {
public:
    AuditScorer(ScoreFamily family, const CategoricalDataset& ds, const ConstraintSet& constraints,
                ScoreHyper hyper);

    int node_count() const override { return data_.node_count(); }
    const std::vector<std::string>& node_names() const override { return data_.node_names(); }
    double total(const Dag& g) override;
    double local(int child, const std::vector<int>& parents) override;
    std::string describe() const override;

private:
    DataScorer data_;
    std::vector<ConstraintSet::Resolved> resolved_;
};

} // namespace cslearn

#endif
