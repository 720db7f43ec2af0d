#include "cslearn/scoring.hpp"

#include <cmath>
#include <limits>

#include "cslearn/errors.hpp"

namespace cslearn {

ScoreFamily score_family_from_string(std::string_view s) {
    if (s == "bic") return ScoreFamily::Bic;
    if (s == "bdeu") return ScoreFamily::Bdeu;
    if (s == "mdl") return ScoreFamily::Mdl;
    fail(Errc::Config, "unknown score family '" + std::string(s) + "' (expected bic, bdeu or mdl)");
}

std::string to_string(ScoreFamily f) {
    switch (f) {
        case ScoreFamily::Bic: return "bic";
        case ScoreFamily::Bdeu: return "bdeu";
        case ScoreFamily::Mdl: return "mdl";
    }
    return "?";
}

void ScoreHyper::validate() const {
    if (!(ess > 0.0)) fail(Errc::Config, "ess must be > 0");
    if (max_indegree < 1) fail(Errc::Config, "max_indegree must be >= 1");
}

std::optional<double> ScoreCache::lookup(const LocalScoreKey& key) const {
    std::lock_guard<std::mutex> lock(mu_);
    auto it = map_.find(key);
    if (it == map_.end()) return std::nullopt;
    return it->second;
}

void ScoreCache::insert(const LocalScoreKey& key, double value) {
    std::lock_guard<std::mutex> lock(mu_);
    map_.emplace(key, value);
}

std::size_t ScoreCache::size() const {
    std::lock_guard<std::mutex> lock(mu_);
    return map_.size();
}

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

struct CountTable {
    std::size_t q = 1;                   // parent configurations (by formula)
    int r = 0;                           // child cardinality
    std::vector<long long> njk;          // q * r, dense
    std::vector<long long> nj;           // q
};

CountTable count_configurations(const CategoricalDataset& ds, const LocalScoreKey& key) {
    const int n = ds.variable_count();
    if (key.child < 0 || key.child >= n) fail(Errc::InvalidArgument, "local_score: child out of range");
    for (std::size_t i = 0; i < key.parents.size(); ++i) {
        int p = key.parents[i];
        if (p < 0 || p >= n) fail(Errc::InvalidArgument, "local_score: parent out of range");
        if (p == key.child) fail(Errc::InvalidArgument, "local_score: child listed as its own parent");
        if (i > 0 && key.parents[i - 1] >= p)
            fail(Errc::InvalidArgument, "local_score: parents must be strictly ascending");
    }

    CountTable t;
    t.r = ds.cardinality(key.child);
    for (int p : key.parents) {
        t.q *= std::size_t(ds.cardinality(p));
        if (t.q * std::size_t(t.r) > (std::size_t(1) << 28))
            fail(Errc::InvalidArgument, "local_score: parent state space too large");
    }
    t.njk.assign(t.q * std::size_t(t.r), 0);
    t.nj.assign(t.q, 0);
    for (int row = 0; row < ds.row_count(); ++row) {
        std::size_t cfg = 0;
        for (int p : key.parents) cfg = cfg * std::size_t(ds.cardinality(p)) + ds.value(row, p);
        ++t.njk[cfg * std::size_t(t.r) + ds.value(row, key.child)];
        ++t.nj[cfg];
    }
    return t;
}

double log_likelihood(const CountTable& t) {
    double ll = 0.0;
    for (std::size_t j = 0; j < t.q; ++j) {
        if (t.nj[j] == 0) continue;
        double lognj = std::log(double(t.nj[j]));
        for (int k = 0; k < t.r; ++k) {
            long long c = t.njk[j * std::size_t(t.r) + k];
            if (c > 0) ll += double(c) * (std::log(double(c)) - lognj);
        }
    }
    return ll;
}

double bic_local(const CategoricalDataset& ds, const CountTable& t) {
    double penalty = 0.5 * double(t.r - 1) * double(t.q) * std::log(double(ds.row_count()));
    return log_likelihood(t) - penalty;
}

double bdeu_local(const CountTable& t, double ess) {
    const double a_jk = ess / (double(t.q) * double(t.r));
    const double a_j = ess / double(t.q);
    const double lg_aj = std::lgamma(a_j);
    const double lg_ajk = std::lgamma(a_jk);
    double score = 0.0;
    for (std::size_t j = 0; j < t.q; ++j) {
        if (t.nj[j] == 0) continue;  // empty configurations contribute zero
        score += lg_aj - std::lgamma(a_j + double(t.nj[j]));
        for (int k = 0; k < t.r; ++k) {
            long long c = t.njk[j * std::size_t(t.r) + k];
            if (c > 0) score += std::lgamma(a_jk + double(c)) - lg_ajk;
        }
    }
    return score;
}

} // namespace

double local_score(ScoreFamily family, const CategoricalDataset& ds, const LocalScoreKey& key,
                   const ScoreHyper& hyper) {
    hyper.validate();
    if (int(key.parents.size()) > hyper.max_indegree) return kNegInf;
    CountTable t = count_configurations(ds, key);
    switch (family) {
        case ScoreFamily::Bic:
            return bic_local(ds, t);
        case ScoreFamily::Bdeu:
            return bdeu_local(t, hyper.ess);
        case ScoreFamily::Mdl:
            return bic_local(ds, t) -
                   double(key.parents.size()) * std::log(double(ds.variable_count()));
    }
    fail(Errc::Internal, "local_score: bad family");
}

double total_score(ScoreFamily family, const CategoricalDataset& ds, const Dag& g,
                   const ScoreHyper& hyper, ScoreCache* cache) {
    if (g.node_count() != ds.variable_count())
        fail(Errc::NodeSetMismatch, "total_score: graph and dataset sizes differ");
    double sum = 0.0;
    for (int v = 0; v < g.node_count(); ++v) {
        LocalScoreKey key{v, g.parents(v)};
        if (cache) {
            if (auto hit = cache->lookup(key)) {
                sum += *hit;
                continue;
            }
        }
        double s = local_score(family, ds, key, hyper);
        if (cache && std::isfinite(s)) cache->insert(key, s);
        sum += s;
    }
    return sum;
}

double audit_score(ScoreFamily family, const CategoricalDataset& ds, const Dag& g,
                   const ConstraintSet& constraints, const ScoreHyper& hyper, ScoreCache* cache) {
    return total_score(family, ds, g, hyper, cache) + soft_constraint_term(g, constraints);
}

DataScorer::DataScorer(ScoreFamily family, const CategoricalDataset& ds, ScoreHyper hyper)
    : family_(family), ds_(ds), hyper_(hyper), names_(ds.column_names()) {
    hyper_.validate();
}

double DataScorer::total(const Dag& g) { return total_score(family_, ds_, g, hyper_, &cache_); }

double DataScorer::local(int child, const std::vector<int>& parents) {
    LocalScoreKey key{child, parents};
    if (auto hit = cache_.lookup(key)) return *hit;
    double s = local_score(family_, ds_, key, hyper_);
    if (std::isfinite(s)) cache_.insert(key, s);
    return s;
}

std::string DataScorer::describe() const {
    std::string out = to_string(family_);
    if (family_ == ScoreFamily::Bdeu) out += "(ess=" + std::to_string(hyper_.ess) + ")";
    return out;
}

AuditScorer::AuditScorer(ScoreFamily family, const CategoricalDataset& ds,
                         const ConstraintSet& constraints, ScoreHyper hyper)
    : data_(family, ds, hyper), resolved_(constraints.resolve(ds.column_names())) {}

double AuditScorer::total(const Dag& g) {
    double sum = data_.total(g);
    for (const auto& c : resolved_) {
        bool present = g.has_edge(c.from, c.to);
        bool satisfied = (c.kind == ConstraintKind::Required) == present;
        sum += satisfied ? c.weight : -c.weight;
    }
    return sum;
}

double AuditScorer::local(int child, const std::vector<int>& parents) {
    double s = data_.local(child, parents);
    for (const auto& c : resolved_) {
        if (c.to != child) continue;
        bool present = false;
        for (int p : parents) present = present || p == c.from;
        bool satisfied = (c.kind == ConstraintKind::Required) == present;
        s += satisfied ? c.weight : -c.weight;
    }
    return s;
}

std::string AuditScorer::describe() const {
    return data_.describe() + "+constraints(" + std::to_string(resolved_.size()) + ")";
}

} // namespace cslearn
