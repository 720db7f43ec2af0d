#ifndef CSLEARN_CONSTRAINTS_HPP
#define CSLEARN_CONSTRAINTS_HPP

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "cslearn/graph.hpp"

namespace cslearn {

enum class ConstraintKind { Required, Forbidden };

// Soft edge belief: "from -> to should (not) be present", with a reward
// weight.  Weights are magnitudes, always >= 0.
struct EdgeConstraint {
    std::string from, to;
    ConstraintKind kind = ConstraintKind::Required;
    double weight = 1.0;
};

class ConstraintSet {
public:
    ConstraintSet() = default;
    explicit ConstraintSet(std::vector<EdgeConstraint> items);

    const std::vector<EdgeConstraint>& items() const { return items_; }
    bool empty() const { return items_.empty(); }

    // Same constraints, every weight replaced; used for weight sweeps.
    ConstraintSet with_uniform_weight(double weight) const;

    struct Resolved {
        int from = 0, to = 0;
        ConstraintKind kind = ConstraintKind::Required;
        double weight = 1.0;
    };
    std::vector<Resolved> resolve(const std::vector<std::string>& names) const;

private:
    std::vector<EdgeConstraint> items_;
};

// A satisfied constraint contributes +weight, a violated one -weight:
// required edges count as satisfied when present, forbidden ones when absent.
double soft_constraint_term(const Dag& g, const ConstraintSet& constraints);

// Advisory edge belief with no score authority; consumed by oracles.
struct PairPlausibility {
    std::string from, to;
    double plausibility = 0.5;  // in [0, 1]
};

// On-disk knowledge document (JSON): constraints plus optional pair
// plausibilities, variable descriptions and free-text background.
struct KnowledgeFile {
    ConstraintSet constraints;
    std::vector<PairPlausibility> plausibilities;
    std::map<std::string, std::string> descriptions;
    std::string background;
};

KnowledgeFile parse_knowledge_json(std::string_view text);
KnowledgeFile load_knowledge_file(const std::string& path);

} // namespace cslearn

#endif
