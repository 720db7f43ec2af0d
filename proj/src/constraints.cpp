#include "cslearn/constraints.hpp"

#include "json.hpp"

#include "cslearn/dataset.hpp"
#include "cslearn/errors.hpp"

namespace cslearn {

ConstraintSet::ConstraintSet(std::vector<EdgeConstraint> items) : items_(std::move(items)) {
    for (std::size_t i = 0; i < items_.size(); ++i) {
        const EdgeConstraint& a = items_[i];
        if (a.from.empty() || a.to.empty()) fail(Errc::Semantic, "constraint with empty endpoint name");
        if (a.from == a.to) fail(Errc::Semantic, "constraint on a self-loop: " + a.from);
        if (a.weight < 0.0) fail(Errc::Semantic, "constraint weight must be >= 0");
        for (std::size_t j = i + 1; j < items_.size(); ++j) {
            const EdgeConstraint& b = items_[j];
            if (a.from == b.from && a.to == b.to) {
                if (a.kind == b.kind)
                    fail(Errc::Semantic, "duplicate constraint on " + a.from + " -> " + a.to);
                fail(Errc::Semantic, "contradictory constraints on " + a.from + " -> " + a.to);
            }
        }
    }
}

ConstraintSet ConstraintSet::with_uniform_weight(double weight) const {
    if (weight < 0.0) fail(Errc::InvalidArgument, "constraint weight must be >= 0");
    std::vector<EdgeConstraint> items = items_;
    for (EdgeConstraint& c : items) c.weight = weight;
    return ConstraintSet(std::move(items));
}

std::vector<ConstraintSet::Resolved> ConstraintSet::resolve(const std::vector<std::string>& names) const {
    auto index_of = [&names](const std::string& name) {
        for (std::size_t i = 0; i < names.size(); ++i)
            if (names[i] == name) return int(i);
        fail(Errc::UnknownVariable, "constraint references unknown variable '" + name + "'");
    };
    std::vector<Resolved> out;
    out.reserve(items_.size());
    for (const EdgeConstraint& c : items_)
        out.push_back({index_of(c.from), index_of(c.to), c.kind, c.weight});
    return out;
}

double soft_constraint_term(const Dag& g, const ConstraintSet& constraints) {
    double term = 0.0;
    for (const auto& c : constraints.resolve(g.node_names())) {
        bool present = g.has_edge(c.from, c.to);
        bool satisfied = (c.kind == ConstraintKind::Required) == present;
        term += satisfied ? c.weight : -c.weight;
    }
    return term;
}

namespace {

using nlohmann::json;

[[noreturn]] void bad(const std::string& msg) { fail(Errc::Config, "knowledge file: " + msg); }

void check_keys(const json& obj, std::initializer_list<const char*> allowed, const char* where) {
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        bool ok = false;
        for (const char* k : allowed)
            if (it.key() == k) ok = true;
        if (!ok) bad(std::string("unknown key '") + it.key() + "' in " + where);
    }
}

} // namespace

KnowledgeFile parse_knowledge_json(std::string_view text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        fail(Errc::Syntax, std::string("knowledge file: ") + e.what());
    }
    if (!doc.is_object()) bad("top level must be an object");
    check_keys(doc, {"default_weight", "constraints", "plausibilities", "descriptions", "background"},
               "top level");

    KnowledgeFile out;
    double default_weight = 1.0;
    if (doc.contains("default_weight")) {
        if (!doc["default_weight"].is_number()) bad("default_weight must be a number");
        default_weight = doc["default_weight"].get<double>();
        if (default_weight < 0.0) bad("default_weight must be >= 0");
    }

    std::vector<EdgeConstraint> items;
    if (doc.contains("constraints")) {
        if (!doc["constraints"].is_array()) bad("constraints must be an array");
        for (const json& e : doc["constraints"]) {
            if (!e.is_object()) bad("constraint entries must be objects");
            check_keys(e, {"from", "to", "kind", "weight"}, "constraint entry");
            for (const char* k : {"from", "to", "kind"})
                if (!e.contains(k) || !e[k].is_string())
                    bad(std::string("constraint entry needs string field '") + k + "'");
            EdgeConstraint c;
            c.from = e["from"].get<std::string>();
            c.to = e["to"].get<std::string>();
            std::string kind = e["kind"].get<std::string>();
            if (kind == "required")
                c.kind = ConstraintKind::Required;
            else if (kind == "forbidden")
                c.kind = ConstraintKind::Forbidden;
            else
                bad("constraint kind must be 'required' or 'forbidden', got '" + kind + "'");
            c.weight = default_weight;
            if (e.contains("weight")) {
                if (!e["weight"].is_number()) bad("constraint weight must be a number");
                c.weight = e["weight"].get<double>();
            }
            items.push_back(std::move(c));
        }
    }
    try {
        out.constraints = ConstraintSet(std::move(items));
    } catch (const Error& e) {
        fail(Errc::Config, std::string("knowledge file: ") + e.what());
    }

    if (doc.contains("plausibilities")) {
        if (!doc["plausibilities"].is_array()) bad("plausibilities must be an array");
        for (const json& e : doc["plausibilities"]) {
            if (!e.is_object()) bad("plausibility entries must be objects");
            check_keys(e, {"from", "to", "plausibility"}, "plausibility entry");
            for (const char* k : {"from", "to"})
                if (!e.contains(k) || !e[k].is_string())
                    bad(std::string("plausibility entry needs string field '") + k + "'");
            if (!e.contains("plausibility") || !e["plausibility"].is_number())
                bad("plausibility entry needs numeric field 'plausibility'");
            PairPlausibility p;
            p.from = e["from"].get<std::string>();
            p.to = e["to"].get<std::string>();
            p.plausibility = e["plausibility"].get<double>();
            if (p.plausibility < 0.0 || p.plausibility > 1.0) bad("plausibility must be in [0, 1]");
            if (p.from == p.to) bad("plausibility on a self-loop: " + p.from);
            out.plausibilities.push_back(std::move(p));
        }
    }

    if (doc.contains("descriptions")) {
        if (!doc["descriptions"].is_object()) bad("descriptions must be an object");
        for (auto it = doc["descriptions"].begin(); it != doc["descriptions"].end(); ++it) {
            if (!it.value().is_string()) bad("descriptions values must be strings");
            out.descriptions[it.key()] = it.value().get<std::string>();
        }
    }
    if (doc.contains("background")) {
        if (!doc["background"].is_string()) bad("background must be a string");
        out.background = doc["background"].get<std::string>();
    }
    return out;
}

KnowledgeFile load_knowledge_file(const std::string& path) {
    return parse_knowledge_json(read_text_file(path));
}

} // namespace cslearn
