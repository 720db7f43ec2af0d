#include "cslearn/llm_oracle.hpp"

#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <semaphore>
#include <sstream>

#include "httplib.h"
#include "json.hpp"

#include "cslearn/dataset.hpp"
#include "cslearn/errors.hpp"

namespace cslearn {

namespace {

using nlohmann::json;

constexpr const char* kPairsTemplate = R"(# pairs v1
You are helping prioritize hypotheses about direct causal influences between variables in a system.

Variables:
{{variables}}

{{background}}

For every ordered pair (from, to) where you have an opinion, rate the plausibility that "from" directly causes "to" on a 0 to 1 scale. Omit pairs you have no opinion about.

Reply with a single JSON object and nothing else, in the form:
{"edges": [{"from": "<name>", "to": "<name>", "plausibility": <number>}]}
)";

constexpr const char* kMutationTemplate = R"(# mutation v1
You are refining a candidate causal structure over these variables:
{{variables}}

Current directed edges:
{{graph}}

Goal: {{goal}}.

First weigh a few candidate single-edge edits and their likely effect, then commit to the most promising one.

Reply with a single JSON object and nothing else:
{"op": "add", "from": "<name>", "to": "<name>"}
where "op" is one of "add", "remove", "reverse".
)";

constexpr const char* kCrossoverTemplate = R"(# crossover v1
Two candidate causal structures over the variables listed below are being combined into one child structure. For each variable choose which candidate supplies its incoming edges: 0 for the first, 1 for the second.

Variables (in order):
{{variables}}

Candidate 0 edges:
{{graph_a}}

Candidate 1 edges:
{{graph_b}}

Reply with a single JSON object and nothing else:
{"sources": [0, 1]}
with one 0-or-1 entry per variable, in the order listed.
)";

constexpr const char* kCycleBreakTemplate = R"(# cycle_break v1
A candidate causal structure contains a directed cycle and one edge of the cycle must be deleted.

Variables:
{{variables}}

All edges:
{{graph}}

Cycle:
{{cycle}}

Pick the cycle edge that is least plausible as a direct causal influence.

Reply with a single JSON object and nothing else:
{"from": "<name>", "to": "<name>"}
)";

void warn(const std::string& msg) { std::cerr << "[llm_oracle] warning: " << msg << "\n"; }

std::uint64_t fnv1a64(std::string_view s) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

std::string hex16(std::uint64_t v) {
    static const char* digits = "0123456789abcdef";
    std::string out(16, '0');
    for (int i = 15; i >= 0; --i) {
        out[i] = digits[v & 0xf];
        v >>= 4;
    }
    return out;
}

std::string replace_all(std::string text, const std::string& what, const std::string& with) {
    std::size_t pos = 0;
    while ((pos = text.find(what, pos)) != std::string::npos) {
        text.replace(pos, what.size(), with);
        pos += with.size();
    }
    return text;
}

// Splits an optional leading '#' comment line (template version marker) from
// the body that actually gets sent.
std::pair<std::string, std::string> split_template(const std::string& raw) {
    if (!raw.empty() && raw[0] == '#') {
        std::size_t nl = raw.find('\n');
        if (nl != std::string::npos) return {raw.substr(0, nl), raw.substr(nl + 1)};
        return {raw, ""};
    }
    return {"", raw};
}

std::string strip_code_fence(std::string s) {
    auto ltrim = [](std::string& t) {
        std::size_t b = t.find_first_not_of(" \t\r\n");
        t.erase(0, b == std::string::npos ? t.size() : b);
    };
    auto rtrim = [](std::string& t) {
        std::size_t e = t.find_last_not_of(" \t\r\n");
        t.erase(e == std::string::npos ? 0 : e + 1);
    };
    ltrim(s);
    rtrim(s);
    if (s.rfind("```", 0) == 0) {
        std::size_t nl = s.find('\n');
        if (nl != std::string::npos) s.erase(0, nl + 1);
        if (s.size() >= 3 && s.compare(s.size() - 3, 3, "```") == 0) s.erase(s.size() - 3);
        rtrim(s);
    }
    return s;
}

std::string render_edges(const std::vector<std::string>& names, const std::vector<Edge>& edges) {
    if (edges.empty()) return "(none)";
    std::string out;
    for (const Edge& e : edges) {
        if (!out.empty()) out += "\n";
        out += names[e.from] + " -> " + names[e.to];
    }
    return out;
}

std::string render_names(const std::vector<std::string>& names,
                         const std::map<std::string, std::string>* descriptions) {
    std::string out;
    for (const std::string& n : names) {
        if (!out.empty()) out += "\n";
        out += n;
        if (descriptions) {
            auto it = descriptions->find(n);
            if (it != descriptions->end()) out += ": " + it->second;
        }
    }
    return out;
}

class LlmOracle final : public SuggestionOracle {
public:
    explicit LlmOracle(LlmOracleConfig cfg) : cfg_(std::move(cfg)), sem_(slots(cfg_.max_in_flight)) {
        cfg_.validate();
    }

    std::string name() const override { return "llm(" + cfg_.model + ")"; }

    std::vector<PairPlausibility> pair_plausibilities(const OracleContext& ctx) override {
        if (ctx.names.empty()) {
            warn("pair query without variable names");
            return {};
        }
        Prompt prompt = build(template_for("pairs", kPairsTemplate),
                                   {{"{{variables}}", render_names(ctx.names, &ctx.descriptions)},
                                    {"{{background}}", ctx.background}});
        auto content = complete(prompt);
        if (!content) return {};
        json doc = parse_object(*content);
        if (doc.is_discarded() || !doc.contains("edges") || !doc["edges"].is_array()) {
            warn("pair reply is not {\"edges\": [...]}");
            return {};
        }
        std::vector<PairPlausibility> out;
        for (const json& e : doc["edges"]) {
            if (!e.is_object() || !e.contains("from") || !e.contains("to") ||
                !e.contains("plausibility") || !e["from"].is_string() || !e["to"].is_string() ||
                !e["plausibility"].is_number()) {
                warn("pair reply entry malformed; dropping the whole reply");
                return {};
            }
            PairPlausibility p{e["from"].get<std::string>(), e["to"].get<std::string>(),
                               e["plausibility"].get<double>()};
            bool from_known = false, to_known = false;
            for (const std::string& n : ctx.names) {
                from_known = from_known || n == p.from;
                to_known = to_known || n == p.to;
            }
            if (!from_known || !to_known || p.from == p.to || p.plausibility < 0.0 ||
                p.plausibility > 1.0) {
                warn("pair reply references unknown names or bad values; dropping reply");
                return {};
            }
            out.push_back(std::move(p));
        }
        return out;
    }

    std::optional<EdgeOp> propose_mutation(const Dag& g, MutationGoal goal) override {
        std::string goal_text = goal == MutationGoal::Diversify
                                    ? "propose an edit that increases structural diversity"
                                    : "propose an edit that refines local structure";
        Prompt prompt = build(template_for("mutation", kMutationTemplate),
                                   {{"{{variables}}", render_names(g.node_names(), nullptr)},
                                    {"{{graph}}", render_edges(g.node_names(), g.edges())},
                                    {"{{goal}}", goal_text}});
        auto content = complete(prompt);
        if (!content) return std::nullopt;
        json doc = parse_object(*content);
        if (doc.is_discarded() || !doc.contains("op") || !doc["op"].is_string() ||
            !doc.contains("from") || !doc["from"].is_string() || !doc.contains("to") ||
            !doc["to"].is_string()) {
            warn("mutation reply is not {\"op\", \"from\", \"to\"}");
            return std::nullopt;
        }
        std::string op = doc["op"].get<std::string>();
        EdgeOp out;
        if (op == "add")
            out.kind = EdgeOp::Kind::Add;
        else if (op == "remove")
            out.kind = EdgeOp::Kind::Remove;
        else if (op == "reverse")
            out.kind = EdgeOp::Kind::Reverse;
        else {
            warn("mutation reply has unknown op '" + op + "'");
            return std::nullopt;
        }
        try {
            out.from = g.node_index(doc["from"].get<std::string>());
            out.to = g.node_index(doc["to"].get<std::string>());
        } catch (const Error& e) {
            warn(std::string("mutation reply: ") + e.what());
            return std::nullopt;
        }
        return out;
    }

    std::optional<std::vector<int>> propose_crossover(const Dag& a, const Dag& b) override {
        Prompt prompt = build(template_for("crossover", kCrossoverTemplate),
                                   {{"{{variables}}", render_names(a.node_names(), nullptr)},
                                    {"{{graph_a}}", render_edges(a.node_names(), a.edges())},
                                    {"{{graph_b}}", render_edges(b.node_names(), b.edges())}});
        auto content = complete(prompt);
        if (!content) return std::nullopt;
        json doc = parse_object(*content);
        if (doc.is_discarded() || !doc.contains("sources") || !doc["sources"].is_array()) {
            warn("crossover reply is not {\"sources\": [...]}");
            return std::nullopt;
        }
        std::vector<int> sources;
        for (const json& v : doc["sources"]) {
            if (!v.is_number_integer() || (v.get<int>() != 0 && v.get<int>() != 1)) {
                warn("crossover reply entries must be 0 or 1");
                return std::nullopt;
            }
            sources.push_back(v.get<int>());
        }
        if (int(sources.size()) != a.node_count()) {
            warn("crossover reply has wrong length");
            return std::nullopt;
        }
        return sources;
    }

    std::optional<Edge> propose_cycle_break(const std::vector<std::string>& names,
                                            const std::vector<Edge>& edges,
                                            const std::vector<Edge>& cycle) override {
        Prompt prompt = build(template_for("cycle_break", kCycleBreakTemplate),
                                   {{"{{variables}}", render_names(names, nullptr)},
                                    {"{{graph}}", render_edges(names, edges)},
                                    {"{{cycle}}", render_edges(names, cycle)}});
        auto content = complete(prompt);
        if (!content) return std::nullopt;
        json doc = parse_object(*content);
        if (doc.is_discarded() || !doc.contains("from") || !doc["from"].is_string() ||
            !doc.contains("to") || !doc["to"].is_string()) {
            warn("cycle break reply is not {\"from\", \"to\"}");
            return std::nullopt;
        }
        std::string from = doc["from"].get<std::string>(), to = doc["to"].get<std::string>();
        for (const Edge& e : cycle)
            if (names[e.from] == from && names[e.to] == to) return e;
        warn("cycle break reply names an edge outside the cycle");
        return std::nullopt;
    }

private:
    static std::ptrdiff_t slots(int requested) {
        return std::ptrdiff_t(std::clamp(requested, 1, 64));
    }

    struct Template {
        std::string version;
        std::string body;
    };

    Template template_for(const std::string& kind, const char* builtin) {
        std::string raw = builtin;
        if (!cfg_.prompt_dir.empty()) {
            std::string path = cfg_.prompt_dir + "/" + kind + ".txt";
            try {
                raw = read_text_file(path);
            } catch (const Error&) {
                warn("prompt template " + path + " unreadable; using built-in");
                raw = builtin;
            }
        }
        auto [version, body] = split_template(raw);
        return {version, body};
    }

    struct Prompt {
        std::string text;
        std::string version;
    };

    Prompt build(const Template& tpl,
                 std::initializer_list<std::pair<std::string, std::string>> subs) {
        std::string text = tpl.body;
        for (const auto& [key, value] : subs) text = replace_all(text, key, value);
        return {text, tpl.version};
    }

    json parse_object(const std::string& content) {
        json doc = json::parse(strip_code_fence(content), nullptr, false);
        if (!doc.is_object()) return json(json::value_t::discarded);
        return doc;
    }

    // The template version line never reaches the model but keys the cache,
    // so editing a template invalidates stale entries.
    std::string cache_key(const Prompt& prompt) const {
        return cfg_.endpoint + "\x1f" + cfg_.model + "\x1f" + std::to_string(cfg_.temperature) +
               "\x1f" + prompt.version + "\x1f" + prompt.text;
    }

    std::optional<std::string> cache_load(const std::string& key) {
        if (cfg_.cache_dir.empty()) return std::nullopt;
        std::string path = cfg_.cache_dir + "/" + hex16(fnv1a64(key)) + ".json";
        std::ifstream in(path, std::ios::binary);
        if (!in) return std::nullopt;
        std::ostringstream ss;
        ss << in.rdbuf();
        json doc = json::parse(ss.str(), nullptr, false);
        if (!doc.is_object() || !doc.contains("key") || !doc.contains("content") ||
            doc["key"].get<std::string>() != key) {
            warn("cache entry " + path + " is stale or collides; ignoring");
            return std::nullopt;
        }
        return doc["content"].get<std::string>();
    }

    void cache_store(const std::string& key, const std::string& content) {
        if (cfg_.cache_dir.empty()) return;
        json doc;
        doc["key"] = key;
        doc["content"] = content;
        std::string path = cfg_.cache_dir + "/" + hex16(fnv1a64(key)) + ".json";
        try {
            write_text_file_atomic(path, doc.dump(2));
        } catch (const Error& e) {
            warn(std::string("cannot write cache entry: ") + e.what());
        }
    }

    std::optional<std::string> complete(const Prompt& prompt) {
        std::string key = cache_key(prompt);
        if (auto cached = cache_load(key)) return cached;

        const char* token = std::getenv(cfg_.api_key_env.c_str());
        if (!token || !*token) {
            warn("environment variable " + cfg_.api_key_env + " is not set; skipping request");
            return std::nullopt;
        }

        // endpoint = scheme://authority/path
        std::size_t scheme_end = cfg_.endpoint.find("://");
        std::size_t path_start =
            scheme_end == std::string::npos ? std::string::npos : cfg_.endpoint.find('/', scheme_end + 3);
        if (path_start == std::string::npos) {
            warn("endpoint must look like scheme://host[:port]/path");
            return std::nullopt;
        }
        std::string base = cfg_.endpoint.substr(0, path_start);
        std::string path = cfg_.endpoint.substr(path_start);

        json body;
        body["model"] = cfg_.model;
        body["temperature"] = cfg_.temperature;
        body["messages"] = json::array({json{{"role", "user"}, {"content", prompt.text}}});

        sem_.acquire();
        httplib::Client client(base);
        client.set_connection_timeout(cfg_.timeout_seconds);
        client.set_read_timeout(cfg_.timeout_seconds);
        client.set_bearer_token_auth(token);
        auto res = client.Post(path, body.dump(), "application/json");
        sem_.release();

        if (!res) {
            warn("request to " + base + " failed: " + httplib::to_string(res.error()));
            return std::nullopt;
        }
        if (res->status != 200) {
            warn("request returned status " + std::to_string(res->status));
            return std::nullopt;
        }
        json doc = json::parse(res->body, nullptr, false);
        if (doc.is_discarded() || !doc.contains("choices") || !doc["choices"].is_array() ||
            doc["choices"].empty() || !doc["choices"][0].contains("message") ||
            !doc["choices"][0]["message"].contains("content") ||
            !doc["choices"][0]["message"]["content"].is_string()) {
            warn("response body is not a chat completion");
            return std::nullopt;
        }
        std::string content = doc["choices"][0]["message"]["content"].get<std::string>();
        cache_store(key, content);
        return content;
    }

    LlmOracleConfig cfg_;
    std::counting_semaphore<64> sem_;
};

} // namespace

void LlmOracleConfig::validate() const {
    if (endpoint.empty()) fail(Errc::Config, "llm oracle: endpoint must be set");
    if (endpoint.find("://") == std::string::npos)
        fail(Errc::Config, "llm oracle: endpoint must include a scheme");
    if (model.empty()) fail(Errc::Config, "llm oracle: model must be set");
    if (api_key_env.empty()) fail(Errc::Config, "llm oracle: api_key_env must be set");
    if (temperature < 0.0 || temperature > 2.0) fail(Errc::Config, "llm oracle: temperature in [0, 2]");
    if (timeout_seconds < 1) fail(Errc::Config, "llm oracle: timeout_seconds must be >= 1");
    if (max_in_flight < 1) fail(Errc::Config, "llm oracle: max_in_flight must be >= 1");
}

std::unique_ptr<SuggestionOracle> llm_oracle(LlmOracleConfig config) {
    return std::make_unique<LlmOracle>(std::move(config));
}

} // namespace cslearn
