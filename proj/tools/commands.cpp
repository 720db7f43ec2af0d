#include "commands.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <iostream>
#include <mutex>
#include <optional>
#include <thread>
#include <vector>

#include "cslearn/bif.hpp"
#include "cslearn/dataset.hpp"
#include "cslearn/errors.hpp"
#include "cslearn/graph_io.hpp"
#include "cslearn/independence.hpp"
#include "cslearn/llm_oracle.hpp"
#include "cslearn/metrics.hpp"
#include "cslearn/sampler.hpp"
#include "cslearn/scoring.hpp"
#include "cslearn/search.hpp"
#include "json.hpp"

namespace cslearn::cli {

namespace {

using nlohmann::json;

json load_config(const std::string& path) {
    std::string text = read_text_file(path);
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        fail(Errc::Syntax, path + ": " + e.what());
    }
}

void expect_object(const json& j, const std::string& where) {
    if (!j.is_object()) fail(Errc::Config, where + " must be a JSON object");
}

void expect_keys(const json& j, std::initializer_list<const char*> allowed,
                 const std::string& where) {
    expect_object(j, where);
    for (const auto& [key, value] : j.items()) {
        bool known = false;
        for (const char* a : allowed) known = known || key == a;
        if (!known) fail(Errc::Config, where + ": unknown key '" + key + "'");
    }
}

template <typename T>
T get_as(const json& j, const char* key, const std::string& where) {
    if (!j.contains(key)) fail(Errc::Config, where + ": missing key '" + key + "'");
    try {
        return j.at(key).get<T>();
    } catch (const json::exception&) {
        fail(Errc::Config, where + ": key '" + std::string(key) + "' has the wrong type");
    }
}

template <typename T>
T get_or(const json& j, const char* key, T fallback, const std::string& where) {
    if (!j.contains(key)) return fallback;
    return get_as<T>(j, key, where);
}

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string rep_tag(int rep) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "rep_%03d", rep);
    return buf;
}

Dag load_truth_graph(const std::string& path) {
    if (path.size() >= 4 && path.substr(path.size() - 4) == ".bif")
        return parse_bif_file(path).graph();
    return read_graph_file(path);
}

NodeMechanism parse_mechanism(const json& j, const std::string& where) {
    expect_keys(j, {"mean", "variance", "coefficient", "noise_variance"}, where);
    NodeMechanism m;
    m.mean = get_or(j, "mean", m.mean, where);
    m.variance = get_or(j, "variance", m.variance, where);
    m.coefficient = get_or(j, "coefficient", m.coefficient, where);
    m.noise_variance = get_or(j, "noise_variance", m.noise_variance, where);
    return m;
}

SyntheticStructure parse_structure(const std::string& s) {
    if (s == "chain") return SyntheticStructure::Chain;
    if (s == "fork") return SyntheticStructure::Fork;
    if (s == "collider") return SyntheticStructure::Collider;
    fail(Errc::Config, "unknown synthetic structure '" + s + "'");
}

// ---------------------------------------------------------------------------
// learn / audit configuration

struct LearnConfig {
    std::string data_path;  // exactly one of data_path / bif_path is set
    std::string bif_path;
    int rows = 0;
    std::string truth_path;
    int replications = 1;
    std::uint64_t seed = 0;
    ScoreFamily family = ScoreFamily::Bic;
    ScoreHyper hyper;
    std::string algorithm = "ga";
    GaConfig ga;
    std::int64_t budget = 1000;
    json oracle_spec;
    std::string knowledge_path;
    std::optional<KnowledgeFile> knowledge;
};

LearnConfig parse_learn_config(const json& j, const CommonArgs& args,
                               std::initializer_list<const char*> extra_keys) {
    std::vector<const char*> keys{"data",   "bif",       "rows",   "truth",  "replications",
                                  "seed",   "score",     "algorithm", "ga",  "budget",
                                  "oracle", "knowledge"};
    keys.insert(keys.end(), extra_keys.begin(), extra_keys.end());
    expect_object(j, "config");
    for (const auto& [key, value] : j.items()) {
        bool known = false;
        for (const char* a : keys) known = known || key == a;
        if (!known) fail(Errc::Config, "config: unknown key '" + key + "'");
    }

    LearnConfig lc;
    lc.data_path = get_or<std::string>(j, "data", "", "config");
    lc.bif_path = get_or<std::string>(j, "bif", "", "config");
    lc.rows = get_or(j, "rows", 0, "config");
    if (lc.data_path.empty() == lc.bif_path.empty())
        fail(Errc::Config, "config: give exactly one of 'data' or 'bif'");
    if (!lc.bif_path.empty() && lc.rows < 1)
        fail(Errc::Config, "config: 'bif' sampling needs 'rows' >= 1");

    lc.truth_path = get_or<std::string>(j, "truth", "", "config");
    lc.replications = get_or(j, "replications", 1, "config");
    if (lc.replications < 1) fail(Errc::Config, "config: 'replications' must be >= 1");
    lc.seed = args.seed ? *args.seed : get_or<std::uint64_t>(j, "seed", 0, "config");

    if (j.contains("score")) {
        const json& s = j.at("score");
        expect_keys(s, {"family", "ess", "max_indegree"}, "score");
        lc.family = score_family_from_string(get_or<std::string>(s, "family", "bic", "score"));
        lc.hyper.ess = get_or(s, "ess", lc.hyper.ess, "score");
        lc.hyper.max_indegree = get_or(s, "max_indegree", lc.hyper.max_indegree, "score");
        lc.hyper.validate();
    }

    lc.algorithm = get_or<std::string>(j, "algorithm", "ga", "config");
    if (lc.algorithm != "ga" && lc.algorithm != "hill_climb" && lc.algorithm != "random")
        fail(Errc::Config, "config: unknown algorithm '" + lc.algorithm + "'");

    if (j.contains("ga")) {
        const json& g = j.at("ga");
        expect_keys(g,
                    {"population_size", "tournament_size", "elitism_count", "crossover_rate",
                     "mutation_rate", "crossover", "mutation", "init", "tau"},
                    "ga");
        lc.ga.population_size = get_or(g, "population_size", lc.ga.population_size, "ga");
        lc.ga.tournament_size = get_or(g, "tournament_size", lc.ga.tournament_size, "ga");
        lc.ga.elitism_count = get_or(g, "elitism_count", lc.ga.elitism_count, "ga");
        lc.ga.crossover_rate = get_or(g, "crossover_rate", lc.ga.crossover_rate, "ga");
        lc.ga.mutation_rate = get_or(g, "mutation_rate", lc.ga.mutation_rate, "ga");
        lc.ga.crossover =
            crossover_kind_from_string(get_or<std::string>(g, "crossover", "uniform", "ga"));
        lc.ga.mutation =
            mutation_kind_from_string(get_or<std::string>(g, "mutation", "bit_flip", "ga"));
        lc.ga.init = init_kind_from_string(get_or<std::string>(g, "init", "random", "ga"));
        lc.ga.tau = get_or(g, "tau", lc.ga.tau, "ga");
    }
    // One in-degree cap for scoring and search alike.
    lc.ga.max_indegree = lc.hyper.max_indegree;

    lc.budget = args.budget ? *args.budget : get_or<std::int64_t>(j, "budget", 1000, "config");
    lc.ga.budget = lc.budget;

    lc.oracle_spec = j.contains("oracle") ? j.at("oracle") : json{{"kind", "null"}};
    expect_object(lc.oracle_spec, "oracle");
    if (!lc.oracle_spec.contains("kind")) fail(Errc::Config, "oracle: missing key 'kind'");

    lc.knowledge_path = get_or<std::string>(j, "knowledge", "", "config");
    if (!lc.knowledge_path.empty()) lc.knowledge = load_knowledge_file(lc.knowledge_path);

    // Fail on nonsense before any replication starts.
    if (lc.algorithm == "ga") {
        GaConfig probe = lc.ga;
        probe.validate();
    } else if (lc.budget < 1) {
        fail(Errc::Config, "config: 'budget' must be >= 1");
    }
    return lc;
}

std::unique_ptr<SuggestionOracle> make_oracle(const LearnConfig& lc, const CategoricalDataset& ds,
                                              std::uint64_t run_seed) {
    const json& spec = lc.oracle_spec;
    std::string kind = get_as<std::string>(spec, "kind", "oracle");
    if (kind == "null") {
        expect_keys(spec, {"kind"}, "oracle");
        return null_oracle();
    }
    if (kind == "random") {
        expect_keys(spec, {"kind", "seed"}, "oracle");
        return random_oracle(get_or<std::uint64_t>(spec, "seed", run_seed, "oracle"));
    }
    if (kind == "knowledge") {
        expect_keys(spec, {"kind"}, "oracle");
        if (!lc.knowledge)
            fail(Errc::Config, "oracle kind 'knowledge' needs a 'knowledge' file in the config");
        return knowledge_oracle(*lc.knowledge);
    }
    if (kind == "ci_init") {
        expect_keys(spec, {"kind", "alpha"}, "oracle");
        return ci_init_oracle(ds, get_or(spec, "alpha", 0.05, "oracle"));
    }
    if (kind == "mi_init") {
        expect_keys(spec, {"kind", "quantile"}, "oracle");
        return mi_init_oracle(ds, get_or(spec, "quantile", 0.5, "oracle"));
    }
    if (kind == "llm") {
        expect_keys(spec,
                    {"kind", "endpoint", "model", "api_key_env", "temperature", "timeout_seconds",
                     "max_in_flight", "cache_dir", "prompt_dir"},
                    "oracle");
        LlmOracleConfig cfg;
        cfg.endpoint = get_as<std::string>(spec, "endpoint", "oracle");
        cfg.model = get_as<std::string>(spec, "model", "oracle");
        cfg.api_key_env = get_or<std::string>(spec, "api_key_env", cfg.api_key_env, "oracle");
        cfg.temperature = get_or(spec, "temperature", cfg.temperature, "oracle");
        cfg.timeout_seconds = get_or(spec, "timeout_seconds", cfg.timeout_seconds, "oracle");
        cfg.max_in_flight = get_or(spec, "max_in_flight", cfg.max_in_flight, "oracle");
        cfg.cache_dir = get_or<std::string>(spec, "cache_dir", "", "oracle");
        cfg.prompt_dir = get_or<std::string>(spec, "prompt_dir", "", "oracle");
        return llm_oracle(std::move(cfg));
    }
    fail(Errc::Config, "oracle: unknown kind '" + kind + "'");
}

struct RepOutcome {
    SearchResult result;
    std::uint64_t run_seed = 0;
    std::optional<int> shd_value;
    std::optional<F1Scores> f1;
    std::optional<PriorAuditStats> audit;
    double wall_seconds = 0.0;
};

using ScorerFactory =
    std::function<std::unique_ptr<GraphScorer>(const CategoricalDataset& ds)>;

RepOutcome run_one_rep(const LearnConfig& lc, int rep, const ScorerFactory& make_scorer,
                       const CategoricalDataset* shared_ds, const BayesNet* source_net,
                       const Dag* truth, const ConstraintSet* audit_constraints) {
    auto started = std::chrono::steady_clock::now();

    std::optional<CategoricalDataset> sampled;
    const CategoricalDataset* ds = shared_ds;
    if (!ds) {
        std::uint64_t data_seed =
            Rng::derive(lc.seed, kStreamData, std::uint64_t(rep)).next_u64();
        sampled.emplace(forward_sample(*source_net, lc.rows, data_seed));
        ds = &*sampled;
    }

    RepOutcome out;
    out.run_seed = lc.seed + std::uint64_t(rep);
    std::unique_ptr<GraphScorer> scorer = make_scorer(*ds);
    std::unique_ptr<SuggestionOracle> oracle = make_oracle(lc, *ds, out.run_seed);

    if (lc.algorithm == "ga") {
        GaConfig cfg = lc.ga;
        cfg.seed = out.run_seed;
        OracleContext ctx;
        ctx.names = ds->column_names();
        if (lc.knowledge) {
            ctx.descriptions = lc.knowledge->descriptions;
            ctx.background = lc.knowledge->background;
        }
        out.result = run_search(cfg, *ds, *scorer, *oracle, &ctx);
    } else if (lc.algorithm == "hill_climb") {
        out.result = hill_climb(*ds, *scorer, out.run_seed, lc.budget);
    } else {
        out.result = random_search(*ds, *scorer, out.run_seed, lc.budget, lc.hyper.max_indegree);
    }

    if (truth) {
        out.shd_value = shd(out.result.best_graph, *truth);
        out.f1 = edge_f1(out.result.best_graph, *truth);
        if (audit_constraints)
            out.audit = prior_audit_stats(*audit_constraints, out.result.best_graph, *truth);
    }
    out.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    return out;
}

std::vector<RepOutcome> run_reps(const LearnConfig& lc, const ScorerFactory& make_scorer,
                                 const Dag* truth, const ConstraintSet* audit_constraints,
                                 int jobs) {
    std::optional<CategoricalDataset> shared;
    std::optional<BayesNet> net;
    if (!lc.data_path.empty())
        shared.emplace(read_csv_dataset_file(lc.data_path));
    else
        net.emplace(parse_bif_file(lc.bif_path));

    int reps = lc.replications;
    std::vector<std::optional<RepOutcome>> slots(static_cast<std::size_t>(reps));
    auto run_slot = [&](int r) {
        slots[std::size_t(r)] = run_one_rep(lc, r, make_scorer, shared ? &*shared : nullptr,
                                            net ? &*net : nullptr, truth, audit_constraints);
    };

    if (jobs <= 1) {
        for (int r = 0; r < reps; ++r) run_slot(r);
    } else {
        std::atomic<int> next{0};
        std::exception_ptr first_error;
        std::mutex error_mu;
        auto worker = [&] {
            for (int r = next.fetch_add(1); r < reps; r = next.fetch_add(1)) {
                try {
                    run_slot(r);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(error_mu);
                    if (!first_error) first_error = std::current_exception();
                    return;
                }
            }
        };
        std::vector<std::thread> pool;
        int width = std::min(jobs, reps);
        pool.reserve(std::size_t(width));
        for (int t = 0; t < width; ++t) pool.emplace_back(worker);
        for (std::thread& t : pool) t.join();
        if (first_error) std::rethrow_exception(first_error);
    }

    std::vector<RepOutcome> out;
    out.reserve(std::size_t(reps));
    for (auto& slot : slots) out.push_back(std::move(*slot));
    return out;
}

// Everything here is a pure function of config and seed; wallclock numbers
// go to timings.csv so the deterministic artifacts stay byte-stable.
void write_rep_artifacts(const std::string& out_dir, const std::vector<RepOutcome>& outcomes,
                         bool with_truth) {
    namespace fs = std::filesystem;
    fs::create_directories(out_dir);
    fs::create_directories(out_dir + "/graphs");
    fs::create_directories(out_dir + "/history");

    std::string results = "# cslearn results v1\n";
    results += with_truth ? "rep,seed,best_score,evaluations,shd,f1_directed,f1_skeleton\n"
                          : "rep,seed,best_score,evaluations\n";
    std::string timings = "# cslearn timings v1\nrep,wall_seconds\n";
    for (std::size_t r = 0; r < outcomes.size(); ++r) {
        const RepOutcome& o = outcomes[r];
        results += std::to_string(r) + "," + std::to_string(o.run_seed) + "," +
                   fmt17(o.result.best_score) + "," + std::to_string(o.result.evaluations_used);
        if (with_truth)
            results += "," + std::to_string(*o.shd_value) + "," + fmt17(o.f1->f1) + "," +
                       fmt17(o.f1->f1_skel);
        results += "\n";
        char tbuf[40];
        std::snprintf(tbuf, sizeof tbuf, "%.6f", o.wall_seconds);
        timings += std::to_string(r) + "," + tbuf + "\n";

        write_graph_file(o.result.best_graph,
                         out_dir + "/graphs/" + rep_tag(int(r)) + ".graph");
        std::string history = "# cslearn history v1\ngeneration,best,mean\n";
        for (const GenerationStats& h : o.result.history)
            history += std::to_string(h.generation) + "," + fmt17(h.best) + "," + fmt17(h.mean) +
                       "\n";
        write_text_file_atomic(out_dir + "/history/" + rep_tag(int(r)) + ".csv", history);
    }
    write_text_file_atomic(out_dir + "/results.csv", results);
    write_text_file_atomic(out_dir + "/timings.csv", timings);
}

json summarize(const LearnConfig& lc, const std::vector<RepOutcome>& outcomes, bool with_truth) {
    double mean_score = 0.0, mean_evals = 0.0, mean_shd = 0.0, mean_f1 = 0.0, mean_f1_skel = 0.0;
    std::size_t best_rep = 0;
    for (std::size_t r = 0; r < outcomes.size(); ++r) {
        const RepOutcome& o = outcomes[r];
        mean_score += o.result.best_score;
        mean_evals += double(o.result.evaluations_used);
        if (with_truth) {
            mean_shd += double(*o.shd_value);
            mean_f1 += o.f1->f1;
            mean_f1_skel += o.f1->f1_skel;
        }
        if (o.result.best_score > outcomes[best_rep].result.best_score) best_rep = r;
    }
    double n = double(outcomes.size());
    json j{{"replications", outcomes.size()},
           {"algorithm", lc.algorithm},
           {"score_family", to_string(lc.family)},
           {"budget", lc.budget},
           {"seed", lc.seed},
           {"oracle", outcomes.empty() ? "" : json::parse(outcomes[0].result.provenance)
                                                  .value("oracle", std::string("?"))},
           {"mean_best_score", mean_score / n},
           {"mean_evaluations", mean_evals / n},
           {"best_rep", best_rep},
           {"best_score", outcomes[best_rep].result.best_score}};
    if (with_truth) {
        j["mean_shd"] = mean_shd / n;
        j["mean_f1_directed"] = mean_f1 / n;
        j["mean_f1_skeleton"] = mean_f1_skel / n;
    }
    return j;
}

} // namespace

void cmd_sample(const CommonArgs& args) {
    if (args.out_path.empty()) fail(Errc::Config, "sample: --out is required");
    json j = load_config(args.config_path);
    expect_keys(j, {"seed", "bif", "rows", "synthetic"}, "config");
    std::uint64_t seed = args.seed ? *args.seed : get_or<std::uint64_t>(j, "seed", 0, "config");

    bool has_bif = j.contains("bif");
    bool has_syn = j.contains("synthetic");
    if (has_bif == has_syn)
        fail(Errc::Config, "config: give exactly one of 'bif' or 'synthetic'");

    if (has_bif) {
        int rows = get_as<int>(j, "rows", "config");
        if (rows < 1) fail(Errc::Config, "config: 'rows' must be >= 1");
        BayesNet net = parse_bif_file(get_as<std::string>(j, "bif", "config"));
        CategoricalDataset ds = forward_sample(net, rows, seed);
        write_text_file_atomic(args.out_path, write_csv_dataset(ds));
        return;
    }

    const json& s = j.at("synthetic");
    expect_keys(s, {"structure", "sample_count", "x", "y", "z", "sig_digits", "bins"},
                "synthetic");
    SyntheticSpec spec;
    spec.structure = parse_structure(get_or<std::string>(s, "structure", "chain", "synthetic"));
    spec.sample_count = get_or(s, "sample_count", spec.sample_count, "synthetic");
    if (s.contains("x")) spec.x = parse_mechanism(s.at("x"), "synthetic.x");
    if (s.contains("y")) spec.y = parse_mechanism(s.at("y"), "synthetic.y");
    if (s.contains("z")) spec.z = parse_mechanism(s.at("z"), "synthetic.z");
    if (s.contains("sig_digits")) spec.sig_digits = get_as<int>(s, "sig_digits", "synthetic");

    ContinuousTable table = sample_synthetic(spec, seed);
    if (s.contains("bins")) {
        int bins = get_as<int>(s, "bins", "synthetic");
        write_text_file_atomic(args.out_path, write_csv_dataset(discretize_quantile(table, bins)));
    } else {
        write_text_file_atomic(args.out_path, write_csv_table(table));
    }
}

void cmd_learn(const CommonArgs& args) {
    if (args.out_path.empty()) fail(Errc::Config, "learn: --out is required");
    json j = load_config(args.config_path);
    LearnConfig lc = parse_learn_config(j, args, {});

    std::optional<Dag> truth;
    if (!lc.truth_path.empty()) truth = load_truth_graph(lc.truth_path);

    ScorerFactory factory = [&lc](const CategoricalDataset& ds) -> std::unique_ptr<GraphScorer> {
        return std::make_unique<DataScorer>(lc.family, ds, lc.hyper);
    };
    std::vector<RepOutcome> outcomes =
        run_reps(lc, factory, truth ? &*truth : nullptr, nullptr, args.jobs);

    write_rep_artifacts(args.out_path, outcomes, truth.has_value());
    write_text_file_atomic(args.out_path + "/summary.json",
                           summarize(lc, outcomes, truth.has_value()).dump(2) + "\n");
}

void cmd_audit(const CommonArgs& args) {
    if (args.out_path.empty()) fail(Errc::Config, "audit: --out is required");
    json j = load_config(args.config_path);
    LearnConfig lc = parse_learn_config(j, args, {"weights"});
    if (!lc.knowledge) fail(Errc::Config, "audit: config needs a 'knowledge' file");
    if (lc.truth_path.empty()) fail(Errc::Config, "audit: config needs a 'truth' graph");
    if (lc.knowledge->constraints.empty())
        fail(Errc::Config, "audit: the knowledge file declares no edge constraints");
    std::vector<double> weights = get_as<std::vector<double>>(j, "weights", "config");
    if (weights.empty()) fail(Errc::Config, "audit: 'weights' must be a non-empty array");
    for (double w : weights)
        if (!(w >= 0.0) || !std::isfinite(w))
            fail(Errc::Config, "audit: weights must be finite and >= 0");

    std::cerr << "cslearn: audit mode blends constraint weights into the objective; "
                 "data-driven scores no longer hold exclusive decision authority\n";

    Dag truth = load_truth_graph(lc.truth_path);

    std::string summary_csv = "# cslearn audit v1\n";
    summary_csv +=
        "weight,wrong_prior_proportion,rejected_wrong_prior_proportion,mean_shd,"
        "mean_f1_directed,mean_f1_skeleton\n";
    json weight_summaries = json::array();

    for (std::size_t wi = 0; wi < weights.size(); ++wi) {
        ConstraintSet weighted = lc.knowledge->constraints.with_uniform_weight(weights[wi]);
        ScorerFactory factory =
            [&lc, &weighted](const CategoricalDataset& ds) -> std::unique_ptr<GraphScorer> {
            return std::make_unique<AuditScorer>(lc.family, ds, weighted, lc.hyper);
        };
        std::vector<RepOutcome> outcomes =
            run_reps(lc, factory, &truth, &weighted, args.jobs);

        char wdir[32];
        std::snprintf(wdir, sizeof wdir, "weight_%03zu", wi);
        std::string sub = args.out_path + "/" + wdir;
        write_rep_artifacts(sub, outcomes, true);

        double mean_shd = 0.0, mean_f1 = 0.0, mean_f1_skel = 0.0, mean_rejected = 0.0;
        double wrong_proportion = 0.0;
        for (const RepOutcome& o : outcomes) {
            mean_shd += double(*o.shd_value);
            mean_f1 += o.f1->f1;
            mean_f1_skel += o.f1->f1_skel;
            mean_rejected += o.audit->rejected_wrong_prior_proportion;
            wrong_proportion = o.audit->wrong_prior_proportion;  // same every rep
        }
        double n = double(outcomes.size());
        mean_shd /= n;
        mean_f1 /= n;
        mean_f1_skel /= n;
        mean_rejected /= n;

        summary_csv += fmt17(weights[wi]) + "," + fmt17(wrong_proportion) + "," +
                       fmt17(mean_rejected) + "," + fmt17(mean_shd) + "," + fmt17(mean_f1) + "," +
                       fmt17(mean_f1_skel) + "\n";
        json ws = summarize(lc, outcomes, true);
        ws["weight"] = weights[wi];
        ws["wrong_prior_proportion"] = wrong_proportion;
        ws["rejected_wrong_prior_proportion"] = mean_rejected;
        weight_summaries.push_back(std::move(ws));
    }

    write_text_file_atomic(args.out_path + "/audit_summary.csv", summary_csv);
    write_text_file_atomic(args.out_path + "/summary.json",
                           json{{"weights", weight_summaries}}.dump(2) + "\n");
}

void cmd_citest(const CommonArgs& args) {
    json j = load_config(args.config_path);
    expect_keys(j, {"data", "tests"}, "config");
    CategoricalDataset ds = read_csv_dataset_file(get_as<std::string>(j, "data", "config"));
    if (!j.contains("tests") || !j.at("tests").is_array())
        fail(Errc::Config, "config: 'tests' must be an array");

    json results = json::array();
    for (const json& t : j.at("tests")) {
        expect_keys(t, {"kind", "x", "y", "z", "alpha", "prior_shift"}, "test");
        std::string kind = get_as<std::string>(t, "kind", "test");
        std::string xn = get_as<std::string>(t, "x", "test");
        std::string yn = get_as<std::string>(t, "y", "test");
        int x = ds.column_index(xn);
        int y = ds.column_index(yn);
        std::vector<std::string> zn = get_or<std::vector<std::string>>(t, "z", {}, "test");
        std::vector<int> z;
        z.reserve(zn.size());
        for (const std::string& name : zn) z.push_back(ds.column_index(name));

        json row{{"kind", kind}, {"x", xn}, {"y", yn}, {"z", zn}};
        if (kind == "mi") {
            row["mi"] = mutual_information(ds, x, y);
        } else if (kind == "g2" || kind == "g2_adjusted") {
            double alpha = get_or(t, "alpha", 0.05, "test");
            double shift = get_or(t, "prior_shift", 0.0, "test");
            if (kind == "g2" && shift != 0.0)
                fail(Errc::Config, "test: 'prior_shift' belongs to kind 'g2_adjusted'");
            CITestResult res = kind == "g2" ? g2_test(ds, x, y, z, alpha)
                                            : g2_prior_adjusted(ds, x, y, z, alpha, shift);
            row["alpha"] = alpha;
            if (kind == "g2_adjusted") row["prior_shift"] = shift;
            row["statistic"] = res.statistic;
            row["dof"] = res.dof;
            row["p_value"] = res.p_value;
            row["independent"] = res.independent;
            row["reliable"] = res.reliable;
            row["audit"] = res.audit;
        } else {
            fail(Errc::Config, "test: unknown kind '" + kind + "'");
        }
        results.push_back(std::move(row));
    }

    std::string text = json{{"tests", results}}.dump(2) + "\n";
    if (args.out_path.empty())
        std::cout << text;
    else
        write_text_file_atomic(args.out_path, text);
}

void cmd_metrics(const MetricsArgs& args) {
    Dag learned = load_truth_graph(args.learned_path);
    Dag truth = load_truth_graph(args.truth_path);
    F1Scores f = edge_f1(learned, truth);
    json out{{"shd", shd(learned, truth)},
             {"precision_directed", f.precision},
             {"recall_directed", f.recall},
             {"f1_directed", f.f1},
             {"precision_skeleton", f.precision_skel},
             {"recall_skeleton", f.recall_skel},
             {"f1_skeleton", f.f1_skel},
             {"counts",
              {{"tp", f.counts.tp},
               {"fp", f.counts.fp},
               {"fn", f.counts.fn},
               {"tp_skeleton", f.counts.tp_skel},
               {"fp_skeleton", f.counts.fp_skel},
               {"fn_skeleton", f.counts.fn_skel}}}};
    std::string text = out.dump(2) + "\n";
    if (args.out_path.empty())
        std::cout << text;
    else
        write_text_file_atomic(args.out_path, text);
}

} // namespace cslearn::cli
