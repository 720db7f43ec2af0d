#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <memory>
#include <utility>

#include "cslearn/bif.hpp"
#include "cslearn/constraints.hpp"
#include "cslearn/dataset.hpp"
#include "cslearn/errors.hpp"
#include "cslearn/graph.hpp"
#include "cslearn/graph_io.hpp"
#include "cslearn/independence.hpp"
#include "cslearn/metrics.hpp"
#include "cslearn/oracle.hpp"
#include "cslearn/sampler.hpp"
#include "cslearn/scoring.hpp"
#include "cslearn/search.hpp"

namespace py = pybind11;
using namespace cslearn;

namespace {

std::vector<std::pair<std::string, std::string>> named_edges(const Dag& g) {
    std::vector<std::pair<std::string, std::string>> out;
    for (const Edge& e : g.edges())
        out.emplace_back(g.node_names()[std::size_t(e.from)], g.node_names()[std::size_t(e.to)]);
    return out;
}

Dag dag_from_named_edges(std::vector<std::string> names,
                         const std::vector<std::pair<std::string, std::string>>& edges) {
    std::vector<Edge> resolved;
    auto index = [&](const std::string& n) {
        for (std::size_t i = 0; i < names.size(); ++i)
            if (names[i] == n) return int(i);
        fail(Errc::UnknownVariable, "node '" + n + "' not in the node list");
    };
    for (const auto& [from, to] : edges) resolved.push_back({index(from), index(to)});
    return Dag::from_edges(std::move(names), resolved);
}

ScoreHyper make_hyper(double ess, int max_indegree) {
    ScoreHyper h;
    h.ess = ess;
    h.max_indegree = max_indegree;
    h.validate();
    return h;
}

std::unique_ptr<SuggestionOracle> make_oracle(const std::string& kind,
                                              const CategoricalDataset& ds, RngSeed seed,
                                              const std::optional<KnowledgeFile>& knowledge) {
    if (kind == "null") return null_oracle();
    if (kind == "random") return random_oracle(seed);
    if (kind == "knowledge") {
        if (!knowledge)
            fail(Errc::Config, "oracle kind 'knowledge' needs knowledge_path");
        return knowledge_oracle(*knowledge);
    }
    if (kind == "ci_init") return ci_init_oracle(ds, 0.05);
    if (kind == "mi_init") return mi_init_oracle(ds, 0.5);
    fail(Errc::Config, "unknown oracle kind '" + kind + "'");
}

py::dict f1_dict(const F1Scores& f) {
    py::dict d;
    d["precision"] = f.precision;
    d["recall"] = f.recall;
    d["f1"] = f.f1;
    d["precision_skeleton"] = f.precision_skel;
    d["recall_skeleton"] = f.recall_skel;
    d["f1_skeleton"] = f.f1_skel;
    d["tp"] = f.counts.tp;
    d["fp"] = f.counts.fp;
    d["fn"] = f.counts.fn;
    return d;
}

py::dict ci_dict(const CITestResult& r) {
    py::dict d;
    d["statistic"] = r.statistic;
    d["dof"] = r.dof;
    d["p_value"] = r.p_value;
    d["independent"] = r.independent;
    d["reliable"] = r.reliable;
    d["audit"] = r.audit;
    return d;
}

} // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Score-based causal structure learning with advisory suggestion oracles";

    py::register_exception<Error>(m, "CslearnError");

    py::class_<Dag>(m, "Dag")
        .def_static("from_edges", &dag_from_named_edges, py::arg("node_names"), py::arg("edges"),
                    "Build a DAG from node names and (from, to) name pairs.")
        .def_property_readonly("node_names", [](const Dag& g) { return g.node_names(); })
        .def_property_readonly("node_count", &Dag::node_count)
        .def("edges", &named_edges, "Edges as (from, to) name pairs, sorted.")
        .def("parents", [](const Dag& g, const std::string& name) {
            int v = g.node_index(name);
            std::vector<std::string> out;
            for (int p : g.parents(v)) out.push_back(g.node_names()[std::size_t(p)]);
            return out;
        }, py::arg("node"))
        .def("to_text", &to_graph_text)
        .def_static("from_text", [](const std::string& text) { return parse_graph_text(text); },
                    py::arg("text"))
        .def("__eq__", [](const Dag& a, const Dag& b) { return a == b; })
        .def("__repr__", [](const Dag& g) {
            return "<Dag nodes=" + std::to_string(g.node_count()) +
                   " edges=" + std::to_string(int(g.edges().size())) + ">";
        });

    py::class_<CategoricalDataset>(m, "Dataset")
        .def_static("read_csv", &read_csv_dataset_file, py::arg("path"))
        .def_static("from_csv_text",
                    [](const std::string& text) { return read_csv_dataset(text); },
                    py::arg("text"))
        .def_property_readonly("column_names", &CategoricalDataset::column_names)
        .def_property_readonly("row_count", &CategoricalDataset::row_count)
        .def("cardinality", [](const CategoricalDataset& ds, const std::string& name) {
            return ds.cardinality(ds.column_index(name));
        }, py::arg("column"))
        .def("to_csv", &write_csv_dataset)
        .def("__len__", &CategoricalDataset::row_count)
        .def("__repr__", [](const CategoricalDataset& ds) {
            return "<Dataset " + std::to_string(ds.row_count()) + " rows x " +
                   std::to_string(ds.variable_count()) + " columns>";
        });

    py::class_<BayesNet>(m, "BayesNet")
        .def_property_readonly("graph",
                               [](const BayesNet& net) { return net.graph(); })
        .def_property_readonly("node_count", &BayesNet::node_count)
        .def("__repr__", [](const BayesNet& net) {
            return "<BayesNet nodes=" + std::to_string(net.node_count()) + ">";
        });

    m.def("load_bif", &parse_bif_file, py::arg("path"));
    m.def("parse_bif", [](const std::string& text) { return parse_bif(text); }, py::arg("text"));
    m.def("forward_sample",
          [](const BayesNet& net, int n, std::uint64_t seed) {
              return forward_sample(net, n, RngSeed(seed));
          },
          py::arg("net"), py::arg("n"), py::arg("seed") = 0);

    m.def("sample_synthetic",
          [](const std::string& structure, int n, std::uint64_t seed,
             std::optional<int> sig_digits, int bins) {
              SyntheticSpec spec;
              if (structure == "chain") spec.structure = SyntheticStructure::Chain;
              else if (structure == "fork") spec.structure = SyntheticStructure::Fork;
              else if (structure == "collider") spec.structure = SyntheticStructure::Collider;
              else fail(Errc::Config, "unknown synthetic structure '" + structure + "'");
              spec.sample_count = n;
              spec.sig_digits = sig_digits;
              spec.validate();
              return discretize_quantile(sample_synthetic(spec, RngSeed(seed)), bins);
          },
          py::arg("structure"), py::arg("n"), py::arg("seed") = 0,
          py::arg("sig_digits") = std::nullopt, py::arg("bins") = 3,
          "Linear-Gaussian three-variable draw, discretized by equal-frequency bins.");
    m.def("synthetic_truth", [](const std::string& structure) {
        if (structure == "chain") return synthetic_truth(SyntheticStructure::Chain);
        if (structure == "fork") return synthetic_truth(SyntheticStructure::Fork);
        if (structure == "collider") return synthetic_truth(SyntheticStructure::Collider);
        fail(Errc::Config, "unknown synthetic structure '" + structure + "'");
    }, py::arg("structure"));

    m.def("total_score",
          [](const std::string& family, const CategoricalDataset& ds, const Dag& g, double ess,
             int max_indegree) {
              return total_score(score_family_from_string(family), ds, g,
                                 make_hyper(ess, max_indegree));
          },
          py::arg("family"), py::arg("dataset"), py::arg("graph"), py::arg("ess") = 1.0,
          py::arg("max_indegree") = 4);

    m.def("g2_test",
          [](const CategoricalDataset& ds, const std::string& x, const std::string& y,
             const std::vector<std::string>& z, double alpha, double prior_shift) {
              std::vector<int> zi;
              for (const auto& name : z) zi.push_back(ds.column_index(name));
              CITestResult r =
                  prior_shift == 0.0
                      ? g2_test(ds, ds.column_index(x), ds.column_index(y), zi, alpha)
                      : g2_prior_adjusted(ds, ds.column_index(x), ds.column_index(y), zi, alpha,
                                          prior_shift);
              return ci_dict(r);
          },
          py::arg("dataset"), py::arg("x"), py::arg("y"),
          py::arg("z") = std::vector<std::string>{}, py::arg("alpha") = 0.05,
          py::arg("prior_shift") = 0.0,
          "Conditional independence G2 test; a nonzero prior_shift selects the "
          "prior-adjusted variant the audit mode warns about.");
    m.def("mutual_information",
          [](const CategoricalDataset& ds, const std::string& x, const std::string& y) {
              return mutual_information(ds, ds.column_index(x), ds.column_index(y));
          },
          py::arg("dataset"), py::arg("x"), py::arg("y"));

    py::class_<GenerationStats>(m, "GenerationStats")
        .def_readonly("generation", &GenerationStats::generation)
        .def_readonly("best", &GenerationStats::best)
        .def_readonly("mean", &GenerationStats::mean);

    py::class_<SearchResult>(m, "SearchResult")
        .def_readonly("best_graph", &SearchResult::best_graph)
        .def_readonly("best_score", &SearchResult::best_score)
        .def_readonly("evaluations_used", &SearchResult::evaluations_used)
        .def_readonly("history", &SearchResult::history)
        .def_readonly("provenance", &SearchResult::provenance)
        .def("__repr__", [](const SearchResult& r) {
            return "<SearchResult score=" + std::to_string(r.best_score) +
                   " evaluations=" + std::to_string(r.evaluations_used) + ">";
        });

    m.def("hill_climb",
          [](const CategoricalDataset& ds, const std::string& family, std::uint64_t seed,
             std::int64_t budget, double ess, int max_indegree) {
              DataScorer scorer(score_family_from_string(family), ds,
                                make_hyper(ess, max_indegree));
              return hill_climb(ds, scorer, RngSeed(seed), budget);
          },
          py::arg("dataset"), py::arg("family") = "bic", py::arg("seed") = 0,
          py::arg("budget") = 1000, py::arg("ess") = 1.0, py::arg("max_indegree") = 4);

    m.def("random_search",
          [](const CategoricalDataset& ds, const std::string& family, std::uint64_t seed,
             std::int64_t budget, double ess, int max_indegree) {
              DataScorer scorer(score_family_from_string(family), ds,
                                make_hyper(ess, max_indegree));
              return random_search(ds, scorer, RngSeed(seed), budget, max_indegree);
          },
          py::arg("dataset"), py::arg("family") = "bic", py::arg("seed") = 0,
          py::arg("budget") = 1000, py::arg("ess") = 1.0, py::arg("max_indegree") = 4);

    m.def("ga_search",
          [](const CategoricalDataset& ds, const std::string& family, std::int64_t budget,
             std::uint64_t seed, int population_size, int tournament_size, int elitism_count,
             double crossover_rate, double mutation_rate, const std::string& crossover,
             const std::string& mutation, const std::string& init, double tau,
             const std::string& oracle, const std::string& knowledge_path, double ess,
             int max_indegree) {
              GaConfig cfg;
              cfg.population_size = population_size;
              cfg.tournament_size = tournament_size;
              cfg.elitism_count = elitism_count;
              cfg.crossover_rate = crossover_rate;
              cfg.mutation_rate = mutation_rate;
              cfg.max_indegree = max_indegree;
              cfg.crossover = crossover_kind_from_string(crossover);
              cfg.mutation = mutation_kind_from_string(mutation);
              cfg.init = init_kind_from_string(init);
              cfg.tau = tau;
              cfg.budget = budget;
              cfg.seed = RngSeed(seed);
              cfg.validate();

              std::optional<KnowledgeFile> knowledge;
              if (!knowledge_path.empty()) knowledge = load_knowledge_file(knowledge_path);
              auto orc = make_oracle(oracle, ds, RngSeed(seed), knowledge);

              OracleContext ctx;
              ctx.names = ds.column_names();
              if (knowledge) {
                  ctx.descriptions = knowledge->descriptions;
                  ctx.background = knowledge->background;
              }
              DataScorer scorer(score_family_from_string(family), ds,
                                make_hyper(ess, max_indegree));
              return run_search(cfg, ds, scorer, *orc, &ctx);
          },
          py::arg("dataset"), py::arg("family") = "bic", py::arg("budget") = 1000,
          py::arg("seed") = 0, py::arg("population_size") = 50, py::arg("tournament_size") = 3,
          py::arg("elitism_count") = 1, py::arg("crossover_rate") = 0.9,
          py::arg("mutation_rate") = 0.0, py::arg("crossover") = "uniform",
          py::arg("mutation") = "bit_flip", py::arg("init") = "random", py::arg("tau") = 0.2,
          py::arg("oracle") = "null", py::arg("knowledge_path") = "", py::arg("ess") = 1.0,
          py::arg("max_indegree") = 4,
          "Genetic search; the oracle only shapes trajectories, scores decide.");

    m.def("audit_search",
          [](const CategoricalDataset& ds, const std::string& family,
             const std::string& knowledge_path, double weight, std::uint64_t seed,
             std::int64_t budget, double ess, int max_indegree) {
              KnowledgeFile knowledge = load_knowledge_file(knowledge_path);
              if (knowledge.constraints.empty())
                  fail(Errc::Config, "audit_search: the knowledge file declares no constraints");
              AuditScorer scorer(score_family_from_string(family), ds,
                                 knowledge.constraints.with_uniform_weight(weight),
                                 make_hyper(ess, max_indegree));
              return hill_climb(ds, scorer, RngSeed(seed), budget);
          },
          py::arg("dataset"), py::arg("family"), py::arg("knowledge_path"), py::arg("weight"),
          py::arg("seed") = 0, py::arg("budget") = 1000, py::arg("ess") = 1.0,
          py::arg("max_indegree") = 4,
          "Hill climb over the blended data-plus-constraints objective. Audit "
          "only: the constraint term gives stated priors decision power.");

    m.def("shd", &shd, py::arg("learned"), py::arg("truth"));
    m.def("edge_f1",
          [](const Dag& learned, const Dag& truth) { return f1_dict(edge_f1(learned, truth)); },
          py::arg("learned"), py::arg("truth"));
    m.def("prior_audit_stats",
          [](const std::string& knowledge_path, const Dag& learned, const Dag& truth) {
              KnowledgeFile knowledge = load_knowledge_file(knowledge_path);
              PriorAuditStats s = prior_audit_stats(knowledge.constraints, learned, truth);
              py::dict d;
              d["constraint_count"] = s.constraint_count;
              d["wrong_count"] = s.wrong_count;
              d["accepted_wrong"] = s.accepted_wrong;
              d["wrong_prior_proportion"] = s.wrong_prior_proportion;
              d["rejected_wrong_prior_proportion"] = s.rejected_wrong_prior_proportion;
              return d;
          },
          py::arg("knowledge_path"), py::arg("learned"), py::arg("truth"));
}
