#include <iostream>

#include "CLI11.hpp"
#include "commands.hpp"
#include "cslearn/errors.hpp"

namespace {

int exit_code_for(cslearn::Errc code) {
    switch (code) {
    case cslearn::Errc::Config: return 2;
    case cslearn::Errc::Io: return 3;
    case cslearn::Errc::Syntax: return 4;
    case cslearn::Errc::Semantic: return 5;
    case cslearn::Errc::UnknownVariable: return 6;
    default: return 70;
    }
}

void add_common(CLI::App* sub, cslearn::cli::CommonArgs& args, bool with_budget, bool with_jobs) {
    sub->add_option("--config", args.config_path, "JSON configuration file")->required();
    sub->add_option("--out", args.out_path, "output file or directory");
    sub->add_option("--seed", args.seed, "override the config seed");
    if (with_budget) sub->add_option("--budget", args.budget, "override the evaluation budget");
    if (with_jobs)
        sub->add_option("--jobs", args.jobs, "replications run in parallel")
            ->check(CLI::PositiveNumber);
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"score-first structure learning over discrete Bayesian networks"};
    app.require_subcommand(1);

    cslearn::cli::CommonArgs sample_args, learn_args, audit_args, citest_args;
    cslearn::cli::MetricsArgs metrics_args;

    CLI::App* sample = app.add_subcommand("sample", "draw a dataset from a network or synthetic model");
    add_common(sample, sample_args, false, false);

    CLI::App* learn = app.add_subcommand("learn", "search for a structure that maximizes the data score");
    add_common(learn, learn_args, true, true);

    CLI::App* audit = app.add_subcommand("audit", "sweep soft-constraint weights over the blended objective");
    add_common(audit, audit_args, true, true);

    CLI::App* citest = app.add_subcommand("citest", "run conditional independence tests from a config");
    add_common(citest, citest_args, false, false);

    CLI::App* metrics = app.add_subcommand("metrics", "compare a learned graph against a reference");
    metrics->add_option("learned", metrics_args.learned_path, "learned graph (.graph or .bif)")
        ->required();
    metrics->add_option("truth", metrics_args.truth_path, "reference graph (.graph or .bif)")
        ->required();
    metrics->add_option("--out", metrics_args.out_path, "write the JSON report here");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        if (sample->parsed()) cslearn::cli::cmd_sample(sample_args);
        if (learn->parsed()) cslearn::cli::cmd_learn(learn_args);
        if (audit->parsed()) cslearn::cli::cmd_audit(audit_args);
        if (citest->parsed()) cslearn::cli::cmd_citest(citest_args);
        if (metrics->parsed()) cslearn::cli::cmd_metrics(metrics_args);
        return 0;
    } catch (const cslearn::Error& e) {
        std::cerr << "cslearn: " << e.what() << "\n";
        return exit_code_for(e.code());
    } catch (const std::exception& e) {
        std::cerr << "cslearn: internal error: " << e.what() << "\n";
        return 70;
    }
}
