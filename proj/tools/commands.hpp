#ifndef CSLEARN_TOOLS_COMMANDS_HPP
#define CSLEARN_TOOLS_COMMANDS_HPP

#include <cstdint>
#include <optional>
#include <string>

namespace cslearn::cli {

// Flags shared by the config-driven subcommands.  Overrides beat the
// config file; absent optionals defer to it.
struct CommonArgs {
    std::string config_path;
    std::string out_path;
    std::optional<std::uint64_t> seed;
    std::optional<std::int64_t> budget;
    int jobs = 1;
};

struct MetricsArgs {
    std::string learned_path;
    std::string truth_path;
    std::string out_path;  // empty prints to stdout
};

// Each throws cslearn::Error; main maps codes to exit codes.
void cmd_sample(const CommonArgs& args);
void cmd_learn(const CommonArgs& args);
void cmd_audit(const CommonArgs& args);
void cmd_citest(const CommonArgs& args);
void cmd_metrics(const MetricsArgs& args);

} // namespace cslearn::cli

#endif
