#ifndef CSLEARN_LLM_ORACLE_HPP
#define CSLEARN_LLM_ORACLE_HPP

#include <memory>
#include <string>

#include "cslearn/oracle.hpp"

namespace cslearn {

// Chat-completions backed oracle.  Every failure mode (missing credential,
// network trouble, bad status, unparseable reply, unknown variable names)
// degrades to "no opinion" with a warning on stderr; the search loses
// guidance, never correctness.
struct LlmOracleConfig {
    // Full chat-completions URL, e.g. http://host:port/v1/chat/completions.
    std::string endpoint;
    std::string model;
    // Name of the environment variable holding the bearer token.  The token
    // itself never appears in config files.
    std::string api_key_env = "CSLEARN_LLM_API_KEY";
    double temperature = 0.0;
    int timeout_seconds = 30;
    // Bound on concurrent requests across all threads using this oracle.
    int max_in_flight = 4;
    // Append-only response cache keyed by the full prompt; empty disables.
    std::string cache_dir;
    // Directory with prompt templates (pairs.txt, mutation.txt,
    // crossover.txt, cycle_break.txt); empty uses the built-in ones.
    std::string prompt_dir;

    void validate() const;
};

std::unique_ptr<SuggestionOracle> llm_oracle(LlmOracleConfig config);

} // namespace cslearn

#endif
