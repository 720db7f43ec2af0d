#ifndef CSLEARN_ERRORS_HPP
#define CSLEARN_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace cslearn {

// Error categories; the CLI maps these onto exit codes.
enum class Errc {
    Config,           // bad configuration document / schema violation
    Io,               // missing file, unreadable path
    Syntax,           // malformed input text (BIF, CSV, knowledge file)
    Semantic,         // well-formed input violating a semantic rule
    UnknownVariable,  // name not resolvable against the dataset/graph
    InvalidArgument,  // bad call-level argument (x == y, index out of range, ...)
    OpInvalid,        // edge op not applicable to the graph
    CycleCreated,     // edge op would create a directed cycle
    NodeSetMismatch,  // graphs over different variable sets
    Internal,
};

class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& what) : std::runtime_error(what), code_(code) {}
    Errc code() const noexcept { return code_; }

private:
    Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string& what) { throw Error(code, what); }

} // namespace cslearn

#endif
