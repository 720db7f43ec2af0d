#include "cslearn/graph_io.hpp"

#include <sstream>
#include <vector>

#include "cslearn/dataset.hpp"
#include "cslearn/errors.hpp"

namespace cslearn {

namespace {

constexpr std::string_view kHeader = "# cslearn graph format v1";

bool plain_token(const std::string& s) {
    if (s.empty() || s == "->" || s[0] == '#') return false;
    for (char c : s)
        if (c == ' ' || c == '\t' || c == '\r' || c == '\n') return false;
    return true;
}

} // namespace

std::string to_graph_text(const Dag& g) {
    for (const std::string& name : g.node_names())
        if (!plain_token(name))
            fail(Errc::Semantic, "node name '" + name + "' cannot be written as a graph token");
    std::ostringstream out;
    out << kHeader << '\n';
    for (const std::string& name : g.node_names()) out << "node " << name << '\n';
    for (const Edge& e : g.edges())
        out << g.node_names()[std::size_t(e.from)] << " -> " << g.node_names()[std::size_t(e.to)]
            << '\n';
    return out.str();
}

Dag parse_graph_text(std::string_view text) {
    std::istringstream in{std::string(text)};
    std::string line;
    int line_no = 0;
    bool saw_header = false;
    std::vector<std::string> names;
    std::vector<std::pair<std::string, std::string>> edge_names;

    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        std::istringstream ls(line);
        std::string first;
        if (!(ls >> first)) continue;  // blank line

        if (first[0] == '#') {
            if (!saw_header) {
                if (line.substr(0, kHeader.size()) != kHeader)
                    fail(Errc::Syntax,
                         "line " + std::to_string(line_no) + ": expected header '" +
                             std::string(kHeader) + "'");
                saw_header = true;
            }
            continue;
        }
        if (!saw_header)
            fail(Errc::Syntax, "line " + std::to_string(line_no) + ": missing format header");

        if (first == "node") {
            std::string name, extra;
            if (!(ls >> name) || (ls >> extra))
                fail(Errc::Syntax,
                     "line " + std::to_string(line_no) + ": expected 'node <name>'");
            for (const std::string& seen : names)
                if (seen == name)
                    fail(Errc::Syntax,
                         "line " + std::to_string(line_no) + ": duplicate node '" + name + "'");
            names.push_back(name);
            continue;
        }

        std::string arrow, to, extra;
        if (!(ls >> arrow >> to) || arrow != "->" || (ls >> extra))
            fail(Errc::Syntax,
                 "line " + std::to_string(line_no) + ": expected '<from> -> <to>'");
        edge_names.emplace_back(first, to);
    }
    if (!saw_header) fail(Errc::Syntax, "missing format header");

    auto index_of = [&names](const std::string& name) {
        for (std::size_t i = 0; i < names.size(); ++i)
            if (names[i] == name) return int(i);
        fail(Errc::UnknownVariable, "edge references undeclared node '" + name + "'");
    };
    std::vector<Edge> edges;
    edges.reserve(edge_names.size());
    for (const auto& [from, to] : edge_names) edges.push_back({index_of(from), index_of(to)});
    return Dag::from_edges(std::move(names), edges);
}

Dag read_graph_file(const std::string& path) { return parse_graph_text(read_text_file(path)); }

void write_graph_file(const Dag& g, const std::string& path) {
    write_text_file_atomic(path, to_graph_text(g));
}

} // namespace cslearn
