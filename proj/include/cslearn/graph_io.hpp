#ifndef CSLEARN_GRAPH_IO_HPP
#define CSLEARN_GRAPH_IO_HPP

#include <string>
#include <string_view>

#include "cslearn/graph.hpp"

namespace cslearn {

// Plain-text graph interchange:
//
//   # cslearn graph format v1
//   node asia
//   node tub
//   asia -> tub
//
// Node lines fix the index order; edge lines may only use declared names.
// Later '#' lines are comments.  Names are single whitespace-free tokens.
std::string to_graph_text(const Dag& g);
Dag parse_graph_text(std::string_view text);

Dag read_graph_file(const std::string& path);
void write_graph_file(const Dag& g, const std::string& path);

} // namespace cslearn

#endif
