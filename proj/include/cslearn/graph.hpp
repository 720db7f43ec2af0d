#ifndef CSLEARN_GRAPH_HPP
#define CSLEARN_GRAPH_HPP

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace cslearn {

// Dense directed-graph adjacency, one bit per ordered pair.
// at(i, j) == true means an edge i -> j.
class AdjacencyMatrix {
public:
    AdjacencyMatrix() = default;
    explicit AdjacencyMatrix(int n) : n_(n), bits_((std::size_t(n) * n + 63) / 64, 0) {}

    int size() const { return n_; }

    bool at(int i, int j) const {
        std::size_t k = std::size_t(i) * n_ + j;
        return (bits_[k >> 6] >> (k & 63)) & 1u;
    }

    void set(int i, int j, bool v) {
        std::size_t k = std::size_t(i) * n_ + j;
        std::uint64_t m = std::uint64_t(1) << (k & 63);
        if (v)
            bits_[k >> 6] |= m;
        else
            bits_[k >> 6] &= ~m;
    }

    int edge_count() const;
    int in_degree(int j) const;
    int out_degree(int i) const;

    // Packed bits, row-major; usable as a hash/memo key alongside size().
    const std::vector<std::uint64_t>& words() const { return bits_; }

    bool operator==(const AdjacencyMatrix&) const = default;

private:
    int n_ = 0;
    std::vector<std::uint64_t> bits_;
};

struct Edge {
    int from = 0;
    int to = 0;
    bool operator==(const Edge&) const = default;
    auto operator<=>(const Edge&) const = default;
};

struct EdgeOp {
    enum class Kind { Add, Remove, Reverse };
    Kind kind = Kind::Add;
    int from = 0;
    int to = 0;
};

bool is_acyclic(const AdjacencyMatrix& adj);

// Edges of one simple directed cycle, in walk order; empty iff acyclic.
std::vector<Edge> find_cycle(const AdjacencyMatrix& adj);

// Kahn's algorithm, always taking the smallest eligible node index, so the
// order is a pure function of the graph.  Throws on cyclic input.
std::vector<int> topological_order(const AdjacencyMatrix& adj);

// Directed acyclic graph over named nodes.  Acyclicity is a class invariant:
// construction and apply_edge_op reject anything cyclic, so holders of a Dag
// never need to re-check.
class Dag {
public:
    Dag() = default;  // zero nodes
    Dag(std::vector<std::string> node_names, AdjacencyMatrix adj);

    static Dag empty(std::vector<std::string> node_names);
    static Dag from_edges(std::vector<std::string> node_names, const std::vector<Edge>& edges);

    int node_count() const { return adj_.size(); }
    const std::vector<std::string>& node_names() const { return names_; }
    const AdjacencyMatrix& adjacency() const { return adj_; }

    bool has_edge(int from, int to) const { return adj_.at(from, to); }
    std::vector<int> parents(int node) const;  // ascending indices
    std::vector<Edge> edges() const;           // sorted by (from, to)
    int edge_count() const { return adj_.edge_count(); }

    int node_index(std::string_view name) const;  // throws UnknownVariable
    std::vector<int> topological_order() const;

    bool operator==(const Dag&) const = default;

private:
    std::vector<std::string> names_;
    AdjacencyMatrix adj_;
};

// Returns the modified graph.  Throws OpInvalid when the op does not apply
// (adding an existing or self-loop edge, removing/reversing a missing edge)
// and CycleCreated when the result would be cyclic.
Dag apply_edge_op(const Dag& g, const EdgeOp& op);

} // namespace cslearn

#endif
