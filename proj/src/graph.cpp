#include "cslearn/graph.hpp"

#include <algorithm>
#include <bit>

#include "cslearn/errors.hpp"

namespace cslearn {

int AdjacencyMatrix::edge_count() const {
    int c = 0;
    for (std::uint64_t w : bits_) c += std::popcount(w);
    return c;
}

int AdjacencyMatrix::in_degree(int j) const {
    int c = 0;
    for (int i = 0; i < n_; ++i) c += at(i, j);
    return c;
}

int AdjacencyMatrix::out_degree(int i) const {
    int c = 0;
    for (int j = 0; j < n_; ++j) c += at(i, j);
    return c;
}

bool is_acyclic(const AdjacencyMatrix& adj) {
    const int n = adj.size();
    std::vector<int> indeg(n, 0);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (adj.at(i, j)) ++indeg[j];
    std::vector<int> stack;
    for (int v = 0; v < n; ++v)
        if (indeg[v] == 0) stack.push_back(v);
    int removed = 0;
    while (!stack.empty()) {
        int v = stack.back();
        stack.pop_back();
        ++removed;
        for (int j = 0; j < n; ++j)
            if (adj.at(v, j) && --indeg[j] == 0) stack.push_back(j);
    }
    return removed == n;
}

std::vector<Edge> find_cycle(const AdjacencyMatrix& adj) {
    const int n = adj.size();
    // Iterative DFS, visiting nodes and successors in ascending order so the
    // reported cycle is deterministic.
    std::vector<int> color(n, 0);  // 0 white, 1 on stack, 2 done
    std::vector<int> path;
    std::vector<int> next(n, 0);
    for (int start = 0; start < n; ++start) {
        if (color[start] != 0) continue;
        path.clear();
        path.push_back(start);
        color[start] = 1;
        next[start] = 0;
        while (!path.empty()) {
            int v = path.back();
            int j = next[v];
            while (j < n && (!adj.at(v, j))) ++j;
            if (j == n) {
                color[v] = 2;
                path.pop_back();
                continue;
            }
            next[v] = j + 1;
            if (color[j] == 1) {
                // Back edge v -> j closes a cycle along the current path.
                std::vector<Edge> cycle;
                auto it = std::find(path.begin(), path.end(), j);
                for (auto p = it; p + 1 != path.end(); ++p) cycle.push_back({*p, *(p + 1)});
                cycle.push_back({v, j});
                return cycle;
            }
            if (color[j] == 0) {
                color[j] = 1;
                next[j] = 0;
                path.push_back(j);
            }
        }
    }
    return {};
}

std::vector<int> topological_order(const AdjacencyMatrix& adj) {
    const int n = adj.size();
    std::vector<int> indeg(n, 0);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (adj.at(i, j)) ++indeg[j];
    std::vector<bool> placed(n, false);
    std::vector<int> order;
    order.reserve(n);
    for (int step = 0; step < n; ++step) {
        int pick = -1;
        for (int v = 0; v < n; ++v) {
            if (!placed[v] && indeg[v] == 0) {
                pick = v;
                break;
            }
        }
        if (pick < 0) fail(Errc::CycleCreated, "topological_order: graph is cyclic");
        placed[pick] = true;
        order.push_back(pick);
        for (int j = 0; j < n; ++j)
            if (adj.at(pick, j)) --indeg[j];
    }
    return order;
}

Dag::Dag(std::vector<std::string> node_names, AdjacencyMatrix adj)
    : names_(std::move(node_names)), adj_(std::move(adj)) {
    if (int(names_.size()) != adj_.size())
        fail(Errc::InvalidArgument, "Dag: node name count does not match adjacency size");
    for (std::size_t i = 0; i < names_.size(); ++i) {
        if (names_[i].empty()) fail(Errc::InvalidArgument, "Dag: empty node name");
        for (std::size_t j = i + 1; j < names_.size(); ++j)
            if (names_[i] == names_[j])
                fail(Errc::InvalidArgument, "Dag: duplicate node name '" + names_[i] + "'");
    }
    for (int v = 0; v < adj_.size(); ++v)
        if (adj_.at(v, v)) fail(Errc::InvalidArgument, "Dag: self-loop at node " + names_[v]);
    if (!is_acyclic(adj_)) fail(Errc::CycleCreated, "Dag: adjacency contains a directed cycle");
}

Dag Dag::empty(std::vector<std::string> node_names) {
    AdjacencyMatrix adj(int(node_names.size()));
    return Dag(std::move(node_names), std::move(adj));
}

Dag Dag::from_edges(std::vector<std::string> node_names, const std::vector<Edge>& edges) {
    AdjacencyMatrix adj(int(node_names.size()));
    const int n = adj.size();
    for (const Edge& e : edges) {
        if (e.from < 0 || e.from >= n || e.to < 0 || e.to >= n)
            fail(Errc::InvalidArgument, "Dag::from_edges: edge endpoint out of range");
        adj.set(e.from, e.to, true);
    }
    return Dag(std::move(node_names), std::move(adj));
}

std::vector<int> Dag::parents(int node) const {
    if (node < 0 || node >= adj_.size()) fail(Errc::InvalidArgument, "Dag::parents: bad node index");
    std::vector<int> out;
    for (int i = 0; i < adj_.size(); ++i)
        if (adj_.at(i, node)) out.push_back(i);
    return out;
}

std::vector<Edge> Dag::edges() const {
    std::vector<Edge> out;
    for (int i = 0; i < adj_.size(); ++i)
        for (int j = 0; j < adj_.size(); ++j)
            if (adj_.at(i, j)) out.push_back({i, j});
    return out;
}

int Dag::node_index(std::string_view name) const {
    for (std::size_t i = 0; i < names_.size(); ++i)
        if (names_[i] == name) return int(i);
    fail(Errc::UnknownVariable, "unknown variable '" + std::string(name) + "'");
}

std::vector<int> Dag::topological_order() const { return cslearn::topological_order(adj_); }

Dag apply_edge_op(const Dag& g, const EdgeOp& op) {
    const int n = g.node_count();
    if (op.from < 0 || op.from >= n || op.to < 0 || op.to >= n)
        fail(Errc::OpInvalid, "edge op endpoint out of range");
    if (op.from == op.to) fail(Errc::OpInvalid, "edge op on a self-loop");
    AdjacencyMatrix adj = g.adjacency();
    switch (op.kind) {
        case EdgeOp::Kind::Add:
            if (adj.at(op.from, op.to)) fail(Errc::OpInvalid, "add: edge already present");
            adj.set(op.from, op.to, true);
            break;
        case EdgeOp::Kind::Remove:
            if (!adj.at(op.from, op.to)) fail(Errc::OpInvalid, "remove: edge not present");
            adj.set(op.from, op.to, false);
            break;
        case EdgeOp::Kind::Reverse:
            if (!adj.at(op.from, op.to)) fail(Errc::OpInvalid, "reverse: edge not present");
            if (adj.at(op.to, op.from)) fail(Errc::OpInvalid, "reverse: opposite edge already present");
            adj.set(op.from, op.to, false);
            adj.set(op.to, op.from, true);
            break;
    }
    if (!is_acyclic(adj)) fail(Errc::CycleCreated, "edge op would create a directed cycle");
    return Dag(g.node_names(), std::move(adj));
}

} // namespace cslearn
