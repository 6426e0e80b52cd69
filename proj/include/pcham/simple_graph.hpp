#pragma once

#include <bit>
#include <stdexcept>
#include <vector>

#include "pcham/hypergraph.hpp"

namespace pcham {

// Plain 2-uniform graph on [0, n), adjacency kept as bitmasks.
struct SimpleGraph {
    int n = 0;
    std::vector<EdgeMask> adj;

    explicit SimpleGraph(int n_) : n(n_), adj(n_, 0) {
        if (n_ < 0 || n_ > 64) throw std::invalid_argument("SimpleGraph: n out of range (0..64)");
    }

    void add_edge(Vertex u, Vertex v) {
        if (u == v || u < 0 || v < 0 || u >= n || v >= n)
            throw std::invalid_argument("SimpleGraph: bad edge");
        adj[u] |= (EdgeMask{1} << v);
        adj[v] |= (EdgeMask{1} << u);
    }

    bool has_edge(Vertex u, Vertex v) const { return (adj[u] >> v) & 1; }

    std::size_t degree(Vertex v) const { return static_cast<std::size_t>(std::popcount(adj[v])); }

    std::size_t edge_count() const {
        std::size_t twice = 0;
        for (Vertex v = 0; v < n; ++v) twice += degree(v);
        return twice / 2;
    }

    std::size_t min_degree() const {
        std::size_t best = SIZE_MAX;
        for (Vertex v = 0; v < n; ++v) best = std::min(best, degree(v));
        return n == 0 ? 0 : best;
    }
};

}  // namespace pcham
