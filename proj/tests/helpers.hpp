#pragma once

// Test-side construction and oracle helpers. These deliberately avoid the
// library's generators so the two sides stay independent.

#include <vector>

#include "pcham/hypergraph.hpp"
#include "pcham/rng.hpp"

namespace testutil {

inline void for_each_ksubset(int n, int k, const std::function<void(const std::vector<pcham::Vertex>&)>& fn) {
    std::vector<pcham::Vertex> cur;
    std::function<void(int)> rec = [&](int start) {
        if (static_cast<int>(cur.size()) == k) {
            fn(cur);
            return;
        }
        for (int v = start; v < n; ++v) {
            cur.push_back(v);
            rec(v + 1);
            cur.pop_back();
        }
    };
    rec(0);
}

inline pcham::ColoredKGraph rainbow_complete(int n, int k) {
    pcham::ColoredKGraph H(n, k);
    int c = 0;
    for_each_ksubset(n, k, [&](const std::vector<pcham::Vertex>& e) { H.add_edge(e, ++c); });
    return H;
}

inline pcham::ColoredKGraph mono_complete(int n, int k, pcham::ColorId color = 1) {
    pcham::ColoredKGraph H(n, k);
    for_each_ksubset(n, k, [&](const std::vector<pcham::Vertex>& e) { H.add_edge(e, color); });
    return H;
}

// Every k-subset kept with probability p; colors uniform in [1, palette].
inline pcham::ColoredKGraph random_instance(int n, int k, double p, int palette, pcham::Rng& rng) {
    pcham::ColoredKGraph H(n, k);
    for_each_ksubset(n, k, [&](const std::vector<pcham::Vertex>& e) {
        if (rng.bernoulli(p)) H.add_edge(e, static_cast<pcham::ColorId>(1 + rng.below(palette)));
    });
    return H;
}

// Relabels vertices of H by the permutation perm (vertex v -> perm[v]).
inline pcham::ColoredKGraph relabel(const pcham::ColoredKGraph& H, const std::vector<pcham::Vertex>& perm) {
    pcham::ColoredKGraph out(H.n(), H.k());
    for (const auto& e : H.edges()) {
        std::vector<pcham::Vertex> f;
        for (pcham::Vertex v : e.vertices) f.push_back(perm[v]);
        out.add_edge(f, e.color);
    }
    return out;
}

}  // namespace testutil
