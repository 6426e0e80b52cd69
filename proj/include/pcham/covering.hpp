#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <functional>
#include <optional>
#include <stdexcept>
#include <vector>

#include "pcham/paths.hpp"
#include "pcham/rng.hpp"
#include "pcham/simple_graph.hpp"

namespace pcham {

// ---------------------------------------------------------------------------
// Dense k-partite path growing: iterated low-degree deletion, then greedy
// properly colored extension.
// ---------------------------------------------------------------------------

struct DensePathResult {
    KLPath path;
    std::size_t deleted_edges = 0;   // edges removed during preprocessing
    bool contradiction = false;      // preprocessing emptied the host
};

namespace detail {

inline int part_of(const std::vector<std::vector<Vertex>>& parts, Vertex v) {
    for (std::size_t i = 0; i < parts.size(); ++i)
        if (std::find(parts[i].begin(), parts[i].end(), v) != parts[i].end()) return static_cast<int>(i);
    return -1;
}

inline std::size_t max_part_size(const std::vector<std::vector<Vertex>>& parts) {
    std::size_t m = 0;
    for (const auto& p : parts) m = std::max(m, p.size());
    return m;
}

// Deletes, repeatedly, all edges through any s-set of positive degree below
// `threshold`. Returns the surviving edges; counts deletions.
inline std::vector<Edge> prune_low_degree(std::vector<Edge> edges, int s, double threshold,
                                          std::size_t& deleted) {
    bool changed = true;
    while (changed) {
        changed = false;
        auto table = subset_degree_table(edges, s);
        EdgeMask bad_any = 0;
        std::vector<EdgeMask> bad;
        for (const auto& [m, deg] : table)
            if (deg > 0 && static_cast<double>(deg) < threshold) bad.push_back(m), bad_any |= m;
        if (bad.empty()) break;
        std::vector<Edge> kept;
        for (const Edge& e : edges) {
            bool hit = false;
            if (e.mask & bad_any)
                for (EdgeMask m : bad)
                    if ((e.mask & m) == m) {
                        hit = true;
                        break;
                    }
            if (hit)
                ++deleted;
            else
                kept.push_back(e);
        }
        changed = kept.size() != edges.size();
        edges = std::move(kept);
    }
    return edges;
}

}  // namespace detail

// Tight path in a k-partite host of density d: prune every (k-1)-set of
// positive degree below dm/k, then extend greedily, keeping the new edge's
// color distinct from the last k-1 edge colors.
inline DensePathResult grow_dense_path(const ColoredKGraph& J,
                                       const std::vector<std::vector<Vertex>>& parts, double d) {
    const int k = J.k();
    if (static_cast<int>(parts.size()) != k) throw std::invalid_argument("grow_dense_path: need k parts");
    const double m = static_cast<double>(detail::max_part_size(parts));

    DensePathResult res;
    auto edges = detail::prune_low_degree(J.edges(), k - 1, d * m / k, res.deleted_edges);
    if (edges.empty()) {
        res.contradiction = true;
        return res;
    }
    std::sort(edges.begin(), edges.end(), [](const Edge& a, const Edge& b) { return a.vertices < b.vertices; });

    // order the starting edge by part index so extension cycles through parts
    std::vector<Vertex> seq = edges.front().vertices;
    std::stable_sort(seq.begin(), seq.end(),
                     [&](Vertex a, Vertex b) { return detail::part_of(parts, a) < detail::part_of(parts, b); });
    EdgeMask used = mask_of(seq);
    std::vector<ColorId> ecolors{edges.front().color};

    bool grew = true;
    while (grew) {
        grew = false;
        std::vector<Vertex> tail(seq.end() - (k - 1), seq.end());
        for (const Edge& e : edges) {
            EdgeMask tm = mask_of(tail);
            if ((e.mask & tm) != tm) continue;
            EdgeMask fresh = e.mask & ~tm;
            if (std::popcount(fresh) != 1 || (fresh & used)) continue;
            // color must avoid the last k-1 edges (the ones the new edge meets)
            bool clash = false;
            for (std::size_t j = ecolors.size() >= static_cast<std::size_t>(k - 1) ? ecolors.size() - (k - 1) : 0;
                 j < ecolors.size(); ++j)
                if (ecolors[j] == e.color) clash = true;
            if (clash) continue;
            seq.push_back(mask_vertices(fresh)[0]);
            used |= fresh;
            ecolors.push_back(e.color);
            grew = true;
            break;
        }
    }
    res.path = KLPath{k, k - 1, seq};
    if (!is_properly_colored(J, res.path)) throw std::logic_error("grow_dense_path: produced a non-pc path");
    return res;
}

// Canonical (k,l)-path (l < k/2) in a k-partite host: prune l-sets of degree
// below d*m^{k-l}/2, then extend greedily with the overlap l-set drawn from
// the designated end parts (W_1..W_l and W_{k-l+1}..W_k) and the new color
// distinct from the previous edge's.
inline DensePathResult grow_canonical_path(const ColoredKGraph& J,
                                           const std::vector<std::vector<Vertex>>& parts, int l,
                                           double d) {
    const int k = J.k();
    if (l < 1 || 2 * l >= k) throw std::invalid_argument("grow_canonical_path: requires l < k/2");
    if (static_cast<int>(parts.size()) != k) throw std::invalid_argument("grow_canonical_path: need k parts");
    const double m = static_cast<double>(detail::max_part_size(parts));

    DensePathResult res;
    auto edges = detail::prune_low_degree(J.edges(), l, d * std::pow(m, k - l) / 2.0, res.deleted_edges);
    if (edges.empty()) {
        res.contradiction = true;
        return res;
    }
    std::sort(edges.begin(), edges.end(), [](const Edge& a, const Edge& b) { return a.vertices < b.vertices; });

    EdgeMask end_parts = 0;
    for (int i = 0; i < l; ++i) end_parts |= mask_of(parts[i]);
    for (int i = k - l; i < k; ++i) end_parts |= mask_of(parts[i]);

    // start: first edge, ordered with an end-part l-set last so it can overlap
    auto order_start = [&](const Edge& e) -> std::optional<std::vector<Vertex>> {
        std::vector<Vertex> endv, midv;
        for (Vertex v : e.vertices)
            ((end_parts >> v) & 1 ? endv : midv).push_back(v);
        if (static_cast<int>(endv.size()) < 2 * l) return std::nullopt;
        // first l vertices and last l vertices from the end parts
        std::vector<Vertex> s(endv.begin(), endv.begin() + l);
        std::vector<Vertex> t(endv.end() - l, endv.end());
        std::vector<Vertex> rest;
        for (Vertex v : e.vertices)
            if (std::find(s.begin(), s.end(), v) == s.end() && std::find(t.begin(), t.end(), v) == t.end())
                rest.push_back(v);
        std::vector<Vertex> seq = s;
        seq.insert(seq.end(), rest.begin(), rest.end());
        seq.insert(seq.end(), t.begin(), t.end());
        return seq;
    };

    std::vector<Vertex> seq;
    ColorId last_color = 0;
    for (const Edge& e : edges) {
        if (auto s = order_start(e)) {
            seq = *s;
            last_color = e.color;
            break;
        }
    }
    if (seq.empty()) {
        res.contradiction = true;
        return res;
    }
    EdgeMask used = mask_of(seq);

    bool grew = true;
    while (grew) {
        grew = false;
        std::vector<Vertex> tail(seq.end() - l, seq.end());
        EdgeMask tm = mask_of(tail);
        for (const Edge& e : edges) {
            if ((e.mask & tm) != tm) continue;
            EdgeMask fresh = e.mask & ~tm;
            if (std::popcount(fresh) != k - l || (fresh & used)) continue;
            if (e.color == last_color) continue;
            // next overlap must again come from the end parts
            auto freshv = mask_vertices(fresh);
            std::vector<Vertex> endv, midv;
            for (Vertex v : freshv)
                ((end_parts >> v) & 1 ? endv : midv).push_back(v);
            if (static_cast<int>(endv.size()) < l) continue;
            std::vector<Vertex> nxt(endv.end() - l, endv.end());
            for (Vertex v : freshv)
                if (std::find(nxt.begin(), nxt.end(), v) == nxt.end()) seq.push_back(v);
            seq.insert(seq.end(), nxt.begin(), nxt.end());
            used |= fresh;
            last_color = e.color;
            grew = true;
            break;
        }
    }
    res.path = KLPath{k, l, seq};
    if (!res.path.structurally_valid()) throw std::logic_error("grow_canonical_path: malformed result");
    if (!is_properly_colored(J, res.path)) throw std::logic_error("grow_canonical_path: produced a non-pc path");
    return res;
}

// ---------------------------------------------------------------------------
// Greedy global path cover
// ---------------------------------------------------------------------------

struct CoverResult {
    std::vector<KLPath> paths;
    std::vector<Vertex> uncovered;
    bool shortfall = false;  // could not reach the delta*n target within q paths
};

namespace detail {

// Grows a maximal pc (k,l)-path inside `allowed`, starting near `start`.
// Extension appends k-l fresh vertices forming an edge over the last l,
// keeping proper coloring; candidate order is seeded-shuffled.
inline std::optional<KLPath> grow_greedy_path(const ColoredKGraph& H, int l, Vertex start,
                                              EdgeMask allowed, Rng& rng, int min_edges) {
    const int k = H.k();
    std::vector<Edge> edges = H.edges();
    rng.shuffle(edges);

    // starting edge through `start`, fully inside allowed
    std::vector<Vertex> seq;
    for (const Edge& e : edges) {
        if (!((e.mask >> start) & 1)) continue;
        if (e.mask & ~allowed) continue;
        seq = e.vertices;
        break;
    }
    if (seq.empty()) return std::nullopt;
    EdgeMask used = mask_of(seq);

    auto try_extend = [&](bool at_back) -> bool {
        std::vector<Vertex> overlap = at_back ? std::vector<Vertex>(seq.end() - l, seq.end())
                                              : std::vector<Vertex>(seq.begin(), seq.begin() + l);
        EdgeMask om = mask_of(overlap);
        for (const Edge& e : edges) {
            if ((e.mask & om) != om) continue;
            EdgeMask fresh = e.mask & ~om;
            if (std::popcount(fresh) != k - l) continue;
            if ((fresh & used) || (fresh & ~allowed)) continue;
            std::vector<Vertex> cand = seq;
            auto freshv = mask_vertices(fresh);
            if (at_back)
                cand.insert(cand.end(), freshv.begin(), freshv.end());
            else
                cand.insert(cand.begin(), freshv.begin(), freshv.end());
            KLPath P{k, l, cand};
            if (!P.structurally_valid()) continue;
            bool ok = true;
            for (const auto& w : path_edges(P))
                if (!H.has_edge(w)) {
                    ok = false;
                    break;
                }
            if (!ok || !is_properly_colored(H, P)) continue;
            seq = std::move(cand);
            used |= fresh;
            return true;
        }
        return false;
    };

    bool grew = true;
    while (grew) grew = try_extend(true) || try_extend(false);

    KLPath P{k, l, seq};
    if (!P.structurally_valid() || P.edge_count() < min_edges) return std::nullopt;
    return P;
}

}  // namespace detail

inline CoverResult greedy_path_cover(const ColoredKGraph& H, int l, double delta, int q,
                                     std::uint64_t seed, int min_edges = 3) {
    const int k = H.k();
    if (l < 1 || l >= k) throw std::invalid_argument("greedy_path_cover: l out of range");
    if (q < 0 || delta < 0) throw std::invalid_argument("greedy_path_cover: bad budget");
    Rng rng(derive_seed(seed, 0xC0DE));
    CoverResult res;
    EdgeMask covered = 0;
    EdgeMask hopeless = 0;  // start vertices that failed to seed a path
    const double target = delta * H.active_count();

    auto uncovered_count = [&]() {
        return H.active_count() - std::popcount(covered & H.active_mask());
    };

    while (static_cast<double>(uncovered_count()) > target &&
           static_cast<int>(res.paths.size()) < q) {
        std::vector<Vertex> pool;
        for (Vertex v : H.vertices())
            if (!((covered | hopeless) >> v & 1)) pool.push_back(v);
        if (pool.empty()) break;
        Vertex start = pool[rng.below(pool.size())];
        auto P = detail::grow_greedy_path(H, l, start, H.active_mask() & ~covered, rng, min_edges);
        if (!P) {
            hopeless |= (EdgeMask{1} << start);
            continue;
        }
        covered |= mask_of(P->vertices);
        res.paths.push_back(*P);
    }
    for (Vertex v : H.vertices())
        if (!((covered >> v) & 1)) res.uncovered.push_back(v);
    res.shortfall = static_cast<double>(res.uncovered.size()) > target;
    return res;
}

// ---------------------------------------------------------------------------
// Perfect matching (exact backtracking; exhaustive at desk scale)
// ---------------------------------------------------------------------------

inline std::optional<std::vector<std::pair<Vertex, Vertex>>> perfect_matching(
    const SimpleGraph& G, const std::vector<Vertex>& U) {
    if (U.size() % 2 != 0) throw std::invalid_argument("perfect_matching: |U| must be even");
    EdgeMask um = mask_of(U);
    if (static_cast<std::size_t>(std::popcount(um)) != U.size())
        throw std::invalid_argument("perfect_matching: repeated vertices");
    for (Vertex v : U)
        if (v < 0 || v >= G.n) throw std::invalid_argument("perfect_matching: vertex outside G");

    std::vector<std::pair<Vertex, Vertex>> match;
    std::function<bool(EdgeMask)> rec = [&](EdgeMask left) -> bool {
        if (!left) return true;
        Vertex u = std::countr_zero(left);
        EdgeMask nbrs = G.adj[u] & left & ~(EdgeMask{1} << u);
        while (nbrs) {
            Vertex w = std::countr_zero(nbrs);
            nbrs &= nbrs - 1;
            match.emplace_back(u, w);
            if (rec(left & ~(EdgeMask{1} << u) & ~(EdgeMask{1} << w))) return true;
            match.pop_back();
        }
        return false;
    };
    if (rec(um)) return match;
    return std::nullopt;
}

}  // namespace pcham
