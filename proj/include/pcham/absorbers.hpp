#pragma once

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "pcham/paths.hpp"
#include "pcham/rng.hpp"
#include "pcham/simple_graph.hpp"

namespace pcham {

struct InvalidAbsorberError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct PlacementError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct ColoringConflictError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Absorber species
// ---------------------------------------------------------------------------

// Tight absorber for a single vertex: an ordered (4k-4)-tuple spanning a tight
// path, which still spans a tight path when the target is inserted in the
// middle (after the first 2k-2 vertices).
struct TightAbsorber {
    int k = 0;
    Vertex target = -1;
    std::vector<Vertex> tuple;  // 4k-4 vertices

    KLPath base_path() const { return KLPath{k, k - 1, tuple}; }

    KLPath expanded_path() const {
        std::vector<Vertex> vs(tuple.begin(), tuple.begin() + 2 * k - 2);
        vs.push_back(target);
        vs.insert(vs.end(), tuple.begin() + 2 * k - 2, tuple.end());
        return KLPath{k, k - 1, vs};
    }
};

// Absorber for a (k-l)-set S: a 3-edge path P and a 4-edge path Q on
// V(P) u S with the same end-edges and the same l-ends.
struct SetAbsorber {
    int k = 0;
    int l = 0;
    std::vector<Vertex> target;  // |target| = k - l
    KLPath P;                    // 3 edges
    KLPath Q;                    // 4 edges, V(Q) = V(P) u target
};

// Loose absorber for a vertex pair (k = 3): seven vertices carrying three
// loose-path edges plus the two link edges v2-x-v4 and v4-y-v6.
struct PairAbsorber {
    Vertex x = -1, y = -1;
    std::vector<Vertex> tuple;  // (v1..v7)

    KLPath base_path() const { return KLPath{3, 1, tuple}; }

    KLPath expanded_path() const {
        const auto& v = tuple;
        return KLPath{3, 1, {v[0], v[2], v[1], x, v[3], y, v[5], v[4], v[6]}};
    }
};

// ---------------------------------------------------------------------------
// Structural validation and pc checks
// ---------------------------------------------------------------------------

namespace detail {

inline void require_edges_present(const ColoredKGraph& H, const KLPath& P, const char* what) {
    if (!P.structurally_valid()) throw InvalidAbsorberError(std::string(what) + ": malformed path");
    for (const auto& e : path_edges(P))
        if (!H.has_edge(e)) throw InvalidAbsorberError(std::string(what) + ": missing edge");
}

}  // namespace detail

inline void check_structure(const ColoredKGraph& H, const TightAbsorber& A) {
    const int k = H.k();
    if (A.k != k) throw InvalidAbsorberError("tight absorber: wrong uniformity");
    if (static_cast<int>(A.tuple.size()) != 4 * k - 4)
        throw InvalidAbsorberError("tight absorber: tuple must have 4k-4 vertices");
    if (!H.has_vertex(A.target)) throw InvalidAbsorberError("tight absorber: unknown target");
    EdgeMask tm = mask_of(A.tuple);
    if (std::popcount(tm) != 4 * k - 4) throw InvalidAbsorberError("tight absorber: repeated vertices");
    if ((tm >> A.target) & 1) throw InvalidAbsorberError("tight absorber: target inside tuple");
    for (Vertex v : A.tuple)
        if (!H.has_vertex(v)) throw InvalidAbsorberError("tight absorber: unknown vertex");
    detail::require_edges_present(H, A.base_path(), "tight absorber base");
    detail::require_edges_present(H, A.expanded_path(), "tight absorber expanded");
}

inline void check_structure(const ColoredKGraph& H, const SetAbsorber& A) {
    const int k = H.k();
    if (A.k != k || A.P.k != k || A.Q.k != k || A.P.l != A.l || A.Q.l != A.l)
        throw InvalidAbsorberError("set absorber: inconsistent (k,l)");
    if (static_cast<int>(A.target.size()) != k - A.l)
        throw InvalidAbsorberError("set absorber: target must have k-l vertices");
    if (A.P.edge_count() != 3 || A.Q.edge_count() != 4)
        throw InvalidAbsorberError("set absorber: P must have 3 edges and Q four");
    EdgeMask sp = mask_of(A.P.vertices), ss = mask_of(A.target), sq = mask_of(A.Q.vertices);
    if (std::popcount(ss) != k - A.l) throw InvalidAbsorberError("set absorber: repeated target vertices");
    if (sp & ss) throw InvalidAbsorberError("set absorber: target meets P");
    if (sq != (sp | ss)) throw InvalidAbsorberError("set absorber: V(Q) != V(P) u S");
    auto pe = path_edges(A.P), qe = path_edges(A.Q);
    if (mask_of(pe.front()) != mask_of(qe.front()) || mask_of(pe.back()) != mask_of(qe.back()))
        throw InvalidAbsorberError("set absorber: end-edges differ");
    auto pend = ends(A.P), qend = ends(A.Q);
    for (int i = 0; i < 2; ++i)
        if (mask_of(pend.ell_ends[i]) != mask_of(qend.ell_ends[i]))
            throw InvalidAbsorberError("set absorber: l-ends differ");
    for (Vertex v : A.Q.vertices)
        if (!H.has_vertex(v)) throw InvalidAbsorberError("set absorber: unknown vertex");
    detail::require_edges_present(H, A.P, "set absorber P");
    detail::require_edges_present(H, A.Q, "set absorber Q");
}

inline void check_structure(const ColoredKGraph& H, const PairAbsorber& A) {
    if (H.k() != 3) throw InvalidAbsorberError("pair absorber: requires k = 3");
    if (A.tuple.size() != 7) throw InvalidAbsorberError("pair absorber: tuple must have 7 vertices");
    if (A.x == A.y) throw InvalidAbsorberError("pair absorber: targets must differ");
    EdgeMask tm = mask_of(A.tuple);
    if (std::popcount(tm) != 7) throw InvalidAbsorberError("pair absorber: repeated vertices");
    for (Vertex v : A.tuple)
        if (!H.has_vertex(v)) throw InvalidAbsorberError("pair absorber: unknown vertex");
    if (!H.has_vertex(A.x) || !H.has_vertex(A.y)) throw InvalidAbsorberError("pair absorber: unknown target");
    if (((tm >> A.x) & 1) || ((tm >> A.y) & 1))
        throw InvalidAbsorberError("pair absorber: target inside tuple");
    detail::require_edges_present(H, A.base_path(), "pair absorber base");
    detail::require_edges_present(H, A.expanded_path(), "pair absorber expanded");
}

template <typename Absorber>
inline bool is_pc_absorber(const ColoredKGraph& H, const Absorber& A) {
    check_structure(H, A);
    if constexpr (std::is_same_v<Absorber, SetAbsorber>) {
        return is_properly_colored(H, A.P) && is_properly_colored(H, A.Q);
    } else {
        return is_properly_colored(H, A.base_path()) && is_properly_colored(H, A.expanded_path());
    }
}

// ---------------------------------------------------------------------------
// Enumeration
// ---------------------------------------------------------------------------

struct EnumOptions {
    bool pc_only = true;
    std::size_t cap = SIZE_MAX;        // SIZE_MAX = enumerate everything
    std::uint64_t seed = 0;            // drives the candidate shuffle only
    std::uint64_t max_nodes = UINT64_MAX;
};

namespace detail {

// One shuffled candidate order per search depth; keeps full enumeration
// exhaustive while spreading capped enumeration across the tuple space.
inline std::vector<std::vector<Vertex>> per_depth_orders(const std::vector<Vertex>& pool, int depth,
                                                         std::uint64_t seed) {
    std::vector<std::vector<Vertex>> orders(depth, pool);
    for (int i = 0; i < depth; ++i) {
        Rng rng(derive_seed(seed, static_cast<std::uint64_t>(i)));
        rng.shuffle(orders[i]);
    }
    return orders;
}

}  // namespace detail

inline std::vector<TightAbsorber> enumerate_tight_absorbers(const ColoredKGraph& H, Vertex target,
                                                            const EnumOptions& opts = {}) {
    const int k = H.k();
    if (!H.has_vertex(target)) throw std::invalid_argument("enumerate_tight_absorbers: unknown target");
    if (opts.cap == 0) throw std::invalid_argument("enumerate_tight_absorbers: cap must be positive");
    const int len = 4 * k - 4;

    std::vector<Vertex> pool;
    for (Vertex v : H.vertices())
        if (v != target) pool.push_back(v);
    auto orders = detail::per_depth_orders(pool, len, opts.seed);

    // Windows of the base tuple complete at slot i+k-1 for window start i.
    // Windows of the expanded tuple map slot s to position s (s < 2k-2) or
    // s+1 (s >= 2k-2); position 2k-2 is the target.
    auto slot_of_pos = [&](int pos) -> int {
        if (pos < 2 * k - 2) return pos;
        if (pos == 2 * k - 2) return -1;  // target
        return pos - 1;
    };

    std::vector<TightAbsorber> out;
    std::vector<Vertex> tuple;
    EdgeMask used = EdgeMask{1} << target;
    std::uint64_t nodes = 0;
    bool stop = false;

    auto window_ok = [&](int t) -> bool {
        // base windows ending at slot t
        if (t >= k - 1) {
            std::vector<Vertex> e(tuple.begin() + (t - k + 1), tuple.begin() + t + 1);
            if (!H.has_edge(e)) return false;
        }
        // expanded windows whose max slot is t
        const int epos = (t < 2 * k - 2) ? t : t + 1;
        for (int a = std::max(0, epos - k + 1); a + k - 1 <= 4 * k - 4; ++a) {
            const int last = a + k - 1;
            if (last != epos && !(last == epos + 1 && slot_of_pos(last) == -1)) continue;
            // the window [a, a+k-1] is determined once slot t is placed
            bool det = true;
            std::vector<Vertex> e;
            for (int p = a; p <= a + k - 1; ++p) {
                int s = slot_of_pos(p);
                if (s == -1) {
                    e.push_back(target);
                } else if (s <= t) {
                    e.push_back(tuple[s]);
                } else {
                    det = false;
                    break;
                }
            }
            if (det && !H.has_edge(e)) return false;
        }
        return true;
    };

    std::function<void()> rec = [&]() {
        if (stop) return;
        const int t = static_cast<int>(tuple.size());
        if (t == len) {
            TightAbsorber A{k, target, tuple};
            if (!opts.pc_only || is_pc_absorber(H, A)) {
                out.push_back(A);
                if (out.size() >= opts.cap) stop = true;
            }
            return;
        }
        for (Vertex v : orders[t]) {
            EdgeMask b = EdgeMask{1} << v;
            if (used & b) continue;
            tuple.push_back(v);
            used |= b;
            if (++nodes > opts.max_nodes) stop = true;
            if (!stop && window_ok(t)) rec();
            used &= ~b;
            tuple.pop_back();
            if (stop) return;
        }
    };
    rec();
    return out;
}

inline std::vector<PairAbsorber> enumerate_pair_absorbers(const ColoredKGraph& H, Vertex x, Vertex y,
                                                          const EnumOptions& opts = {}) {
    if (H.k() != 3) throw std::invalid_argument("enumerate_pair_absorbers: requires k = 3");
    if (!H.has_vertex(x) || !H.has_vertex(y) || x == y)
        throw std::invalid_argument("enumerate_pair_absorbers: bad targets");
    if (opts.cap == 0) throw std::invalid_argument("enumerate_pair_absorbers: cap must be positive");

    std::vector<Vertex> pool;
    for (Vertex v : H.vertices())
        if (v != x && v != y) pool.push_back(v);
    auto orders = detail::per_depth_orders(pool, 7, opts.seed);

    std::vector<PairAbsorber> out;
    std::vector<Vertex> tuple;
    EdgeMask used = (EdgeMask{1} << x) | (EdgeMask{1} << y);
    std::uint64_t nodes = 0;
    bool stop = false;

    // slot -> edges (with fixed vertices) fully determined at that slot
    auto window_ok = [&](int t) -> bool {
        auto has = [&](std::vector<Vertex> e) { return H.has_edge(e); };
        switch (t) {
            case 2: return has({tuple[0], tuple[1], tuple[2]});
            case 3: return has({tuple[1], x, tuple[3]});
            case 4: return has({tuple[2], tuple[3], tuple[4]});
            case 5: return has({tuple[3], y, tuple[5]});
            case 6: return has({tuple[4], tuple[5], tuple[6]});
            default: return true;
        }
    };

    std::function<void()> rec = [&]() {
        if (stop) return;
        const int t = static_cast<int>(tuple.size());
        if (t == 7) {
            PairAbsorber A{x, y, tuple};
            if (!opts.pc_only || is_pc_absorber(H, A)) {
                out.push_back(A);
                if (out.size() >= opts.cap) stop = true;
            }
            return;
        }
        for (Vertex v : orders[t]) {
            EdgeMask b = EdgeMask{1} << v;
            if (used & b) continue;
            tuple.push_back(v);
            used |= b;
            if (++nodes > opts.max_nodes) stop = true;
            if (!stop && window_ok(t)) rec();
            used &= ~b;
            tuple.pop_back();
            if (stop) return;
        }
    };
    rec();
    return out;
}

inline std::vector<SetAbsorber> enumerate_set_absorbers(const ColoredKGraph& H, int l,
                                                        const std::vector<Vertex>& S,
                                                        const EnumOptions& opts = {}) {
    const int k = H.k();
    const int d = k - l;
    if (l < 1 || 2 * l >= k) throw std::invalid_argument("enumerate_set_absorbers: requires l < k/2");
    if (static_cast<int>(S.size()) != d) throw std::invalid_argument("enumerate_set_absorbers: |S| must be k-l");
    EdgeMask sm = mask_of(S);
    if (std::popcount(sm) != d) throw std::invalid_argument("enumerate_set_absorbers: repeated target vertices");
    for (Vertex v : S)
        if (!H.has_vertex(v)) throw std::invalid_argument("enumerate_set_absorbers: unknown target vertex");
    if (opts.cap == 0) throw std::invalid_argument("enumerate_set_absorbers: cap must be positive");

    const int plen = 3 * k - 2 * l;  // 3-edge path
    std::vector<Vertex> pool;
    for (Vertex v : H.vertices())
        if (!((sm >> v) & 1)) pool.push_back(v);
    auto orders = detail::per_depth_orders(pool, plen, opts.seed);

    std::vector<SetAbsorber> out;
    std::vector<Vertex> pv;
    EdgeMask used = sm;
    std::uint64_t nodes = 0;
    bool stop = false;

    auto p_window_ok = [&](int t) -> bool {
        if (t < k - 1 || (t - k + 1) % d != 0) return true;
        std::vector<Vertex> e(pv.begin() + (t - k + 1), pv.begin() + t + 1);
        return H.has_edge(e);
    };

    auto try_q = [&]() {
        KLPath P{k, l, pv};
        auto pe = path_edges(P);
        std::vector<Vertex> E1 = pe.front(), E2 = pe.back();
        EdgeMask e1 = mask_of(E1), e2 = mask_of(E2);
        std::vector<Vertex> F1(pv.begin(), pv.begin() + l), F2(pv.end() - l, pv.end());
        std::sort(F1.begin(), F1.end());
        std::sort(F2.begin(), F2.end());
        // pools for the Q ordering
        std::vector<Vertex> head, tail, mid;
        for (Vertex v : mask_vertices(e1 & ~mask_of(F1))) head.push_back(v);
        for (Vertex v : mask_vertices(e2 & ~mask_of(F2))) tail.push_back(v);
        for (Vertex v : mask_vertices((mask_of(pv) | sm) & ~e1 & ~e2)) mid.push_back(v);
        std::sort(head.begin(), head.end());
        std::sort(tail.begin(), tail.end());
        std::sort(mid.begin(), mid.end());
        do {
            std::vector<Vertex> m = mid;
            std::sort(m.begin(), m.end());
            do {
                std::vector<Vertex> t2 = tail;
                std::sort(t2.begin(), t2.end());
                do {
                    std::vector<Vertex> qv;
                    qv.insert(qv.end(), F1.begin(), F1.end());
                    qv.insert(qv.end(), head.begin(), head.end());
                    qv.insert(qv.end(), m.begin(), m.end());
                    qv.insert(qv.end(), t2.begin(), t2.end());
                    qv.insert(qv.end(), F2.begin(), F2.end());
                    KLPath Q{k, l, qv};
                    if (!Q.structurally_valid()) continue;
                    bool ok = true;
                    for (const auto& e : path_edges(Q))
                        if (!H.has_edge(e)) {
                            ok = false;
                            break;
                        }
                    if (!ok) continue;
                    SetAbsorber A{k, l, S, P, Q};
                    try {
                        if (!opts.pc_only || is_pc_absorber(H, A)) {
                            out.push_back(A);
                            if (out.size() >= opts.cap) {
                                stop = true;
                                return;
                            }
                        }
                    } catch (const InvalidAbsorberError&) {
                        // candidate ordering fails a structural side condition; skip
                    }
                } while (std::next_permutation(t2.begin(), t2.end()));
            } while (std::next_permutation(m.begin(), m.end()));
        } while (std::next_permutation(head.begin(), head.end()));
    };

    std::function<void()> rec = [&]() {
        if (stop) return;
        const int t = static_cast<int>(pv.size());
        if (t == plen) {
            try_q();
            return;
        }
        for (Vertex v : orders[t]) {
            EdgeMask b = EdgeMask{1} << v;
            if (used & b) continue;
            pv.push_back(v);
            used |= b;
            if (++nodes > opts.max_nodes) stop = true;
            if (!stop && p_window_ok(t)) rec();
            used &= ~b;
            pv.pop_back();
            if (stop) return;
        }
    };
    rec();
    return out;
}

// ---------------------------------------------------------------------------
// Absorption
// ---------------------------------------------------------------------------

namespace detail {

inline void check_absorb_common(const KLPath& A_path, const std::vector<Vertex>& tuple, int placement,
                                EdgeMask targets) {
    if (placement < 0 || placement + tuple.size() > A_path.vertices.size())
        throw PlacementError("absorb: placement out of range");
    for (std::size_t i = 0; i < tuple.size(); ++i)
        if (A_path.vertices[placement + i] != tuple[i])
            throw PlacementError("absorb: tuple does not occur at placement");
    if (mask_of(A_path.vertices) & targets) throw PlacementError("absorb: target already on the path");
}

inline KLPath replace_segment(const ColoredKGraph& H, const KLPath& A_path, int placement,
                              std::size_t old_len, const std::vector<Vertex>& replacement) {
    KLPath out = A_path;
    out.vertices.erase(out.vertices.begin() + placement, out.vertices.begin() + placement + old_len);
    out.vertices.insert(out.vertices.begin() + placement, replacement.begin(), replacement.end());
    if (!out.structurally_valid()) throw PlacementError("absorb: result is not a valid (k,l)-path");
    for (const auto& e : path_edges(out))
        if (!H.has_edge(e)) throw PlacementError("absorb: result uses a missing edge");
    if (!is_properly_colored(H, out)) throw ColoringConflictError("absorb: result is not properly colored");
    // l-ends and end-edges must be untouched
    auto before = ends(A_path), after = ends(out);
    if (mask_of(before.ell_ends[0]) != mask_of(after.ell_ends[0]) ||
        mask_of(before.ell_ends[1]) != mask_of(after.ell_ends[1]))
        throw PlacementError("absorb: l-ends changed");
    if (mask_of(path_edges(A_path).front()) != mask_of(path_edges(out).front()) ||
        mask_of(path_edges(A_path).back()) != mask_of(path_edges(out).back()))
        throw PlacementError("absorb: end-edges changed");
    return out;
}

}  // namespace detail

inline KLPath absorb(const ColoredKGraph& H, const KLPath& A_path, const TightAbsorber& A, int placement) {
    check_structure(H, A);
    if (A_path.l != A.k - 1) throw PlacementError("absorb: tight absorber needs a tight path");
    detail::check_absorb_common(A_path, A.tuple, placement, EdgeMask{1} << A.target);
    return detail::replace_segment(H, A_path, placement, A.tuple.size(), A.expanded_path().vertices);
}

inline KLPath absorb(const ColoredKGraph& H, const KLPath& A_path, const SetAbsorber& A, int placement) {
    check_structure(H, A);
    if (A_path.k != A.k || A_path.l != A.l) throw PlacementError("absorb: mismatched (k,l)");
    if (placement % (A.k - A.l) != 0) throw PlacementError("absorb: placement must be window-aligned");
    detail::check_absorb_common(A_path, A.P.vertices, placement, mask_of(A.target));
    return detail::replace_segment(H, A_path, placement, A.P.vertices.size(), A.Q.vertices);
}

inline KLPath absorb(const ColoredKGraph& H, const KLPath& A_path, const PairAbsorber& A, int placement) {
    check_structure(H, A);
    if (A_path.k != 3 || A_path.l != 1) throw PlacementError("absorb: pair absorber needs a loose path");
    if (placement % 2 != 0) throw PlacementError("absorb: placement must be window-aligned");
    detail::check_absorb_common(A_path, A.tuple, placement,
                                (EdgeMask{1} << A.x) | (EdgeMask{1} << A.y));
    return detail::replace_segment(H, A_path, placement, A.tuple.size(), A.expanded_path().vertices);
}

// ---------------------------------------------------------------------------
// pc-absorbable pair graph (k = 3)
// ---------------------------------------------------------------------------

inline SimpleGraph build_absorbable_graph(const ColoredKGraph& H, std::size_t threshold,
                                          std::uint64_t sample_budget = UINT64_MAX,
                                          std::uint64_t seed = 0) {
    if (H.k() != 3) throw std::invalid_argument("build_absorbable_graph: requires k = 3");
    SimpleGraph G(H.n());
    const auto& vs = H.vertices();
    for (std::size_t i = 0; i < vs.size(); ++i) {
        for (std::size_t j = i + 1; j < vs.size(); ++j) {
            if (threshold == 0) {
                G.add_edge(vs[i], vs[j]);
                continue;
            }
            EnumOptions opts;
            opts.pc_only = true;
            opts.cap = threshold;
            opts.seed = seed;
            opts.max_nodes = sample_budget;
            auto found = enumerate_pair_absorbers(H, vs[i], vs[j], opts);
            if (found.size() >= threshold) G.add_edge(vs[i], vs[j]);
        }
    }
    return G;
}

}  // namespace pcham
