#pragma once

#include <algorithm>
#include <optional>
#include <stdexcept>
#include <vector>

#include "pcham/exact.hpp"
#include "pcham/paths.hpp"

namespace pcham {

// ---------------------------------------------------------------------------
// Auxiliary directed (2k-1)-graph for tight connections. Edges are pc tight
// paths on 2k-1 vertices read in a fixed direction; never materialized, all
// queries recompute from (H, phi).
// ---------------------------------------------------------------------------

struct AuxDegrees {
    std::size_t d_plus = 0;
    std::size_t d_minus = 0;
    std::size_t d_pm = 0;
    bool extendable = false;
};

// True iff seq (length 2k-1, distinct, disjoint from excluded) spans a pc
// tight path: all k windows are edges with pairwise distinct colors (any two
// windows of a (2k-1)-sequence intersect).
inline bool is_aux_edge(const ColoredKGraph& H, const std::vector<Vertex>& seq, EdgeMask excluded = 0) {
    const int k = H.k();
    if (static_cast<int>(seq.size()) != 2 * k - 1) return false;
    EdgeMask m = mask_of(seq);
    if (std::popcount(m) != 2 * k - 1 || (m & excluded)) return false;
    std::vector<ColorId> colors;
    for (int i = 0; i + k <= 2 * k - 1; ++i) {
        std::vector<Vertex> e(seq.begin() + i, seq.begin() + i + k);
        auto c = H.color_of(e);
        if (!c) return false;
        for (ColorId prev : colors)
            if (prev == *c) return false;
        colors.push_back(*c);
    }
    return true;
}

inline AuxDegrees aux_degrees(const ColoredKGraph& H, const std::vector<Vertex>& t, EdgeMask excluded = 0) {
    const int k = H.k();
    if (static_cast<int>(t.size()) != 2 * k - 2) throw std::invalid_argument("aux_degrees: tuple must have 2k-2 vertices");
    EdgeMask tm = mask_of(t);
    if (std::popcount(tm) != 2 * k - 2) throw std::invalid_argument("aux_degrees: repeated vertices");
    if (tm & excluded) throw std::invalid_argument("aux_degrees: tuple meets the excluded set");
    for (Vertex v : t)
        if (!H.has_vertex(v)) throw std::invalid_argument("aux_degrees: unknown vertex");
    AuxDegrees out;
    for (Vertex u : H.vertices()) {
        EdgeMask b = EdgeMask{1} << u;
        if ((tm | excluded) & b) continue;
        std::vector<Vertex> fwd = t;
        fwd.push_back(u);
        if (is_aux_edge(H, fwd, excluded)) ++out.d_plus;
        std::vector<Vertex> bwd{u};
        bwd.insert(bwd.end(), t.begin(), t.end());
        if (is_aux_edge(H, bwd, excluded)) ++out.d_minus;
    }
    out.d_pm = std::min(out.d_plus, out.d_minus);
    out.extendable = out.d_plus > 0 || out.d_minus > 0;
    return out;
}

// ---------------------------------------------------------------------------
// Tight connection: shortest pc tight path with the two given end-paths, via
// iterative deepening (shortest-first, like a BFS over the auxiliary graph).
// ---------------------------------------------------------------------------

inline std::optional<KLPath> connect_tight(const ColoredKGraph& H, const std::vector<Vertex>& vbar,
                                           const std::vector<Vertex>& wbar,
                                           const std::vector<Vertex>& avoid, int max_len,
                                           const SearchBudget& budget = {}) {
    const int k = H.k();
    if (static_cast<int>(vbar.size()) != 2 * k - 2 || static_cast<int>(wbar.size()) != 2 * k - 2)
        throw std::invalid_argument("connect_tight: end-paths must have 2k-2 vertices");
    if (mask_of(vbar) & mask_of(wbar)) throw std::invalid_argument("connect_tight: overlapping end-paths");
    if ((mask_of(vbar) | mask_of(wbar)) & mask_of(avoid))
        throw std::invalid_argument("connect_tight: end-paths meet the avoid set");
    for (int len = 4 * k - 4; len <= std::min(max_len, H.active_count()); ++len) {
        auto P = find_pc_path_exact(H, k - 1, vbar, wbar, len, avoid, budget);
        if (P) return P;
    }
    return std::nullopt;
}

// Paper-derived default length bound for tight connections, clamped to be
// usable at desk scale.
inline int default_tight_connect_bound(const ColoredKGraph& H) {
    const int k = H.k();
    double gamma = check_hypotheses(H, k - 1).gamma_margin;
    double bound = (gamma > 0) ? 8.0 * (2 * k - 1) / (gamma * gamma) : static_cast<double>(H.active_count());
    int b = static_cast<int>(std::min<double>(bound, H.active_count()));
    return std::max(b, 4 * k - 3);
}

// ---------------------------------------------------------------------------
// l-overlapping connection (l < k/2): staged 3-edge path X' T Y'.
// ---------------------------------------------------------------------------

namespace detail {

inline std::vector<Edge> sorted_edges(const ColoredKGraph& H) {
    std::vector<Edge> es = H.edges();
    std::sort(es.begin(), es.end(), [](const Edge& a, const Edge& b) { return a.vertices < b.vertices; });
    return es;
}

}  // namespace detail

inline std::optional<KLPath> connect_ell(const ColoredKGraph& H, int l, const std::vector<Vertex>& X,
                                         const std::vector<Vertex>& Y, ColorId c_X, ColorId c_Y,
                                         const std::vector<Vertex>& avoid) {
    const int k = H.k();
    if (l < 1 || 2 * l >= k) throw std::invalid_argument("connect_ell: requires l < k/2");
    if (static_cast<int>(X.size()) != l || static_cast<int>(Y.size()) != l)
        throw std::invalid_argument("connect_ell: ends must be l-sets");
    EdgeMask xm = mask_of(X), ym = mask_of(Y), am = mask_of(avoid);
    if (std::popcount(xm) != l || std::popcount(ym) != l)
        throw std::invalid_argument("connect_ell: repeated vertices in an end");
    if (xm & ym) throw std::invalid_argument("connect_ell: ends overlap");
    if ((xm | ym) & am) throw std::invalid_argument("connect_ell: ends meet the avoid set");

    auto edges = detail::sorted_edges(H);
    auto ascending = [](EdgeMask m) { return mask_vertices(m); };

    for (const Edge& ex : edges) {
        if ((ex.mask & xm) != xm) continue;
        if (ex.mask & (ym | am)) continue;
        if (ex.color == c_X) continue;
        // first-fit Z_X: the l smallest vertices of X' \ X
        auto zx_pool = ascending(ex.mask & ~xm);
        std::vector<Vertex> Zx(zx_pool.begin(), zx_pool.begin() + l);
        EdgeMask zxm = mask_of(Zx);
        for (const Edge& ey : edges) {
            if ((ey.mask & ym) != ym) continue;
            if (ey.mask & (xm | am | ex.mask)) continue;
            if (ey.color == c_Y) continue;
            auto zy_pool = ascending(ey.mask & ~ym);
            std::vector<Vertex> Zy(zy_pool.begin(), zy_pool.begin() + l);
            EdgeMask zym = mask_of(Zy);
            for (const Edge& et : edges) {
                if ((et.mask & (zxm | zym)) != (zxm | zym)) continue;
                EdgeMask fresh = et.mask & ~(zxm | zym);
                if (fresh & (ex.mask | ey.mask | am)) continue;
                if (et.color == ex.color || et.color == ey.color) continue;
                std::vector<Vertex> seq;
                auto append = [&](EdgeMask m) {
                    for (Vertex v : ascending(m)) seq.push_back(v);
                };
                append(xm);
                append(ex.mask & ~xm & ~zxm);
                append(zxm);
                append(fresh);
                append(zym);
                append(ey.mask & ~ym & ~zym);
                append(ym);
                KLPath P{k, l, seq};
                if (!P.structurally_valid()) continue;
                bool ok = true;
                for (const auto& e : path_edges(P))
                    if (!H.has_edge(e)) {
                        ok = false;
                        break;
                    }
                if (ok && is_properly_colored(H, P)) return P;
            }
        }
    }
    return std::nullopt;
}

// ---------------------------------------------------------------------------
// Loose connection (k = 3): pc path x v1 v2 v3 v4 v5 y with end-color bans.
// ---------------------------------------------------------------------------

inline std::optional<KLPath> connect_loose(const ColoredKGraph& H, Vertex x, Vertex y, ColorId c_x,
                                           ColorId c_y, const std::vector<Vertex>& avoid) {
    if (H.k() != 3) throw std::invalid_argument("connect_loose: requires k = 3");
    if (x == y) throw std::invalid_argument("connect_loose: ends must differ");
    if (!H.has_vertex(x) || !H.has_vertex(y)) throw std::invalid_argument("connect_loose: unknown end");
    EdgeMask am = mask_of(avoid);
    EdgeMask xb = EdgeMask{1} << x, yb = EdgeMask{1} << y;
    if ((xb | yb) & am) throw std::invalid_argument("connect_loose: ends meet the avoid set");

    auto edges = detail::sorted_edges(H);
    for (const Edge& e3 : edges) {
        if (!(e3.mask & yb)) continue;
        if (e3.mask & (am | xb)) continue;
        if (e3.color == c_y) continue;
        auto rest3 = mask_vertices(e3.mask & ~yb);
        for (int o3 = 0; o3 < 2; ++o3) {
            Vertex v4 = rest3[o3], v5 = rest3[1 - o3];
            for (const Edge& e1 : edges) {
                if (!(e1.mask & xb)) continue;
                if (e1.mask & (am | e3.mask | yb)) continue;
                if (e1.color == c_x) continue;
                auto rest1 = mask_vertices(e1.mask & ~xb);
                for (int o1 = 0; o1 < 2; ++o1) {
                    Vertex v1 = rest1[o1], v2 = rest1[1 - o1];
                    EdgeMask need = (EdgeMask{1} << v2) | (EdgeMask{1} << v4);
                    for (const Edge& e2 : edges) {
                        if ((e2.mask & need) != need) continue;
                        EdgeMask third = e2.mask & ~need;
                        if (std::popcount(third) != 1) continue;
                        if (third & (am | e1.mask | e3.mask | xb | yb)) continue;
                        if (e2.color == e1.color || e2.color == e3.color) continue;
                        Vertex v3 = mask_vertices(third)[0];
                        KLPath P{3, 1, {x, v1, v2, v3, v4, v5, y}};
                        if (is_properly_colored(H, P)) return P;
                    }
                }
            }
        }
    }
    return std::nullopt;
}

// ---------------------------------------------------------------------------
// Connecting many paths through a reservoir Q (and optionally closing the
// result into a cycle). Each junction uses at most g fresh Q-vertices; the
// connector tuples are found by exhaustive search over free Q-vertices with
// shortest tuples tried first.
// ---------------------------------------------------------------------------

struct StagedFailureError : std::runtime_error {
    int left;
    int right;
    StagedFailureError(int l_, int r_, const std::string& msg) : std::runtime_error(msg), left(l_), right(r_) {}
};

struct ConnectManyResult {
    KLPath path;
    std::optional<KLCycle> cycle;
    std::vector<Vertex> used_Q;
};

namespace detail {

// Exhaustive search for an i-tuple of free Q-vertices joining `acc` to `next`
// (next empty = close a cycle), smallest i first, i == need (mod d), i <= g.
inline std::optional<std::vector<Vertex>> find_connector(const ColoredKGraph& H, int k, int l,
                                                         const std::vector<Vertex>& acc,
                                                         const std::vector<Vertex>& next,
                                                         const std::vector<Vertex>& freeQ, int g) {
    const int d = k - l;
    const bool closing = next.empty();
    const int total = static_cast<int>(acc.size() + next.size());
    // path: total + i == l (mod d); cycle: d | total + i
    const int target = closing ? 0 : l;
    int i0 = ((target - total) % d + d) % d;
    auto feasible = [&](const std::vector<Vertex>& conn) -> bool {
        std::vector<Vertex> seq = acc;
        seq.insert(seq.end(), conn.begin(), conn.end());
        if (closing) {
            KLCycle C{k, l, seq};
            if (!C.structurally_valid()) return false;
            for (const auto& e : cycle_edges(C))
                if (!H.has_edge(e)) return false;
            return is_properly_colored(H, C);
        }
        seq.insert(seq.end(), next.begin(), next.end());
        KLPath P{k, l, seq};
        if (!P.structurally_valid()) return false;
        for (const auto& e : path_edges(P))
            if (!H.has_edge(e)) return false;
        return is_properly_colored(H, P);
    };
    for (int i = i0; i <= g; i += d) {
        if (i > static_cast<int>(freeQ.size())) break;
        std::vector<Vertex> conn;
        EdgeMask used = 0;
        // on success the recursion leaves the witness tuple in conn
        std::function<bool()> rec = [&]() -> bool {
            if (static_cast<int>(conn.size()) == i) return feasible(conn);
            for (Vertex v : freeQ) {
                EdgeMask b = EdgeMask{1} << v;
                if (used & b) continue;
                conn.push_back(v);
                used |= b;
                if (rec()) return true;
                conn.pop_back();
                used &= ~b;
            }
            return false;
        };
        if (rec()) return conn;
    }
    return std::nullopt;
}

}  // namespace detail

inline ConnectManyResult connect_many(const ColoredKGraph& H, int l, const std::vector<KLPath>& paths,
                                      const std::vector<Vertex>& Q, int g, bool close_cycle) {
    const int k = H.k();
    const int d = k - l;
    if (paths.empty()) throw std::invalid_argument("connect_many: need at least one path");
    if (g < 1) throw std::invalid_argument("connect_many: g must be at least 1");
    EdgeMask qm = mask_of(Q);
    EdgeMask seen = 0;
    const int min_edges = (l + d - 1) / d;
    for (const auto& P : paths) {
        if (P.k != k || P.l != l) throw std::invalid_argument("connect_many: mismatched (k,l)");
        if (!P.structurally_valid()) throw std::invalid_argument("connect_many: malformed input path");
        if (P.edge_count() < min_edges) throw std::invalid_argument("connect_many: input path too short");
        EdgeMask pm = mask_of(P.vertices);
        if (pm & seen) throw std::invalid_argument("connect_many: input paths overlap");
        if (pm & qm) throw std::invalid_argument("connect_many: input path meets Q");
        seen |= pm;
        for (const auto& e : path_edges(P))
            if (!H.has_edge(e)) throw std::invalid_argument("connect_many: input path uses a missing edge");
        if (!is_properly_colored(H, P)) throw std::invalid_argument("connect_many: input path not pc");
    }

    ConnectManyResult res;
    std::vector<Vertex> acc = paths[0].vertices;
    std::vector<Vertex> freeQ = Q;
    std::sort(freeQ.begin(), freeQ.end());
    auto consume = [&](const std::vector<Vertex>& conn) {
        for (Vertex v : conn) {
            res.used_Q.push_back(v);
            freeQ.erase(std::find(freeQ.begin(), freeQ.end(), v));
        }
    };
    for (std::size_t i = 1; i < paths.size(); ++i) {
        auto conn = detail::find_connector(H, k, l, acc, paths[i].vertices, freeQ, g);
        if (!conn)
            throw StagedFailureError(static_cast<int>(i - 1), static_cast<int>(i),
                                     "connect_many: failed to join paths " + std::to_string(i - 1) +
                                         " and " + std::to_string(i));
        consume(*conn);
        acc.insert(acc.end(), conn->begin(), conn->end());
        acc.insert(acc.end(), paths[i].vertices.begin(), paths[i].vertices.end());
    }
    res.path = KLPath{k, l, acc};
    if (close_cycle) {
        auto conn = detail::find_connector(H, k, l, acc, {}, freeQ, g);
        if (!conn)
            throw StagedFailureError(static_cast<int>(paths.size() - 1), 0,
                                     "connect_many: failed to close the cycle");
        consume(*conn);
        std::vector<Vertex> cyc = acc;
        cyc.insert(cyc.end(), conn->begin(), conn->end());
        res.cycle = KLCycle{k, l, cyc};
    }
    return res;
}

}  // namespace pcham
