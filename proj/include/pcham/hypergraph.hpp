#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <functional>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

namespace pcham {

using Vertex = int;
using ColorId = int;

// Edges are k-subsets of a universe of at most 64 vertices, stored as bitmasks.
// The 64-vertex cap is a deliberate desk-scale limit; all search routines rely
// on cheap mask intersection tests.
using EdgeMask = std::uint64_t;

inline EdgeMask mask_of(const std::vector<Vertex>& vs) {
    EdgeMask m = 0;
    for (Vertex v : vs) m |= (EdgeMask{1} << v);
    return m;
}

inline std::vector<Vertex> mask_vertices(EdgeMask m) {
    std::vector<Vertex> out;
    while (m) {
        out.push_back(std::countr_zero(m));
        m &= m - 1;
    }
    return out;
}

struct Edge {
    std::vector<Vertex> vertices;  // sorted ascending
    EdgeMask mask = 0;
    ColorId color = 0;
};

// An edge-colored k-uniform hypergraph. The vertex universe is [0, n); the
// active vertex set may be a subset of it, so that induced subhypergraphs keep
// their original labels. Treat instances as immutable once populated.
class ColoredKGraph {
public:
    static constexpr int kMaxVertices = 64;

    ColoredKGraph(int n, int k) : n_(n), k_(k) {
        if (n < 0 || n > kMaxVertices) throw std::invalid_argument("vertex count out of range (0..64)");
        if (k < 2 || k > n) throw std::invalid_argument("uniformity k must satisfy 2 <= k <= n");
        vertices_.resize(n);
        for (int i = 0; i < n; ++i) vertices_[i] = i;
        active_mask_ = (n == 64) ? ~EdgeMask{0} : ((EdgeMask{1} << n) - 1);
    }

    int n() const { return n_; }
    int k() const { return k_; }
    const std::vector<Vertex>& vertices() const { return vertices_; }
    int active_count() const { return static_cast<int>(vertices_.size()); }
    EdgeMask active_mask() const { return active_mask_; }

    bool has_vertex(Vertex v) const {
        return v >= 0 && v < n_ && (active_mask_ >> v) & 1;
    }

    void add_edge(std::vector<Vertex> vs, ColorId color) {
        if (static_cast<int>(vs.size()) != k_) throw std::invalid_argument("edge must have exactly k vertices");
        if (color <= 0) throw std::invalid_argument("colors must be positive integers");
        std::sort(vs.begin(), vs.end());
        if (std::adjacent_find(vs.begin(), vs.end()) != vs.end())
            throw std::invalid_argument("edge has repeated vertices");
        for (Vertex v : vs)
            if (!has_vertex(v)) throw std::invalid_argument("edge uses unknown vertex " + std::to_string(v));
        EdgeMask m = mask_of(vs);
        if (by_mask_.count(m)) throw std::invalid_argument("duplicate edge");
        by_mask_.emplace(m, color);
        edges_.push_back(Edge{std::move(vs), m, color});
    }

    std::size_t edge_count() const { return edges_.size(); }
    const std::vector<Edge>& edges() const { return edges_; }

    bool has_edge(EdgeMask m) const { return by_mask_.count(m) != 0; }
    bool has_edge(const std::vector<Vertex>& vs) const { return has_edge(mask_of(vs)); }

    std::optional<ColorId> color_of(EdgeMask m) const {
        auto it = by_mask_.find(m);
        if (it == by_mask_.end()) return std::nullopt;
        return it->second;
    }
    std::optional<ColorId> color_of(const std::vector<Vertex>& vs) const { return color_of(mask_of(vs)); }

    std::vector<ColorId> palette() const {
        std::vector<ColorId> cs;
        for (const Edge& e : edges_) cs.push_back(e.color);
        std::sort(cs.begin(), cs.end());
        cs.erase(std::unique(cs.begin(), cs.end()), cs.end());
        return cs;
    }

    // Restricts the active vertex set (labels preserved). Used internally by
    // remove_vertices.
    void restrict_to(EdgeMask keep) {
        active_mask_ &= keep;
        vertices_ = mask_vertices(active_mask_);
        std::vector<Edge> kept;
        std::unordered_map<EdgeMask, ColorId> bm;
        for (const Edge& e : edges_) {
            if ((e.mask & ~active_mask_) == 0) {
                bm.emplace(e.mask, e.color);
                kept.push_back(e);
            }
        }
        edges_ = std::move(kept);
        by_mask_ = std::move(bm);
    }

private:
    int n_;
    int k_;
    std::vector<Vertex> vertices_;
    EdgeMask active_mask_ = 0;
    std::vector<Edge> edges_;
    std::unordered_map<EdgeMask, ColorId> by_mask_;
};

// ---------------------------------------------------------------------------
// Degree computations
// ---------------------------------------------------------------------------

// Number of edges containing every vertex of S; requires |S| < k.
inline std::size_t degree(const ColoredKGraph& H, const std::vector<Vertex>& S) {
    if (static_cast<int>(S.size()) >= H.k()) throw std::invalid_argument("degree: |S| must be < k");
    for (Vertex v : S)
        if (!H.has_vertex(v)) throw std::invalid_argument("degree: unknown vertex in S");
    EdgeMask sm = mask_of(S);
    if (std::popcount(sm) != static_cast<int>(S.size())) throw std::invalid_argument("degree: S has repeats");
    std::size_t c = 0;
    for (const Edge& e : H.edges())
        if ((e.mask & sm) == sm) ++c;
    return c;
}

namespace detail {

inline void for_each_subset(const std::vector<Vertex>& universe, int s,
                            const std::function<void(const std::vector<Vertex>&)>& fn) {
    std::vector<Vertex> cur;
    std::function<void(std::size_t)> rec = [&](std::size_t start) {
        if (static_cast<int>(cur.size()) == s) {
            fn(cur);
            return;
        }
        for (std::size_t i = start; i + (s - cur.size()) <= universe.size(); ++i) {
            cur.push_back(universe[i]);
            rec(i + 1);
            cur.pop_back();
        }
    };
    rec(0);
}

// mask -> count of edges containing each s-subset drawn from edges only
inline std::unordered_map<EdgeMask, std::size_t> subset_degree_table(const std::vector<Edge>& edges, int s) {
    std::unordered_map<EdgeMask, std::size_t> table;
    std::vector<Vertex> cur;
    for (const Edge& e : edges) {
        std::function<void(std::size_t)> rec = [&](std::size_t start) {
            if (static_cast<int>(cur.size()) == s) {
                table[mask_of(cur)]++;
                return;
            }
            for (std::size_t i = start; i + (s - cur.size()) <= e.vertices.size(); ++i) {
                cur.push_back(e.vertices[i]);
                rec(i + 1);
                cur.pop_back();
            }
        };
        rec(0);
    }
    return table;
}

}  // namespace detail

// delta_s(H): minimum degree over all s-subsets of the active vertex set.
inline std::size_t min_s_degree(const ColoredKGraph& H, int s) {
    if (s < 1 || s > H.k() - 1) throw std::invalid_argument("min_s_degree: s out of range");
    auto table = detail::subset_degree_table(H.edges(), s);
    std::size_t best = SIZE_MAX;
    bool any = false;
    detail::for_each_subset(H.vertices(), s, [&](const std::vector<Vertex>& sub) {
        auto it = table.find(mask_of(sub));
        std::size_t d = (it == table.end()) ? 0 : it->second;
        best = std::min(best, d);
        any = true;
    });
    return any ? best : 0;
}

// max over colors i of Delta_s(H_i).
inline std::size_t max_s_degree_per_color(const ColoredKGraph& H, int s) {
    if (s < 1 || s > H.k() - 1) throw std::invalid_argument("max_s_degree_per_color: s out of range");
    // color -> subset degree table
    std::map<ColorId, std::vector<Edge>> classes;
    for (const Edge& e : H.edges()) classes[e.color].push_back(e);
    std::size_t best = 0;
    for (auto& [c, es] : classes) {
        auto table = detail::subset_degree_table(es, s);
        for (auto& [m, d] : table) best = std::max(best, d);
    }
    return best;
}

// Max s-degree of the uncolored hypergraph.
inline std::size_t max_s_degree(const ColoredKGraph& H, int s) {
    if (s < 1 || s > H.k() - 1) throw std::invalid_argument("max_s_degree: s out of range");
    auto table = detail::subset_degree_table(H.edges(), s);
    std::size_t best = 0;
    for (auto& [m, d] : table) best = std::max(best, d);
    return best;
}

// Subhypergraph consisting of the edges of one color, on the same vertex set.
inline ColoredKGraph color_class(const ColoredKGraph& H, ColorId i) {
    ColoredKGraph out(H.n(), H.k());
    out.restrict_to(H.active_mask());
    for (const Edge& e : H.edges())
        if (e.color == i) out.add_edge(e.vertices, e.color);
    return out;
}

// Induced subhypergraph on V \ Q; vertex labels preserved.
inline ColoredKGraph remove_vertices(const ColoredKGraph& H, const std::vector<Vertex>& Q) {
    for (Vertex v : Q)
        if (!H.has_vertex(v)) throw std::invalid_argument("remove_vertices: unknown vertex");
    EdgeMask qm = mask_of(Q);
    ColoredKGraph out(H.n(), H.k());
    out.restrict_to(H.active_mask() & ~qm);
    for (const Edge& e : H.edges())
        if ((e.mask & qm) == 0) out.add_edge(e.vertices, e.color);
    return out;
}

// ---------------------------------------------------------------------------
// Theorem-hypothesis report
// ---------------------------------------------------------------------------

struct HypothesesReport {
    // Codegree slack over the threshold for the given regime:
    //   ell = k-1      : delta_{k-1}/n - 1/2
    //   ell < k/2      : delta_{k-1}/n - 1/(2(k-ell))
    double gamma_margin = 0.0;
    // Per-color degree bound, normalized:
    //   ell = k-1 : max_i Delta_{k-1}(H_i) / n
    //   ell < k/2 : max_i Delta_ell(H_i) / n^{k-ell}
    double c_margin = 0.0;
    bool divisibility = false;  // (k - ell) | n
    // Only for k = 3, ell = 1: delta_1 / (n^2/2) - 7/16 and Delta_1(H_i)/n^2.
    std::optional<double> gamma_vertex;
    std::optional<double> c_vertex;
};

struct UnsupportedRegimeError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

inline HypothesesReport check_hypotheses(const ColoredKGraph& H, int ell) {
    const int k = H.k();
    if (ell < 1 || ell > k - 1) throw std::invalid_argument("check_hypotheses: ell out of range");
    if (ell != k - 1 && 2 * ell >= k)
        throw UnsupportedRegimeError("check_hypotheses: regime k/2 <= ell < k-1 is unsupported");
    const double n = static_cast<double>(H.active_count());
    HypothesesReport rep;
    rep.divisibility = (H.active_count() % (k - ell)) == 0;
    double dk1 = static_cast<double>(min_s_degree(H, k - 1));
    if (ell == k - 1) {
        rep.gamma_margin = dk1 / n - 0.5;
        rep.c_margin = static_cast<double>(max_s_degree_per_color(H, k - 1)) / n;
    } else {
        rep.gamma_margin = dk1 / n - 1.0 / (2.0 * (k - ell));
        rep.c_margin = static_cast<double>(max_s_degree_per_color(H, ell)) / std::pow(n, k - ell);
    }
    if (k == 3 && ell == 1) {
        double d1 = static_cast<double>(min_s_degree(H, 1));
        rep.gamma_vertex = d1 / (n * n / 2.0) - 7.0 / 16.0;
        rep.c_vertex = static_cast<double>(max_s_degree_per_color(H, 1)) / (n * n);
    }
    return rep;
}

// ---------------------------------------------------------------------------
// Instance text format: header "n k", then one line per edge "v1 ... vk color".
// ---------------------------------------------------------------------------

struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline ColoredKGraph parse_instance(std::istream& in) {
    std::string line;
    int lineno = 0;
    auto next_line = [&]() -> bool {
        while (std::getline(in, line)) {
            ++lineno;
            auto pos = line.find_first_not_of(" \t\r\n");
            if (pos != std::string::npos) return true;
        }
        return false;
    };
    if (!next_line()) throw ParseError("empty instance");
    std::istringstream hs(line);
    int n = 0, k = 0;
    if (!(hs >> n >> k)) throw ParseError("line " + std::to_string(lineno) + ": expected header 'n k'");
    ColoredKGraph H(n, k);
    while (next_line()) {
        std::istringstream es(line);
        std::vector<Vertex> vs(k);
        for (int i = 0; i < k; ++i)
            if (!(es >> vs[i])) throw ParseError("line " + std::to_string(lineno) + ": expected " + std::to_string(k) + " vertices and a color");
        ColorId c;
        if (!(es >> c)) throw ParseError("line " + std::to_string(lineno) + ": missing color");
        std::string rest;
        if (es >> rest) throw ParseError("line " + std::to_string(lineno) + ": trailing tokens");
        try {
            H.add_edge(vs, c);
        } catch (const std::invalid_argument& e) {
            throw ParseError("line " + std::to_string(lineno) + ": " + e.what());
        }
    }
    return H;
}

inline void write_instance(std::ostream& out, const ColoredKGraph& H) {
    out << H.n() << ' ' << H.k() << '\n';
    for (const Edge& e : H.edges()) {
        for (Vertex v : e.vertices) out << v << ' ';
        out << e.color << '\n';
    }
}

}  // namespace pcham
