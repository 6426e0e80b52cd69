#pragma once

#include <array>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "pcham/hypergraph.hpp"

namespace pcham {

struct InvalidPathError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct MissingEdgeError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct SpliceError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A (k,l)-path: edges are the k-windows of the vertex sequence at stride k-l,
// so consecutive edges overlap in exactly l vertices.
struct KLPath {
    int k = 0;
    int l = 0;
    std::vector<Vertex> vertices;

    int stride() const { return k - l; }

    bool structurally_valid() const {
        if (k < 2 || l < 1 || l >= k) return false;
        const int s = static_cast<int>(vertices.size());
        if (s < k) return false;
        if ((s - l) % (k - l) != 0) return false;
        EdgeMask seen = 0;
        for (Vertex v : vertices) {
            if (v < 0 || v >= 64) return false;
            EdgeMask b = EdgeMask{1} << v;
            if (seen & b) return false;
            seen |= b;
        }
        return true;
    }

    int edge_count() const { return (static_cast<int>(vertices.size()) - l) / (k - l); }
};

// A (k,l)-cycle: cyclic k-windows at stride k-l; (k-l) divides the length.
struct KLCycle {
    int k = 0;
    int l = 0;
    std::vector<Vertex> vertices;  // cyclic order

    int stride() const { return k - l; }

    bool structurally_valid() const {
        if (k < 2 || l < 1 || l >= k) return false;
        const int s = static_cast<int>(vertices.size());
        if (s < k || s % (k - l) != 0) return false;
        EdgeMask seen = 0;
        for (Vertex v : vertices) {
            if (v < 0 || v >= 64) return false;
            EdgeMask b = EdgeMask{1} << v;
            if (seen & b) return false;
            seen |= b;
        }
        return true;
    }

    int edge_count() const { return static_cast<int>(vertices.size()) / (k - l); }
};

inline std::vector<std::vector<Vertex>> path_edges(const KLPath& P) {
    if (!P.structurally_valid()) throw InvalidPathError("malformed (k,l)-path");
    std::vector<std::vector<Vertex>> out;
    const int s = static_cast<int>(P.vertices.size());
    for (int start = 0; start + P.k <= s; start += P.stride())
        out.emplace_back(P.vertices.begin() + start, P.vertices.begin() + start + P.k);
    return out;
}

inline std::vector<std::vector<Vertex>> cycle_edges(const KLCycle& C) {
    if (!C.structurally_valid()) throw InvalidPathError("malformed (k,l)-cycle");
    std::vector<std::vector<Vertex>> out;
    const int s = static_cast<int>(C.vertices.size());
    for (int i = 0; i < C.edge_count(); ++i) {
        std::vector<Vertex> e(C.k);
        for (int j = 0; j < C.k; ++j) e[j] = C.vertices[(i * C.stride() + j) % s];
        out.push_back(std::move(e));
    }
    return out;
}

namespace detail {

// All-pairs proper-coloring check over a list of edges that must be present
// in H. Intentionally quadratic: correctness over speed at desk scale.
inline bool edges_properly_colored(const ColoredKGraph& H, const std::vector<std::vector<Vertex>>& edges) {
    std::vector<EdgeMask> masks;
    std::vector<ColorId> colors;
    for (const auto& e : edges) {
        auto c = H.color_of(e);
        if (!c) throw MissingEdgeError("edge of the certificate is absent from the host");
        masks.push_back(mask_of(e));
        colors.push_back(*c);
    }
    for (std::size_t i = 0; i < masks.size(); ++i)
        for (std::size_t j = i + 1; j < masks.size(); ++j)
            if ((masks[i] & masks[j]) != 0 && colors[i] == colors[j]) return false;
    return true;
}

}  // namespace detail

inline bool is_properly_colored(const ColoredKGraph& H, const KLPath& P) {
    return detail::edges_properly_colored(H, path_edges(P));
}

inline bool is_properly_colored(const ColoredKGraph& H, const KLCycle& C) {
    return detail::edges_properly_colored(H, cycle_edges(C));
}

struct PathEnds {
    std::array<std::vector<Vertex>, 2> ell_ends;              // first/last l vertices, in path order
    std::optional<std::array<std::vector<Vertex>, 2>> end_paths;  // first/last 2k-2, tight paths only
};

inline PathEnds ends(const KLPath& P) {
    if (!P.structurally_valid()) throw InvalidPathError("malformed (k,l)-path");
    PathEnds out;
    const int s = static_cast<int>(P.vertices.size());
    out.ell_ends[0].assign(P.vertices.begin(), P.vertices.begin() + P.l);
    out.ell_ends[1].assign(P.vertices.end() - P.l, P.vertices.end());
    if (P.l == P.k - 1) {
        const int w = 2 * P.k - 2;
        if (s >= w) {
            std::array<std::vector<Vertex>, 2> ep;
            ep[0].assign(P.vertices.begin(), P.vertices.begin() + w);
            ep[1].assign(P.vertices.end() - w, P.vertices.end());
            out.end_paths = ep;
        }
    }
    return out;
}

// End-paths of a tight path, throwing when too short.
inline std::array<std::vector<Vertex>, 2> end_paths(const KLPath& P) {
    if (P.l != P.k - 1) throw InvalidPathError("end-paths are defined for tight paths only");
    auto e = ends(P);
    if (!e.end_paths) throw InvalidPathError("path too short for end-paths");
    return *e.end_paths;
}

// Concatenation P1 + connector + P2, validated structurally.
inline KLPath splice(const KLPath& P1, const std::vector<Vertex>& connector, const KLPath& P2) {
    if (P1.k != P2.k || P1.l != P2.l) throw SpliceError("splice: mismatched (k,l)");
    KLPath out;
    out.k = P1.k;
    out.l = P1.l;
    out.vertices = P1.vertices;
    out.vertices.insert(out.vertices.end(), connector.begin(), connector.end());
    out.vertices.insert(out.vertices.end(), P2.vertices.begin(), P2.vertices.end());
    if (!out.structurally_valid()) throw SpliceError("splice: result violates (k,l)-path structure");
    return out;
}

inline bool is_hamilton(const ColoredKGraph& H, const KLCycle& C) {
    if (C.k != H.k()) return false;
    if (!C.structurally_valid()) return false;
    if (static_cast<int>(C.vertices.size()) != H.active_count()) return false;
    if (mask_of(C.vertices) != H.active_mask()) return false;
    for (const auto& e : cycle_edges(C))
        if (!H.has_edge(e)) return false;
    return true;
}

// ---------------------------------------------------------------------------
// Certificate text format: "PATH k l v1 ... vs" / "CYCLE k l v1 ... vn".
// ---------------------------------------------------------------------------

struct Certificate {
    bool is_cycle = false;
    KLPath path;    // valid when !is_cycle
    KLCycle cycle;  // valid when is_cycle
};

inline Certificate parse_certificate(const std::string& line) {
    std::istringstream in(line);
    std::string kind;
    if (!(in >> kind)) throw ParseError("empty certificate line");
    int k, l;
    if (!(in >> k >> l)) throw ParseError("certificate: expected 'k l' after kind");
    std::vector<Vertex> vs;
    Vertex v;
    while (in >> v) vs.push_back(v);
    Certificate c;
    if (kind == "PATH") {
        c.is_cycle = false;
        c.path = KLPath{k, l, vs};
    } else if (kind == "CYCLE") {
        c.is_cycle = true;
        c.cycle = KLCycle{k, l, vs};
    } else {
        throw ParseError("certificate: unknown kind '" + kind + "'");
    }
    return c;
}

inline std::string format_certificate(const KLPath& P) {
    std::ostringstream out;
    out << "PATH " << P.k << ' ' << P.l;
    for (Vertex v : P.vertices) out << ' ' << v;
    return out.str();
}

inline std::string format_certificate(const KLCycle& C) {
    std::ostringstream out;
    out << "CYCLE " << C.k << ' ' << C.l;
    for (Vertex v : C.vertices) out << ' ' << v;
    return out.str();
}

}  // namespace pcham
