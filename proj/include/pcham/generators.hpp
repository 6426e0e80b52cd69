#pragma once

#include <cmath>
#include <map>
#include <string>
#include <vector>

#include "pcham/hypergraph.hpp"
#include "pcham/rng.hpp"

namespace pcham {

struct InfeasibleError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Coloring schemes for generated hosts.
struct Coloring {
    enum Kind { Rainbow, RandomBounded, Monochromatic, AdversarialLink };
    Kind kind = Rainbow;
    int target = 0;   // RandomBounded: per-color codegree bound
    Vertex link = 0;  // AdversarialLink: all edges through this vertex get one color

    static Coloring rainbow() { return {Rainbow, 0, 0}; }
    static Coloring random_bounded(int target) { return {RandomBounded, target, 0}; }
    static Coloring monochromatic() { return {Monochromatic, 0, 0}; }
    static Coloring adversarial_link(Vertex v) { return {AdversarialLink, 0, v}; }
};

namespace detail {

// Colors an edge list under the scheme. RandomBounded first tries random
// assignments from a palette sized for the bound, then falls back to greedy
// first fit, which always succeeds by opening fresh colors.
inline std::vector<ColorId> color_edges(const std::vector<std::vector<Vertex>>& edges, int k,
                                        const Coloring& scheme, std::uint64_t seed) {
    std::vector<ColorId> colors(edges.size(), 1);
    switch (scheme.kind) {
        case Coloring::Monochromatic:
            return colors;
        case Coloring::Rainbow: {
            for (std::size_t i = 0; i < edges.size(); ++i) colors[i] = static_cast<ColorId>(i + 1);
            return colors;
        }
        case Coloring::AdversarialLink: {
            ColorId next = 2;
            for (std::size_t i = 0; i < edges.size(); ++i) {
                bool through = std::find(edges[i].begin(), edges[i].end(), scheme.link) != edges[i].end();
                colors[i] = through ? 1 : next++;
            }
            return colors;
        }
        case Coloring::RandomBounded:
            break;
    }
    const int target = scheme.target;
    if (target < 1) throw InfeasibleError("color_edges: random_bounded target must be >= 1");

    auto codegree_ok = [&](const std::vector<ColorId>& cs) {
        // max over (color, (k-1)-set) of the class codegree
        std::map<std::pair<ColorId, EdgeMask>, int> cnt;
        for (std::size_t i = 0; i < edges.size(); ++i) {
            EdgeMask m = mask_of(edges[i]);
            for (Vertex v : edges[i])
                if (++cnt[{cs[i], m & ~(EdgeMask{1} << v)}] > target) return false;
        }
        return true;
    };

    // rough palette size: enough classes that a random split respects the bound
    std::size_t max_coset_deg = 0;
    {
        std::map<EdgeMask, std::size_t> deg;
        for (const auto& e : edges) {
            EdgeMask m = mask_of(e);
            for (Vertex v : e) max_coset_deg = std::max(max_coset_deg, ++deg[m & ~(EdgeMask{1} << v)]);
        }
    }
    std::size_t palette = std::max<std::size_t>(1, 2 * (max_coset_deg + target - 1) / target);
    for (int attempt = 0; attempt < 16; ++attempt) {
        Rng rng(derive_seed(seed, static_cast<std::uint64_t>(attempt)));
        for (auto& c : colors) c = static_cast<ColorId>(1 + rng.below(palette));
        if (codegree_ok(colors)) return colors;
    }

    // greedy first fit: smallest color whose classes stay under the bound
    std::map<std::pair<ColorId, EdgeMask>, int> cnt;
    ColorId high = 0;
    for (std::size_t i = 0; i < edges.size(); ++i) {
        EdgeMask m = mask_of(edges[i]);
        for (ColorId c = 1;; ++c) {
            bool fits = true;
            for (Vertex v : edges[i]) {
                auto it = cnt.find({c, m & ~(EdgeMask{1} << v)});
                if (it != cnt.end() && it->second >= target) fits = false;
            }
            if (fits) {
                colors[i] = c;
                high = std::max(high, c);
                for (Vertex v : edges[i]) ++cnt[{c, m & ~(EdgeMask{1} << v)}];
                break;
            }
            if (c > high) throw std::logic_error("color_edges: greedy fit failed past a fresh color");
        }
    }
    (void)k;
    return colors;
}

inline std::vector<std::vector<Vertex>> all_ksubsets(int n, int k) {
    std::vector<std::vector<Vertex>> out;
    std::vector<Vertex> cur(k);
    for (int i = 0; i < k; ++i) cur[i] = i;
    while (true) {
        out.push_back(cur);
        int i = k - 1;
        while (i >= 0 && cur[i] == n - k + i) --i;
        if (i < 0) break;
        ++cur[i];
        for (int j = i + 1; j < k; ++j) cur[j] = cur[j - 1] + 1;
    }
    return out;
}

}  // namespace detail

inline ColoredKGraph gen_complete(int n, int k, const Coloring& scheme, std::uint64_t seed) {
    if (n < k) throw std::invalid_argument("gen_complete: need n >= k");
    auto edges = detail::all_ksubsets(n, k);
    auto colors = detail::color_edges(edges, k, scheme, derive_seed(seed, 0xC01));
    ColoredKGraph H(n, k);
    for (std::size_t i = 0; i < edges.size(); ++i) H.add_edge(edges[i], colors[i]);
    return H;
}

struct GenResult {
    ColoredKGraph H;
    std::string note;        // empty when nothing noteworthy happened
    std::size_t removed = 0;
};

enum class Removal { Random, Structured };

// Dirac-style host: starts complete, removes edges while the minimum codegree
// stays at or above (1/2 + gamma) n, then colors the survivors.
inline GenResult gen_dirac(int n, int k, double gamma, Removal removal, const Coloring& scheme,
                           std::uint64_t seed) {
    if (n < k) throw std::invalid_argument("gen_dirac: need n >= k");
    if (gamma <= 0.0 || gamma >= 0.5) throw InfeasibleError("gen_dirac: gamma must be in (0, 1/2)");
    const double thr = (0.5 + gamma) * n;

    auto edges = detail::all_ksubsets(n, k);
    std::map<EdgeMask, int> codeg;
    for (const auto& e : edges) {
        EdgeMask m = mask_of(e);
        for (Vertex v : e) ++codeg[m & ~(EdgeMask{1} << v)];
    }

    GenResult res{ColoredKGraph(n, k), "", 0};
    if (static_cast<double>(n - k + 1) < thr) {
        res.note = "hypothesis slack exceeds the complete host's codegree; returning complete";
    } else {
        auto removable = [&](const std::vector<Vertex>& e) {
            EdgeMask m = mask_of(e);
            for (Vertex v : e)
                if (static_cast<double>(codeg[m & ~(EdgeMask{1} << v)] - 1) < thr) return false;
            return true;
        };
        auto remove_at = [&](std::size_t i) {
            EdgeMask m = mask_of(edges[i]);
            for (Vertex v : edges[i]) --codeg[m & ~(EdgeMask{1} << v)];
            edges.erase(edges.begin() + i);
            ++res.removed;
        };
        if (removal == Removal::Random) {
            Rng rng(derive_seed(seed, 0xD12AC));
            std::vector<std::size_t> order(edges.size());
            for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
            rng.shuffle(order);
            // one pass; erase by value to keep indices honest
            std::vector<std::vector<Vertex>> victims;
            for (std::size_t i : order)
                if (removable(edges[i])) {
                    EdgeMask m = mask_of(edges[i]);
                    for (Vertex v : edges[i]) --codeg[m & ~(EdgeMask{1} << v)];
                    victims.push_back(edges[i]);
                }
            for (const auto& e : victims) {
                edges.erase(std::find(edges.begin(), edges.end(), e));
                ++res.removed;
            }
        } else {
            // delete edges inside a fixed floor(n/2)-set as far as codegree allows
            EdgeMask half = 0;
            for (int v = 0; v < n / 2; ++v) half |= (EdgeMask{1} << v);
            for (std::size_t i = 0; i < edges.size();) {
                EdgeMask m = mask_of(edges[i]);
                if ((m & ~half) == 0 && removable(edges[i]))
                    remove_at(i);
                else
                    ++i;
            }
        }
        if (res.removed == 0 && res.note.empty()) res.note = "no removable edges at this slack; returning complete";
    }

    auto colors = detail::color_edges(edges, k, scheme, derive_seed(seed, 0xC02));
    for (std::size_t i = 0; i < edges.size(); ++i) res.H.add_edge(edges[i], colors[i]);
    return res;
}

// Loose-regime 3-graph host with the vertex-degree bound (7/16 + gamma) n^2/2.
inline GenResult gen_loose_host(int n, double gamma, const Coloring& scheme, std::uint64_t seed) {
    const int k = 3;
    if (n < k) throw std::invalid_argument("gen_loose_host: need n >= 3");
    if (n % 2 != 0) throw std::invalid_argument("gen_loose_host: n must be even");
    if (gamma <= 0.0) throw InfeasibleError("gen_loose_host: gamma must be positive");
    const double thr = (7.0 / 16.0 + gamma) * n * n / 2.0;
    const double complete_deg = static_cast<double>(n - 1) * (n - 2) / 2.0;
    if (complete_deg < thr)
        throw InfeasibleError("gen_loose_host: vertex-degree bound exceeds the complete host's degree");

    auto edges = detail::all_ksubsets(n, k);
    std::vector<double> deg(n, complete_deg);
    Rng rng(derive_seed(seed, 0x100E));
    std::vector<std::size_t> order(edges.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    rng.shuffle(order);
    std::vector<std::vector<Vertex>> victims;
    for (std::size_t i : order) {
        bool ok = true;
        for (Vertex v : edges[i])
            if (deg[v] - 1.0 < thr) ok = false;
        if (!ok) continue;
        for (Vertex v : edges[i]) deg[v] -= 1.0;
        victims.push_back(edges[i]);
    }
    GenResult res{ColoredKGraph(n, k), "", 0};
    for (const auto& e : victims) {
        edges.erase(std::find(edges.begin(), edges.end(), e));
        ++res.removed;
    }
    if (res.removed == 0) res.note = "no removable edges at this slack; returning complete";

    auto colors = detail::color_edges(edges, k, scheme, derive_seed(seed, 0xC03));
    for (std::size_t i = 0; i < edges.size(); ++i) res.H.add_edge(edges[i], colors[i]);
    return res;
}

}  // namespace pcham
