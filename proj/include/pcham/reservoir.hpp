#pragma once

#include <bit>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "pcham/connecting.hpp"
#include "pcham/covering.hpp"
#include "pcham/rng.hpp"
#include "pcham/simple_graph.hpp"

namespace pcham {

struct SamplingFailureError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Reservoir sampling: independent inclusion with probability p, verified by
// recount against the three stated conditions, retried with derived seeds.
// ---------------------------------------------------------------------------

struct ReservoirSpec {
    double p = 0.1;
    struct SubsetCert {
        std::vector<Vertex> U;
        double alpha = 0.0;
    };
    struct GraphCert {
        SimpleGraph G{0};
        double beta = 0.0;
    };
    std::vector<SubsetCert> subsets;
    std::vector<GraphCert> graphs;
    int retries = 64;
};

struct ReservoirCheck {
    bool size_ok = false;       // | |R| - pn | <= p n^{2/3}
    bool subsets_ok = false;    // |U_i n R| >= (alpha_i - 2 n^{-1/3}) |R|
    bool graphs_ok = false;     // |G_j[R]| >= (beta_j - 3 n^{-1/3}) C(|R|,2)
    bool all() const { return size_ok && subsets_ok && graphs_ok; }
};

// Independent recount of the three reservoir conditions. Works for any vertex
// labels (reservoirs are not tied to the 64-vertex hypergraph cap).
inline ReservoirCheck verify_reservoir(const std::vector<Vertex>& V, const ReservoirSpec& spec,
                                       const std::vector<Vertex>& R) {
    const double n = static_cast<double>(V.size());
    const double r = static_cast<double>(R.size());
    ReservoirCheck out;
    out.size_ok = std::abs(r - spec.p * n) <= spec.p * std::pow(n, 2.0 / 3.0);
    std::vector<Vertex> sortedR = R;
    std::sort(sortedR.begin(), sortedR.end());
    auto in_R = [&](Vertex v) { return std::binary_search(sortedR.begin(), sortedR.end(), v); };
    out.subsets_ok = true;
    for (const auto& s : spec.subsets) {
        double hit = 0;
        for (Vertex v : s.U)
            if (in_R(v)) hit += 1;
        if (hit < (s.alpha - 2.0 * std::pow(n, -1.0 / 3.0)) * r) out.subsets_ok = false;
    }
    out.graphs_ok = true;
    for (const auto& g : spec.graphs) {
        std::size_t inside = 0;
        for (std::size_t i = 0; i < R.size(); ++i)
            for (std::size_t j = i + 1; j < R.size(); ++j)
                if (R[i] < g.G.n && R[j] < g.G.n && g.G.has_edge(R[i], R[j])) ++inside;
        double pairs = r * (r - 1.0) / 2.0;
        if (static_cast<double>(inside) < (g.beta - 3.0 * std::pow(n, -1.0 / 3.0)) * pairs)
            out.graphs_ok = false;
    }
    return out;
}

inline std::vector<Vertex> sample_reservoir(const std::vector<Vertex>& V, const ReservoirSpec& spec,
                                            std::uint64_t seed) {
    if (spec.p <= 0.0 || spec.p >= 1.0) throw std::invalid_argument("sample_reservoir: p must be in (0,1)");
    if (spec.retries < 1) throw std::invalid_argument("sample_reservoir: retries must be positive");
    const double n = static_cast<double>(V.size());
    for (const auto& s : spec.subsets) {
        if (s.alpha <= 0.0 || s.alpha > 1.0) throw std::invalid_argument("sample_reservoir: alpha out of range");
        if (static_cast<double>(s.U.size()) < s.alpha * n)
            throw std::invalid_argument("sample_reservoir: |U| below alpha*n");
    }
    for (const auto& g : spec.graphs) {
        if (g.beta <= 0.0 || g.beta > 1.0) throw std::invalid_argument("sample_reservoir: beta out of range");
        if (static_cast<double>(g.G.edge_count()) < g.beta * n * (n - 1.0) / 2.0)
            throw std::invalid_argument("sample_reservoir: graph below beta density");
    }

    int fail_size = 0, fail_sub = 0, fail_graph = 0;
    for (int attempt = 0; attempt < spec.retries; ++attempt) {
        Rng rng(derive_seed(seed, static_cast<std::uint64_t>(attempt)));
        std::vector<Vertex> R;
        for (Vertex v : V)
            if (rng.bernoulli(spec.p)) R.push_back(v);
        auto check = verify_reservoir(V, spec, R);
        if (check.all()) return R;
        if (!check.size_ok) ++fail_size;
        if (!check.subsets_ok) ++fail_sub;
        if (!check.graphs_ok) ++fail_graph;
    }
    std::ostringstream msg;
    msg << "sample_reservoir: all " << spec.retries << " attempts failed (size " << fail_size
        << ", subsets " << fail_sub << ", graphs " << fail_graph << ")";
    throw SamplingFailureError(msg.str());
}

// ---------------------------------------------------------------------------
// Absorber-family sampling: Bernoulli pick over the union of the families,
// intersecting pairs thinned greedily, all four conditions recounted.
// ---------------------------------------------------------------------------

struct FamilySpec {
    int t = 0;                                            // tuple length
    double alpha = 0.0;                                   // density parameter
    std::vector<std::vector<std::vector<Vertex>>> families;  // A_1..A_m
    int retries = 64;
};

inline std::size_t family_floor(const FamilySpec& spec, int n) {
    double raw = spec.alpha * spec.alpha * spec.t * spec.t * n / 4.0;
    return std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(raw)));
}

inline std::vector<std::vector<Vertex>> sample_absorber_family(int n, const FamilySpec& spec,
                                                               std::uint64_t seed) {
    if (spec.t < 1) throw std::invalid_argument("sample_absorber_family: t must be positive");
    if (spec.alpha <= 0.0 || spec.alpha >= 1.0)
        throw std::invalid_argument("sample_absorber_family: alpha must be in (0,1)");
    if (spec.families.empty()) throw std::invalid_argument("sample_absorber_family: no families");
    std::size_t min_family = SIZE_MAX;
    for (const auto& A : spec.families) {
        min_family = std::min(min_family, A.size());
        for (const auto& tup : A) {
            if (static_cast<int>(tup.size()) != spec.t)
                throw std::invalid_argument("sample_absorber_family: tuple of wrong length");
            std::vector<Vertex> s = tup;
            std::sort(s.begin(), s.end());
            if (std::adjacent_find(s.begin(), s.end()) != s.end())
                throw std::invalid_argument("sample_absorber_family: tuple with repeats");
        }
    }
    if (min_family == 0) throw SamplingFailureError("sample_absorber_family: an empty family can never meet its floor");

    // union of the families, with membership bookkeeping
    std::vector<std::vector<Vertex>> pool;
    std::vector<std::vector<std::size_t>> member_of;  // pool index -> family ids
    {
        std::map<std::vector<Vertex>, std::size_t> index;
        for (std::size_t fi = 0; fi < spec.families.size(); ++fi)
            for (const auto& tup : spec.families[fi]) {
                auto it = index.find(tup);
                if (it == index.end()) {
                    it = index.emplace(tup, pool.size()).first;
                    pool.push_back(tup);
                    member_of.emplace_back();
                }
                member_of[it->second].push_back(fi);
            }
    }

    const std::size_t floor = family_floor(spec, n);
    // Asymptotic inclusion probability alpha*n^{1-t}/4 is far below what tiny
    // families can afford at desk scale; raise it so the smallest family
    // expects ~4x its floor.
    double p_paper = spec.alpha * std::pow(static_cast<double>(n), 1 - spec.t) / 4.0;
    double p_desk = std::min(0.9, 4.0 * static_cast<double>(floor) / static_cast<double>(min_family));
    double p = std::max(p_paper, p_desk);

    const double cap = spec.alpha * n;
    std::string last_fail = "no attempt";
    for (int attempt = 0; attempt < spec.retries; ++attempt) {
        Rng rng(derive_seed(seed, 0x4A17 + static_cast<std::uint64_t>(attempt)));
        std::vector<std::size_t> picked;
        for (std::size_t i = 0; i < pool.size(); ++i)
            if (rng.bernoulli(p)) picked.push_back(i);
        rng.shuffle(picked);
        // drop every tuple that meets an already kept one
        std::vector<std::size_t> kept;
        std::set<Vertex> used;
        for (std::size_t i : picked) {
            bool clash = false;
            for (Vertex v : pool[i])
                if (used.count(v)) clash = true;
            if (clash) continue;
            used.insert(pool[i].begin(), pool[i].end());
            kept.push_back(i);
        }
        // trim to the cardinality cap, then recount all conditions from scratch
        while (static_cast<double>(kept.size()) > cap) kept.pop_back();
        if (static_cast<double>(kept.size()) > cap) {
            last_fail = "|F| exceeded alpha*n";
            continue;
        }
        std::set<Vertex> scan;
        bool disjoint = true;
        for (std::size_t i : kept)
            for (Vertex v : pool[i])
                if (!scan.insert(v).second) disjoint = false;
        if (!disjoint) {
            last_fail = "tuples intersect";
            continue;
        }
        std::vector<std::size_t> per_family(spec.families.size(), 0);
        for (std::size_t i : kept)
            for (std::size_t fi : member_of[i]) ++per_family[fi];
        bool floors_ok = true;
        for (std::size_t c : per_family)
            if (c < floor) floors_ok = false;
        if (!floors_ok) {
            last_fail = "family intersection below floor";
            continue;
        }
        std::vector<std::vector<Vertex>> F;
        for (std::size_t i : kept) F.push_back(pool[i]);
        std::sort(F.begin(), F.end());
        return F;
    }
    throw SamplingFailureError("sample_absorber_family: retries exhausted, last failure: " + last_fail);
}

// ---------------------------------------------------------------------------
// Monte Carlo reservoir validation against the connection lemmas.
// ---------------------------------------------------------------------------

enum class ReservoirVariant { Tight, Ell, Loose };

struct ReservoirReport {
    int trials = 0;
    int successes = 0;
    int matching_trials = 0;   // loose variant only
    int matching_successes = 0;
    double success_fraction() const { return trials == 0 ? 0.0 : static_cast<double>(successes) / trials; }
};

inline ReservoirReport validate_reservoir(const ColoredKGraph& H, const std::vector<Vertex>& R,
                                          ReservoirVariant variant, int trials, std::uint64_t seed,
                                          const SimpleGraph* G = nullptr) {
    const int k = H.k();
    ReservoirReport rep;
    auto palette = H.palette();
    std::vector<Vertex> outside;
    EdgeMask rm = mask_of(R);
    for (Vertex v : H.vertices())
        if (!((rm >> v) & 1)) outside.push_back(v);

    for (int trial = 0; trial < trials; ++trial) {
        Rng rng(derive_seed(seed, 0x5EED + static_cast<std::uint64_t>(trial)));
        rep.trials++;
        // random R' with |R'| <= |R|/100 (usually empty at desk scale)
        std::vector<Vertex> Rfree = R;
        std::size_t rprime = R.size() / 100;
        for (std::size_t i = 0; i < rprime && !Rfree.empty(); ++i)
            Rfree.erase(Rfree.begin() + rng.below(Rfree.size()));

        auto avoid_all_but = [&](const std::vector<Vertex>& keep) {
            EdgeMask keepm = mask_of(keep) | mask_of(Rfree);
            std::vector<Vertex> avoid;
            for (Vertex v : H.vertices())
                if (!((keepm >> v) & 1)) avoid.push_back(v);
            return avoid;
        };
        auto pick_outside = [&](int count) -> std::optional<std::vector<Vertex>> {
            if (static_cast<int>(outside.size()) < count) return std::nullopt;
            std::vector<Vertex> pool = outside;
            rng.shuffle(pool);
            return std::vector<Vertex>(pool.begin(), pool.begin() + count);
        };

        bool ok = false;
        if (variant == ReservoirVariant::Tight) {
            // random pc end-paths outside R
            for (int attempt = 0; attempt < 20 && !ok; ++attempt) {
                auto ends = pick_outside(4 * k - 4);
                if (!ends) break;
                std::vector<Vertex> vbar(ends->begin(), ends->begin() + 2 * k - 2);
                std::vector<Vertex> wbar(ends->begin() + 2 * k - 2, ends->end());
                KLPath pv{k, k - 1, vbar}, pw{k, k - 1, wbar};
                try {
                    if (!is_properly_colored(H, pv) || !is_properly_colored(H, pw)) continue;
                } catch (const MissingEdgeError&) {
                    continue;
                }
                std::vector<Vertex> both = vbar;
                both.insert(both.end(), wbar.begin(), wbar.end());
                auto P = connect_tight(H, vbar, wbar, avoid_all_but(both),
                                       4 * k - 4 + static_cast<int>(Rfree.size()));
                ok = P.has_value();
            }
        } else if (variant == ReservoirVariant::Ell) {
            const int l = 1;  // the only l < k/2 exercised at desk scale for k=3; general l permitted
            auto endsv = pick_outside(2 * l);
            if (endsv) {
                std::vector<Vertex> X(endsv->begin(), endsv->begin() + l);
                std::vector<Vertex> Y(endsv->begin() + l, endsv->end());
                ColorId cx = palette.empty() ? 0 : palette[rng.below(palette.size())];
                ColorId cy = palette.empty() ? 0 : palette[rng.below(palette.size())];
                std::vector<Vertex> both = X;
                both.insert(both.end(), Y.begin(), Y.end());
                auto P = connect_ell(H, l, X, Y, cx, cy, avoid_all_but(both));
                ok = P.has_value();
            }
        } else {
            auto endsv = pick_outside(2);
            if (endsv) {
                ColorId cx = palette.empty() ? 0 : palette[rng.below(palette.size())];
                ColorId cy = palette.empty() ? 0 : palette[rng.below(palette.size())];
                auto P = connect_loose(H, (*endsv)[0], (*endsv)[1], cx, cy,
                                       avoid_all_but(*endsv));
                ok = P.has_value();
            }
            if (G != nullptr) {
                // random even U with delta(G[U]) >= |U|/2 must have a perfect matching
                std::vector<Vertex> pool;
                for (Vertex v = 0; v < G->n; ++v)
                    if (G->degree(v) > 0) pool.push_back(v);
                if (pool.size() >= 4) {
                    rng.shuffle(pool);
                    std::size_t usz = 2 + 2 * rng.below(pool.size() / 2);
                    usz = std::min(usz, pool.size() - (pool.size() % 2));
                    std::vector<Vertex> U(pool.begin(), pool.begin() + usz);
                    EdgeMask um = mask_of(U);
                    std::size_t mind = SIZE_MAX;
                    for (Vertex v : U)
                        mind = std::min(mind, static_cast<std::size_t>(std::popcount(G->adj[v] & um)));
                    if (mind * 2 >= U.size()) {
                        rep.matching_trials++;
                        if (perfect_matching(*G, U)) rep.matching_successes++;
                    }
                }
            }
        }
        if (ok) rep.successes++;
    }
    return rep;
}

}  // namespace pcham
