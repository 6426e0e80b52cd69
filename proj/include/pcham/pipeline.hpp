#pragma once

#include <cmath>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "pcham/absorbers.hpp"
#include "pcham/connecting.hpp"
#include "pcham/covering.hpp"
#include "pcham/reservoir.hpp"
#include "pcham/rng.hpp"

namespace pcham {

enum class Variant { Auto, Tight, Ell, Loose };

struct PipelineConfig {
    double gamma = 0.1;   // codegree slack the host is assumed to have
    double c = 0.1;       // per-color degree bound fraction
    double lambda = 0.1;  // absorbing-path fraction
    double rho = 0.1;     // reservoir fraction
    double delta = 0.05;  // cover leftover fraction
    double alpha = 0.2;   // family-sampling density (standalone sampling op)
    int t = 2;            // family tuple length (standalone sampling op)
    int q = 12;           // cover path budget
    int g = 8;            // per-junction reservoir budget
    std::size_t pc_threshold = 1;  // absorbable-graph edge threshold (loose)
    int retries = 64;
    std::uint64_t seed = 0;
    bool paper_constants = false;  // use the asymptotic formulas instead of desk defaults
    Variant variant = Variant::Auto;
    double max_absorb_fraction = 0.7;  // cap on |V(A)|/n
    int segments = 0;                  // 0 = size automatically

    void validate() const {
        auto frac = [](double x) { return x > 0.0 && x < 1.0; };
        if (!frac(lambda) || !frac(rho) || !frac(delta) || !frac(alpha) || !frac(max_absorb_fraction))
            throw std::invalid_argument("PipelineConfig: fractions must lie in (0,1)");
        if (g < 1 || q < 0 || retries < 1 || t < 1 || segments < 0)
            throw std::invalid_argument("PipelineConfig: bad budget");
        if (gamma <= 0.0 || c <= 0.0) throw std::invalid_argument("PipelineConfig: margins must be positive");
    }

    // The proof's constants target n -> infinity; they are kept behind this
    // switch for documentation parity and are not expected to work at desk n.
    void apply_paper_constants(int k) {
        lambda = 0.25 * std::pow(gamma / 2.0, 2 * k);
        rho = lambda;
        delta = lambda / 2.0;
    }
};

struct StageReport {
    std::string stage;
    bool success = false;
    std::string detail;
    std::size_t size_A = 0;
    std::size_t size_R = 0;
    std::size_t uncovered = 0;
    std::size_t used_Q = 0;
};

struct PipelineStageError : std::runtime_error {
    std::string stage;
    PipelineStageError(std::string stage_, const std::string& msg)
        : std::runtime_error(msg), stage(std::move(stage_)) {}
};

struct AbsorbingStructure {
    KLPath A;
    std::vector<std::vector<Vertex>> segments;  // contiguous in A, in order
    // audit map: sorted target tuple -> indices of segments that can absorb it
    std::map<std::vector<Vertex>, std::vector<std::size_t>> registry;
    std::optional<SimpleGraph> G;  // absorbable graph, loose variant only
    std::vector<Vertex> used_Q;    // junction vertices consumed while joining
};

struct PipelineResult {
    std::optional<KLCycle> cycle;
    std::vector<StageReport> stages;
    Variant variant = Variant::Auto;
    AbsorbingStructure absorbing;
    std::vector<Vertex> leftover;

    bool success() const { return cycle.has_value(); }
};

namespace detail {

inline Variant resolve_variant(int k, int l, Variant requested) {
    if (requested != Variant::Auto) {
        if (requested == Variant::Tight && l != k - 1)
            throw std::invalid_argument("pipeline: tight variant needs l = k-1");
        if (requested == Variant::Ell && 2 * l >= k)
            throw std::invalid_argument("pipeline: ell variant needs l < k/2");
        if (requested == Variant::Loose && (k != 3 || l != 1))
            throw std::invalid_argument("pipeline: loose variant is the (3,1) vertex-degree regime");
        return requested;
    }
    if (l == k - 1) return Variant::Tight;
    if (2 * l < k) return Variant::Ell;
    throw UnsupportedRegimeError("pipeline: no variant covers k/2 <= l < k-1");
}

inline int segment_length(Variant v, int k, int l) {
    switch (v) {
        case Variant::Tight: return 4 * k - 4;
        case Variant::Ell: return 3 * k - 2 * l;
        default: return 7;  // pair-absorber tuple, k = 3
    }
}

// Fixed-P Q search: same end-edges and l-ends as P, V(Q) = V(P) u S.
inline std::optional<SetAbsorber> find_Q_for(const ColoredKGraph& H, const KLPath& P,
                                             std::vector<Vertex> S) {
    const int k = P.k, l = P.l;
    std::sort(S.begin(), S.end());
    EdgeMask sm = mask_of(S);
    if (sm & mask_of(P.vertices)) return std::nullopt;
    auto pe = path_edges(P);
    EdgeMask e1 = mask_of(pe.front()), e2 = mask_of(pe.back());
    std::vector<Vertex> F1(P.vertices.begin(), P.vertices.begin() + l);
    std::vector<Vertex> F2(P.vertices.end() - l, P.vertices.end());
    std::sort(F1.begin(), F1.end());
    std::sort(F2.begin(), F2.end());
    std::vector<Vertex> head = mask_vertices(e1 & ~mask_of(F1));
    std::vector<Vertex> tail = mask_vertices(e2 & ~mask_of(F2));
    std::vector<Vertex> mid = mask_vertices((mask_of(P.vertices) | sm) & ~e1 & ~e2);
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
                    if (is_pc_absorber(H, A)) return A;
                } catch (const InvalidAbsorberError&) {
                }
            } while (std::next_permutation(t2.begin(), t2.end()));
        } while (std::next_permutation(m.begin(), m.end()));
    } while (std::next_permutation(head.begin(), head.end()));
    return std::nullopt;
}

// Replaces the occurrence of `seg` in C by `replacement` and revalidates the
// whole cycle. The occurrence must start at a window boundary.
inline KLCycle splice_cycle(const ColoredKGraph& H, const KLCycle& C, const std::vector<Vertex>& seg,
                            const std::vector<Vertex>& replacement) {
    const int d = C.k - C.l;
    const auto& s = C.vertices;
    const std::size_t N = s.size(), T = seg.size();
    std::size_t pos = N;
    for (std::size_t p = 0; p < N; p += d) {
        bool hit = true;
        for (std::size_t i = 0; i < T; ++i)
            if (s[(p + i) % N] != seg[i]) {
                hit = false;
                break;
            }
        if (hit) {
            pos = p;
            break;
        }
    }
    if (pos == N) throw PlacementError("splice_cycle: segment not found on a window boundary");
    std::vector<Vertex> out;
    for (std::size_t i = 0; i < N - T; ++i) out.push_back(s[(pos + T + i) % N]);
    out.insert(out.begin(), replacement.begin(), replacement.end());
    KLCycle C2{C.k, C.l, out};
    if (!C2.structurally_valid()) throw PlacementError("splice_cycle: result is not a valid cycle");
    for (const auto& e : cycle_edges(C2))
        if (!H.has_edge(e)) throw PlacementError("splice_cycle: result uses a missing edge");
    if (!is_properly_colored(H, C2)) throw ColoringConflictError("splice_cycle: result is not properly colored");
    return C2;
}

}  // namespace detail

inline AbsorbingStructure build_absorbing_path(const ColoredKGraph& H, int l,
                                               const PipelineConfig& cfg) {
    const int k = H.k();
    Variant variant = detail::resolve_variant(k, l, cfg.variant);
    const int n = H.active_count();
    const int seg_len = detail::segment_length(variant, k, l);
    const int witnesses = (variant == Variant::Tight) ? 1 : 2;

    int cap = static_cast<int>(cfg.max_absorb_fraction * n / seg_len);
    int s = cfg.segments > 0 ? cfg.segments
                             : std::min(cap, std::max(1, static_cast<int>(std::ceil(cfg.lambda * n))));
    if (s < 1 || n < seg_len + witnesses)
        throw PipelineStageError("absorbing", "absorbers do not fit at this n");

    AbsorbingStructure AS;
    EdgeMask avail = H.active_mask();
    for (int i = 0; i < s; ++i) {
        bool found = false;
        for (int attempt = 0; attempt < cfg.retries && !found; ++attempt) {
            auto av = mask_vertices(avail);
            if (static_cast<int>(av.size()) < seg_len + witnesses) break;
            Rng rng(derive_seed(cfg.seed, 0xAB50 + 131 * i + attempt));
            rng.shuffle(av);
            ColoredKGraph Hr = H;
            Hr.restrict_to(avail);
            EnumOptions opts;
            opts.cap = 1;
            opts.seed = derive_seed(cfg.seed, 0x5E6 + 131 * i + attempt);
            opts.max_nodes = 2'000'000;
            std::vector<Vertex> tuple;
            try {
                if (variant == Variant::Tight) {
                    auto list = enumerate_tight_absorbers(Hr, av[0], opts);
                    if (!list.empty()) tuple = list.front().tuple;
                } else if (variant == Variant::Ell) {
                    std::vector<Vertex> S{av[0], av[1]};
                    std::sort(S.begin(), S.end());
                    auto list = enumerate_set_absorbers(Hr, l, S, opts);
                    if (!list.empty()) tuple = list.front().P.vertices;
                } else {
                    auto list = enumerate_pair_absorbers(Hr, av[0], av[1], opts);
                    if (!list.empty()) tuple = list.front().tuple;
                }
            } catch (const std::invalid_argument&) {
            }
            if (!tuple.empty()) {
                AS.segments.push_back(tuple);
                avail &= ~mask_of(tuple);
                found = true;
            }
        }
        if (!found) throw PipelineStageError("absorbing", "could not sample a disjoint absorber segment");
    }

    // join the segments into one pc path through the free vertices
    std::vector<KLPath> seg_paths;
    for (const auto& t : AS.segments) seg_paths.push_back(KLPath{k, l, t});
    try {
        auto conn = connect_many(H, l, seg_paths, mask_vertices(avail), cfg.g, false);
        AS.A = conn.path;
        AS.used_Q = conn.used_Q;
    } catch (const StagedFailureError& e) {
        throw PipelineStageError("absorbing", std::string("segment join failed: ") + e.what());
    }

    // registry audit: every target outside V(A) needs at least one segment
    std::vector<Vertex> outside = mask_vertices(H.active_mask() & ~mask_of(AS.A.vertices));
    if (variant == Variant::Tight) {
        for (Vertex v : outside) {
            std::vector<std::size_t> hits;
            for (std::size_t i = 0; i < AS.segments.size(); ++i) {
                TightAbsorber a{k, v, AS.segments[i]};
                try {
                    if (is_pc_absorber(H, a)) hits.push_back(i);
                } catch (const InvalidAbsorberError&) {
                }
            }
            if (hits.empty())
                throw PipelineStageError("absorbing", "vertex without a registered absorber");
            AS.registry[{v}] = hits;
        }
    } else if (variant == Variant::Ell) {
        for (std::size_t a = 0; a < outside.size(); ++a)
            for (std::size_t b = a + 1; b < outside.size(); ++b) {
                std::vector<Vertex> S{outside[a], outside[b]};
                std::vector<std::size_t> hits;
                for (std::size_t i = 0; i < AS.segments.size(); ++i)
                    if (detail::find_Q_for(H, KLPath{k, l, AS.segments[i]}, S)) hits.push_back(i);
                if (hits.empty())
                    throw PipelineStageError("absorbing", "set without a registered absorber");
                AS.registry[S] = hits;
            }
    } else {
        AS.G = build_absorbable_graph(H, cfg.pc_threshold, 2'000'000, derive_seed(cfg.seed, 0xAB6));
        for (std::size_t a = 0; a < outside.size(); ++a)
            for (std::size_t b = a + 1; b < outside.size(); ++b) {
                std::vector<std::size_t> hits;
                for (std::size_t i = 0; i < AS.segments.size(); ++i) {
                    for (auto [x, y] : {std::pair{outside[a], outside[b]}, {outside[b], outside[a]}}) {
                        PairAbsorber pa{x, y, AS.segments[i]};
                        try {
                            if (is_pc_absorber(H, pa)) {
                                hits.push_back(i);
                                break;
                            }
                        } catch (const InvalidAbsorberError&) {
                        }
                    }
                }
                if (hits.empty())
                    throw PipelineStageError("absorbing", "pair without a registered absorber");
                AS.registry[{outside[a], outside[b]}] = hits;
            }
    }
    return AS;
}

inline PipelineResult find_pc_hamilton_absorbing(const ColoredKGraph& H, int l, PipelineConfig cfg) {
    const int k = H.k();
    const int d = k - l;
    cfg.validate();
    if (l < 1 || l >= k) throw std::invalid_argument("pipeline: l out of range");
    if (H.active_count() % d != 0) throw std::invalid_argument("pipeline: (k-l) must divide n");
    if (cfg.paper_constants) cfg.apply_paper_constants(k);

    PipelineResult res;
    res.variant = detail::resolve_variant(k, l, cfg.variant);
    cfg.variant = res.variant;

    auto report = [&](const char* stage, bool ok, std::string detail_) {
        StageReport r;
        r.stage = stage;
        r.success = ok;
        r.detail = std::move(detail_);
        r.size_A = res.absorbing.A.vertices.size();
        res.stages.push_back(r);
    };

    // stage 1: absorbing path
    try {
        res.absorbing = build_absorbing_path(H, l, cfg);
    } catch (const PipelineStageError& e) {
        report("absorbing", false, e.what());
        return res;
    }
    report("absorbing", true, "");

    // stage 2: reservoir on the remainder
    std::vector<Vertex> rem = mask_vertices(H.active_mask() & ~mask_of(res.absorbing.A.vertices));
    std::vector<Vertex> R;
    {
        // junction inner vertices come only from R; keep enough expected mass
        double need = (res.variant == Variant::Tight) ? 1.0 : 3.5;
        ReservoirSpec spec;
        spec.p = std::min(0.8, std::max(cfg.rho, rem.empty() ? cfg.rho : need / rem.size()));
        spec.retries = cfg.retries;
        try {
            R = sample_reservoir(rem, spec, derive_seed(cfg.seed, 2));
        } catch (const SamplingFailureError& e) {
            report("reservoir", false, e.what());
            return res;
        }
    }
    report("reservoir", true, "");
    res.stages.back().size_R = R.size();

    // stage 3: cover the rest with disjoint pc paths
    ColoredKGraph Hcov = H;
    Hcov.restrict_to(mask_of(rem) & ~mask_of(R));
    CoverResult cover;
    if (Hcov.active_count() > 0)
        cover = greedy_path_cover(Hcov, l, cfg.delta, cfg.q, derive_seed(cfg.seed, 3),
                                  (l == k - 1) ? 2 : 1);
    report("cover", true, cover.shortfall ? "cover fell short of its target" : "");
    res.stages.back().uncovered = cover.uncovered.size();

    // stage 4: close one cycle through the reservoir
    std::vector<KLPath> paths{res.absorbing.A};
    for (const auto& P : cover.paths) paths.push_back(P);
    KLCycle C{k, l, {}};
    try {
        auto conn = connect_many(H, l, paths, R, cfg.g, true);
        if (!conn.cycle) throw StagedFailureError(0, 0, "connect_many returned no cycle");
        C = *conn.cycle;
        report("connect", true, "");
        res.stages.back().used_Q = conn.used_Q.size();
    } catch (const StagedFailureError& e) {
        std::ostringstream msg;
        msg << "junction " << e.left << "-" << e.right << ": " << e.what();
        report("connect", false, msg.str());
        return res;
    }

    // stage 5: absorb the leftover
    res.leftover = mask_vertices(H.active_mask() & ~mask_of(C.vertices));
    std::vector<bool> consumed(res.absorbing.segments.size(), false);
    auto absorb_with = [&](std::size_t i, const std::vector<Vertex>& expanded) {
        C = detail::splice_cycle(H, C, res.absorbing.segments[i], expanded);
        consumed[i] = true;
    };

    try {
        if (res.variant == Variant::Tight) {
            for (Vertex v : res.leftover) {
                bool done = false;
                for (std::size_t i = 0; i < consumed.size() && !done; ++i) {
                    if (consumed[i]) continue;
                    TightAbsorber a{k, v, res.absorbing.segments[i]};
                    try {
                        if (!is_pc_absorber(H, a)) continue;
                        absorb_with(i, a.expanded_path().vertices);
                        done = true;
                    } catch (const std::runtime_error&) {
                    }
                }
                if (!done) throw PipelineStageError("absorb", "leftover vertex not absorbable");
            }
        } else if (res.variant == Variant::Ell) {
            if (res.leftover.size() % d != 0)
                throw PipelineStageError("absorb", "leftover not divisible by k-l");
            for (std::size_t j = 0; j + d <= res.leftover.size(); j += d) {
                std::vector<Vertex> S(res.leftover.begin() + j, res.leftover.begin() + j + d);
                bool done = false;
                for (std::size_t i = 0; i < consumed.size() && !done; ++i) {
                    if (consumed[i]) continue;
                    auto a = detail::find_Q_for(H, KLPath{k, l, res.absorbing.segments[i]}, S);
                    if (!a) continue;
                    try {
                        absorb_with(i, a->Q.vertices);
                        done = true;
                    } catch (const std::runtime_error&) {
                    }
                }
                if (!done) throw PipelineStageError("absorb", "leftover set not absorbable");
            }
        } else {
            if (res.leftover.size() % 2 != 0)
                throw PipelineStageError("absorb", "odd loose leftover");
            if (!res.leftover.empty()) {
                auto M = perfect_matching(*res.absorbing.G, res.leftover);
                if (!M) throw PipelineStageError("absorb", "no perfect matching on the leftover");
                for (auto [u, w] : *M) {
                    bool done = false;
                    for (std::size_t i = 0; i < consumed.size() && !done; ++i) {
                        if (consumed[i]) continue;
                        for (auto [x, y] : {std::pair{u, w}, {w, u}}) {
                            PairAbsorber a{x, y, res.absorbing.segments[i]};
                            try {
                                if (!is_pc_absorber(H, a)) continue;
                                absorb_with(i, a.expanded_path().vertices);
                                done = true;
                                break;
                            } catch (const std::runtime_error&) {
                            }
                        }
                    }
                    if (!done) throw PipelineStageError("absorb", "matched pair not absorbable");
                }
            }
        }
    } catch (const PipelineStageError& e) {
        report("absorb", false, e.what());
        return res;
    }
    report("absorb", true, "");

    // stage 6: final gate; an invalid cycle must never escape
    if (!is_hamilton(H, C) || !is_properly_colored(H, C))
        throw std::logic_error("pipeline: final validation failed on a completed cycle");
    report("validate", true, "");
    res.cycle = C;
    return res;
}

}  // namespace pcham
