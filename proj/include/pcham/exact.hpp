#pragma once

#include <algorithm>
#include <bit>
#include <chrono>
#include <cstdint>
#include <functional>
#include <optional>
#include <set>
#include <stdexcept>
#include <vector>

#include "pcham/paths.hpp"

namespace pcham {

struct SearchBudget {
    std::uint64_t max_nodes = 100'000'000;
    double time_limit_s = 120.0;

    void validate() const {
        if (max_nodes == 0 || time_limit_s <= 0) throw std::invalid_argument("search budget must be positive");
    }
};

enum class SolveStatus { Found, None, BudgetExhausted };

struct HamiltonSearchResult {
    SolveStatus status = SolveStatus::None;
    std::optional<KLCycle> cycle;
    std::uint64_t nodes = 0;
};

struct HamiltonCountResult {
    SolveStatus status = SolveStatus::None;  // None here means "search completed"
    std::uint64_t count = 0;                 // unusable when status == BudgetExhausted
    std::uint64_t nodes = 0;
};

namespace detail {

// Lexicographically minimal representative of a cycle sequence under the
// window-preserving symmetries: rotations by multiples of the stride, and
// reversal composed with the stride-aligning offset.
inline std::vector<Vertex> canonical_cycle_sequence(const std::vector<Vertex>& seq, int k, int l) {
    const int n = static_cast<int>(seq.size());
    const int d = k - l;
    auto rot = [&](const std::vector<Vertex>& s, int r) {
        std::vector<Vertex> out(n);
        for (int i = 0; i < n; ++i) out[i] = s[(i + r) % n];
        return out;
    };
    std::vector<Vertex> rev(seq.rbegin(), seq.rend());
    const int r0 = ((d - (l % d)) % d + d) % d;
    std::vector<Vertex> best = seq;
    for (int j = 0; j < n / d; ++j) {
        best = std::min(best, rot(seq, j * d));
        best = std::min(best, rot(rev, (r0 + j * d) % n));
    }
    return best;
}

class HamiltonCycleDfs {
public:
    HamiltonCycleDfs(const ColoredKGraph& H, int l, const SearchBudget& budget, bool counting)
        : H_(H), k_(H.k()), l_(l), d_(k_ - l), verts_(H.vertices()),
          n_(static_cast<int>(verts_.size())), counting_(counting), max_nodes_(budget.max_nodes) {
        deadline_ = std::chrono::steady_clock::now() + std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                        std::chrono::duration<double>(budget.time_limit_s));
        seq_.reserve(n_);
    }

    void run() {
        for (Vertex v0 : verts_) {
            place(v0);
            dfs();
            unplace();
            if (done()) return;
        }
    }

    bool exhausted() const { return exhausted_; }
    std::uint64_t nodes() const { return nodes_; }
    const std::optional<KLCycle>& found() const { return found_; }
    std::uint64_t distinct_count() const { return canon_.size(); }

private:
    bool done() const { return exhausted_ || (!counting_ && found_.has_value()); }

    void place(Vertex v) {
        seq_.push_back(v);
        used_ |= (EdgeMask{1} << v);
        ++nodes_;
        if ((nodes_ & 1023) == 0 && std::chrono::steady_clock::now() > deadline_) exhausted_ = true;
        if (nodes_ > max_nodes_) exhausted_ = true;
    }

    void unplace() {
        used_ &= ~(EdgeMask{1} << seq_.back());
        seq_.pop_back();
    }

    // Checks the window ending at the last placed position, if one completes.
    // Returns false on a missing edge or color conflict.
    bool check_window() {
        const int p = static_cast<int>(seq_.size()) - 1;
        if (p < k_ - 1 || (p - k_ + 1) % d_ != 0) return true;
        std::vector<Vertex> e(seq_.begin() + (p - k_ + 1), seq_.begin() + p + 1);
        auto c = H_.color_of(e);
        if (!c) return false;
        const int i = (p - k_ + 1) / d_;
        for (int j = i - 1; j >= 0 && (i - j) * d_ < k_; --j)
            if (wcolors_[j] == *c) return false;
        wcolors_.push_back(*c);
        return true;
    }

    void pop_window() {
        const int p = static_cast<int>(seq_.size()) - 1;
        if (p >= k_ - 1 && (p - k_ + 1) % d_ == 0) wcolors_.pop_back();
    }

    void complete() {
        KLCycle C{k_, l_, seq_};
        for (const auto& e : cycle_edges(C))
            if (!H_.has_edge(e)) return;
        if (!detail::edges_properly_colored(H_, cycle_edges(C))) return;
        if (counting_) {
            canon_.insert(canonical_cycle_sequence(seq_, k_, l_));
        } else {
            found_ = C;
        }
    }

    void dfs() {
        if (done()) return;
        // check_window pushes a color only on success; pop only after that.
        if (!check_window()) return;
        if (static_cast<int>(seq_.size()) == n_) {
            complete();
            pop_window();
            return;
        }
        const int p = static_cast<int>(seq_.size());
        const bool junction = (p % d_) == 0;
        for (Vertex v : verts_) {
            if (used_ & (EdgeMask{1} << v)) continue;
            if (junction && v < seq_[0]) continue;  // rotation symmetry break
            place(v);
            dfs();
            unplace();
            if (done()) break;
        }
        pop_window();
    }

    const ColoredKGraph& H_;
    int k_, l_, d_;
    const std::vector<Vertex>& verts_;
    int n_;
    bool counting_;
    std::uint64_t max_nodes_;
    std::chrono::steady_clock::time_point deadline_;

    std::vector<Vertex> seq_;
    EdgeMask used_ = 0;
    std::vector<ColorId> wcolors_;
    std::uint64_t nodes_ = 0;
    bool exhausted_ = false;
    std::optional<KLCycle> found_;
    std::set<std::vector<Vertex>> canon_;
};

}  // namespace detail

// Exhaustive backtracking search for a properly colored Hamilton (k,l)-cycle.
inline HamiltonSearchResult find_pc_hamilton_exact(const ColoredKGraph& H, int l, const SearchBudget& budget = {}) {
    budget.validate();
    if (l < 1 || l >= H.k()) throw std::invalid_argument("find_pc_hamilton_exact: l out of range");
    if (H.active_count() % (H.k() - l) != 0)
        throw std::invalid_argument("find_pc_hamilton_exact: (k-l) must divide n");
    detail::HamiltonCycleDfs dfs(H, l, budget, /*counting=*/false);
    dfs.run();
    HamiltonSearchResult r;
    r.nodes = dfs.nodes();
    if (dfs.found()) {
        r.status = SolveStatus::Found;
        r.cycle = dfs.found();
    } else if (dfs.exhausted()) {
        r.status = SolveStatus::BudgetExhausted;
    } else {
        r.status = SolveStatus::None;
    }
    return r;
}

// Exact count of properly colored Hamilton (k,l)-cycles, distinct up to
// rotation and reflection of the vertex sequence.
inline HamiltonCountResult count_pc_hamilton(const ColoredKGraph& H, int l, const SearchBudget& budget = {}) {
    budget.validate();
    if (l < 1 || l >= H.k()) throw std::invalid_argument("count_pc_hamilton: l out of range");
    if (H.active_count() % (H.k() - l) != 0)
        throw std::invalid_argument("count_pc_hamilton: (k-l) must divide n");
    detail::HamiltonCycleDfs dfs(H, l, budget, /*counting=*/true);
    dfs.run();
    HamiltonCountResult r;
    r.nodes = dfs.nodes();
    if (dfs.exhausted()) {
        r.status = SolveStatus::BudgetExhausted;
        r.count = 0;
    } else {
        r.status = SolveStatus::Found;
        r.count = dfs.distinct_count();
    }
    return r;
}

// Exhaustive search for a pc (k,l)-path whose vertex sequence starts with
// `from` and ends with `to` (both in the given order), has at most
// max_vertices vertices, and avoids `forbidden`. Shorter paths are preferred.
inline std::optional<KLPath> find_pc_path_exact(const ColoredKGraph& H, int l,
                                                const std::vector<Vertex>& from,
                                                const std::vector<Vertex>& to,
                                                int max_vertices,
                                                const std::vector<Vertex>& forbidden = {},
                                                const SearchBudget& budget = {}) {
    budget.validate();
    const int k = H.k();
    const int d = k - l;
    if (from.empty() || to.empty()) throw std::invalid_argument("find_pc_path_exact: empty end spec");
    EdgeMask fm = mask_of(from), tm = mask_of(to), bad = mask_of(forbidden);
    if (std::popcount(fm) != static_cast<int>(from.size()) || std::popcount(tm) != static_cast<int>(to.size()))
        throw std::invalid_argument("find_pc_path_exact: repeated vertices in end spec");
    if (fm & tm) throw std::invalid_argument("find_pc_path_exact: overlapping end specs");
    if ((fm | tm) & bad) throw std::invalid_argument("find_pc_path_exact: end spec inside forbidden set");
    for (Vertex v : from)
        if (!H.has_vertex(v)) throw std::invalid_argument("find_pc_path_exact: unknown vertex");
    for (Vertex v : to)
        if (!H.has_vertex(v)) throw std::invalid_argument("find_pc_path_exact: unknown vertex");

    std::uint64_t nodes = 0;
    auto deadline = std::chrono::steady_clock::now() + std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                        std::chrono::duration<double>(budget.time_limit_s));
    bool exhausted = false;

    std::vector<Vertex> prefix = from;
    EdgeMask used = fm;
    std::optional<KLPath> result;

    auto try_close = [&]() -> bool {
        const int L = static_cast<int>(prefix.size() + to.size());
        if (L < k || (L - l) % d != 0 || L > max_vertices) return false;
        KLPath P{k, l, prefix};
        P.vertices.insert(P.vertices.end(), to.begin(), to.end());
        if (!P.structurally_valid()) return false;
        try {
            for (const auto& e : path_edges(P))
                if (!H.has_edge(e)) return false;
            if (!detail::edges_properly_colored(H, path_edges(P))) return false;
        } catch (const InvalidPathError&) {
            return false;
        }
        result = P;
        return true;
    };

    // Incremental window check over the prefix only.
    auto prefix_window_ok = [&]() -> bool {
        const int p = static_cast<int>(prefix.size()) - 1;
        if (p < k - 1 || (p - k + 1) % d != 0) return true;
        std::vector<Vertex> e(prefix.begin() + (p - k + 1), prefix.begin() + p + 1);
        auto c = H.color_of(e);
        if (!c) return false;
        for (int start = p - k + 1 - d; start >= 0 && start > p - 2 * k + 1; start -= d) {
            std::vector<Vertex> f(prefix.begin() + start, prefix.begin() + start + k);
            if (H.color_of(f) == c) return false;
        }
        return true;
    };

    std::function<bool()> dfs = [&]() -> bool {
        if (exhausted) return false;
        if (!prefix_window_ok()) return false;
        if (try_close()) return true;
        if (static_cast<int>(prefix.size() + to.size()) >= max_vertices) return false;
        for (Vertex v : H.vertices()) {
            EdgeMask b = EdgeMask{1} << v;
            if ((used | tm | bad) & b) continue;
            prefix.push_back(v);
            used |= b;
            ++nodes;
            if (nodes > budget.max_nodes) exhausted = true;
            if ((nodes & 1023) == 0 && std::chrono::steady_clock::now() > deadline) exhausted = true;
            bool ok = dfs();
            used &= ~b;
            prefix.pop_back();
            if (ok) return true;
            if (exhausted) return false;
        }
        return false;
    };

    // Windows already complete inside `from` are fixed; bail out early when
    // one is missing or conflicts, instead of discovering it at every close.
    {
        std::vector<std::vector<Vertex>> fixed;
        for (int start = 0; start + k <= static_cast<int>(from.size()); start += d)
            fixed.emplace_back(from.begin() + start, from.begin() + start + k);
        for (const auto& e : fixed)
            if (!H.has_edge(e)) return std::nullopt;
        if (!fixed.empty() && !detail::edges_properly_colored(H, fixed)) return std::nullopt;
    }
    dfs();
    return result;
}

}  // namespace pcham
