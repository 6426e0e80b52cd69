#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <numeric>

#include "helpers.hpp"
#include "pcham/exact.hpp"

using namespace pcham;
using testutil::mono_complete;
using testutil::rainbow_complete;

namespace {

// Independent oracle: scan every permutation of the active vertices, count
// those forming a pc Hamilton cycle, and divide by the symmetry group size
// 2n/(k-l). Distinct vertices mean no sequence is fixed by a nontrivial
// group element, so every class is hit exactly 2n/(k-l) times.
std::uint64_t count_by_permutations(const ColoredKGraph& H, int l) {
    const int k = H.k();
    const int d = k - l;
    std::vector<Vertex> seq = H.vertices();
    std::sort(seq.begin(), seq.end());
    const int n = static_cast<int>(seq.size());
    REQUIRE(n % d == 0);
    std::uint64_t hits = 0;
    do {
        KLCycle C{k, l, seq};
        bool ok = true;
        for (const auto& e : cycle_edges(C))
            if (!H.has_edge(e)) {
                ok = false;
                break;
            }
        if (ok && is_properly_colored(H, C)) ++hits;
    } while (std::next_permutation(seq.begin(), seq.end()));
    REQUIRE(hits % (2 * n / d) == 0);
    return hits / (2 * n / d);
}

std::uint64_t factorial(int n) {
    std::uint64_t r = 1;
    for (int i = 2; i <= n; ++i) r *= i;
    return r;
}

}  // namespace

TEST_CASE("find_pc_hamilton_exact on complete hosts") {
    auto R = rainbow_complete(6, 3);
    auto res = find_pc_hamilton_exact(R, 2);
    REQUIRE(res.status == SolveStatus::Found);
    REQUIRE(res.cycle.has_value());
    CHECK(is_hamilton(R, *res.cycle));
    CHECK(is_properly_colored(R, *res.cycle));

    auto M = mono_complete(6, 3);
    CHECK(find_pc_hamilton_exact(M, 2).status == SolveStatus::None);
    // loose cycles of length 3 still have intersecting consecutive edges
    CHECK(find_pc_hamilton_exact(M, 1).status == SolveStatus::None);

    auto loose = find_pc_hamilton_exact(R, 1);
    REQUIRE(loose.status == SolveStatus::Found);
    CHECK(is_hamilton(R, *loose.cycle));
    CHECK(is_properly_colored(R, *loose.cycle));
}

TEST_CASE("find_pc_hamilton_exact argument and budget handling") {
    auto R7 = rainbow_complete(7, 3);
    CHECK_THROWS_AS(find_pc_hamilton_exact(R7, 1), std::invalid_argument);
    CHECK_THROWS_AS(find_pc_hamilton_exact(R7, 0), std::invalid_argument);
    CHECK_THROWS_AS(find_pc_hamilton_exact(R7, 3), std::invalid_argument);

    SearchBudget tiny{5, 60.0};
    auto M = mono_complete(8, 3);
    auto res = find_pc_hamilton_exact(M, 2, tiny);
    CHECK(res.status == SolveStatus::BudgetExhausted);

    SearchBudget bad{0, 60.0};
    CHECK_THROWS_AS(find_pc_hamilton_exact(M, 2, bad), std::invalid_argument);
}

TEST_CASE("count_pc_hamilton pinned values") {
    ColoredKGraph empty(6, 3);
    CHECK(count_pc_hamilton(empty, 2).count == 0);

    CHECK(count_pc_hamilton(rainbow_complete(5, 3), 2).count == 12);

    for (int n = 5; n <= 7; ++n) {
        auto r = count_pc_hamilton(rainbow_complete(n, 3), 2);
        REQUIRE(r.status == SolveStatus::Found);
        CHECK(r.count == factorial(n - 1) / 2);
    }
}

TEST_CASE("count_pc_hamilton agrees with permutation enumeration") {
    CHECK(count_pc_hamilton(rainbow_complete(6, 3), 1).count ==
          count_by_permutations(rainbow_complete(6, 3), 1));

    Rng rng(derive_seed(0xC0FFEE, 3));
    for (int trial = 0; trial < 8; ++trial) {
        auto H = testutil::random_instance(6, 3, 0.7, 5, rng);
        CHECK(count_pc_hamilton(H, 2).count == count_by_permutations(H, 2));
        CHECK(count_pc_hamilton(H, 1).count == count_by_permutations(H, 1));
    }
}

TEST_CASE("found/none stable under vertex relabeling") {
    Rng rng(derive_seed(0xC0FFEE, 4));
    for (int trial = 0; trial < 10; ++trial) {
        auto H = testutil::random_instance(8, 3, 0.5, 4, rng);
        std::vector<Vertex> perm(8);
        std::iota(perm.begin(), perm.end(), 0);
        rng.shuffle(perm);
        auto G = testutil::relabel(H, perm);
        CHECK(find_pc_hamilton_exact(H, 2).status == find_pc_hamilton_exact(G, 2).status);
        CHECK(find_pc_hamilton_exact(H, 1).status == find_pc_hamilton_exact(G, 1).status);
    }
}

TEST_CASE("find_pc_path_exact") {
    auto R = rainbow_complete(10, 3);
    auto P = find_pc_path_exact(R, 1, {0}, {1}, 7);
    REQUIRE(P.has_value());
    CHECK(P->vertices.front() == 0);
    CHECK(P->vertices.back() == 1);
    CHECK(static_cast<int>(P->vertices.size()) <= 7);
    CHECK(is_properly_colored(R, *P));

    CHECK_THROWS_AS(find_pc_path_exact(R, 1, {0}, {0}, 7), std::invalid_argument);
    CHECK_THROWS_AS(find_pc_path_exact(R, 1, {0}, {1}, 7, {0}), std::invalid_argument);

    // vertex 0 isolated: no path can leave it
    ColoredKGraph H(6, 3);
    int c = 0;
    testutil::for_each_ksubset(6, 3, [&](const std::vector<Vertex>& e) {
        if (e[0] != 0) H.add_edge(e, ++c);
    });
    CHECK_FALSE(find_pc_path_exact(H, 1, {0}, {1}, 9).has_value());

    // tight ends given as end-paths
    auto R8 = rainbow_complete(8, 3);
    auto T = find_pc_path_exact(R8, 2, {0, 1, 2, 3}, {4, 5, 6, 7}, 8);
    REQUIRE(T.has_value());
    CHECK(T->vertices.size() == 8);
    CHECK(is_properly_colored(R8, *T));

    // forbidden vertices are honored
    auto Q = find_pc_path_exact(R, 1, {0}, {1}, 5, {2, 3, 4, 5, 6, 7, 8});
    REQUIRE(Q.has_value());
    for (Vertex v : Q->vertices) CHECK((v == 0 || v == 1 || v == 9));
}
