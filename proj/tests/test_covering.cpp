#include <catch2/catch_amalgamated.hpp>

#include "helpers.hpp"
#include "pcham/covering.hpp"

using namespace pcham;
using testutil::mono_complete;
using testutil::rainbow_complete;

namespace {

// parts[i] = {i*m, ..., i*m + m - 1}
std::vector<std::vector<Vertex>> blocks(int k, int m) {
    std::vector<std::vector<Vertex>> parts(k);
    for (int i = 0; i < k; ++i)
        for (int j = 0; j < m; ++j) parts[i].push_back(i * m + j);
    return parts;
}

// complete k-partite host with one vertex per part in each edge
ColoredKGraph complete_partite(int k, int m, bool rainbow) {
    ColoredKGraph H(k * m, k);
    auto parts = blocks(k, m);
    int c = 0;
    std::vector<int> pick(k, 0);
    while (true) {
        std::vector<Vertex> e;
        for (int i = 0; i < k; ++i) e.push_back(parts[i][pick[i]]);
        H.add_edge(e, rainbow ? ++c : 1);
        int i = k - 1;
        while (i >= 0 && ++pick[i] == m) pick[i--] = 0;
        if (i < 0) break;
    }
    return H;
}

}  // namespace

TEST_CASE("grow_dense_path") {
    SECTION("rainbow complete tripartite") {
        auto J = complete_partite(3, 6, true);
        auto parts = blocks(3, 6);
        auto res = grow_dense_path(J, parts, 1.0);
        CHECK_FALSE(res.contradiction);
        CHECK(res.deleted_edges == 0);
        CHECK(res.path.structurally_valid());
        CHECK(res.path.vertices.size() >= 3);
        CHECK(is_properly_colored(J, res.path));
        // deletion budget d*m^k never exceeded
        CHECK(static_cast<double>(res.deleted_edges) < 1.0 * 6 * 6 * 6);
    }

    SECTION("single edge survives a low threshold") {
        ColoredKGraph J(9, 3);
        J.add_edge({0, 3, 6}, 1);
        auto res = grow_dense_path(J, blocks(3, 3), 0.1);
        CHECK_FALSE(res.contradiction);
        CHECK(res.path.vertices.size() == 3);
    }

    SECTION("single edge dies under a high threshold") {
        ColoredKGraph J(9, 3);
        J.add_edge({0, 3, 6}, 1);
        auto res = grow_dense_path(J, blocks(3, 3), 1.5);
        CHECK(res.contradiction);
        CHECK(res.deleted_edges == 1);
    }

    SECTION("monochromatic host cannot extend") {
        auto J = complete_partite(3, 4, false);
        auto res = grow_dense_path(J, blocks(3, 4), 1.0);
        CHECK_FALSE(res.contradiction);
        CHECK(res.path.vertices.size() == 3);  // stuck after the first edge
    }

    CHECK_THROWS_AS(grow_dense_path(ColoredKGraph(6, 3), blocks(2, 3), 1.0), std::invalid_argument);
}

TEST_CASE("grow_canonical_path") {
    auto J = complete_partite(3, 6, true);
    auto parts = blocks(3, 6);
    auto res = grow_canonical_path(J, parts, 1, 1.0);
    CHECK_FALSE(res.contradiction);
    CHECK(res.path.structurally_valid());
    CHECK(res.path.k == 3);
    CHECK(res.path.l == 1);
    CHECK(res.path.vertices.size() >= 3);
    CHECK(res.path.vertices.size() % 2 == 1);
    CHECK(is_properly_colored(J, res.path));

    CHECK_THROWS_AS(grow_canonical_path(J, parts, 2, 1.0), std::invalid_argument);  // l >= k/2

    SECTION("mono host stops after one edge, never contradicts structure") {
        auto M = complete_partite(3, 4, false);
        auto r2 = grow_canonical_path(M, blocks(3, 4), 1, 0.1);
        CHECK_FALSE(r2.contradiction);
        CHECK(r2.path.vertices.size() == 3);
    }

    SECTION("aggressive pruning reports a contradiction") {
        ColoredKGraph S(9, 3);
        S.add_edge({0, 3, 6}, 1);
        auto r3 = grow_canonical_path(S, blocks(3, 3), 1, 1.0);  // threshold 9/2
        CHECK(r3.contradiction);
    }
}

TEST_CASE("greedy_path_cover") {
    SECTION("rainbow K30 tight cover") {
        auto H = rainbow_complete(30, 3);
        auto res = greedy_path_cover(H, 2, 0.1, 5, 42);
        CHECK_FALSE(res.shortfall);
        CHECK(res.uncovered.size() <= 3);
        CHECK(res.paths.size() <= 5);
        EdgeMask seen = 0;
        for (const auto& P : res.paths) {
            CHECK(P.structurally_valid());
            CHECK(P.edge_count() >= 3);
            CHECK(is_properly_colored(H, P));
            EdgeMask m = mask_of(P.vertices);
            CHECK((m & seen) == 0);  // pairwise disjoint
            seen |= m;
        }
        // uncovered = complement of the union
        for (Vertex v : res.uncovered) CHECK(((seen >> v) & 1) == 0);
        CHECK(std::popcount(seen) + res.uncovered.size() == 30);
    }

    SECTION("loose cover on rainbow K31") {
        auto H = rainbow_complete(31, 3);
        auto res = greedy_path_cover(H, 1, 0.15, 6, 7);
        CHECK_FALSE(res.shortfall);
        for (const auto& P : res.paths) CHECK(is_properly_colored(H, P));
    }

    SECTION("empty host falls short") {
        ColoredKGraph H(12, 3);
        auto res = greedy_path_cover(H, 2, 0.1, 5, 1);
        CHECK(res.shortfall);
        CHECK(res.uncovered.size() == 12);
        CHECK(res.paths.empty());
    }

    SECTION("delta = 1 is vacuous") {
        auto H = rainbow_complete(12, 3);
        auto res = greedy_path_cover(H, 2, 1.0, 5, 1);
        CHECK(res.paths.empty());
        CHECK_FALSE(res.shortfall);
    }

    SECTION("determinism in the seed") {
        auto H = rainbow_complete(20, 3);
        auto a = greedy_path_cover(H, 2, 0.1, 5, 99);
        auto b = greedy_path_cover(H, 2, 0.1, 5, 99);
        REQUIRE(a.paths.size() == b.paths.size());
        for (std::size_t i = 0; i < a.paths.size(); ++i)
            CHECK(a.paths[i].vertices == b.paths[i].vertices);
    }

    CHECK_THROWS_AS(greedy_path_cover(rainbow_complete(10, 3), 0, 0.1, 5, 1), std::invalid_argument);
    CHECK_THROWS_AS(greedy_path_cover(rainbow_complete(10, 3), 2, -0.1, 5, 1), std::invalid_argument);
}

namespace {

// independent pairing enumeration for small U
bool pairing_exists(const SimpleGraph& G, std::vector<Vertex> U) {
    if (U.empty()) return true;
    Vertex u = U.front();
    for (std::size_t i = 1; i < U.size(); ++i) {
        if (!G.has_edge(u, U[i])) continue;
        std::vector<Vertex> rest;
        for (std::size_t j = 1; j < U.size(); ++j)
            if (j != i) rest.push_back(U[j]);
        if (pairing_exists(G, rest)) return true;
    }
    return false;
}

}  // namespace

TEST_CASE("perfect_matching") {
    SimpleGraph K4(4);
    for (int u = 0; u < 4; ++u)
        for (int v = u + 1; v < 4; ++v) K4.add_edge(u, v);
    auto m = perfect_matching(K4, {0, 1, 2, 3});
    REQUIRE(m.has_value());
    CHECK(m->size() == 2);

    SimpleGraph path(4);
    path.add_edge(0, 1);
    path.add_edge(1, 2);
    path.add_edge(2, 3);
    auto mp = perfect_matching(path, {0, 1, 2, 3});
    REQUIRE(mp.has_value());

    SimpleGraph star(4);
    star.add_edge(0, 1);
    star.add_edge(0, 2);
    star.add_edge(0, 3);
    CHECK_FALSE(perfect_matching(star, {0, 1, 2, 3}).has_value());

    CHECK_THROWS_AS(perfect_matching(K4, {0, 1, 2}), std::invalid_argument);
    CHECK_THROWS_AS(perfect_matching(K4, {0, 0}), std::invalid_argument);
    CHECK_THROWS_AS(perfect_matching(K4, {0, 5}), std::invalid_argument);

    SECTION("agrees with exhaustive pairings on random graphs") {
        Rng rng(derive_seed(0xFEED, 3));
        for (int trial = 0; trial < 40; ++trial) {
            int n = 6 + 2 * static_cast<int>(rng.below(3));  // 6, 8, 10
            SimpleGraph G(n);
            for (int u = 0; u < n; ++u)
                for (int v = u + 1; v < n; ++v)
                    if (rng.bernoulli(0.4)) G.add_edge(u, v);
            std::vector<Vertex> U;
            for (int v = 0; v < n; ++v) U.push_back(v);
            auto got = perfect_matching(G, U);
            CHECK(got.has_value() == pairing_exists(G, U));
            if (got) {
                // matched pairs really are edges and cover U exactly
                EdgeMask cover = 0;
                for (auto [u, v] : *got) {
                    CHECK(G.has_edge(u, v));
                    cover |= (EdgeMask{1} << u) | (EdgeMask{1} << v);
                }
                CHECK(cover == mask_of(U));
            }
        }
    }
}
