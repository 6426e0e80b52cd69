#include <catch2/catch_amalgamated.hpp>

#include <sstream>

#include "helpers.hpp"
#include "pcham/generators.hpp"

using namespace pcham;

namespace {
std::string dump(const ColoredKGraph& H) {
    std::ostringstream out;
    write_instance(out, H);
    return out.str();
}
}  // namespace

TEST_CASE("gen_complete") {
    SECTION("rainbow") {
        auto H = gen_complete(6, 3, Coloring::rainbow(), 1);
        CHECK(H.edges().size() == 20);
        CHECK(H.palette().size() == 20);
        CHECK(max_s_degree_per_color(H, 2) == 1);
    }

    SECTION("monochromatic") {
        auto H = gen_complete(6, 3, Coloring::monochromatic(), 1);
        CHECK(H.palette().size() == 1);
        CHECK(max_s_degree_per_color(H, 2) == 4);  // n - 2
    }

    SECTION("random_bounded verified post hoc") {
        for (std::uint64_t seed = 0; seed < 10; ++seed) {
            auto H = gen_complete(8, 3, Coloring::random_bounded(2), seed);
            CHECK(H.edges().size() == 56);
            CHECK(max_s_degree_per_color(H, 2) <= 2);
        }
        CHECK_THROWS_AS(gen_complete(8, 3, Coloring::random_bounded(0), 1), InfeasibleError);
    }

    SECTION("adversarial link") {
        auto H = gen_complete(7, 3, Coloring::adversarial_link(0), 1);
        for (const auto& e : H.edges()) {
            bool through = std::find(e.vertices.begin(), e.vertices.end(), 0) != e.vertices.end();
            if (through)
                CHECK(e.color == 1);
            else
                CHECK(e.color != 1);
        }
        // the link vertex's color class is huge: C(6,2) = 15 edges
        CHECK(color_class(H, 1).edges().size() == 15);
    }

    SECTION("deterministic and round-trips through the text format") {
        auto a = gen_complete(8, 3, Coloring::random_bounded(3), 77);
        auto b = gen_complete(8, 3, Coloring::random_bounded(3), 77);
        CHECK(dump(a) == dump(b));
        std::istringstream in(dump(a));
        auto back = parse_instance(in);
        CHECK(dump(back) == dump(a));
    }

    CHECK_THROWS_AS(gen_complete(2, 3, Coloring::rainbow(), 1), std::invalid_argument);
}

TEST_CASE("gen_dirac") {
    SECTION("slack forces completeness at small n") {
        auto res = gen_dirac(12, 3, 0.4, Removal::Random, Coloring::rainbow(), 1);
        CHECK(res.removed == 0);
        CHECK_FALSE(res.note.empty());
        CHECK(res.H.edges().size() == 220);
    }

    SECTION("random removal keeps the codegree floor") {
        auto res = gen_dirac(20, 3, 0.05, Removal::Random, Coloring::rainbow(), 5);
        CHECK(res.removed > 0);
        CHECK(static_cast<double>(min_s_degree(res.H, 2)) >= 0.55 * 20);
        auto rep = check_hypotheses(res.H, 2);
        CHECK(rep.gamma_margin >= 0.05);
    }

    SECTION("structured removal hollows out a half-set") {
        auto res = gen_dirac(20, 3, 0.05, Removal::Structured, Coloring::rainbow(), 5);
        CHECK(res.removed > 0);
        CHECK(static_cast<double>(min_s_degree(res.H, 2)) >= 0.55 * 20);
        // every removed edge sat inside {0..9}
        std::size_t inside = 0;
        for (const auto& e : res.H.edges())
            if (e.vertices.back() <= 9) ++inside;
        std::size_t total_inside = 10 * 9 * 8 / 6;
        CHECK(inside == total_inside - res.removed);
    }

    SECTION("determinism") {
        auto a = gen_dirac(16, 3, 0.1, Removal::Random, Coloring::random_bounded(4), 9);
        auto b = gen_dirac(16, 3, 0.1, Removal::Random, Coloring::random_bounded(4), 9);
        CHECK(dump(a.H) == dump(b.H));
    }

    CHECK_THROWS_AS(gen_dirac(12, 3, 0.0, Removal::Random, Coloring::rainbow(), 1), InfeasibleError);
    CHECK_THROWS_AS(gen_dirac(12, 3, 0.6, Removal::Random, Coloring::rainbow(), 1), InfeasibleError);
}

TEST_CASE("gen_loose_host") {
    SECTION("degree floor audited") {
        auto res = gen_loose_host(16, 0.05, Coloring::rainbow(), 4);
        CHECK(res.removed > 0);
        double thr = (7.0 / 16.0 + 0.05) * 16 * 16 / 2.0;
        CHECK(static_cast<double>(min_s_degree(res.H, 1)) >= thr);
        auto rep = check_hypotheses(res.H, 1);
        CHECK(rep.gamma_vertex.has_value());
    }

    SECTION("large slack leaves the host complete") {
        // thr in (35, 36]: complete host feasible but no edge removable
        auto res = gen_loose_host(10, 0.27, Coloring::rainbow(), 4);
        CHECK(res.H.edges().size() == 120);
        CHECK_FALSE(res.note.empty());
    }

    CHECK_THROWS_AS(gen_loose_host(15, 0.05, Coloring::rainbow(), 1), std::invalid_argument);
    CHECK_THROWS_AS(gen_loose_host(16, 0.6, Coloring::rainbow(), 1), InfeasibleError);
    CHECK_THROWS_AS(gen_loose_host(16, 0.0, Coloring::rainbow(), 1), InfeasibleError);
}
