#include "cap/lp.hpp"
#include "cap/random.hpp"

#include <doctest.h>

#include <algorithm>
#include <array>
#include <cmath>

using namespace cap;

TEST_SUITE("lp") {

TEST_CASE("textbook maximisation") {
    // max 3x + 5y, x <= 4, 2y <= 12, 3x + 2y <= 18  ->  (2, 6), 36
    lp::Problem p{{3, 5},
                  {{{1, 0}, lp::Sense::LessEqual, 4},
                   {{0, 2}, lp::Sense::LessEqual, 12},
                   {{3, 2}, lp::Sense::LessEqual, 18}}};
    auto s = lp::solve(p);
    REQUIRE(s.status == lp::Status::Optimal);
    CHECK(s.value == doctest::Approx(36.0));
    CHECK(s.x[0] == doctest::Approx(2.0));
    CHECK(s.x[1] == doctest::Approx(6.0));
}

TEST_CASE("equality and lower bound rows") {
    // max -x - y, x + y = 1, x >= 0.3
    lp::Problem p{{-1, -1}, {{{1, 1}, lp::Sense::Equal, 1}, {{1, 0}, lp::Sense::GreaterEqual, 0.3}}};
    auto s = lp::solve(p);
    REQUIRE(s.status == lp::Status::Optimal);
    CHECK(s.value == doctest::Approx(-1.0));
    CHECK(s.x[0] >= 0.3 - 1e-12);
}

TEST_CASE("infeasible and unbounded") {
    lp::Problem inf{{1}, {{{1}, lp::Sense::LessEqual, 1}, {{1}, lp::Sense::GreaterEqual, 2}}};
    CHECK(lp::solve(inf).status == lp::Status::Infeasible);
    lp::Problem unb{{1, 0}, {{{0, 1}, lp::Sense::LessEqual, 1}}};
    CHECK(lp::solve(unb).status == lp::Status::Unbounded);
}

TEST_CASE("negative right-hand sides") {
    // -x <= -2 is x >= 2; max -x gives -2
    lp::Problem p{{-1}, {{{-1}, lp::Sense::LessEqual, -2}}};
    auto s = lp::solve(p);
    REQUIRE(s.status == lp::Status::Optimal);
    CHECK(s.value == doctest::Approx(-2.0));
}

TEST_CASE("degenerate program terminates") {
    // Beale's cycling example.
    lp::Problem p{{0.75, -150, 0.02, -6},
                  {{{0.25, -60, -0.04, 9}, lp::Sense::LessEqual, 0},
                   {{0.5, -90, -0.02, 3}, lp::Sense::LessEqual, 0},
                   {{0, 0, 1, 0}, lp::Sense::LessEqual, 1}}};
    auto s = lp::solve(p);
    REQUIRE(s.status == lp::Status::Optimal);
    CHECK(s.value == doctest::Approx(0.05));
}

TEST_CASE("small random programs match vertex enumeration") {
    // Two variables, box plus random cuts: the optimum sits on an intersection
    // of two constraint lines (or axes), so enumerate those.
    Rng rng(3);
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<std::array<double, 3>> rows; // a x + b y <= c
        rows.push_back({1, 0, rng.uniform(1, 5)});
        rows.push_back({0, 1, rng.uniform(1, 5)});
        for (int k = 0; k < 3; ++k) rows.push_back({rng.uniform(-1, 2), rng.uniform(-1, 2), rng.uniform(0.5, 6)});
        rows.push_back({-1, 0, 0});
        rows.push_back({0, -1, 0});
        double cx = rng.uniform(-2, 2), cy = rng.uniform(-2, 2);

        double best = -INFINITY;
        for (std::size_t i = 0; i < rows.size(); ++i)
            for (std::size_t j = i + 1; j < rows.size(); ++j) {
                double det = rows[i][0] * rows[j][1] - rows[i][1] * rows[j][0];
                if (std::abs(det) < 1e-12) continue;
                double x = (rows[i][2] * rows[j][1] - rows[i][1] * rows[j][2]) / det;
                double y = (rows[i][0] * rows[j][2] - rows[i][2] * rows[j][0]) / det;
                bool ok = std::all_of(rows.begin(), rows.end(),
                                      [&](const auto& r) { return r[0] * x + r[1] * y <= r[2] + 1e-9; });
                if (ok) best = std::max(best, cx * x + cy * y);
            }

        lp::Problem p{{cx, cy}, {}};
        for (std::size_t i = 0; i + 2 < rows.size(); ++i)
            p.constraints.push_back({{rows[i][0], rows[i][1]}, lp::Sense::LessEqual, rows[i][2]});
        auto s = lp::solve(p);
        REQUIRE(s.status == lp::Status::Optimal);
        CHECK(s.value == doctest::Approx(best).epsilon(1e-9));
    }
}

}
