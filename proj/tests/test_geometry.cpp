#include "cap/errors.hpp"
#include "cap/geometry.hpp"
#include "cap/lp.hpp"
#include "cap/sampling.hpp"

#include <doctest.h>

#include <algorithm>
#include <bit>
#include <cmath>

using namespace cap;

namespace {

Prior pr(std::vector<double> w) { return Prior(std::move(w)); }
UtilityAct act(std::vector<double> x) { return UtilityAct(std::move(x)); }

// min ⟨φ, μ⟩ over {μ ≥ 0 : μ(Ω) = 1, μ(E) ≥ ν(E)} by linear programming.
double core_minimum_lp(const ConvexCapacity& nu, const UtilityAct& phi) {
    std::size_t n = nu.states();
    lp::Problem p;
    for (std::size_t i = 0; i < n; ++i) p.objective.push_back(-phi[i]);
    for (std::uint32_t mask = 1; mask < nu.full_mask(); ++mask) {
        std::vector<double> row(n);
        for (std::size_t i = 0; i < n; ++i) row[i] = (mask >> i) & 1u ? 1.0 : 0.0;
        p.constraints.push_back({row, lp::Sense::GreaterEqual, nu(mask)});
    }
    p.constraints.push_back({std::vector<double>(n, 1.0), lp::Sense::Equal, 1.0});
    auto s = lp::solve(p);
    REQUIRE(s.status == lp::Status::Optimal);
    return -s.value;
}

double brute_min(const BeliefSet& m, const UtilityAct& phi) {
    double best = INFINITY;
    for (const auto& v : m.vertices()) best = std::min(best, phi.expectation(v));
    return best;
}

} // namespace

TEST_SUITE("geometry") {

TEST_CASE("support value of a segment") {
    BeliefSet m({pr({0.3, 0.7}), pr({0.5, 0.5})});
    CHECK(support_value(m, act({1, 0})) == doctest::Approx(0.3));
    CHECK(support_value(m, act({0, 1})) == doctest::Approx(0.5));
    CHECK(support_value(BeliefSet::simplex(3), act({4, -2, 7})) == doctest::Approx(-2.0));
}

TEST_CASE("priors and acts validate") {
    CHECK_THROWS_AS(Prior({0.5, 0.6}), InvalidArgument);
    CHECK_THROWS_AS(Prior({-0.1, 1.1}), InvalidArgument);
    CHECK_THROWS_AS(UtilityAct({1.0, NAN}), InvalidArgument);
    CHECK_THROWS_AS(StateSpace({"a", "a"}), InvalidArgument);
    CHECK_THROWS_AS(support_value(BeliefSet::simplex(3), act({1, 2})), DimensionMismatch);
    CHECK_THROWS_AS(mix_sets(1.5, BeliefSet::simplex(2), BeliefSet::simplex(2)), InvalidArgument);
}

TEST_CASE("mixtures of sets") {
    BeliefSet a({pr({0.2, 0.8}), pr({0.6, 0.4})});
    BeliefSet b = BeliefSet::singleton(pr({1.0, 0.0}));
    auto half = mix_sets(0.5, a, b);
    CHECK(same_set(half, BeliefSet({pr({0.6, 0.4}), pr({0.8, 0.2})})));
    CHECK(same_set(mix_sets(1.0, a, b), a));
    CHECK(same_set(mix_sets(0.0, a, b), b));
}

TEST_CASE("inclusion") {
    BeliefSet wide({pr({0.1, 0.9}), pr({0.9, 0.1})});
    BeliefSet narrow({pr({0.4, 0.6}), pr({0.5, 0.5})});
    CHECK(is_subset(narrow, wide));
    CHECK_FALSE(is_subset(wide, narrow));
    CHECK(contains(BeliefSet::simplex(3), pr({0.2, 0.3, 0.5})));
    CHECK_FALSE(contains(narrow, pr({0.3, 0.7})));
}

TEST_CASE("inclusion agrees with support-function dominance") {
    Rng rng(17);
    for (int trial = 0; trial < 100; ++trial) {
        std::size_t n = 2 + rng.index(3);
        auto outer = random_belief_set(rng, n, 5);
        // Inner set from convex combinations of outer vertices, or random.
        std::vector<Prior> inner_vertices;
        bool built = rng.bernoulli(0.5);
        for (int k = 0; k < 3; ++k) {
            if (built) {
                auto w = rng.simplex_point(outer.vertices().size());
                std::vector<double> x(n, 0.0);
                for (std::size_t v = 0; v < w.size(); ++v)
                    for (std::size_t i = 0; i < n; ++i) x[i] += w[v] * outer.vertices()[v][i];
                double total = 0.0;
                for (double xi : x) total += xi;
                for (double& xi : x) xi /= total;
                inner_vertices.push_back(pr(x));
            } else {
                inner_vertices.push_back(random_prior(rng, n));
            }
        }
        BeliefSet inner(inner_vertices);
        bool sub = is_subset(inner, outer);
        if (built) CHECK(sub);
        if (sub) {
            for (int d = 0; d < 200; ++d) {
                std::vector<double> phi(n);
                for (auto& x : phi) x = rng.uniform(-1, 1);
                CHECK(support_value(inner, act(phi)) >= support_value(outer, act(phi)) - 1e-9);
            }
        }
    }
}

TEST_CASE("prune keeps the hull") {
    BeliefSet m({pr({0.2, 0.8}), pr({0.5, 0.5}), pr({0.6, 0.4}), pr({0.2, 0.8})});
    auto p = prune(m);
    CHECK(p.vertices().size() == 2);
    CHECK(same_set(p, m));
    CHECK(vertex_distance(p, BeliefSet({pr({0.6, 0.4}), pr({0.2, 0.8})})) == doctest::Approx(0.0));
}

TEST_CASE("core of a two-state capacity") {
    ConvexCapacity nu(2, {0.0, 0.2, 0.3, 1.0});
    CHECK(is_supermodular(nu));
    auto core = core_of_capacity(nu);
    CHECK(same_set(core, BeliefSet({pr({0.2, 0.8}), pr({0.7, 0.3})})));
}

TEST_CASE("core of the squared uniform capacity matches a grid oracle") {
    auto nu = ConvexCapacity::from_function(3, [](std::uint32_t mask) {
        double k = std::popcount(mask) / 3.0;
        return k * k;
    });
    REQUIRE(is_supermodular(nu));
    auto core = core_of_capacity(nu);
    for (const auto& v : core.vertices())
        for (std::uint32_t mask = 1; mask <= nu.full_mask(); ++mask) {
            double mass = 0.0;
            for (std::size_t i = 0; i < 3; ++i)
                if ((mask >> i) & 1u) mass += v[i];
            CHECK(mass >= nu(mask) - 1e-12);
        }
    const int steps = 90;
    std::size_t inside = 0;
    for (int a = 0; a <= steps; ++a)
        for (int b = 0; a + b <= steps; ++b) {
            std::vector<double> mu{double(a) / steps, double(b) / steps, double(steps - a - b) / steps};
            bool in = true;
            for (std::uint32_t mask = 1; mask < nu.full_mask(); ++mask) {
                double mass = 0.0;
                for (std::size_t i = 0; i < 3; ++i)
                    if ((mask >> i) & 1u) mass += mu[i];
                if (mass < nu(mask) - 1e-12) in = false;
            }
            if (in) {
                ++inside;
                CHECK(contains(core, pr(mu)));
            }
        }
    CHECK(inside > 0);
}

TEST_CASE("choquet integral examples") {
    ConvexCapacity nu(2, {0.0, 0.2, 0.3, 1.0});
    CHECK(choquet_integral(nu, act({1, 0})) == doctest::Approx(0.2));
    CHECK(choquet_integral(nu, act({5, 5})) == doctest::Approx(5.0));
    ConvexCapacity bad(2, {0.0, 0.6, 0.6, 1.0});
    CHECK_FALSE(is_supermodular(bad));
    CHECK_THROWS_AS(core_of_capacity(bad), InvalidArgument);
    CHECK_THROWS_AS(ConvexCapacity(2, {0.1, 0.2, 0.3, 1.0}), InvalidArgument);
}

TEST_CASE("choquet integral equals the core minimum by linear programming") {
    Rng rng(29);
    for (int trial = 0; trial < 100; ++trial) {
        std::size_t n = 2 + rng.index(4);
        auto nu = random_convex_capacity(rng, n);
        REQUIRE(is_supermodular(nu));
        std::vector<double> x(n);
        for (auto& xi : x) xi = rng.uniform(-50, 50);
        CHECK(choquet_integral(nu, act(x)) == doctest::Approx(core_minimum_lp(nu, act(x))).epsilon(1e-9));
    }
}

TEST_CASE("additive capacity integrates to the expectation") {
    Prior p = pr({0.1, 0.2, 0.3, 0.4});
    auto nu = ConvexCapacity::additive(p);
    CHECK(choquet_integral(nu, act({1, 2, 3, 4})) == doctest::Approx(3.0));
}

TEST_CASE("support function properties") {
    Rng rng(5);
    for (int trial = 0; trial < 300; ++trial) {
        std::size_t n = 2 + rng.index(4);
        auto m = random_belief_set(rng, n, 5);
        std::vector<double> fx(n), gx(n);
        for (auto& x : fx) x = rng.uniform(-100, 100);
        for (auto& x : gx) x = rng.uniform(-100, 100);
        auto f = act(fx), g = act(gx);
        double t = rng.uniform(-50, 50), a = rng.uniform(0, 10), lam = rng.uniform();
        CHECK(support_value(m, f) == doctest::Approx(brute_min(m, f)));
        CHECK(support_value(m, f.shifted(t)) == doctest::Approx(support_value(m, f) + t));
        CHECK(support_value(m, f.scaled(a)) == doctest::Approx(a * support_value(m, f)));
        CHECK(support_value(m, mix_acts(lam, f, g)) >=
              lam * support_value(m, f) + (1 - lam) * support_value(m, g) - 1e-9);
        std::vector<double> hx(fx);
        for (auto& x : hx) x += rng.uniform(0, 5);
        CHECK(support_value(m, act(hx)) >= support_value(m, f) - 1e-12);
    }
}

TEST_CASE("support function is linear in mixtures of sets") {
    Rng rng(41);
    for (int trial = 0; trial < 300; ++trial) {
        std::size_t n = 2 + rng.index(4);
        auto m = random_belief_set(rng, n, 4), m2 = random_belief_set(rng, n, 4);
        std::vector<double> x(n);
        for (auto& xi : x) xi = rng.uniform(-100, 100);
        double lam = rng.uniform();
        double lhs = support_value(mix_sets(lam, m, m2), act(x));
        double rhs = lam * support_value(m, act(x)) + (1 - lam) * support_value(m2, act(x));
        CHECK(std::abs(lhs - rhs) <= 1e-9 * std::max(1.0, std::abs(rhs)));
    }
}

}
