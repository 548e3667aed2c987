#include "cap/comparatives.hpp"
#include "cap/errors.hpp"
#include "cap/machina.hpp"

#include <doctest.h>

using namespace cap;

namespace {

CapModel with_cost_scale(const CapModel& model, double factor) {
    const auto& f = std::get<ParametricFamily>(model.family());
    AffineExpression cost = f.cost();
    cost.constant *= factor;
    for (auto& c : cost.coefficients) c *= factor;
    return model.with_family(ParametricFamily(f.parameters(), f.vertex_templates(), cost, f.grid_resolution()));
}

CapModel expected_utility(const Prior& prior) {
    return CapModel(machina::states(), FiniteFamily{{{"eu", BeliefSet::singleton(prior), 0.0, std::nullopt}}},
                    Variant::Cap);
}

LotterySampler machina_sampler(std::uint64_t seed) {
    return LotterySampler(4, seed, {.act_pool = {machina::act(1), machina::act(2), machina::act(3), machina::act(4)}});
}

} // namespace

TEST_SUITE("comparatives") {

TEST_CASE("shared perception examples") {
    auto model = machina::model_5051(5);
    auto f = [](int i) { return Lottery::degenerate(machina::act(i)); };
    CHECK(shares_optimal_perception(model, f(1), f(1)));
    auto c23 = check_shared_perception(model, f(2), f(3));
    CHECK(c23.linear);
    CHECK(c23.argmax_intersects);
    auto c14 = check_shared_perception(model, f(1), f(4));
    CHECK_FALSE(c14.linear);
    CHECK_FALSE(c14.argmax_intersects);
    CHECK(c14.max_deviation > 1e-7);
}

TEST_CASE("minimising variants are rejected") {
    Rng rng(2);
    auto model = random_model(rng, 3, 3, ModelClass::DoubleMaxmin);
    CHECK_THROWS_AS(shares_optimal_perception(model, Lottery::constant(3, 1), Lottery::constant(3, 2)),
                    InvalidArgument);
}

TEST_CASE("reflexivity") {
    auto model = machina::model_5051(5);
    for (auto which : {Comparative::ExAnteRandomization, Comparative::Ambiguity, Comparative::FilteringIncentives}) {
        auto sampler = machina_sampler(3);
        CHECK(run_comparative(which, model, model, sampler, 100).holds);
    }
}

TEST_CASE("ex ante randomization") {
    auto model = machina::model_5051(5);
    auto eu = expected_utility(Prior({0.25, 0.25, 0.25, 0.25}));
    auto s1 = machina_sampler(4);
    CHECK(more_tolerant_ea_randomization(eu, model, s1, 200).holds);
    auto s2 = machina_sampler(4);
    auto v = more_tolerant_ea_randomization(model, eu, s2, 200);
    CHECK_FALSE(v.holds);
    REQUIRE(v.counterexample);
    CHECK(witness_violates(Comparative::ExAnteRandomization, model, eu, *v.counterexample, 1e-7));
    CHECK(parse_comparative(to_string(Comparative::Ambiguity)) == Comparative::Ambiguity);
}

TEST_CASE("ambiguity tolerance") {
    auto model = machina::model_5051(5);
    auto half = with_cost_scale(model, 0.5);
    auto free = with_cost_scale(model, 0.0);
    auto s1 = machina_sampler(5);
    CHECK(more_tolerant_ambiguity(half, model, s1, 200).holds);
    auto s2 = machina_sampler(5);
    auto v = more_tolerant_ambiguity(model, free, s2, 200);
    CHECK_FALSE(v.holds);
    REQUIRE(v.counterexample);
    CHECK(witness_violates(Comparative::Ambiguity, model, free, *v.counterexample, 1e-7));
}

TEST_CASE("filtering incentives") {
    auto model = machina::model_5051(5);
    auto free = with_cost_scale(model, 0.0);
    auto s1 = machina_sampler(6);
    CHECK(higher_filtering_incentives(free, model, s1, 300).holds);
    auto s2 = machina_sampler(6);
    auto v = higher_filtering_incentives(model, free, s2, 300);
    CHECK_FALSE(v.holds);
    REQUIRE(v.counterexample);
    CHECK(witness_violates(Comparative::FilteringIncentives, model, free, *v.counterexample, 1e-7));
}

TEST_CASE("benefit dominance") {
    const auto family = machina::family_5051(5);
    std::vector<double> zero{0, 0}, one{1, 1};
    std::vector<BeliefSet> small{family.set_at(zero)}, large{family.set_at(one)};
    LotterySampler sampler(4, 8);
    auto d = dominates_benefit(small, large, sampler, 200);
    CHECK(d.holds);
    CHECK_FALSE(d.contradiction);
    CHECK(dominates_benefit(large, large, sampler, 50).holds);
    CHECK_FALSE(dominates_benefit(large, small, sampler, 50).holds);

    auto sets = machina::dual_self_sets();
    auto a = dominates_benefit({sets[0]}, {sets[1]}, sampler, 200);
    CHECK_FALSE(a.holds);
    CHECK(a.sampled_failures > 0);
    CHECK_FALSE(dominates_benefit({sets[1]}, {sets[0]}, sampler, 50).holds);
}

}
