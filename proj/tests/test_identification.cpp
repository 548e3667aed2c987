#include "cap/errors.hpp"
#include "cap/identification.hpp"
#include "cap/machina.hpp"

#include <doctest.h>

#include <algorithm>
#include <array>

using namespace cap;

namespace {

bool holds_set(const std::vector<BeliefSet>& sets, const BeliefSet& target) {
    return std::any_of(sets.begin(), sets.end(), [&](const BeliefSet& s) { return same_set(s, target); });
}

double exhaustive_three_atom(const CapModel& model, const BeliefSet& set, const std::vector<UtilityAct>& acts) {
    static const std::array<std::array<double, 3>, 6> weights{{
        {1, 0, 0}, {0.5, 0.5, 0}, {0.5, 0, 0.5}, {0, 0.5, 0.5}, {0.5, 0.25, 0.25}, {1.0 / 3, 1.0 / 3, 1.0 / 3}}};
    double best = 0.0;
    for (std::size_t i = 0; i < acts.size(); ++i)
        for (std::size_t j = i + 1; j < acts.size(); ++j)
            for (std::size_t k = j + 1; k < acts.size(); ++k)
                for (const auto& w : weights) {
                    std::vector<Atom> atoms;
                    if (w[0] > 0) atoms.push_back({w[0], acts[i]});
                    if (w[1] > 0) atoms.push_back({w[1], acts[j]});
                    if (w[2] > 0) atoms.push_back({w[2], acts[k]});
                    best = std::max(best, cost_supremand(model, set, Lottery(atoms)));
                }
    return best;
}

} // namespace

TEST_SUITE("identification") {

TEST_CASE("direction normalisation") {
    CHECK(normalize_direction(UtilityAct({3, 5, 1})) == UtilityAct({0, 1, -1}));
    CHECK(normalize_direction(UtilityAct({2, 2})) == UtilityAct({0, 0}));
    auto d = Dictionary::standard(3, {1.0});
    for (const auto& a : d.acts()) {
        CHECK(a[0] == 0.0);
        CHECK_FALSE(a.is_constant());
    }
    CHECK(d.atoms().front().is_constant());
}

TEST_CASE("largest box has zero cost") {
    auto model = machina::model_5051(5);
    const auto& family = std::get<ParametricFamily>(model.family());
    std::vector<double> theta{1.0, 1.0};
    auto est = estimate_cost_star(model, family.set_at(theta), Dictionary::standard(4), {.budget = 2000, .seed = 1});
    CHECK(est.value >= 0.0);
    CHECK(est.value <= 1e-3);
}

TEST_CASE("smallest box recovers its cost and the search agrees with an exhaustive oracle") {
    auto model = machina::model_5051(5);
    const auto& family = std::get<ParametricFamily>(model.family());
    std::vector<double> theta{0.0, 0.0};
    auto set = family.set_at(theta);

    std::vector<UtilityAct> acts;
    const auto dictionary = Dictionary::standard(4);
    for (const auto& a : dictionary.acts()) acts.push_back(a.scaled(1000.0));
    double oracle = exhaustive_three_atom(model, set, acts);
    CHECK(oracle >= 49.9);

    auto est = estimate_cost_star(model, set, Dictionary::standard(4), {.budget = 2000, .seed = 2});
    CHECK(est.value >= 49.5);
    CHECK(est.value <= 50.0 + 1e-3);
    CHECK(est.value >= oracle - 1e-3);
    CHECK(cost_supremand(model, set, est.support_witness) == doctest::Approx(est.value));
    CHECK(est.dictionary_upper_bound >= est.value - 1e-9);
}

TEST_CASE("full simplex at zero cost") {
    auto s = numbered_states(3);
    FiniteFamily family{{{"all", BeliefSet::simplex(3), 0.0, std::nullopt},
                         {"point", BeliefSet::singleton(Prior::uniform(3)), 4.0, std::nullopt}}};
    CapModel model(s, family, Variant::Cap);
    auto est = estimate_cost_star(model, BeliefSet::simplex(3), Dictionary::standard(3), {.budget = 500});
    CHECK(est.value == doctest::Approx(0.0));
    auto point = estimate_cost_star(model, BeliefSet::singleton(Prior::uniform(3)), Dictionary::standard(3),
                                    {.budget = 1000});
    CHECK(point.value <= 4.0 + 1e-6);
    CHECK(point.value >= 3.9);
}

TEST_CASE("minimising variants are rejected") {
    Rng rng(1);
    auto model = random_model(rng, 3, 3, ModelClass::Cautious);
    CHECK_THROWS_AS(estimate_cost_star(model, BeliefSet::simplex(3), Dictionary::standard(3)), InvalidArgument);
}

TEST_CASE("estimates are reproducible") {
    auto model = machina::model_reflection(5);
    const auto& family = std::get<ParametricFamily>(model.family());
    std::vector<double> theta{0.5, 0.0};
    EstimateOptions options{.budget = 600, .seed = 9};
    auto a = estimate_cost_star(model, family.set_at(theta), Dictionary::standard(4), options);
    auto b = estimate_cost_star(model, family.set_at(theta), Dictionary::standard(4), options);
    CHECK(a.value == b.value);
}

TEST_CASE("canonical checks") {
    CHECK(check_canonical(machina::family_5051(5)).canonical());
    CHECK(check_canonical(machina::family_reflection(5)).canonical());

    BeliefSet small({Prior({0.4, 0.6}), Prior({0.5, 0.5})});
    FiniteFamily bad{{{"small", small, 0.0, std::nullopt}, {"large", BeliefSet::simplex(2), 1.0, std::nullopt}}};
    auto report = check_canonical(bad);
    CHECK_FALSE(report.canonical());
    REQUIRE(report.monotonicity_violations.size() == 1);
    CHECK(report.monotonicity_violations[0].smaller == 0);
    CHECK(report.monotonicity_violations[0].larger == 1);

    FiniteFamily single{{{"only", small, 0.0, std::nullopt}}};
    CHECK(check_canonical(single).canonical());
}

TEST_CASE("multi-MEU core of the dual-self model") {
    auto sets = machina::dual_self_sets();
    auto model = machina::dual_self_model(sets);
    std::vector<UtilityAct> pool;
    for (int i = 1; i <= 10; ++i) pool.push_back(machina::act(i));
    LotterySampler sampler(4, 7, {.act_pool = pool});
    auto core = estimate_multi_meu_core(model, sampler, 200);
    CHECK(holds_set(core, sets[0]));
    CHECK(holds_set(core, sets[1]));
}

TEST_CASE("multi-MEU core of a singleton family") {
    BeliefSet only({Prior({0.2, 0.8}), Prior({0.6, 0.4})});
    CapModel model(numbered_states(2), FiniteFamily{{{"only", only, 0.0, std::nullopt}}}, Variant::Cap);
    LotterySampler sampler(2, 3);
    auto core = estimate_multi_meu_core(model, sampler, 50);
    REQUIRE(core.size() == 1);
    CHECK(same_set(core[0], only));
}

TEST_CASE("multi-MEU core of the 50-51 family") {
    auto model = machina::model_5051(5);
    const auto& family = std::get<ParametricFamily>(model.family());
    LotterySampler sampler(4, 7, {.act_pool = {machina::act(1), machina::act(2), machina::act(3), machina::act(4)}});
    auto core = estimate_multi_meu_core(model, sampler, 200);
    std::vector<double> full{1.0, 1.0}, f2{1.0, 0.0};
    CHECK(holds_set(core, family.set_at(full)));
    CHECK(holds_set(core, family.set_at(f2)));
}

}
