#include "cap/axioms.hpp"
#include "cap/errors.hpp"
#include "cap/machina.hpp"

#include <doctest.h>

#include <cmath>

using namespace cap;

namespace {

std::vector<UtilityAct> machina_acts() {
    std::vector<UtilityAct> acts;
    for (int i = 1; i <= 10; ++i) acts.push_back(machina::act(i));
    return acts;
}

bool check(const CapModel& model, AxiomId axiom, std::uint64_t seed, std::size_t n = 300) {
    SamplerConfig config;
    if (model.states().size() == 4) config.act_pool = machina_acts();
    LotterySampler sampler(model.states().size(), seed, config);
    return check_axiom(model, axiom, sampler, n).holds;
}

} // namespace

TEST_SUITE("axioms") {

TEST_CASE("names round-trip") {
    for (auto id : all_axioms()) CHECK(parse_axiom(to_string(id)) == id);
    CHECK(parse_axiom("A-sica") == AxiomId::Sica);
    CHECK_THROWS_AS(parse_axiom("A9"), InvalidArgument);
}

TEST_CASE("comonotonicity") {
    CHECK(comonotonic(UtilityAct({1, 2, 3}), UtilityAct({0, 5, 9})));
    CHECK(comonotonic(UtilityAct({1, 1, 3}), UtilityAct({4, 0, 9})));
    CHECK_FALSE(comonotonic(UtilityAct({1, 2}), UtilityAct({2, 1})));
    CHECK(comonotonic(UtilityAct({5, 5}), UtilityAct({2, 1})));
}

TEST_CASE("core axioms hold for random cap models") {
    Rng rng(101);
    for (int m = 0; m < 4; ++m) {
        auto model = random_model(rng, 2 + rng.index(3), 8, ModelClass::Cap);
        for (auto id : {AxiomId::Nondegeneracy, AxiomId::Fsd, AxiomId::Aepr, AxiomId::Imtc, AxiomId::Eaar,
                        AxiomId::Ica})
            CHECK_MESSAGE(check(model, id, 7 + m), to_string(id));
    }
}

TEST_CASE("variant-specific axioms") {
    Rng rng(202);
    CHECK(check(random_model(rng, 3, 6, ModelClass::Cautious), AxiomId::Eapr, 1));
    CHECK(check(random_model(rng, 3, 6, ModelClass::DualSelf), AxiomId::Sica, 2));
    CHECK(check(random_model(rng, 3, 6, ModelClass::MoralHazard), AxiomId::Imt, 3));
    CHECK(check(random_model(rng, 3, 6, ModelClass::ChoquetCore), AxiomId::Imtcm, 4));
    auto double_maxmin = random_model(rng, 3, 6, ModelClass::DoubleMaxmin);
    CHECK(check(double_maxmin, AxiomId::Psr, 5));
    CHECK(check(double_maxmin, AxiomId::Eapr, 6));
}

TEST_CASE("the 50-51 model is ex ante averse and not sica") {
    auto model = machina::model_5051(5);
    CHECK(check(model, AxiomId::Eaar, 5, 200));
    auto w = machina::sica_witness_5051(model);
    CHECK(w.lambda == doctest::Approx(0.5));
    CHECK(reverify(model, w, 1e-8));
    CHECK(violation_margin(model, w) > 1e-3);
}

TEST_CASE("Appendix C family under dual-self satisfies sica") {
    auto model = machina::dual_self_model(machina::dual_self_sets());
    CHECK(check(model, AxiomId::Sica, 6, 300));
}

TEST_CASE("mixture timing") {
    auto w = machina::imt_witness_bets();
    CHECK(reverify(machina::model_reflection(), w, 1e-8));
    CHECK(reverify(machina::model_5051(), w, 1e-8));

    Rng rng(9);
    auto hazard = random_model(rng, 4, 5, ModelClass::MoralHazard);
    CHECK_FALSE(reverify(hazard, w, 1e-8));
}

TEST_CASE("timing witness construction") {
    auto w = timing_witness(UtilityAct({100, 0}), UtilityAct({0, 100}), 0.5, 1.0, Lottery::constant(2, 0.0));
    CHECK(w.indifference);
    CHECK(w.lambda == 0.5);
    // Statewise mixing hedges: the ex post side is the constant 50 act.
    bool found = false;
    for (const auto& side : {w.conclusion.left, w.conclusion.right})
        for (const auto& a : side.atoms())
            if (a.act == UtilityAct({50, 50})) found = true;
    CHECK(found);
}

TEST_CASE("checks are deterministic in the seed") {
    Rng rng(55);
    auto model = random_model(rng, 3, 6, ModelClass::Cap);
    LotterySampler a(3, 12), b(3, 12);
    auto ra = check_axiom(model, AxiomId::Sica, a, 300);
    auto rb = check_axiom(model, AxiomId::Sica, b, 300);
    CHECK(ra.holds == rb.holds);
    CHECK(ra.trials == rb.trials);
    if (ra.counterexample) CHECK(ra.counterexample->violation == rb.counterexample->violation);
}

TEST_CASE("dual-self auxiliary acts") {
    LotterySampler sampler(4, 3);
    auto report = machina::dual_self_property(machina::dual_self_sets_5051(), sampler, 50);
    CHECK(report.holds);
    CHECK(report.affinity_error <= 1e-9);
    CHECK(report.f1 > report.f2);
    CHECK(report.f3 > report.f4);

    Rng rng(4);
    std::vector<BeliefSet> random_sets;
    for (int i = 0; i < 10; ++i) random_sets.push_back(machina::random_box_set(rng));
    CHECK(machina::dual_self_property(random_sets, sampler, 50).holds);

    CHECK_THROWS_AS(machina::dual_self_property(machina::dual_self_sets(), sampler, 5), InvalidArgument);
}

}
