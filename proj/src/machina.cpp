#include "cap/machina.hpp"

#include "cap/errors.hpp"

#include <algorithm>
#include <cmath>

namespace cap::machina {

namespace {

constexpr double kStrict = 1e-7;

AffineExpression affine(double c, double beta, double gamma) { return {c, {beta, gamma}}; }

// Box with blue ∈ a/2 ± βa/2 and green ∈ b/2 ± γb/2 (red = a - blue,
// purple = b - green).
ParametricFamily box_family(double a, double b, AffineExpression cost, std::size_t grid) {
    std::vector<std::vector<AffineExpression>> templates;
    for (double sb : {-1.0, 1.0}) {
        for (double sg : {-1.0, 1.0}) {
            templates.push_back({affine(a / 2, -sb * a / 2, 0), affine(a / 2, sb * a / 2, 0),
                                 affine(b / 2, 0, sg * b / 2), affine(b / 2, 0, -sg * b / 2)});
        }
    }
    return ParametricFamily({"beta", "gamma"}, std::move(templates), std::move(cost), grid);
}

} // namespace

StateSpace states() { return StateSpace({"red", "blue", "green", "purple"}); }

UtilityAct act(int index) {
    static const std::vector<std::vector<double>> table = {
        {200, 200, 100, 100}, {200, 100, 200, 100}, {300, 200, 100, 0}, {300, 100, 200, 0},
        {100, 200, 100, 0},   {100, 100, 200, 0},   {0, 200, 100, 100}, {0, 100, 200, 100},
        {100, 100, 0, 0},     {0, 100, 100, 0},
    };
    if (index < 1 || index > static_cast<int>(table.size())) throw InvalidArgument("no act f" + std::to_string(index));
    return UtilityAct(table[static_cast<std::size_t>(index - 1)]);
}

UtilityAct auxiliary_g() { return UtilityAct({300, 300, 0, 0}); }
UtilityAct auxiliary_h() { return UtilityAct({300, 0, 300, 0}); }
UtilityAct auxiliary_p() { return UtilityAct::constant(4, 150); }

ParametricFamily family_5051(std::size_t grid_resolution) {
    return box_family(kRedBlue, kGreenPurple, affine(50, -25, -25), grid_resolution);
}

ParametricFamily family_reflection(std::size_t grid_resolution) {
    return box_family(0.5, 0.5, affine(60, -30, -30), grid_resolution);
}

CapModel model_5051(std::size_t grid_resolution) {
    return CapModel(states(), family_5051(grid_resolution), Variant::Cap);
}

CapModel model_reflection(std::size_t grid_resolution) {
    return CapModel(states(), family_reflection(grid_resolution), Variant::Cap);
}

std::vector<BeliefSet> dual_self_sets() {
    return {BeliefSet({Prior({0.25, 0.25, 0.0, 0.5}), Prior({0.25, 0.25, 0.5, 0.0})}),
            BeliefSet({Prior({0.5, 0.0, 0.25, 0.25}), Prior({0.0, 0.5, 0.25, 0.25})})};
}

std::vector<BeliefSet> dual_self_sets_5051() {
    const double p = kRedBlue, q = kGreenPurple;
    return {BeliefSet({Prior({p / 2, p / 2, 0.0, q}), Prior({p / 2, p / 2, q, 0.0})}),
            BeliefSet({Prior({p, 0.0, q / 2, q / 2}), Prior({0.0, p, q / 2, q / 2})})};
}

CapModel dual_self_model(const std::vector<BeliefSet>& sets) {
    FiniteFamily family;
    for (std::size_t i = 0; i < sets.size(); ++i) family.members.push_back({"M" + std::to_string(i + 1), sets[i], 0.0, {}});
    return CapModel(states(), std::move(family), Variant::DualSelf);
}

BeliefSet random_box_set(Rng& rng, std::size_t max_vertices) {
    const std::size_t count = 1 + rng.index(max_vertices);
    std::vector<Prior> v;
    for (std::size_t i = 0; i < count; ++i) {
        const double blue = rng.uniform(0.0, kRedBlue);
        const double green = rng.uniform(0.0, kGreenPurple);
        v.emplace_back(std::vector<double>{kRedBlue - blue, blue, green, kGreenPurple - green});
    }
    return BeliefSet(std::move(v));
}

AxiomWitness sica_witness_5051(const CapModel& model) {
    return strong_independence_witness(model, Lottery::degenerate(act(2)), 0.5);
}

AxiomWitness imt_witness_bets() {
    return timing_witness(UtilityAct({0, 100, 0, 0}), UtilityAct({100, 0, 0, 0}), 0.5, 1.0, Lottery::constant(4, 0.0));
}

PropertyReport dual_self_property(const std::vector<BeliefSet>& sets, LotterySampler& sampler, std::size_t trials) {
    if (sets.empty()) throw InvalidArgument("dual_self_property: empty family");
    for (std::size_t i = 0; i < sets.size(); ++i) {
        detail::require_same_size(sets[i].dimension(), 4, "dual_self_property");
        for (const auto& v : sets[i].vertices()) {
            if (std::abs(v[0] + v[1] - kRedBlue) > 1e-9) {
                throw InvalidArgument("dual_self_property: set " + std::to_string(i) +
                                      " leaves the 50-51 box (P(red or blue) != 50/101)");
            }
        }
    }
    const CapModel model = dual_self_model(sets);
    PropertyReport report;
    const UtilityAct g = auxiliary_g();
    const double ug = utility(model, g);
    for (std::size_t t = 0; t < trials; ++t) {
        ++report.trials;
        const double alpha = sampler.rng().uniform();
        const UtilityAct x = t % 3 == 0 ? auxiliary_h() : t % 3 == 1 ? auxiliary_p() : sampler.random_act();
        const double lhs = utility(model, mix_acts(alpha, g, x));
        const double rhs = alpha * ug + (1 - alpha) * utility(model, x);
        report.affinity_error = std::max(report.affinity_error, std::abs(lhs - rhs));
    }
    report.f1 = utility(model, act(1));
    report.f2 = utility(model, act(2));
    report.f3 = utility(model, act(3));
    report.f4 = utility(model, act(4));
    if (report.affinity_error > kAxiomTolerance) {
        report.holds = false;
        report.counterexample = "U not affine along mixtures with g (deviation " + std::to_string(report.affinity_error) + ")";
    } else if (report.f1 > report.f2 + kStrict && !(report.f3 > report.f4)) {
        report.holds = false;
        report.counterexample = "f1 > f2 but not f3 > f4";
    }
    return report;
}

} // namespace cap::machina
