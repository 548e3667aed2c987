#pragma once

// Stock data of the Machina 50-51, reflection and Ellsberg examples, the
// cost-free two-set family of the dual-self analysis, and the auxiliary-act
// property of that analysis.

#include "cap/axioms.hpp"
#include "cap/model.hpp"
#include "cap/sampling.hpp"

#include <optional>
#include <string>
#include <vector>

namespace cap::machina {

/// red, blue, green, purple.
StateSpace states();

inline constexpr double kRedBlue = 50.0 / 101.0;
inline constexpr double kGreenPurple = 51.0 / 101.0;

/// f1..f10 (Tables 1-3), index 1-based.
UtilityAct act(int index);
/// Auxiliary acts g = (300,300,0,0), h = (300,0,300,0), p = 150·1.
UtilityAct auxiliary_g();
UtilityAct auxiliary_h();
UtilityAct auxiliary_p();

/// blue ∈ p/2 ± βp/2, green ∈ q/2 ± γq/2; cost 50 - 25β - 25γ.
ParametricFamily family_5051(std::size_t grid_resolution = 101);
/// blue ∈ 1/4 ± β/4, green ∈ 1/4 ± γ/4; cost 60 - 30β - 30γ.
ParametricFamily family_reflection(std::size_t grid_resolution = 101);

CapModel model_5051(std::size_t grid_resolution = 101);
CapModel model_reflection(std::size_t grid_resolution = 101);

/// M1 = {blue = 1/4, green ∈ [0,1/2]}, M2 = {green = 1/4, blue ∈ [0,1/2]}.
std::vector<BeliefSet> dual_self_sets();
/// The same two slices placed in the 50-51 box.
std::vector<BeliefSet> dual_self_sets_5051();

CapModel dual_self_model(const std::vector<BeliefSet>& sets);

/// Random polytope with red+blue = 50/101 on every vertex.
BeliefSet random_box_set(Rng& rng, std::size_t max_vertices = 4);

/// Separation witnesses: the 50-51 model against strong independence of
/// constant acts (P = δf2, λ = 1/2) and against mixture timing (bets on blue
/// and red, κ = 1, λ = 1/2); the reflection model against mixture timing.
AxiomWitness sica_witness_5051(const CapModel& model);
AxiomWitness imt_witness_bets();

struct PropertyReport {
    bool holds = true;
    std::size_t trials = 0;
    /// Largest deviation from U(αg + (1-α)x) = α·U(g) + (1-α)·U(x).
    double affinity_error = 0.0;
    double f1 = 0.0, f2 = 0.0, f3 = 0.0, f4 = 0.0;
    std::optional<std::string> counterexample;
};

/// Dual-self model on the given sets: U is affine along mixtures with g, so
/// f1 ≻ f2 forces f3 ≻ f4. Throws InvalidArgument for a set outside the box.
PropertyReport dual_self_property(const std::vector<BeliefSet>& sets, LotterySampler& sampler,
                                  std::size_t trials = 100);

} // namespace cap::machina
