#pragma once

// Executable versions of the behavioural axioms, checked by seeded sampling
// against any model.

#include "cap/model.hpp"
#include "cap/sampling.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace cap {

inline constexpr double kAxiomTolerance = 1e-7;

enum class AxiomId {
    Nondegeneracy, // A1, reduced to the existence of a strict ranking
    Fsd,           // A2
    Aepr,          // A3 attraction to ex post randomization
    Imtc,          // A4 indifference to mixture timing of constant acts
    Eaar,          // A5 ex ante aversion to randomization
    Ica,           // A6 independence of constant acts
    Imtcm,         // indifference to mixture timing of comonotonic acts
    Imt,           // indifference to mixture timing
    Sica,          // strong independence of constant acts
    Eapr,          // ex ante attraction to randomization
    Psr,           // preference for statewise randomization
};

std::string_view to_string(AxiomId id);
AxiomId parse_axiom(std::string_view name);
const std::vector<AxiomId>& all_axioms();

/// Claim U(left) >= U(right), or U(left) == U(right) for indifference claims.
struct Comparison {
    Lottery left;
    Lottery right;
};

struct AxiomWitness {
    /// Weak preference that holds in the witness (conditional axioms).
    std::optional<Comparison> premise;
    Comparison conclusion;
    bool indifference = false;
    double lambda = 0.0;
    double kappa = 0.0;
    /// Violation measured when the witness was found.
    double violation = 0.0;
};

struct AxiomReport {
    AxiomId axiom = AxiomId::Nondegeneracy;
    bool holds = true;
    std::optional<AxiomWitness> counterexample;
    std::size_t trials = 0;
};

/// n seeded trials of the axiom's condition at the given tolerance; the
/// first violation found is returned as the counterexample.
AxiomReport check_axiom(const CapModel& model, AxiomId axiom, LotterySampler& sampler, std::size_t n,
                        double tolerance = kAxiomTolerance);

/// How far the witness's conclusion is violated (> 0 means violated);
/// -inf when its premise no longer holds.
double violation_margin(const CapModel& model, const AxiomWitness& witness);

/// Whether the witness still violates the axiom at `tolerance`.
bool reverify(const CapModel& model, const AxiomWitness& witness, double tolerance);

/// No pair of states ranked strictly in opposite directions (ties are
/// compatible with either order).
bool comonotonic(const UtilityAct& f, const UtilityAct& g);

/// Hand-built witnesses: the ex ante/ex post timing comparison for a pair of
/// acts, and the constant-mixture comparison with a constant tied to P.
AxiomWitness timing_witness(const UtilityAct& f, const UtilityAct& g, double lambda, double kappa,
                            const Lottery& rest);
AxiomWitness strong_independence_witness(const CapModel& model, const Lottery& p, double lambda);

} // namespace cap
