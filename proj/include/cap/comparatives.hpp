#pragma once

// Comparative statics between two decision makers: tolerance of ex ante
// randomization, tolerance of ambiguity, filtering incentives, and the
// benefit-dominance order on perception families.

#include "cap/model.hpp"
#include "cap/sampling.hpp"

#include <optional>
#include <string>
#include <vector>

namespace cap {

inline constexpr double kComparativeTolerance = 1e-7;

/// Outcome of testing whether U is affine along the segment [P, Q].
struct SharingCheck {
    /// |U(λP+(1-λ)Q) - λU(P) - (1-λ)U(Q)| <= 1e-7 at λ = 0.1, ..., 0.9.
    bool linear = false;
    /// The optimal perception sets at P and Q intersect.
    bool argmax_intersects = false;
    double max_deviation = 0.0;

    bool agree() const noexcept { return linear == argmax_intersects; }
};

SharingCheck check_shared_perception(const CapModel& model, const Lottery& p, const Lottery& q);

/// The linearity answer of check_shared_perception. Cap-family variants only.
bool shares_optimal_perception(const CapModel& model, const Lottery& p, const Lottery& q);

enum class Comparative { ExAnteRandomization, Ambiguity, FilteringIncentives };

std::string_view to_string(Comparative c);
Comparative parse_comparative(std::string_view name);

struct ComparativeWitness {
    Lottery p;
    Lottery q;
    double lambda = 0.0;
    /// Constant utility level (ambiguity, filtering incentives).
    double level = 0.0;
};

struct ComparativeVerdict {
    bool holds = true;
    std::optional<ComparativeWitness> counterexample;
    std::size_t samples_used = 0;
    /// Samples where the linearity and argmax-intersection tests disagreed.
    std::size_t diagnostics = 0;
};

ComparativeVerdict more_tolerant_ea_randomization(const CapModel& first, const CapModel& second,
                                                  LotterySampler& sampler, std::size_t n);
ComparativeVerdict more_tolerant_ambiguity(const CapModel& first, const CapModel& second, LotterySampler& sampler,
                                           std::size_t n);
ComparativeVerdict higher_filtering_incentives(const CapModel& first, const CapModel& second,
                                               LotterySampler& sampler, std::size_t n);

ComparativeVerdict run_comparative(Comparative which, const CapModel& first, const CapModel& second,
                                   LotterySampler& sampler, std::size_t n);

/// Re-evaluates a witness directly; true when it still violates the
/// relation by more than `tolerance`.
bool witness_violates(Comparative which, const CapModel& first, const CapModel& second,
                      const ComparativeWitness& witness, double tolerance);

struct BenefitDominance {
    /// Every member of the second family contains some member of the first.
    bool holds = false;
    /// A sampled lottery where the best-case expected MEU of the first family
    /// falls below the second's although `holds` is true. Never expected.
    std::optional<Lottery> contradiction;
    /// Lotteries where the sampled form fails (all of them legitimate when
    /// `holds` is false).
    std::size_t sampled_failures = 0;
    std::size_t samples_used = 0;
};

BenefitDominance dominates_benefit(const std::vector<BeliefSet>& first, const std::vector<BeliefSet>& second,
                                   LotterySampler& sampler, std::size_t n);

} // namespace cap
