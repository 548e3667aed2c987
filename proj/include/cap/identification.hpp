#pragma once

// Recovering the canonical filtering cost from behaviour, approximating the
// multi-MEU core, and checking canonicality of a cost structure.

#include "cap/model.hpp"
#include "cap/sampling.hpp"

#include <cstdint>
#include <limits>
#include <vector>

namespace cap {

/// Normalised act directions (first-state payoff 0, max |payoff| 1) and a
/// ladder of positive scales. Lotteries are searched over the atoms α·ψ.
class Dictionary {
public:
    /// Normalises, drops constant acts and duplicates.
    Dictionary(std::vector<UtilityAct> acts, std::vector<double> scales);

    /// Indicator bets, their negatives, and all ordered pairwise differences.
    static Dictionary standard(std::size_t states, std::vector<double> scales = {1.0, 10.0, 100.0, 1000.0});

    const std::vector<UtilityAct>& acts() const noexcept { return acts_; }
    const std::vector<double>& scales() const noexcept { return scales_; }

    /// The zero act followed by every scale × act combination.
    std::vector<UtilityAct> atoms() const;

private:
    std::vector<UtilityAct> acts_;
    std::vector<double> scales_;
};

/// Normalises an act to the dictionary convention; constant acts map to zero.
UtilityAct normalize_direction(const UtilityAct& act);

struct CostEstimate {
    /// Best supremand found, clamped below at 0.
    double value = 0.0;
    /// Always true: the value is attained by `support_witness`.
    bool is_lower_bound = true;
    Lottery support_witness = Lottery::constant(2, 0.0);
    /// Upper bound on the sup over the dictionary (cutting-plane bound), +inf
    /// when the polish phase is disabled.
    double dictionary_upper_bound = std::numeric_limits<double>::infinity();
    std::size_t iterations = 0;
};

struct EstimateOptions {
    /// Total supergradient iterations, split evenly over the restarts.
    std::size_t budget = 5000;
    std::size_t restarts = 16;
    std::uint64_t seed = 0;
    /// Cutting-plane polish after the ascent.
    bool polish = true;
    bool parallel = true;
};

/// Lower bound of sup_P [Σ prob·support_value(M, act) - U(P)] over lotteries
/// on the dictionary. Requires a maximising variant (cap, dual_self, choquet).
CostEstimate estimate_cost_star(const CapModel& model, const BeliefSet& set, const Dictionary& dictionary,
                                const EstimateOptions& options = {});

/// Σ prob·support_value(set, act) - U(lottery).
double cost_supremand(const CapModel& model, const BeliefSet& set, const Lottery& lottery);

struct DomainProbe {
    /// Estimate using the first 1, 2, ... rungs of the scale ladder.
    std::vector<double> estimates;
    /// Heuristic: false when the estimate keeps growing in proportion to the
    /// scale, suggesting the set lies outside the domain of the canonical cost.
    bool bounded = true;
};

DomainProbe probe_cost_domain(const CapModel& model, const BeliefSet& set, const Dictionary& dictionary,
                              const EstimateOptions& options = {});

struct CanonicalReport {
    struct Monotonicity {
        std::size_t smaller;
        std::size_t larger;
    };
    enum class ConvexityKind { Membership, Cost };
    struct Convexity {
        std::size_t first;
        std::size_t second;
        double lambda;
        ConvexityKind kind;
    };

    FiniteFamily members;
    std::vector<Monotonicity> monotonicity_violations;
    std::vector<Convexity> convexity_violations;

    bool canonical() const noexcept { return monotonicity_violations.empty() && convexity_violations.empty(); }
};

/// Inclusion monotonicity of costs and mixture convexity of the family and
/// the cost at λ ∈ {0.25, 0.5, 0.75}. Parametric families are sampled onto
/// their grid; mixtures of parametric members are compared with M(mixed θ).
CanonicalReport check_canonical(const PerceptionFamily& family);

/// Deduplicated union of optimal perceptions over n sampled lotteries; an
/// inner approximation of the multi-MEU core that grows with n.
std::vector<BeliefSet> estimate_multi_meu_core(const CapModel& model, LotterySampler& sampler, std::size_t n);

} // namespace cap
