#pragma once

// Lotteries over utility acts, perception families with their filtering
// costs, and the five evaluator variants built on the nested MEU functional.

#include "cap/geometry.hpp"

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace cap {

inline constexpr double kGroundednessTolerance = 1e-9;
inline constexpr double kRefinementTolerance = 1e-8;

struct Atom {
    double probability = 0.0;
    UtilityAct act;
};

/// Finitely supported distribution over utility acts.
class Lottery {
public:
    explicit Lottery(std::vector<Atom> atoms);

    static Lottery degenerate(UtilityAct act);
    static Lottery constant(std::size_t states, double value);

    const std::vector<Atom>& atoms() const noexcept { return atoms_; }
    std::size_t dimension() const noexcept { return atoms_.front().act.size(); }

    /// Every act shifted by t·1.
    Lottery shifted(double t) const;

private:
    std::vector<Atom> atoms_;
};

/// Ex ante mixture λP + (1-λ)Q; atoms with identical acts are merged.
Lottery mix_lotteries(double lambda, const Lottery& p, const Lottery& q);

/// Σ prob · support_value(set, act).
double expected_meu(const BeliefSet& set, const Lottery& lottery);

enum class Variant { Cap, Cautious, DualSelf, DoubleMaxmin, Choquet };

std::string_view to_string(Variant v);
Variant parse_variant(std::string_view name);

/// constant + Σ coefficients[j]·θ[j]
struct AffineExpression {
    double constant = 0.0;
    std::vector<double> coefficients;

    double at(std::span<const double> theta) const;
    /// Minimum over the unit box [0,1]^k.
    double box_minimum() const;
    bool is_zero() const;
};

struct FamilyMember {
    std::string label;
    BeliefSet set;
    double cost = 0.0;
    /// Present for optimal-ambiguity-perception (Choquet) families; `set` is
    /// then the core of this capacity.
    std::optional<ConvexCapacity> capacity;
};

struct FiniteFamily {
    std::vector<FamilyMember> members;
};

/// θ ↦ M(θ) with every vertex coordinate affine in θ ∈ [0,1]^k and an affine
/// cost. Searched on a grid of `grid_resolution` points per axis.
class ParametricFamily {
public:
    ParametricFamily(std::vector<std::string> parameters,
                     std::vector<std::vector<AffineExpression>> vertex_templates, AffineExpression cost,
                     std::size_t grid_resolution);

    std::size_t parameter_count() const noexcept { return parameters_.size(); }
    std::size_t states() const noexcept { return templates_.front().size(); }
    const std::vector<std::string>& parameters() const noexcept { return parameters_; }
    const std::vector<std::vector<AffineExpression>>& vertex_templates() const noexcept { return templates_; }
    const AffineExpression& cost() const noexcept { return cost_; }
    std::size_t grid_resolution() const noexcept { return grid_resolution_; }

    BeliefSet set_at(std::span<const double> theta) const;
    double cost_at(std::span<const double> theta) const { return cost_.at(theta); }

    /// All grid points, row-major, first parameter slowest.
    std::vector<std::vector<double>> grid_points() const;
    std::vector<std::vector<double>> corners() const;

    ParametricFamily with_grid(std::size_t grid_resolution) const;

    /// Grid members as a finite family (labels are the parameter tuples).
    FiniteFamily sampled() const;

private:
    std::vector<std::string> parameters_;
    std::vector<std::vector<AffineExpression>> templates_;
    AffineExpression cost_;
    std::size_t grid_resolution_;
};

using PerceptionFamily = std::variant<FiniteFamily, ParametricFamily>;

std::size_t family_states(const PerceptionFamily& family);
/// Finite families unchanged; parametric families sampled onto their grid.
FiniteFamily as_finite(const PerceptionFamily& family);

class CapModel {
public:
    /// Validates dimensions, groundedness, and the variant's restrictions.
    CapModel(StateSpace states, PerceptionFamily family, Variant variant);

    const StateSpace& states() const noexcept { return states_; }
    const PerceptionFamily& family() const noexcept { return family_; }
    Variant variant() const noexcept { return variant_; }

    /// True for the max-over-perceptions variants (cap, dual-self, choquet).
    bool maximizes() const noexcept;

    CapModel with_family(PerceptionFamily family) const { return {states_, std::move(family), variant_}; }

private:
    StateSpace states_;
    PerceptionFamily family_;
    Variant variant_;
};

struct OptimalPerception {
    /// Member index for finite families.
    std::optional<std::size_t> index;
    /// Parameter vector for parametric families.
    std::vector<double> parameters;
    std::string label;
    double cost = 0.0;
    /// Expected MEU minus (or plus, for cautious) the cost at this perception.
    double objective = 0.0;
};

struct EvaluationResult {
    double value = 0.0;
    double certainty_equivalent = 0.0;
    std::vector<OptimalPerception> optimal_perceptions;
};

/// Relative optimality tolerance 1e-9·max(1, |value|).
double optimality_tolerance(double value);

EvaluationResult evaluate(const CapModel& model, const Lottery& lottery);

/// Value only; same number as evaluate(...).value.
double utility(const CapModel& model, const Lottery& lottery);
double utility(const CapModel& model, const UtilityAct& act);

double certainty_equivalent(const CapModel& model, const Lottery& lottery);

/// The belief set of an optimal perception.
BeliefSet perception_set(const CapModel& model, const OptimalPerception& perception);

/// Whether two perceptions name the same family member.
bool same_perception(const OptimalPerception& a, const OptimalPerception& b);

/// Evaluates a model on lotteries over a fixed list of acts with varying
/// probability weights. Support values are tabulated once.
class FixedSupportEvaluator {
public:
    FixedSupportEvaluator(const CapModel& model, std::vector<UtilityAct> acts);

    struct Outcome {
        double value = 0.0;
        /// All perceptions within the optimality tolerance (first is the best found).
        std::vector<OptimalPerception> optimal;
        /// Support value of each act under optimal.front().
        std::vector<double> act_values;
    };

    /// Weights must be nonnegative and sum to 1.
    Outcome evaluate(std::span<const double> weights, bool collect_all = true) const;

    const std::vector<UtilityAct>& acts() const noexcept { return acts_; }

private:
    CapModel model_;
    std::vector<UtilityAct> acts_;
    // Finite: support_[member][act]. Parametric: per act, per vertex,
    // (k+1) coefficients of θ ↦ ⟨act, vertex(θ)⟩.
    std::vector<std::vector<double>> support_;
    std::vector<std::vector<std::vector<double>>> affine_;
};

} // namespace cap
