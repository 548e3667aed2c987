#pragma once

// Belief-set geometry over a finite state space: priors, polytope belief
// sets in vertex form, their support functions, and convex capacities.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

namespace cap {

inline constexpr double kPriorTolerance = 1e-12;
inline constexpr double kInclusionTolerance = 1e-9;
inline constexpr std::size_t kMaxCapacityStates = 12;

class StateSpace {
public:
    explicit StateSpace(std::vector<std::string> labels);

    std::size_t size() const noexcept { return labels_.size(); }
    const std::vector<std::string>& labels() const noexcept { return labels_; }
    const std::string& label(std::size_t i) const { return labels_.at(i); }

    /// Index of the named state; throws InvalidArgument if absent.
    std::size_t index_of(const std::string& label) const;

    bool operator==(const StateSpace&) const = default;

private:
    std::vector<std::string> labels_;
};

/// Probability vector indexed by state.
class Prior {
public:
    explicit Prior(std::vector<double> weights);

    std::size_t size() const noexcept { return weights_.size(); }
    double operator[](std::size_t i) const { return weights_[i]; }
    std::span<const double> weights() const noexcept { return weights_; }

    static Prior uniform(std::size_t n);
    static Prior dirac(std::size_t n, std::size_t state);

    bool operator==(const Prior&) const = default;

private:
    std::vector<double> weights_;
};

/// Utility payoff per state (utils).
class UtilityAct {
public:
    UtilityAct() = default;
    explicit UtilityAct(std::vector<double> payoffs);

    static UtilityAct constant(std::size_t n, double value);

    std::size_t size() const noexcept { return payoffs_.size(); }
    double operator[](std::size_t i) const { return payoffs_[i]; }
    std::span<const double> payoffs() const noexcept { return payoffs_; }

    double expectation(const Prior& prior) const;
    bool is_constant() const noexcept;

    UtilityAct shifted(double t) const;
    UtilityAct scaled(double alpha) const;

    bool operator==(const UtilityAct&) const = default;
    auto operator<=>(const UtilityAct& other) const { return payoffs_ <=> other.payoffs_; }

private:
    std::vector<double> payoffs_;
};

/// Convex polytope of priors given by (possibly redundant) vertices.
class BeliefSet {
public:
    explicit BeliefSet(std::vector<Prior> vertices);

    static BeliefSet singleton(Prior prior);
    /// The full simplex of all priors.
    static BeliefSet simplex(std::size_t n);

    std::size_t dimension() const noexcept { return vertices_.front().size(); }
    const std::vector<Prior>& vertices() const noexcept { return vertices_; }

private:
    std::vector<Prior> vertices_;
};

/// min over the set of the expected payoff (the MEU value of the act).
double support_value(const BeliefSet& set, const UtilityAct& act);

/// Minkowski mixture λ·first + (1-λ)·second, vertices from all pairs.
BeliefSet mix_sets(double lambda, const BeliefSet& first, const BeliefSet& second);

/// Whether the prior lies in the convex hull of the set's vertices.
bool contains(const BeliefSet& set, const Prior& prior, double tolerance = kInclusionTolerance);

/// Whether every vertex of `inner` lies in conv(outer).
bool is_subset(const BeliefSet& inner, const BeliefSet& outer);

/// Mutual inclusion.
bool same_set(const BeliefSet& a, const BeliefSet& b);

/// Drops duplicate vertices and vertices inside the hull of the others.
BeliefSet prune(const BeliefSet& set);

/// Hausdorff distance (sup norm) between the two vertex lists.
double vertex_distance(const BeliefSet& a, const BeliefSet& b);

/// Set function on 2^Ω stored densely by bitmask (bit i = state i).
class ConvexCapacity {
public:
    /// Requires values.size() == 2^n, ν(∅) = 0, ν(Ω) = 1. Supermodularity is
    /// checked separately by is_supermodular.
    ConvexCapacity(std::size_t states, std::vector<double> values);

    /// Capacity E ↦ f(E) for every subset.
    static ConvexCapacity from_function(std::size_t states, const std::function<double(std::uint32_t)>& f);
    /// The additive capacity of a prior.
    static ConvexCapacity additive(const Prior& prior);

    std::size_t states() const noexcept { return states_; }
    std::uint32_t full_mask() const noexcept { return (std::uint32_t{1} << states_) - 1; }
    double operator()(std::uint32_t mask) const { return values_.at(mask); }
    std::span<const double> values() const noexcept { return values_; }

private:
    std::size_t states_;
    std::vector<double> values_;
};

bool is_supermodular(const ConvexCapacity& capacity, double tolerance = kPriorTolerance);

/// Marginal vectors over all orderings of the states. Throws InvalidArgument
/// for non-supermodular input.
BeliefSet core_of_capacity(const ConvexCapacity& capacity);

/// Choquet integral by the sort-and-sum formula.
double choquet_integral(const ConvexCapacity& capacity, const UtilityAct& act);

/// Mixture of acts after the state is realised: λf + (1-λ)g statewise.
UtilityAct mix_acts(double lambda, const UtilityAct& f, const UtilityAct& g);

namespace detail {
void require_weight(double lambda, const char* op);
void require_same_size(std::size_t a, std::size_t b, const char* op);
} // namespace detail

} // namespace cap
