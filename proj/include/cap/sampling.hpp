#pragma once

// Seeded generators for acts, lotteries, belief sets, capacities and whole
// models. Used by the axiom harness, the comparatives and the test suites.

#include "cap/model.hpp"
#include "cap/random.hpp"

#include <cstdint>
#include <vector>

namespace cap {

struct SamplerConfig {
    double payoff_min = -100.0;
    double payoff_max = 300.0;
    std::size_t max_support = 4;
    /// Acts drawn from here with probability pool_probability.
    std::vector<UtilityAct> act_pool;
    double pool_probability = 0.5;
    /// Probability that a drawn act is constant.
    double constant_probability = 0.1;
};

class LotterySampler {
public:
    LotterySampler(std::size_t states, std::uint64_t seed, SamplerConfig config = {});

    std::size_t states() const noexcept { return states_; }
    const SamplerConfig& config() const noexcept { return config_; }
    Rng& rng() noexcept { return rng_; }

    UtilityAct act();
    /// Uniform random act, never taken from the pool.
    UtilityAct random_act();
    double payoff() { return rng_.uniform(config_.payoff_min, config_.payoff_max); }
    Lottery lottery();
    /// Mixture weight in (0, 1).
    double weight();

private:
    std::size_t states_;
    SamplerConfig config_;
    Rng rng_;
};

Prior random_prior(Rng& rng, std::size_t states);
/// 1..max_vertices random vertices.
BeliefSet random_belief_set(Rng& rng, std::size_t states, std::size_t max_vertices = 4);
/// Random supermodular capacity: a mixture of convex distortions of random
/// measures and random belief functions.
ConvexCapacity random_convex_capacity(Rng& rng, std::size_t states);

enum class ModelClass { Cap, Cautious, DualSelf, DoubleMaxmin, MoralHazard, ChoquetCore };

/// Random finite-family model of the given class with 1..max_members members.
/// Costs are grounded (one member at cost 0); cost-free classes get zero costs.
CapModel random_model(Rng& rng, std::size_t states, std::size_t max_members, ModelClass kind);

StateSpace numbered_states(std::size_t n);

} // namespace cap
