#include "cap/sampling.hpp"

#include "cap/errors.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

namespace cap {

LotterySampler::LotterySampler(std::size_t states, std::uint64_t seed, SamplerConfig config)
    : states_(states), config_(std::move(config)), rng_(seed) {
    if (states_ < 1) throw InvalidArgument("sampler needs at least one state");
    if (config_.max_support < 1) throw InvalidArgument("sampler support must be positive");
    for (const auto& a : config_.act_pool) detail::require_same_size(a.size(), states_, "LotterySampler pool");
}

UtilityAct LotterySampler::random_act() {
    if (rng_.bernoulli(config_.constant_probability)) return UtilityAct::constant(states_, payoff());
    std::vector<double> p(states_);
    for (auto& x : p) x = payoff();
    return UtilityAct(std::move(p));
}

UtilityAct LotterySampler::act() {
    if (!config_.act_pool.empty() && rng_.bernoulli(config_.pool_probability)) {
        return config_.act_pool[rng_.index(config_.act_pool.size())];
    }
    return random_act();
}

Lottery LotterySampler::lottery() {
    const std::size_t support = 1 + rng_.index(config_.max_support);
    const auto w = rng_.simplex_point(support);
    std::vector<Atom> atoms;
    for (std::size_t i = 0; i < support; ++i) {
        if (w[i] <= 0.0) continue;
        atoms.push_back({w[i], act()});
    }
    if (atoms.empty()) atoms.push_back({1.0, act()});
    double total = 0.0;
    for (const auto& a : atoms) total += a.probability;
    for (auto& a : atoms) a.probability /= total;
    return Lottery(std::move(atoms));
}

double LotterySampler::weight() {
    double x = rng_.uniform();
    while (x == 0.0) x = rng_.uniform();
    return x;
}

Prior random_prior(Rng& rng, std::size_t states) { return Prior(rng.simplex_point(states)); }

BeliefSet random_belief_set(Rng& rng, std::size_t states, std::size_t max_vertices) {
    const std::size_t count = 1 + rng.index(max_vertices);
    std::vector<Prior> v;
    for (std::size_t i = 0; i < count; ++i) v.push_back(random_prior(rng, states));
    return BeliefSet(std::move(v));
}

ConvexCapacity random_convex_capacity(Rng& rng, std::size_t states) {
    const std::size_t subsets = std::size_t{1} << states;
    const std::uint32_t full = static_cast<std::uint32_t>(subsets - 1);
    std::vector<double> values(subsets, 0.0);
    const std::size_t parts = 1 + rng.index(3);
    const auto mixture = rng.simplex_point(parts);
    for (std::size_t part = 0; part < parts; ++part) {
        if (rng.bernoulli(0.5)) {
            // Convex distortion x^a (a >= 1) of a random measure.
            const auto mu = rng.simplex_point(states);
            const double a = 1.0 + 2.0 * rng.uniform();
            for (std::uint32_t e = 0; e <= full; ++e) {
                double m = 0.0;
                for (std::size_t i = 0; i < states; ++i) {
                    if (e & (1u << i)) m += mu[i];
                }
                values[e] += mixture[part] * std::pow(std::min(m, 1.0), a);
            }
        } else {
            // Belief function from random masses on a few focal sets.
            const std::size_t focal = 1 + rng.index(4);
            const auto mass = rng.simplex_point(focal);
            for (std::size_t f = 0; f < focal; ++f) {
                std::uint32_t set = 0;
                while (set == 0) set = static_cast<std::uint32_t>(1 + rng.index(full));
                for (std::uint32_t e = 0; e <= full; ++e) {
                    if ((e & set) == set) values[e] += mixture[part] * mass[f];
                }
            }
        }
    }
    values[0] = 0.0;
    values[full] = 1.0;
    return ConvexCapacity(states, std::move(values));
}

StateSpace numbered_states(std::size_t n) {
    std::vector<std::string> labels;
    for (std::size_t i = 0; i < n; ++i) labels.push_back("s" + std::to_string(i + 1));
    return StateSpace(std::move(labels));
}

CapModel random_model(Rng& rng, std::size_t states, std::size_t max_members, ModelClass kind) {
    const std::size_t count = 1 + rng.index(max_members);
    const std::size_t grounded = rng.index(count);
    const bool cost_free = kind == ModelClass::DualSelf || kind == ModelClass::DoubleMaxmin;
    FiniteFamily family;
    for (std::size_t m = 0; m < count; ++m) {
        FamilyMember member{"m" + std::to_string(m), BeliefSet::simplex(states), 0.0, std::nullopt};
        switch (kind) {
        case ModelClass::MoralHazard: member.set = BeliefSet::singleton(random_prior(rng, states)); break;
        case ModelClass::ChoquetCore: member.capacity = random_convex_capacity(rng, states); break;
        default: member.set = random_belief_set(rng, states); break;
        }
        if (!cost_free && m != grounded) member.cost = rng.uniform(0.0, 60.0);
        family.members.push_back(std::move(member));
    }
    Variant variant = Variant::Cap;
    switch (kind) {
    case ModelClass::Cautious: variant = Variant::Cautious; break;
    case ModelClass::DualSelf: variant = Variant::DualSelf; break;
    case ModelClass::DoubleMaxmin: variant = Variant::DoubleMaxmin; break;
    case ModelClass::ChoquetCore: variant = Variant::Choquet; break;
    default: break;
    }
    return CapModel(numbered_states(states), std::move(family), variant);
}

} // namespace cap
