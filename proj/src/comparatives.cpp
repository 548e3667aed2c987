#include "cap/comparatives.hpp"

#include "cap/errors.hpp"

#include <algorithm>
#include <cmath>

namespace cap {

namespace {

void require_cap_family(const CapModel& model, const char* op) {
    if (!model.maximizes()) {
        throw InvalidArgument(std::string(op) + ": needs a cap-family variant, got " + std::string(to_string(model.variant())));
    }
}

bool intersects(const std::vector<OptimalPerception>& a, const std::vector<OptimalPerception>& b) {
    for (const auto& x : a) {
        for (const auto& y : b) {
            if (same_perception(x, y)) return true;
        }
    }
    return false;
}

// Second lottery of a pair: often related to the first so that both
// outcomes of the sharing test are exercised.
Lottery partner(LotterySampler& sampler, const Lottery& p) {
    const double u = sampler.rng().uniform();
    if (u < 0.25) return p.shifted(sampler.rng().uniform(-50.0, 50.0));
    return sampler.lottery();
}

} // namespace

SharingCheck check_shared_perception(const CapModel& model, const Lottery& p, const Lottery& q) {
    require_cap_family(model, "shares_optimal_perception");
    const auto ep = evaluate(model, p);
    const auto eq = evaluate(model, q);
    SharingCheck check;
    for (int k = 1; k <= 9; ++k) {
        const double lambda = k / 10.0;
        const double mixed = utility(model, mix_lotteries(lambda, p, q));
        check.max_deviation = std::max(check.max_deviation, std::abs(mixed - lambda * ep.value - (1.0 - lambda) * eq.value));
    }
    check.linear = check.max_deviation <= kComparativeTolerance;
    check.argmax_intersects = intersects(ep.optimal_perceptions, eq.optimal_perceptions);
    return check;
}

bool shares_optimal_perception(const CapModel& model, const Lottery& p, const Lottery& q) {
    return check_shared_perception(model, p, q).linear;
}

std::string_view to_string(Comparative c) {
    switch (c) {
    case Comparative::ExAnteRandomization: return "ea-randomization";
    case Comparative::Ambiguity: return "ambiguity";
    case Comparative::FilteringIncentives: return "filtering";
    }
    return "?";
}

Comparative parse_comparative(std::string_view name) {
    for (auto c : {Comparative::ExAnteRandomization, Comparative::Ambiguity, Comparative::FilteringIncentives}) {
        if (to_string(c) == name) return c;
    }
    throw InvalidArgument("unknown comparative '" + std::string(name) + "'");
}

bool witness_violates(Comparative which, const CapModel& first, const CapModel& second,
                      const ComparativeWitness& w, double tolerance) {
    switch (which) {
    case Comparative::ExAnteRandomization: {
        const auto c2 = check_shared_perception(second, w.p, w.q);
        const auto c1 = check_shared_perception(first, w.p, w.q);
        return c2.linear && c1.max_deviation > tolerance;
    }
    case Comparative::Ambiguity:
        return utility(second, w.p) >= w.level && utility(first, w.p) < w.level - tolerance;
    case Comparative::FilteringIncentives: {
        const std::size_t n = w.p.dimension();
        const Lottery lhs = mix_lotteries(w.lambda, w.p, w.q);
        const Lottery rhs = mix_lotteries(w.lambda, Lottery::constant(n, w.level), w.q);
        return utility(second, lhs) >= utility(second, rhs) && utility(first, lhs) < utility(first, rhs) - tolerance;
    }
    }
    return false;
}

ComparativeVerdict more_tolerant_ea_randomization(const CapModel& first, const CapModel& second,
                                                  LotterySampler& sampler, std::size_t n) {
    require_cap_family(first, "more_tolerant_ea_randomization");
    require_cap_family(second, "more_tolerant_ea_randomization");
    detail::require_same_size(first.states().size(), second.states().size(), "more_tolerant_ea_randomization");
    ComparativeVerdict verdict;
    for (std::size_t s = 0; s < n; ++s) {
        const Lottery p = sampler.lottery();
        const Lottery q = partner(sampler, p);
        ++verdict.samples_used;
        const auto c2 = check_shared_perception(second, p, q);
        const auto c1 = check_shared_perception(first, p, q);
        verdict.diagnostics += (!c1.agree()) + (!c2.agree());
        if (c2.linear && !c1.linear) {
            verdict.holds = false;
            verdict.counterexample = ComparativeWitness{p, q, 0.0, 0.0};
            break;
        }
    }
    return verdict;
}

ComparativeVerdict more_tolerant_ambiguity(const CapModel& first, const CapModel& second, LotterySampler& sampler,
                                           std::size_t n) {
    require_cap_family(first, "more_tolerant_ambiguity");
    require_cap_family(second, "more_tolerant_ambiguity");
    detail::require_same_size(first.states().size(), second.states().size(), "more_tolerant_ambiguity");
    ComparativeVerdict verdict;
    for (std::size_t s = 0; s < n; ++s) {
        const Lottery p = sampler.lottery();
        ++verdict.samples_used;
        // The tightest constant accepted by the second DM is its certainty equivalent.
        const double level = utility(second, p);
        if (utility(first, p) < level - kComparativeTolerance) {
            verdict.holds = false;
            verdict.counterexample = ComparativeWitness{p, p, 0.0, level};
            break;
        }
    }
    return verdict;
}

ComparativeVerdict higher_filtering_incentives(const CapModel& first, const CapModel& second,
                                               LotterySampler& sampler, std::size_t n) {
    require_cap_family(first, "higher_filtering_incentives");
    require_cap_family(second, "higher_filtering_incentives");
    detail::require_same_size(first.states().size(), second.states().size(), "higher_filtering_incentives");
    const std::size_t states = first.states().size();
    ComparativeVerdict verdict;
    for (std::size_t s = 0; s < n; ++s) {
        const double lambda = sampler.weight();
        const Lottery p = sampler.lottery();
        const Lottery q = sampler.lottery();
        const Lottery lhs = mix_lotteries(lambda, p, q);
        // U(λδ_t + (1-λ)Q) = λt + U(λδ_0 + (1-λ)Q); pick t at or just below the
        // second DM's indifference level most of the time.
        const double base = utility(second, mix_lotteries(lambda, Lottery::constant(states, 0.0), q));
        const double threshold = (utility(second, lhs) - base) / lambda;
        double level = sampler.payoff();
        const double u = sampler.rng().uniform();
        if (u < 0.4) level = threshold;
        else if (u < 0.8) level = threshold - sampler.rng().uniform(0.0, 5.0);
        ++verdict.samples_used;
        const Lottery rhs = mix_lotteries(lambda, Lottery::constant(states, level), q);
        if (utility(second, lhs) >= utility(second, rhs) &&
            utility(first, lhs) < utility(first, rhs) - kComparativeTolerance) {
            verdict.holds = false;
            verdict.counterexample = ComparativeWitness{p, q, lambda, level};
            break;
        }
    }
    return verdict;
}

ComparativeVerdict run_comparative(Comparative which, const CapModel& first, const CapModel& second,
                                   LotterySampler& sampler, std::size_t n) {
    switch (which) {
    case Comparative::ExAnteRandomization: return more_tolerant_ea_randomization(first, second, sampler, n);
    case Comparative::Ambiguity: return more_tolerant_ambiguity(first, second, sampler, n);
    case Comparative::FilteringIncentives: return higher_filtering_incentives(first, second, sampler, n);
    }
    throw InvalidArgument("unknown comparative");
}

BenefitDominance dominates_benefit(const std::vector<BeliefSet>& first, const std::vector<BeliefSet>& second,
                                   LotterySampler& sampler, std::size_t n) {
    if (first.empty() || second.empty()) throw InvalidArgument("dominates_benefit: families must be nonempty");
    for (const auto& m : first) detail::require_same_size(m.dimension(), sampler.states(), "dominates_benefit");
    for (const auto& m : second) detail::require_same_size(m.dimension(), sampler.states(), "dominates_benefit");

    BenefitDominance out;
    out.holds = std::all_of(second.begin(), second.end(), [&](const BeliefSet& outer) {
        return std::any_of(first.begin(), first.end(), [&](const BeliefSet& inner) { return is_subset(inner, outer); });
    });
    auto best = [](const std::vector<BeliefSet>& family, const Lottery& p) {
        double v = -std::numeric_limits<double>::infinity();
        for (const auto& m : family) v = std::max(v, expected_meu(m, p));
        return v;
    };
    for (std::size_t s = 0; s < n; ++s) {
        const Lottery p = sampler.lottery();
        ++out.samples_used;
        const double a = best(first, p);
        const double b = best(second, p);
        if (a < b - kComparativeTolerance * std::max(1.0, std::abs(b))) {
            ++out.sampled_failures;
            if (out.holds && !out.contradiction) out.contradiction = p;
        }
    }
    return out;
}

} // namespace cap
