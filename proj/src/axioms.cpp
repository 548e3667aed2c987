#include "cap/axioms.hpp"

#include "cap/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace cap {

std::string_view to_string(AxiomId id) {
    switch (id) {
    case AxiomId::Nondegeneracy: return "A1-nondegeneracy";
    case AxiomId::Fsd: return "A2-FSD";
    case AxiomId::Aepr: return "A3-aepr";
    case AxiomId::Imtc: return "A4-imtc";
    case AxiomId::Eaar: return "A5-eaar";
    case AxiomId::Ica: return "A6-ica";
    case AxiomId::Imtcm: return "A-imtcm";
    case AxiomId::Imt: return "A-imt";
    case AxiomId::Sica: return "A-sica";
    case AxiomId::Eapr: return "A-eapr";
    case AxiomId::Psr: return "A-psr";
    }
    return "?";
}

const std::vector<AxiomId>& all_axioms() {
    static const std::vector<AxiomId> ids = {AxiomId::Nondegeneracy, AxiomId::Fsd,  AxiomId::Aepr, AxiomId::Imtc,
                                             AxiomId::Eaar,          AxiomId::Ica,  AxiomId::Imtcm, AxiomId::Imt,
                                             AxiomId::Sica,          AxiomId::Eapr, AxiomId::Psr};
    return ids;
}

AxiomId parse_axiom(std::string_view name) {
    for (auto id : all_axioms()) {
        if (to_string(id) == name) return id;
    }
    throw InvalidArgument("unknown axiom '" + std::string(name) + "'");
}

bool comonotonic(const UtilityAct& f, const UtilityAct& g) {
    detail::require_same_size(f.size(), g.size(), "comonotonic");
    for (std::size_t a = 0; a < f.size(); ++a) {
        for (std::size_t b = a + 1; b < f.size(); ++b) {
            if ((f[a] - f[b]) * (g[a] - g[b]) < 0.0) return false;
        }
    }
    return true;
}

namespace {

double tie_tolerance(double a, double b) { return 1e-12 * std::max({1.0, std::abs(a), std::abs(b)}); }

// Positive when `comparison` fails its claim.
double conclusion_margin(const CapModel& model, const Comparison& c, bool indifference) {
    const double d = utility(model, c.left) - utility(model, c.right);
    return indifference ? std::abs(d) : -d;
}

bool premise_holds(const CapModel& model, const Comparison& c) {
    const double l = utility(model, c.left);
    const double r = utility(model, c.right);
    return l - r >= -tie_tolerance(l, r);
}

Lottery timing_ex_post(const UtilityAct& f, const UtilityAct& g, double lambda, double kappa, const Lottery& rest) {
    const Lottery inner = Lottery::degenerate(mix_acts(lambda, f, g));
    return mix_lotteries(kappa, inner, rest);
}

Lottery timing_ex_ante(const UtilityAct& f, const UtilityAct& g, double lambda, double kappa, const Lottery& rest) {
    const Lottery inner = mix_lotteries(lambda, Lottery::degenerate(f), Lottery::degenerate(g));
    return mix_lotteries(kappa, inner, rest);
}

class Trial {
public:
    Trial(const CapModel& model, double tolerance) : model_(model), tolerance_(tolerance) {}

    // Records the first violation; returns true when one was found.
    bool unconditional(Comparison conclusion, bool indifference, double lambda = 0.0, double kappa = 0.0) {
        const double margin = conclusion_margin(model_, conclusion, indifference);
        if (margin > tolerance_) {
            witness = AxiomWitness{std::nullopt, std::move(conclusion), indifference, lambda, kappa, margin};
            return true;
        }
        return false;
    }

    bool conditional(Comparison premise, Comparison conclusion, double lambda = 0.0) {
        if (!premise_holds(model_, premise)) return false;
        const double margin = conclusion_margin(model_, conclusion, false);
        if (margin > tolerance_) {
            witness = AxiomWitness{std::move(premise), std::move(conclusion), false, lambda, 0.0, margin};
            return true;
        }
        return false;
    }

    std::optional<AxiomWitness> witness;

private:
    const CapModel& model_;
    double tolerance_;
};

// Each act of P lowered statewise by a random nonnegative amount, or part of
// one atom's mass moved to a statewise-worse act.
Lottery dominated_partner(LotterySampler& sampler, const Lottery& p) {
    Rng& rng = sampler.rng();
    auto lowered = [&](const UtilityAct& act) {
        std::vector<double> x(act.payoffs().begin(), act.payoffs().end());
        for (auto& v : x) {
            if (rng.bernoulli(0.5)) v -= rng.uniform(0.0, 50.0);
        }
        return UtilityAct(std::move(x));
    };
    if (rng.bernoulli(0.5)) {
        std::vector<Atom> atoms;
        for (const auto& a : p.atoms()) atoms.push_back({a.probability, lowered(a.act)});
        return Lottery(std::move(atoms));
    }
    const std::size_t k = rng.index(p.atoms().size());
    const double moved = p.atoms()[k].probability * rng.uniform();
    std::vector<Atom> atoms = p.atoms();
    if (moved <= 0.0) return p;
    atoms[k].probability -= moved;
    if (atoms[k].probability <= 0.0) atoms.erase(atoms.begin() + static_cast<std::ptrdiff_t>(k));
    atoms.push_back({moved, lowered(p.atoms()[k].act)});
    double total = 0.0;
    for (const auto& a : atoms) total += a.probability;
    for (auto& a : atoms) a.probability /= total;
    return Lottery(std::move(atoms));
}

// Pair of acts both nonincreasing along one random ordering of the states.
std::pair<UtilityAct, UtilityAct> comonotonic_pair(LotterySampler& sampler) {
    const std::size_t n = sampler.states();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    for (std::size_t i = n; i > 1; --i) std::swap(order[i - 1], order[sampler.rng().index(i)]);
    auto draw = [&] {
        std::vector<double> v(n);
        for (auto& x : v) x = sampler.payoff();
        if (sampler.rng().bernoulli(0.2)) v[1 % n] = v[0];
        std::sort(v.begin(), v.end(), std::greater<>());
        std::vector<double> act(n);
        for (std::size_t k = 0; k < n; ++k) act[order[k]] = v[k];
        return UtilityAct(std::move(act));
    };
    UtilityAct f = draw();
    UtilityAct g = draw();
    return {std::move(f), std::move(g)};
}

double mixture_weight(LotterySampler& sampler) {
    // Endpoints are part of the quantifier; probe them occasionally.
    const double u = sampler.rng().uniform();
    if (u < 0.05) return 1.0;
    if (u < 0.1) return 0.0;
    return sampler.weight();
}

} // namespace

AxiomWitness timing_witness(const UtilityAct& f, const UtilityAct& g, double lambda, double kappa,
                            const Lottery& rest) {
    return AxiomWitness{std::nullopt,
                        Comparison{timing_ex_post(f, g, lambda, kappa, rest), timing_ex_ante(f, g, lambda, kappa, rest)},
                        true, lambda, kappa, 0.0};
}

AxiomWitness strong_independence_witness(const CapModel& model, const Lottery& p, double lambda) {
    const std::size_t n = model.states().size();
    const Lottery tie = Lottery::constant(n, utility(model, p));
    const Lottery zero = Lottery::constant(n, 0.0);
    // P ~ δ_U(P); mixing both with the same constant must keep the ranking.
    Comparison premise{tie, p};
    Comparison conclusion{mix_lotteries(lambda, p, zero), mix_lotteries(lambda, tie, zero)};
    AxiomWitness w{std::move(premise), std::move(conclusion), false, lambda, 0.0, 0.0};
    w.violation = violation_margin(model, w);
    return w;
}

double violation_margin(const CapModel& model, const AxiomWitness& w) {
    if (w.premise && !premise_holds(model, *w.premise)) return -std::numeric_limits<double>::infinity();
    return conclusion_margin(model, w.conclusion, w.indifference);
}

bool reverify(const CapModel& model, const AxiomWitness& w, double tolerance) {
    return violation_margin(model, w) > tolerance;
}

AxiomReport check_axiom(const CapModel& model, AxiomId axiom, LotterySampler& sampler, std::size_t n,
                        double tolerance) {
    detail::require_same_size(sampler.states(), model.states().size(), "check_axiom");
    const std::size_t states = model.states().size();
    AxiomReport report;
    report.axiom = axiom;
    Trial trial(model, tolerance);

    if (axiom == AxiomId::Nondegeneracy) {
        bool strict = utility(model, Lottery::constant(states, 1.0)) > utility(model, Lottery::constant(states, 0.0));
        for (std::size_t t = 0; t < n && !strict; ++t) {
            ++report.trials;
            strict = utility(model, sampler.lottery()) != utility(model, sampler.lottery());
        }
        report.trials = std::max<std::size_t>(report.trials, 1);
        report.holds = strict;
        return report;
    }

    for (std::size_t t = 0; t < n; ++t) {
        ++report.trials;
        bool violated = false;
        switch (axiom) {
        case AxiomId::Fsd: {
            const Lottery p = sampler.lottery();
            violated = trial.unconditional({p, dominated_partner(sampler, p)}, false);
            break;
        }
        case AxiomId::Aepr:
        case AxiomId::Imtc:
        case AxiomId::Imtcm:
        case AxiomId::Imt: {
            const double kappa = mixture_weight(sampler);
            const double lambda = mixture_weight(sampler);
            const Lottery rest = sampler.lottery();
            UtilityAct f = sampler.act();
            UtilityAct g;
            if (axiom == AxiomId::Imtc) g = UtilityAct::constant(states, sampler.payoff());
            else if (axiom == AxiomId::Imtcm) std::tie(f, g) = comonotonic_pair(sampler);
            else g = sampler.act();
            const bool indifference = axiom != AxiomId::Aepr;
            violated = trial.unconditional(
                {timing_ex_post(f, g, lambda, kappa, rest), timing_ex_ante(f, g, lambda, kappa, rest)}, indifference,
                lambda, kappa);
            break;
        }
        case AxiomId::Eaar:
        case AxiomId::Eapr: {
            const double lambda = mixture_weight(sampler);
            Lottery p = sampler.lottery();
            Lottery q = sampler.lottery();
            for (int orientation = 0; orientation < 2 && !violated; ++orientation) {
                const Lottery mixed = mix_lotteries(lambda, p, q);
                Comparison conclusion = axiom == AxiomId::Eaar ? Comparison{p, mixed} : Comparison{mixed, q};
                violated = trial.conditional({p, q}, std::move(conclusion), lambda);
                std::swap(p, q);
            }
            break;
        }
        case AxiomId::Ica: {
            const double lambda = mixture_weight(sampler);
            Lottery p = sampler.lottery();
            Lottery q = sampler.lottery();
            const Lottery c1 = Lottery::constant(states, sampler.payoff());
            const Lottery c2 = Lottery::constant(states, sampler.payoff());
            for (int orientation = 0; orientation < 2 && !violated; ++orientation) {
                violated = trial.conditional({mix_lotteries(lambda, p, c1), mix_lotteries(lambda, q, c1)},
                                             {mix_lotteries(lambda, p, c2), mix_lotteries(lambda, q, c2)}, lambda);
                std::swap(p, q);
            }
            break;
        }
        case AxiomId::Sica: {
            // λ = 0 would make the converse direction fail for every strict pair.
            const double lambda = sampler.rng().bernoulli(0.05) ? 1.0 : sampler.weight();
            Lottery p = sampler.lottery();
            // A third of the trials pit P against its own certainty equivalent.
            Lottery q = sampler.rng().bernoulli(1.0 / 3.0) ? Lottery::constant(states, utility(model, p)) : sampler.lottery();
            const Lottery c = Lottery::constant(states, sampler.payoff());
            for (int orientation = 0; orientation < 2 && !violated; ++orientation) {
                const Lottery mp = mix_lotteries(lambda, p, c);
                const Lottery mq = mix_lotteries(lambda, q, c);
                violated = trial.conditional({p, q}, {mp, mq}, lambda) || trial.conditional({mp, mq}, {p, q}, lambda);
                std::swap(p, q);
            }
            break;
        }
        case AxiomId::Psr: {
            const double lambda = sampler.weight();
            UtilityAct f = sampler.act();
            UtilityAct g = sampler.rng().bernoulli(1.0 / 3.0) ? UtilityAct::constant(states, utility(model, f)) : sampler.act();
            const UtilityAct c = UtilityAct::constant(states, sampler.payoff());
            for (int orientation = 0; orientation < 2 && !violated; ++orientation) {
                const Lottery df = Lottery::degenerate(f);
                const Lottery dg = Lottery::degenerate(g);
                const Lottery fc = Lottery::degenerate(mix_acts(lambda, f, c));
                const Lottery gc = Lottery::degenerate(mix_acts(lambda, g, c));
                violated = trial.conditional({df, dg}, {Lottery::degenerate(mix_acts(lambda, f, g)), dg}, lambda) ||
                           trial.conditional({df, dg}, {fc, gc}, lambda) || trial.conditional({fc, gc}, {df, dg}, lambda);
                std::swap(f, g);
            }
            break;
        }
        case AxiomId::Nondegeneracy: break;
        }
        if (violated) {
            report.holds = false;
            report.counterexample = std::move(trial.witness);
            break;
        }
    }
    return report;
}

} // namespace cap
