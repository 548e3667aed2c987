#include "cap/identification.hpp"

#include "cap/errors.hpp"
#include "cap/lp.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <map>
#include <numeric>

namespace cap {

UtilityAct normalize_direction(const UtilityAct& act) {
    std::vector<double> p(act.payoffs().begin(), act.payoffs().end());
    const double base = p.front();
    double scale = 0.0;
    for (auto& x : p) {
        x -= base;
        scale = std::max(scale, std::abs(x));
    }
    if (scale == 0.0) return UtilityAct::constant(p.size(), 0.0);
    for (auto& x : p) x /= scale;
    return UtilityAct(std::move(p));
}

Dictionary::Dictionary(std::vector<UtilityAct> acts, std::vector<double> scales) : scales_(std::move(scales)) {
    if (scales_.empty()) throw InvalidArgument("dictionary needs at least one scale");
    for (double s : scales_) {
        if (!(s > 0.0) || !std::isfinite(s)) throw InvalidArgument("dictionary scales must be positive");
    }
    for (const auto& a : acts) {
        auto psi = normalize_direction(a);
        if (psi.is_constant()) continue;
        if (std::find(acts_.begin(), acts_.end(), psi) == acts_.end()) acts_.push_back(std::move(psi));
    }
    if (acts_.empty()) throw InvalidArgument("dictionary has no non-constant acts");
}

Dictionary Dictionary::standard(std::size_t states, std::vector<double> scales) {
    std::vector<UtilityAct> acts;
    auto indicator = [&](std::size_t s, double v) {
        std::vector<double> p(states, 0.0);
        p[s] = v;
        return p;
    };
    for (std::size_t s = 0; s < states; ++s) {
        acts.emplace_back(indicator(s, 1.0));
        acts.emplace_back(indicator(s, -1.0));
    }
    for (std::size_t s = 0; s < states; ++s) {
        for (std::size_t t = 0; t < states; ++t) {
            if (s == t) continue;
            auto p = indicator(s, 1.0);
            p[t] = -1.0;
            acts.emplace_back(std::move(p));
        }
    }
    return Dictionary(std::move(acts), std::move(scales));
}

std::vector<UtilityAct> Dictionary::atoms() const {
    std::vector<UtilityAct> out;
    out.push_back(UtilityAct::constant(acts_.front().size(), 0.0));
    for (double s : scales_) {
        for (const auto& a : acts_) out.push_back(a.scaled(s));
    }
    return out;
}

double cost_supremand(const CapModel& model, const BeliefSet& set, const Lottery& lottery) {
    return expected_meu(set, lottery) - utility(model, lottery);
}

namespace {

// Euclidean projection onto the probability simplex.
void project_to_simplex(std::vector<double>& w) {
    std::vector<double> sorted = w;
    std::sort(sorted.begin(), sorted.end(), std::greater<>());
    double cumulative = 0.0;
    double theta = 0.0;
    for (std::size_t i = 0; i < sorted.size(); ++i) {
        cumulative += sorted[i];
        const double t = (cumulative - 1.0) / static_cast<double>(i + 1);
        if (sorted[i] - t > 0.0) theta = t;
    }
    for (auto& x : w) x = std::max(0.0, x - theta);
}

struct Cut {
    std::vector<double> act_values;
    double cost;
};

struct AscentResult {
    double best = -std::numeric_limits<double>::infinity();
    std::vector<double> weights;
    std::vector<Cut> cuts;
    std::size_t iterations = 0;
};

class Supremand {
public:
    Supremand(const CapModel& model, const BeliefSet& set, std::vector<UtilityAct> atoms)
        : evaluator_(model, atoms) {
        for (const auto& a : atoms) targets_.push_back(support_value(set, a));
    }

    std::size_t size() const { return targets_.size(); }
    const std::vector<double>& targets() const { return targets_; }

    // Value of the supremand at w, with the supergradient's cut.
    double at(const std::vector<double>& w, Cut& cut) const {
        auto out = evaluator_.evaluate(w, false);
        double s = 0.0;
        for (std::size_t i = 0; i < w.size(); ++i) {
            if (w[i] != 0.0) s += w[i] * targets_[i];
        }
        cut.act_values = std::move(out.act_values);
        cut.cost = out.optimal.front().cost;
        return s - out.value;
    }

private:
    FixedSupportEvaluator evaluator_;
    std::vector<double> targets_;
};

void add_cut(std::vector<Cut>& cuts, Cut cut) {
    for (const auto& c : cuts) {
        if (std::abs(c.cost - cut.cost) > 1e-12) continue;
        bool same = true;
        for (std::size_t i = 0; i < c.act_values.size() && same; ++i) {
            same = std::abs(c.act_values[i] - cut.act_values[i]) <= 1e-12 * std::max(1.0, std::abs(c.act_values[i]));
        }
        if (same) return;
    }
    cuts.push_back(std::move(cut));
}

AscentResult ascend(const Supremand& f, std::vector<double> w, std::size_t iterations) {
    AscentResult result;
    const std::size_t m = f.size();
    Cut cut;
    for (std::size_t t = 1; t <= iterations; ++t) {
        const double v = f.at(w, cut);
        ++result.iterations;
        if (v > result.best) {
            result.best = v;
            result.weights = w;
        }
        std::vector<double> g(m);
        double norm = 0.0;
        for (std::size_t i = 0; i < m; ++i) {
            g[i] = f.targets()[i] - cut.act_values[i];
            norm += g[i] * g[i];
        }
        add_cut(result.cuts, cut);
        norm = std::sqrt(norm);
        if (norm == 0.0) break;
        const double step = 1.0 / std::sqrt(static_cast<double>(t));
        for (std::size_t i = 0; i < m; ++i) w[i] += step * g[i] / norm;
        project_to_simplex(w);
    }
    return result;
}

Lottery lottery_from_weights(const std::vector<UtilityAct>& atoms, const std::vector<double>& w) {
    std::vector<Atom> out;
    double total = 0.0;
    for (std::size_t i = 0; i < w.size(); ++i) {
        if (w[i] > 1e-15) {
            out.push_back({w[i], atoms[i]});
            total += w[i];
        }
    }
    for (auto& a : out) a.probability /= total;
    return Lottery(std::move(out));
}

} // namespace

CostEstimate estimate_cost_star(const CapModel& model, const BeliefSet& set, const Dictionary& dictionary,
                                const EstimateOptions& options) {
    if (!model.maximizes()) {
        throw InvalidArgument("estimate_cost_star needs a maximising variant, got " + std::string(to_string(model.variant())));
    }
    detail::require_same_size(set.dimension(), model.states().size(), "estimate_cost_star");
    detail::require_same_size(dictionary.acts().front().size(), model.states().size(), "estimate_cost_star");

    const auto atoms = dictionary.atoms();
    const Supremand f(model, set, atoms);
    const std::size_t m = atoms.size();
    const std::size_t restarts = std::max<std::size_t>(1, options.restarts);
    const std::size_t per_restart = std::max<std::size_t>(1, options.budget / restarts);

    // Starting points are drawn up front so the result does not depend on
    // scheduling.
    Rng rng(options.seed);
    std::vector<std::vector<double>> starts;
    starts.push_back(std::vector<double>(m, 1.0 / static_cast<double>(m)));
    while (starts.size() < restarts) starts.push_back(rng.simplex_point(m));

    CostEstimate estimate;
    double best = -std::numeric_limits<double>::infinity();
    std::vector<double> best_w;
    std::vector<Cut> cuts;
    double bound = 1.0;
    for (double v : f.targets()) bound = std::max(bound, std::abs(v));

    // Kelley cutting planes: maximise t subject to t <= Σ w (target - H) + c
    // for every optimal perception met so far. The optimum is an upper bound
    // on the supremand; once it meets the best value the search is certified.
    auto polish = [&] {
        double big = bound;
        for (const auto& c : cuts) {
            big = std::max(big, std::abs(c.cost));
            for (double v : c.act_values) big = std::max(big, std::abs(v));
        }
        big *= 10.0;
        for (std::size_t round = 0; round < 200; ++round) {
            lp::Problem problem;
            problem.objective.assign(m + 1, 0.0);
            problem.objective[m] = 1.0;
            for (const auto& c : cuts) {
                lp::Constraint row;
                row.coefficients.resize(m + 1);
                for (std::size_t i = 0; i < m; ++i) row.coefficients[i] = -(f.targets()[i] - c.act_values[i]);
                row.coefficients[m] = 1.0;
                row.rhs = c.cost + big;
                problem.constraints.push_back(std::move(row));
            }
            std::vector<double> simplex_row(m + 1, 1.0);
            simplex_row[m] = 0.0;
            problem.constraints.push_back({simplex_row, lp::Sense::Equal, 1.0});
            std::vector<double> cap_row(m + 1, 0.0);
            cap_row[m] = 1.0;
            problem.constraints.push_back({cap_row, lp::Sense::LessEqual, 2.0 * big});
            const auto sol = lp::solve(problem);
            if (sol.status != lp::Status::Optimal) return false;
            std::vector<double> w(sol.x.begin(), sol.x.begin() + static_cast<std::ptrdiff_t>(m));
            project_to_simplex(w);
            const double upper = sol.x[m] - big;
            Cut cut;
            const double v = f.at(w, cut);
            if (v > best) {
                best = v;
                best_w = w;
            }
            estimate.dictionary_upper_bound = std::min(estimate.dictionary_upper_bound, upper);
            if (estimate.dictionary_upper_bound - best <= 1e-9 * std::max(1.0, std::abs(best))) return true;
            const std::size_t before = cuts.size();
            add_cut(cuts, std::move(cut));
            if (cuts.size() == before) return false;
        }
        return false;
    };

    // The uniform start runs alone, the others in fixed batches, so the
    // result does not depend on the number of threads.
    constexpr std::size_t kBatch = 5;
    for (std::size_t first = 0; first < restarts;) {
        const std::size_t last = first == 0 ? 1 : std::min(restarts, first + kBatch);
        std::vector<AscentResult> runs(last - first);
        if (options.parallel && runs.size() > 1) {
            std::vector<std::future<AscentResult>> jobs;
            for (std::size_t r = first; r < last; ++r) {
                jobs.push_back(std::async(std::launch::async, [&f, &starts, r, per_restart] {
                    return ascend(f, starts[r], per_restart);
                }));
            }
            for (std::size_t r = 0; r < runs.size(); ++r) runs[r] = jobs[r].get();
        } else {
            for (std::size_t r = first; r < last; ++r) runs[r - first] = ascend(f, starts[r], per_restart);
        }
        for (auto& run : runs) {
            estimate.iterations += run.iterations;
            if (run.best > best) {
                best = run.best;
                best_w = run.weights;
            }
            for (auto& c : run.cuts) add_cut(cuts, std::move(c));
        }
        if (options.polish && polish()) break;
        first = last;
    }

    if (best > 0.0) {
        estimate.support_witness = lottery_from_weights(atoms, best_w);
        estimate.value = std::max(0.0, cost_supremand(model, set, estimate.support_witness));
    } else {
        estimate.support_witness = Lottery::constant(model.states().size(), 0.0);
        estimate.value = 0.0;
    }
    return estimate;
}

DomainProbe probe_cost_domain(const CapModel& model, const BeliefSet& set, const Dictionary& dictionary,
                              const EstimateOptions& options) {
    DomainProbe probe;
    std::vector<double> ladder;
    for (double s : dictionary.scales()) {
        ladder.push_back(s);
        probe.estimates.push_back(estimate_cost_star(model, set, Dictionary(dictionary.acts(), ladder), options).value);
    }
    // Unbounded supremands grow linearly in the scale; bounded ones saturate.
    if (probe.estimates.size() >= 2) {
        const double last = probe.estimates.back();
        const double previous = probe.estimates[probe.estimates.size() - 2];
        const double ratio = ladder.back() / ladder[ladder.size() - 2];
        probe.bounded = !(last > 1e-6 && last >= 0.5 * ratio * previous && last > previous + 1e-6);
    }
    return probe;
}

namespace {

std::vector<double> probe_signature(const BeliefSet& set) {
    std::vector<double> sig;
    const std::size_t n = set.dimension();
    for (std::size_t s = 0; s < n; ++s) {
        for (double v : {1.0, -1.0}) {
            std::vector<double> bet(n, 0.0);
            bet[s] = v;
            sig.push_back(support_value(set, UtilityAct(std::move(bet))));
        }
    }
    return sig;
}

bool signatures_match(const std::vector<double>& a, const std::vector<double>& b) {
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (std::abs(a[i] - b[i]) > kInclusionTolerance) return false;
    }
    return true;
}

} // namespace

CanonicalReport check_canonical(const PerceptionFamily& family) {
    CanonicalReport report;
    report.members = as_finite(family);
    const auto& members = report.members.members;
    const std::size_t count = members.size();
    const auto* param = std::get_if<ParametricFamily>(&family);
    std::vector<std::vector<double>> thetas;
    if (param) thetas = param->grid_points();

    for (std::size_t i = 0; i < count; ++i) {
        for (std::size_t j = 0; j < count; ++j) {
            if (i == j || members[i].cost >= members[j].cost - 1e-9) continue;
            if (is_subset(members[i].set, members[j].set)) report.monotonicity_violations.push_back({i, j});
        }
    }

    std::vector<std::vector<double>> signatures;
    for (const auto& m : members) signatures.push_back(probe_signature(m.set));
    for (std::size_t i = 0; i < count; ++i) {
        for (std::size_t j = i + 1; j < count; ++j) {
            for (double lambda : {0.25, 0.5, 0.75}) {
                const BeliefSet mixture = mix_sets(lambda, members[i].set, members[j].set);
                const double mixed_cost = lambda * members[i].cost + (1.0 - lambda) * members[j].cost;
                std::optional<double> member_cost;
                if (param) {
                    std::vector<double> theta(thetas[i].size());
                    for (std::size_t k = 0; k < theta.size(); ++k) theta[k] = lambda * thetas[i][k] + (1.0 - lambda) * thetas[j][k];
                    if (same_set(mixture, param->set_at(theta))) member_cost = param->cost_at(theta);
                } else {
                    const auto sig = probe_signature(mixture);
                    for (std::size_t k = 0; k < count && !member_cost; ++k) {
                        if (signatures_match(sig, signatures[k]) && same_set(mixture, members[k].set)) {
                            member_cost = members[k].cost;
                        }
                    }
                }
                if (!member_cost) {
                    report.convexity_violations.push_back({i, j, lambda, CanonicalReport::ConvexityKind::Membership});
                } else if (*member_cost > mixed_cost + 1e-9) {
                    report.convexity_violations.push_back({i, j, lambda, CanonicalReport::ConvexityKind::Cost});
                }
            }
        }
    }
    return report;
}

std::vector<BeliefSet> estimate_multi_meu_core(const CapModel& model, LotterySampler& sampler, std::size_t n) {
    if (!model.maximizes()) {
        throw InvalidArgument("estimate_multi_meu_core needs a maximising variant, got " + std::string(to_string(model.variant())));
    }
    detail::require_same_size(sampler.states(), model.states().size(), "estimate_multi_meu_core");
    std::vector<OptimalPerception> seen;
    std::vector<BeliefSet> core;
    for (std::size_t s = 0; s < n; ++s) {
        const auto result = evaluate(model, sampler.lottery());
        for (const auto& p : result.optimal_perceptions) {
            if (std::any_of(seen.begin(), seen.end(), [&](const OptimalPerception& q) { return same_perception(p, q); })) {
                continue;
            }
            seen.push_back(p);
            BeliefSet set = prune(perception_set(model, p));
            const bool dup = std::any_of(core.begin(), core.end(),
                                         [&](const BeliefSet& c) { return vertex_distance(c, set) < 1e-9; });
            if (!dup) core.push_back(std::move(set));
        }
    }
    return core;
}

} // namespace cap
