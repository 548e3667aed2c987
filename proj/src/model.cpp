#include "cap/model.hpp"

#include "cap/errors.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <sstream>

namespace cap {

namespace {

std::string format_parameters(std::span<const double> theta) {
    std::ostringstream out;
    out.precision(6);
    out << '(';
    for (std::size_t j = 0; j < theta.size(); ++j) out << (j ? "," : "") << theta[j];
    out << ')';
    return out.str();
}

// Choquet integral without re-checking supermodularity (checked at model load).
double choquet_unchecked(const ConvexCapacity& nu, const UtilityAct& act) {
    const std::size_t n = act.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return act[a] > act[b]; });
    double value = 0.0;
    std::uint32_t prefix = 0;
    for (std::size_t k = 0; k < n; ++k) {
        const std::uint32_t next = prefix | (std::uint32_t{1} << order[k]);
        value += act[order[k]] * (nu(next) - nu(prefix));
        prefix = next;
    }
    return value;
}

} // namespace

Lottery::Lottery(std::vector<Atom> atoms) : atoms_(std::move(atoms)) {
    if (atoms_.empty()) throw InvalidArgument("lottery needs at least one atom");
    double total = 0.0;
    for (const auto& a : atoms_) {
        if (!(a.probability > 0.0 && a.probability <= 1.0 + kPriorTolerance)) {
            throw InvalidArgument("lottery probability " + std::to_string(a.probability) + " outside (0, 1]");
        }
        detail::require_same_size(a.act.size(), atoms_.front().act.size(), "Lottery");
        total += a.probability;
    }
    if (std::abs(total - 1.0) > kPriorTolerance) {
        throw InvalidArgument("lottery probabilities sum to " + std::to_string(total) + ", not 1");
    }
}

Lottery Lottery::degenerate(UtilityAct act) { return Lottery({Atom{1.0, std::move(act)}}); }

Lottery Lottery::constant(std::size_t states, double value) { return degenerate(UtilityAct::constant(states, value)); }

Lottery Lottery::shifted(double t) const {
    auto atoms = atoms_;
    for (auto& a : atoms) a.act = a.act.shifted(t);
    return Lottery(std::move(atoms));
}

Lottery mix_lotteries(double lambda, const Lottery& p, const Lottery& q) {
    detail::require_weight(lambda, "mix_lotteries");
    detail::require_same_size(p.dimension(), q.dimension(), "mix_lotteries");
    if (lambda == 1.0) return p;
    if (lambda == 0.0) return q;
    std::vector<Atom> atoms;
    auto add = [&](double prob, const UtilityAct& act) {
        for (auto& a : atoms) {
            if (a.act == act) {
                a.probability += prob;
                return;
            }
        }
        atoms.push_back({prob, act});
    };
    for (const auto& a : p.atoms()) add(lambda * a.probability, a.act);
    for (const auto& a : q.atoms()) add((1.0 - lambda) * a.probability, a.act);
    return Lottery(std::move(atoms));
}

double expected_meu(const BeliefSet& set, const Lottery& lottery) {
    double s = 0.0;
    for (const auto& a : lottery.atoms()) s += a.probability * support_value(set, a.act);
    return s;
}

std::string_view to_string(Variant v) {
    switch (v) {
    case Variant::Cap: return "cap";
    case Variant::Cautious: return "cautious";
    case Variant::DualSelf: return "dual_self";
    case Variant::DoubleMaxmin: return "double_maxmin";
    case Variant::Choquet: return "choquet";
    }
    return "?";
}

Variant parse_variant(std::string_view name) {
    for (Variant v : {Variant::Cap, Variant::Cautious, Variant::DualSelf, Variant::DoubleMaxmin, Variant::Choquet}) {
        if (to_string(v) == name) return v;
    }
    throw InvalidArgument("unknown model variant '" + std::string(name) + "'");
}

double AffineExpression::at(std::span<const double> theta) const {
    detail::require_same_size(theta.size(), coefficients.size(), "AffineExpression");
    double s = constant;
    for (std::size_t j = 0; j < theta.size(); ++j) s += coefficients[j] * theta[j];
    return s;
}

double AffineExpression::box_minimum() const {
    double s = constant;
    for (double c : coefficients) s += std::min(c, 0.0);
    return s;
}

bool AffineExpression::is_zero() const {
    return constant == 0.0 && std::all_of(coefficients.begin(), coefficients.end(), [](double c) { return c == 0.0; });
}

ParametricFamily::ParametricFamily(std::vector<std::string> parameters,
                                   std::vector<std::vector<AffineExpression>> vertex_templates,
                                   AffineExpression cost, std::size_t grid_resolution)
    : parameters_(std::move(parameters)), templates_(std::move(vertex_templates)), cost_(std::move(cost)),
      grid_resolution_(grid_resolution) {
    if (parameters_.empty()) throw InvalidArgument("parametric family needs at least one parameter");
    if (templates_.empty()) throw InvalidArgument("parametric family needs at least one vertex template");
    if (grid_resolution_ < 1) throw InvalidArgument("grid resolution must be positive");
    const std::size_t k = parameters_.size();
    for (const auto& v : templates_) {
        detail::require_same_size(v.size(), templates_.front().size(), "ParametricFamily vertex");
        for (const auto& e : v) detail::require_same_size(e.coefficients.size(), k, "ParametricFamily expression");
    }
    detail::require_same_size(cost_.coefficients.size(), k, "ParametricFamily cost");
    auto check = [&](const std::vector<double>& theta) {
        try {
            (void)set_at(theta);
        } catch (const InvalidArgument& e) {
            throw InvalidArgument("generator invalid at θ=" + format_parameters(theta) + ": " + e.what());
        }
        if (cost_at(theta) < -kGroundednessTolerance) {
            throw InvalidArgument("negative cost at θ=" + format_parameters(theta));
        }
    };
    for (const auto& theta : corners()) check(theta);
    for (const auto& theta : grid_points()) check(theta);
}

BeliefSet ParametricFamily::set_at(std::span<const double> theta) const {
    std::vector<Prior> vertices;
    vertices.reserve(templates_.size());
    for (const auto& v : templates_) {
        std::vector<double> w(v.size());
        for (std::size_t i = 0; i < v.size(); ++i) w[i] = v[i].at(theta);
        vertices.emplace_back(std::move(w));
    }
    return BeliefSet(std::move(vertices));
}

std::vector<std::vector<double>> ParametricFamily::grid_points() const {
    const std::size_t k = parameter_count();
    const std::size_t r = grid_resolution_;
    std::size_t total = 1;
    for (std::size_t j = 0; j < k; ++j) total *= r;
    std::vector<std::vector<double>> out;
    out.reserve(total);
    std::vector<std::size_t> idx(k, 0);
    for (std::size_t n = 0; n < total; ++n) {
        std::vector<double> theta(k);
        for (std::size_t j = 0; j < k; ++j) {
            theta[j] = r == 1 ? 0.0 : static_cast<double>(idx[j]) / static_cast<double>(r - 1);
        }
        out.push_back(std::move(theta));
        for (std::size_t j = k; j-- > 0;) {
            if (++idx[j] < r) break;
            idx[j] = 0;
        }
    }
    return out;
}

std::vector<std::vector<double>> ParametricFamily::corners() const {
    const std::size_t k = parameter_count();
    std::vector<std::vector<double>> out;
    for (std::size_t mask = 0; mask < (std::size_t{1} << k); ++mask) {
        std::vector<double> theta(k);
        for (std::size_t j = 0; j < k; ++j) theta[j] = (mask >> (k - 1 - j)) & 1u ? 1.0 : 0.0;
        out.push_back(std::move(theta));
    }
    return out;
}

ParametricFamily ParametricFamily::with_grid(std::size_t grid_resolution) const {
    return ParametricFamily(parameters_, templates_, cost_, grid_resolution);
}

FiniteFamily ParametricFamily::sampled() const {
    FiniteFamily out;
    for (const auto& theta : grid_points()) {
        out.members.push_back({format_parameters(theta), set_at(theta), std::max(0.0, cost_at(theta)), std::nullopt});
    }
    return out;
}

std::size_t family_states(const PerceptionFamily& family) {
    if (const auto* f = std::get_if<FiniteFamily>(&family)) {
        return f->members.empty() ? 0 : f->members.front().set.dimension();
    }
    return std::get<ParametricFamily>(family).states();
}

FiniteFamily as_finite(const PerceptionFamily& family) {
    if (const auto* f = std::get_if<FiniteFamily>(&family)) return *f;
    return std::get<ParametricFamily>(family).sampled();
}

CapModel::CapModel(StateSpace states, PerceptionFamily family, Variant variant)
    : states_(std::move(states)), family_(std::move(family)), variant_(variant) {
    const std::size_t n = states_.size();
    const bool cost_free = variant_ == Variant::DualSelf || variant_ == Variant::DoubleMaxmin;
    if (auto* finite = std::get_if<FiniteFamily>(&family_)) {
        if (finite->members.empty()) throw InvalidArgument("perception family is empty");
        double min_cost = finite->members.front().cost;
        for (std::size_t m = 0; m < finite->members.size(); ++m) {
            auto& member = finite->members[m];
            const std::string where = "member " + (member.label.empty() ? std::to_string(m) : member.label);
            if (member.capacity) {
                detail::require_same_size(member.capacity->states(), n, "CapModel capacity");
                if (!is_supermodular(*member.capacity)) throw InvalidArgument(where + ": capacity is not supermodular");
            }
            if (variant_ == Variant::Choquet) {
                if (!member.capacity) throw InvalidArgument(where + ": choquet variant needs a capacity per member");
                member.set = core_of_capacity(*member.capacity);
            }
            detail::require_same_size(member.set.dimension(), n, "CapModel member");
            if (!std::isfinite(member.cost) || member.cost < 0.0) {
                throw InvalidArgument(where + ": cost must be a nonnegative real");
            }
            if (cost_free && member.cost != 0.0) {
                throw InvalidArgument(where + ": " + std::string(to_string(variant_)) + " models carry no costs");
            }
            min_cost = std::min(min_cost, member.cost);
        }
        if (min_cost > kGroundednessTolerance) {
            throw InvalidArgument("cost is not grounded: minimum cost " + std::to_string(min_cost));
        }
    } else {
        const auto& param = std::get<ParametricFamily>(family_);
        detail::require_same_size(param.states(), n, "CapModel family");
        if (variant_ == Variant::Choquet) throw InvalidArgument("choquet variant needs a finite family of capacities");
        if (cost_free && !param.cost().is_zero()) {
            throw InvalidArgument(std::string(to_string(variant_)) + " models carry no costs");
        }
        const double min_cost = param.cost().box_minimum();
        if (std::abs(min_cost) > kGroundednessTolerance) {
            throw InvalidArgument("cost is not grounded: minimum cost " + std::to_string(min_cost));
        }
    }
}

bool CapModel::maximizes() const noexcept {
    return variant_ == Variant::Cap || variant_ == Variant::DualSelf || variant_ == Variant::Choquet;
}

double optimality_tolerance(double value) { return 1e-9 * std::max(1.0, std::abs(value)); }

BeliefSet perception_set(const CapModel& model, const OptimalPerception& perception) {
    if (const auto* f = std::get_if<FiniteFamily>(&model.family())) return f->members.at(*perception.index).set;
    return std::get<ParametricFamily>(model.family()).set_at(perception.parameters);
}

bool same_perception(const OptimalPerception& a, const OptimalPerception& b) {
    if (a.index || b.index) return a.index == b.index;
    if (a.parameters.size() != b.parameters.size()) return false;
    for (std::size_t j = 0; j < a.parameters.size(); ++j) {
        if (std::abs(a.parameters[j] - b.parameters[j]) > 1e-9) return false;
    }
    return true;
}

FixedSupportEvaluator::FixedSupportEvaluator(const CapModel& model, std::vector<UtilityAct> acts)
    : model_(model), acts_(std::move(acts)) {
    if (acts_.empty()) throw InvalidArgument("evaluator needs at least one act");
    for (const auto& a : acts_) detail::require_same_size(a.size(), model_.states().size(), "evaluate");
    if (const auto* finite = std::get_if<FiniteFamily>(&model_.family())) {
        support_.resize(finite->members.size());
        for (std::size_t m = 0; m < finite->members.size(); ++m) {
            const auto& member = finite->members[m];
            support_[m].resize(acts_.size());
            for (std::size_t i = 0; i < acts_.size(); ++i) {
                support_[m][i] = (model_.variant() == Variant::Choquet) ? choquet_unchecked(*member.capacity, acts_[i])
                                                                         : support_value(member.set, acts_[i]);
            }
        }
    } else {
        const auto& param = std::get<ParametricFamily>(model_.family());
        const std::size_t k = param.parameter_count();
        affine_.resize(acts_.size());
        for (std::size_t i = 0; i < acts_.size(); ++i) {
            for (const auto& vertex : param.vertex_templates()) {
                std::vector<double> coeff(k + 1, 0.0);
                for (std::size_t s = 0; s < vertex.size(); ++s) {
                    coeff[0] += acts_[i][s] * vertex[s].constant;
                    for (std::size_t j = 0; j < k; ++j) coeff[j + 1] += acts_[i][s] * vertex[s].coefficients[j];
                }
                affine_[i].push_back(std::move(coeff));
            }
        }
    }
}

FixedSupportEvaluator::Outcome FixedSupportEvaluator::evaluate(std::span<const double> weights,
                                                               bool collect_all) const {
    detail::require_same_size(weights.size(), acts_.size(), "FixedSupportEvaluator::evaluate");
    const bool maximize = model_.maximizes();
    const double cost_sign = model_.variant() == Variant::Cautious ? 1.0 : -1.0;
    // Orient so that larger is always better.
    const double orient = maximize ? 1.0 : -1.0;

    Outcome out;
    if (const auto* finite = std::get_if<FiniteFamily>(&model_.family())) {
        const std::size_t count = finite->members.size();
        std::vector<double> objective(count);
        std::size_t best = 0;
        for (std::size_t m = 0; m < count; ++m) {
            double s = 0.0;
            for (std::size_t i = 0; i < weights.size(); ++i) {
                if (weights[i] != 0.0) s += weights[i] * support_[m][i];
            }
            objective[m] = s + cost_sign * finite->members[m].cost;
            if (orient * objective[m] > orient * objective[best]) best = m;
        }
        out.value = objective[best];
        const double eps = optimality_tolerance(out.value);
        auto make = [&](std::size_t m) {
            return OptimalPerception{m, {}, finite->members[m].label, finite->members[m].cost, objective[m]};
        };
        out.optimal.push_back(make(best));
        if (collect_all) {
            for (std::size_t m = 0; m < count; ++m) {
                if (m != best && std::abs(objective[m] - out.value) <= eps) out.optimal.push_back(make(m));
            }
        }
        out.act_values = support_[best];
        return out;
    }

    const auto& param = std::get<ParametricFamily>(model_.family());
    const std::size_t k = param.parameter_count();
    std::vector<std::size_t> active;
    for (std::size_t i = 0; i < weights.size(); ++i) {
        if (weights[i] != 0.0) active.push_back(i);
    }
    auto act_value = [&](std::size_t i, std::span<const double> theta) {
        double best = std::numeric_limits<double>::infinity();
        for (const auto& c : affine_[i]) {
            double s = c[0];
            for (std::size_t j = 0; j < k; ++j) s += c[j + 1] * theta[j];
            best = std::min(best, s);
        }
        return best;
    };
    auto objective = [&](std::span<const double> theta) {
        double s = 0.0;
        for (std::size_t i : active) s += weights[i] * act_value(i, theta);
        return s + cost_sign * param.cost_at(theta);
    };

    struct Candidate {
        std::vector<double> theta;
        double value;
    };
    std::vector<Candidate> candidates;
    std::size_t best = 0;
    auto consider = [&](std::vector<double> theta) {
        const double v = objective(theta);
        candidates.push_back({std::move(theta), v});
        if (orient * v > orient * candidates[best].value) best = candidates.size() - 1;
    };
    for (auto& theta : param.corners()) consider(std::move(theta));
    for (auto& theta : param.grid_points()) consider(std::move(theta));

    // Compass search with coordinate and pairwise-diagonal directions from
    // the best grid candidate, step halved down to the refinement tolerance.
    std::vector<std::vector<double>> directions;
    for (std::size_t j = 0; j < k; ++j) {
        for (double s : {1.0, -1.0}) {
            std::vector<double> d(k, 0.0);
            d[j] = s;
            directions.push_back(std::move(d));
        }
    }
    for (std::size_t a = 0; a < k; ++a) {
        for (std::size_t b = a + 1; b < k; ++b) {
            for (double sa : {1.0, -1.0}) {
                for (double sb : {1.0, -1.0}) {
                    std::vector<double> d(k, 0.0);
                    d[a] = sa;
                    d[b] = sb;
                    directions.push_back(std::move(d));
                }
            }
        }
    }
    std::vector<double> point = candidates[best].theta;
    double point_value = candidates[best].value;
    const std::size_t r = param.grid_resolution();
    double step = r > 1 ? 0.5 / static_cast<double>(r - 1) : 0.25;
    for (std::size_t guard = 0; step >= kRefinementTolerance && guard < 100000; ++guard) {
        std::vector<double> next_point;
        double next_value = point_value;
        for (const auto& d : directions) {
            std::vector<double> trial(k);
            for (std::size_t j = 0; j < k; ++j) trial[j] = std::clamp(point[j] + step * d[j], 0.0, 1.0);
            const double v = objective(trial);
            if (orient * v > orient * next_value + 1e-15 * std::max(1.0, std::abs(v))) {
                next_value = v;
                next_point = std::move(trial);
            }
        }
        if (next_point.empty()) {
            step *= 0.5;
        } else {
            point = std::move(next_point);
            point_value = next_value;
        }
    }
    if (orient * point_value > orient * candidates[best].value) {
        candidates.push_back({point, point_value});
        best = candidates.size() - 1;
    }

    out.value = candidates[best].value;
    const double eps = optimality_tolerance(out.value);
    auto make = [&](const Candidate& c) {
        return OptimalPerception{std::nullopt, c.theta, format_parameters(c.theta), param.cost_at(c.theta), c.value};
    };
    out.optimal.push_back(make(candidates[best]));
    if (collect_all) {
        for (std::size_t c = 0; c < candidates.size(); ++c) {
            if (c == best || std::abs(candidates[c].value - out.value) > eps) continue;
            auto p = make(candidates[c]);
            const bool dup = std::any_of(out.optimal.begin(), out.optimal.end(),
                                         [&](const OptimalPerception& o) { return same_perception(o, p); });
            if (!dup) out.optimal.push_back(std::move(p));
        }
    }
    out.act_values.resize(acts_.size());
    for (std::size_t i = 0; i < acts_.size(); ++i) out.act_values[i] = act_value(i, candidates[best].theta);
    return out;
}

namespace {

std::pair<std::vector<UtilityAct>, std::vector<double>> split(const Lottery& lottery) {
    std::vector<UtilityAct> acts;
    std::vector<double> weights;
    for (const auto& a : lottery.atoms()) {
        acts.push_back(a.act);
        weights.push_back(a.probability);
    }
    return {std::move(acts), std::move(weights)};
}

} // namespace

EvaluationResult evaluate(const CapModel& model, const Lottery& lottery) {
    detail::require_same_size(lottery.dimension(), model.states().size(), "evaluate");
    auto [acts, weights] = split(lottery);
    const FixedSupportEvaluator evaluator(model, std::move(acts));
    auto outcome = evaluator.evaluate(weights, true);
    return {outcome.value, outcome.value, std::move(outcome.optimal)};
}

double utility(const CapModel& model, const Lottery& lottery) {
    detail::require_same_size(lottery.dimension(), model.states().size(), "evaluate");
    if (const auto* finite = std::get_if<FiniteFamily>(&model.family())) {
        // Direct loop; avoids tabulating for one-off evaluations.
        const bool maximize = model.maximizes();
        const double cost_sign = model.variant() == Variant::Cautious ? 1.0 : -1.0;
        double best = 0.0;
        bool first = true;
        for (const auto& member : finite->members) {
            double s = 0.0;
            for (const auto& a : lottery.atoms()) {
                s += a.probability * (model.variant() == Variant::Choquet ? choquet_unchecked(*member.capacity, a.act)
                                                                          : support_value(member.set, a.act));
            }
            s += cost_sign * member.cost;
            if (first || (maximize ? s > best : s < best)) best = s;
            first = false;
        }
        return best;
    }
    auto [acts, weights] = split(lottery);
    const FixedSupportEvaluator evaluator(model, std::move(acts));
    return evaluator.evaluate(weights, false).value;
}

double utility(const CapModel& model, const UtilityAct& act) { return utility(model, Lottery::degenerate(act)); }

double certainty_equivalent(const CapModel& model, const Lottery& lottery) { return evaluate(model, lottery).value; }

} // namespace cap
