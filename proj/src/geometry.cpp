#include "cap/geometry.hpp"

#include "cap/errors.hpp"
#include "cap/lp.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <unordered_set>

namespace cap {

namespace detail {

void require_weight(double lambda, const char* op) {
    if (!(lambda >= 0.0 && lambda <= 1.0)) {
        throw InvalidArgument(std::string(op) + ": mixture weight " + std::to_string(lambda) + " outside [0, 1]");
    }
}

void require_same_size(std::size_t a, std::size_t b, const char* op) {
    if (a != b) {
        throw DimensionMismatch(std::string(op) + ": dimension " + std::to_string(a) + " vs " + std::to_string(b));
    }
}

} // namespace detail

StateSpace::StateSpace(std::vector<std::string> labels) : labels_(std::move(labels)) {
    if (labels_.size() < 2) throw InvalidArgument("state space needs at least two states");
    std::unordered_set<std::string> seen;
    for (const auto& l : labels_) {
        if (l.empty()) throw InvalidArgument("state labels must be nonempty");
        if (!seen.insert(l).second) throw InvalidArgument("duplicate state label '" + l + "'");
    }
}

std::size_t StateSpace::index_of(const std::string& label) const {
    const auto it = std::find(labels_.begin(), labels_.end(), label);
    if (it == labels_.end()) throw InvalidArgument("unknown state '" + label + "'");
    return static_cast<std::size_t>(it - labels_.begin());
}

Prior::Prior(std::vector<double> weights) : weights_(std::move(weights)) {
    if (weights_.empty()) throw InvalidArgument("prior over an empty state space");
    double total = 0.0;
    for (double w : weights_) {
        if (!std::isfinite(w) || w < -kPriorTolerance) {
            throw InvalidArgument("prior weight " + std::to_string(w) + " is negative or not finite");
        }
        total += w;
    }
    if (std::abs(total - 1.0) > kPriorTolerance) {
        throw InvalidArgument("prior weights sum to " + std::to_string(total) + ", not 1");
    }
}

Prior Prior::uniform(std::size_t n) { return Prior(std::vector<double>(n, 1.0 / static_cast<double>(n))); }

Prior Prior::dirac(std::size_t n, std::size_t state) {
    std::vector<double> w(n, 0.0);
    w.at(state) = 1.0;
    return Prior(std::move(w));
}

UtilityAct::UtilityAct(std::vector<double> payoffs) : payoffs_(std::move(payoffs)) {
    for (double x : payoffs_) {
        if (!std::isfinite(x)) throw InvalidArgument("act payoffs must be finite");
    }
}

UtilityAct UtilityAct::constant(std::size_t n, double value) { return UtilityAct(std::vector<double>(n, value)); }

double UtilityAct::expectation(const Prior& prior) const {
    detail::require_same_size(size(), prior.size(), "expectation");
    double s = 0.0;
    for (std::size_t i = 0; i < payoffs_.size(); ++i) s += payoffs_[i] * prior[i];
    return s;
}

bool UtilityAct::is_constant() const noexcept {
    return std::all_of(payoffs_.begin(), payoffs_.end(), [&](double x) { return x == payoffs_.front(); });
}

UtilityAct UtilityAct::shifted(double t) const {
    auto p = payoffs_;
    for (auto& x : p) x += t;
    return UtilityAct(std::move(p));
}

UtilityAct UtilityAct::scaled(double alpha) const {
    auto p = payoffs_;
    for (auto& x : p) x *= alpha;
    return UtilityAct(std::move(p));
}

UtilityAct mix_acts(double lambda, const UtilityAct& f, const UtilityAct& g) {
    detail::require_weight(lambda, "mix_acts");
    detail::require_same_size(f.size(), g.size(), "mix_acts");
    if (lambda == 1.0) return f;
    if (lambda == 0.0) return g;
    std::vector<double> p(f.size());
    for (std::size_t i = 0; i < p.size(); ++i) p[i] = lambda * f[i] + (1.0 - lambda) * g[i];
    return UtilityAct(std::move(p));
}

BeliefSet::BeliefSet(std::vector<Prior> vertices) : vertices_(std::move(vertices)) {
    if (vertices_.empty()) throw InvalidArgument("belief set needs at least one vertex");
    for (const auto& v : vertices_) detail::require_same_size(v.size(), vertices_.front().size(), "BeliefSet");
}

BeliefSet BeliefSet::singleton(Prior prior) { return BeliefSet({std::move(prior)}); }

BeliefSet BeliefSet::simplex(std::size_t n) {
    std::vector<Prior> v;
    for (std::size_t i = 0; i < n; ++i) v.push_back(Prior::dirac(n, i));
    return BeliefSet(std::move(v));
}

double support_value(const BeliefSet& set, const UtilityAct& act) {
    detail::require_same_size(set.dimension(), act.size(), "support_value");
    double best = act.expectation(set.vertices().front());
    for (std::size_t k = 1; k < set.vertices().size(); ++k) best = std::min(best, act.expectation(set.vertices()[k]));
    return best;
}

BeliefSet mix_sets(double lambda, const BeliefSet& first, const BeliefSet& second) {
    detail::require_weight(lambda, "mix_sets");
    detail::require_same_size(first.dimension(), second.dimension(), "mix_sets");
    if (lambda == 1.0) return first;
    if (lambda == 0.0) return second;
    std::vector<Prior> out;
    out.reserve(first.vertices().size() * second.vertices().size());
    const std::size_t n = first.dimension();
    for (const auto& a : first.vertices()) {
        for (const auto& b : second.vertices()) {
            std::vector<double> w(n);
            for (std::size_t i = 0; i < n; ++i) w[i] = lambda * a[i] + (1.0 - lambda) * b[i];
            out.emplace_back(std::move(w));
        }
    }
    return BeliefSet(std::move(out));
}

namespace {

// Residual of the best convex combination of `points` reproducing `target`,
// or +inf when the phase-1 solve reports infeasibility.
double combination_residual(std::span<const Prior> points, const Prior& target) {
    const std::size_t n = target.size();
    const std::size_t m = points.size();
    lp::Problem problem;
    problem.objective.assign(m, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        lp::Constraint row;
        row.coefficients.resize(m);
        for (std::size_t k = 0; k < m; ++k) row.coefficients[k] = points[k][i];
        row.sense = lp::Sense::Equal;
        row.rhs = target[i];
        problem.constraints.push_back(std::move(row));
    }
    problem.constraints.push_back({std::vector<double>(m, 1.0), lp::Sense::Equal, 1.0});
    const auto sol = lp::solve(problem);
    if (sol.status != lp::Status::Optimal) return std::numeric_limits<double>::infinity();
    double residual = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double s = 0.0;
        for (std::size_t k = 0; k < m; ++k) s += sol.x[k] * points[k][i];
        residual = std::max(residual, std::abs(s - target[i]));
    }
    const double total = std::accumulate(sol.x.begin(), sol.x.end(), 0.0);
    return std::max(residual, std::abs(total - 1.0));
}

} // namespace

bool contains(const BeliefSet& set, const Prior& prior, double tolerance) {
    detail::require_same_size(set.dimension(), prior.size(), "contains");
    for (const auto& v : set.vertices()) {
        double d = 0.0;
        for (std::size_t i = 0; i < prior.size(); ++i) d = std::max(d, std::abs(v[i] - prior[i]));
        if (d <= tolerance) return true;
    }
    return combination_residual(set.vertices(), prior) <= tolerance;
}

bool is_subset(const BeliefSet& inner, const BeliefSet& outer) {
    detail::require_same_size(inner.dimension(), outer.dimension(), "is_subset");
    return std::all_of(inner.vertices().begin(), inner.vertices().end(),
                       [&](const Prior& v) { return contains(outer, v); });
}

bool same_set(const BeliefSet& a, const BeliefSet& b) { return is_subset(a, b) && is_subset(b, a); }

BeliefSet prune(const BeliefSet& set) {
    std::vector<Prior> kept;
    for (const auto& v : set.vertices()) {
        const bool dup = std::any_of(kept.begin(), kept.end(), [&](const Prior& k) {
            for (std::size_t i = 0; i < v.size(); ++i) {
                if (std::abs(k[i] - v[i]) > kPriorTolerance) return false;
            }
            return true;
        });
        if (!dup) kept.push_back(v);
    }
    for (std::size_t k = 0; k < kept.size() && kept.size() > 1;) {
        std::vector<Prior> others;
        for (std::size_t j = 0; j < kept.size(); ++j) {
            if (j != k) others.push_back(kept[j]);
        }
        if (combination_residual(others, kept[k]) <= kInclusionTolerance) {
            kept.erase(kept.begin() + static_cast<std::ptrdiff_t>(k));
        } else {
            ++k;
        }
    }
    return BeliefSet(std::move(kept));
}

double vertex_distance(const BeliefSet& a, const BeliefSet& b) {
    detail::require_same_size(a.dimension(), b.dimension(), "vertex_distance");
    auto directed = [](const BeliefSet& x, const BeliefSet& y) {
        double worst = 0.0;
        for (const auto& u : x.vertices()) {
            double nearest = std::numeric_limits<double>::infinity();
            for (const auto& v : y.vertices()) {
                double d = 0.0;
                for (std::size_t i = 0; i < u.size(); ++i) d = std::max(d, std::abs(u[i] - v[i]));
                nearest = std::min(nearest, d);
            }
            worst = std::max(worst, nearest);
        }
        return worst;
    };
    return std::max(directed(a, b), directed(b, a));
}

ConvexCapacity::ConvexCapacity(std::size_t states, std::vector<double> values)
    : states_(states), values_(std::move(values)) {
    if (states_ < 1 || states_ > kMaxCapacityStates) {
        throw InvalidArgument("capacities support 1.." + std::to_string(kMaxCapacityStates) + " states");
    }
    if (values_.size() != (std::size_t{1} << states_)) {
        throw InvalidArgument("capacity needs a value for each of the 2^n subsets");
    }
    for (double v : values_) {
        if (!std::isfinite(v)) throw InvalidArgument("capacity values must be finite");
    }
    if (std::abs(values_.front()) > kPriorTolerance) throw InvalidArgument("capacity of the empty set must be 0");
    if (std::abs(values_.back() - 1.0) > kPriorTolerance) throw InvalidArgument("capacity of the full set must be 1");
}

ConvexCapacity ConvexCapacity::from_function(std::size_t states, const std::function<double(std::uint32_t)>& f) {
    std::vector<double> v(std::size_t{1} << states);
    for (std::uint32_t mask = 0; mask < v.size(); ++mask) v[mask] = f(mask);
    return ConvexCapacity(states, std::move(v));
}

ConvexCapacity ConvexCapacity::additive(const Prior& prior) {
    return from_function(prior.size(), [&](std::uint32_t mask) {
        double s = 0.0;
        for (std::size_t i = 0; i < prior.size(); ++i) {
            if (mask & (std::uint32_t{1} << i)) s += prior[i];
        }
        return s;
    });
}

bool is_supermodular(const ConvexCapacity& nu, double tolerance) {
    const std::uint32_t full = nu.full_mask();
    for (std::uint32_t e = 0; e <= full; ++e) {
        for (std::uint32_t f = e + 1; f <= full; ++f) {
            if (nu(e | f) + nu(e & f) < nu(e) + nu(f) - tolerance) return false;
        }
    }
    return true;
}

BeliefSet core_of_capacity(const ConvexCapacity& nu) {
    if (!is_supermodular(nu)) throw InvalidArgument("core_of_capacity: capacity is not supermodular");
    const std::size_t n = nu.states();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::set<std::vector<double>> unique;
    do {
        std::vector<double> mu(n);
        std::uint32_t prefix = 0;
        for (std::size_t k = 0; k < n; ++k) {
            const std::uint32_t next = prefix | (std::uint32_t{1} << order[k]);
            mu[order[k]] = nu(next) - nu(prefix);
            prefix = next;
        }
        unique.insert(std::move(mu));
    } while (std::next_permutation(order.begin(), order.end()));
    std::vector<Prior> vertices;
    vertices.reserve(unique.size());
    for (const auto& mu : unique) vertices.emplace_back(mu);
    return BeliefSet(std::move(vertices));
}

double choquet_integral(const ConvexCapacity& nu, const UtilityAct& act) {
    if (!is_supermodular(nu)) throw InvalidArgument("choquet_integral: capacity is not supermodular");
    detail::require_same_size(nu.states(), act.size(), "choquet_integral");
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

} // namespace cap
