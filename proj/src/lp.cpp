#include "cap/lp.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace cap::lp {
namespace {

class Tableau {
public:
    Tableau(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), data_((rows + 1) * (cols + 1), 0.0), basis_(rows, 0) {}

    double& at(std::size_t r, std::size_t c) { return data_[r * (cols_ + 1) + c]; }
    double at(std::size_t r, std::size_t c) const { return data_[r * (cols_ + 1) + c]; }
    double& rhs(std::size_t r) { return at(r, cols_); }
    double rhs(std::size_t r) const { return at(r, cols_); }
    /// Objective row (index rows_) stores reduced costs of a minimisation.
    double& cost(std::size_t c) { return at(rows_, c); }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    std::vector<std::size_t>& basis() { return basis_; }

    void pivot(std::size_t pr, std::size_t pc) {
        const double inv = 1.0 / at(pr, pc);
        for (std::size_t c = 0; c <= cols_; ++c) at(pr, c) *= inv;
        at(pr, pc) = 1.0;
        for (std::size_t r = 0; r <= rows_; ++r) {
            if (r == pr) continue;
            const double factor = at(r, pc);
            if (factor == 0.0) continue;
            for (std::size_t c = 0; c <= cols_; ++c) at(r, c) -= factor * at(pr, c);
            at(r, pc) = 0.0;
        }
        basis_[pr] = pc;
    }

    void remove_row(std::size_t r) {
        std::vector<double> next;
        next.reserve(rows_ * (cols_ + 1));
        for (std::size_t i = 0; i <= rows_; ++i) {
            if (i == r) continue;
            for (std::size_t c = 0; c <= cols_; ++c) next.push_back(at(i, c));
        }
        data_ = std::move(next);
        basis_.erase(basis_.begin() + static_cast<std::ptrdiff_t>(r));
        --rows_;
    }

private:
    std::size_t rows_;
    std::size_t cols_;
    std::vector<double> data_;
    std::vector<std::size_t> basis_;
};

// Minimises the objective row over columns with allowed[c] == true.
Status run_simplex(Tableau& t, const std::vector<bool>& allowed, double tol) {
    constexpr std::size_t kDegenerateSwitch = 50;
    const std::size_t limit = 50000 + 100 * (t.rows() + t.cols());
    std::size_t degenerate_run = 0;
    for (std::size_t iter = 0; iter < limit; ++iter) {
        const bool bland = degenerate_run >= kDegenerateSwitch;
        std::size_t enter = t.cols();
        double best = -tol;
        for (std::size_t c = 0; c < t.cols(); ++c) {
            if (!allowed[c]) continue;
            const double rc = t.cost(c);
            if (rc < best) {
                enter = c;
                if (bland) break;
                best = rc;
            }
        }
        if (enter == t.cols()) return Status::Optimal;

        std::size_t leave = t.rows();
        double ratio = std::numeric_limits<double>::infinity();
        for (std::size_t r = 0; r < t.rows(); ++r) {
            const double a = t.at(r, enter);
            if (a <= tol) continue;
            const double q = t.rhs(r) / a;
            if (q < ratio - 1e-15 ||
                (std::abs(q - ratio) <= 1e-15 && leave < t.rows() && t.basis()[r] < t.basis()[leave])) {
                ratio = q;
                leave = r;
            }
        }
        if (leave == t.rows()) return Status::Unbounded;
        degenerate_run = (ratio <= tol) ? degenerate_run + 1 : 0;
        t.pivot(leave, enter);
    }
    return Status::IterationLimit;
}

} // namespace

Solution solve(const Problem& problem, double tolerance) {
    const std::size_t n = problem.objective.size();
    const std::size_t m = problem.constraints.size();
    for (const auto& c : problem.constraints) {
        if (c.coefficients.size() != n) throw std::invalid_argument("lp: constraint width mismatch");
    }

    // Column layout: [structural | slack/surplus | artificial].
    std::size_t slacks = 0;
    std::size_t artificials = 0;
    std::vector<Sense> senses(m);
    std::vector<double> signs(m, 1.0);
    for (std::size_t r = 0; r < m; ++r) {
        Sense s = problem.constraints[r].sense;
        if (problem.constraints[r].rhs < 0.0) {
            signs[r] = -1.0;
            if (s == Sense::LessEqual) s = Sense::GreaterEqual;
            else if (s == Sense::GreaterEqual) s = Sense::LessEqual;
        }
        senses[r] = s;
        if (s != Sense::Equal) ++slacks;
        if (s != Sense::LessEqual) ++artificials;
    }
    const std::size_t cols = n + slacks + artificials;
    Tableau t(m, cols);
    std::vector<bool> is_artificial(cols, false);

    std::size_t slack_col = n;
    std::size_t art_col = n + slacks;
    for (std::size_t r = 0; r < m; ++r) {
        const auto& c = problem.constraints[r];
        for (std::size_t j = 0; j < n; ++j) t.at(r, j) = signs[r] * c.coefficients[j];
        t.rhs(r) = signs[r] * c.rhs;
        if (senses[r] == Sense::LessEqual) {
            t.at(r, slack_col) = 1.0;
            t.basis()[r] = slack_col++;
        } else {
            if (senses[r] == Sense::GreaterEqual) t.at(r, slack_col++) = -1.0;
            t.at(r, art_col) = 1.0;
            is_artificial[art_col] = true;
            t.basis()[r] = art_col++;
        }
    }

    Solution out;
    if (artificials > 0) {
        // Phase 1: minimise the sum of artificials.
        for (std::size_t c = 0; c <= cols; ++c) t.cost(c) = 0.0;
        for (std::size_t r = 0; r < m; ++r) {
            if (!is_artificial[t.basis()[r]]) continue;
            for (std::size_t c = 0; c <= cols; ++c) t.cost(c) -= t.at(r, c);
        }
        for (std::size_t c = 0; c < cols; ++c) {
            if (is_artificial[c]) t.cost(c) = 0.0;
        }
        const std::vector<bool> all(cols, true);
        const Status s = run_simplex(t, all, tolerance);
        if (s == Status::IterationLimit) {
            out.status = s;
            return out;
        }
        const double infeasibility = -t.cost(cols);
        double scale = 1.0;
        for (std::size_t r = 0; r < m; ++r) scale = std::max(scale, std::abs(problem.constraints[r].rhs));
        if (infeasibility > 1e-9 * scale) {
            out.status = Status::Infeasible;
            return out;
        }
        // Drive remaining artificials out of the basis; drop redundant rows.
        for (std::size_t r = 0; r < t.rows();) {
            if (!is_artificial[t.basis()[r]]) {
                ++r;
                continue;
            }
            std::size_t pc = cols;
            for (std::size_t c = 0; c < cols; ++c) {
                if (!is_artificial[c] && std::abs(t.at(r, c)) > 1e-9) {
                    pc = c;
                    break;
                }
            }
            if (pc == cols) {
                t.remove_row(r);
            } else {
                t.pivot(r, pc);
                ++r;
            }
        }
    }

    // Phase 2: maximise objective == minimise its negation.
    for (std::size_t c = 0; c <= cols; ++c) t.cost(c) = 0.0;
    for (std::size_t j = 0; j < n; ++j) t.cost(j) = -problem.objective[j];
    for (std::size_t r = 0; r < t.rows(); ++r) {
        const std::size_t b = t.basis()[r];
        const double cb = t.cost(b);
        if (cb == 0.0) continue;
        for (std::size_t c = 0; c <= cols; ++c) t.cost(c) -= cb * t.at(r, c);
    }
    std::vector<bool> allowed(cols, true);
    for (std::size_t c = 0; c < cols; ++c) allowed[c] = !is_artificial[c];
    const Status s = run_simplex(t, allowed, tolerance);
    out.status = s;
    if (s != Status::Optimal) return out;

    out.x.assign(n, 0.0);
    for (std::size_t r = 0; r < t.rows(); ++r) {
        if (t.basis()[r] < n) out.x[t.basis()[r]] = std::max(0.0, t.rhs(r));
    }
    out.value = 0.0;
    for (std::size_t j = 0; j < n; ++j) out.value += problem.objective[j] * out.x[j];
    return out;
}

} // namespace cap::lp
