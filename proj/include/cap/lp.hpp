#pragma once

#include <cstddef>
#include <vector>

namespace cap::lp {

enum class Sense { LessEqual, Equal, GreaterEqual };

struct Constraint {
    std::vector<double> coefficients;
    Sense sense = Sense::LessEqual;
    double rhs = 0.0;
};

/// maximize objective·x subject to constraints and x >= 0.
struct Problem {
    std::vector<double> objective;
    std::vector<Constraint> constraints;
};

enum class Status { Optimal, Infeasible, Unbounded, IterationLimit };

struct Solution {
    Status status = Status::Infeasible;
    std::vector<double> x;
    double value = 0.0;
};

/// Dense two-phase tableau simplex. Dantzig pricing, switching to Bland's
/// rule after a run of degenerate pivots so the method always terminates.
/// Intended for the small programs that arise here (tens to a few hundred
/// rows and columns).
Solution solve(const Problem& problem, double tolerance = 1e-11);

} // namespace cap::lp
