#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

namespace cap {

/// Seeded generator with platform-independent draws. Distributions are
/// derived directly from the raw 64-bit engine output so a seed yields the
/// same stream under every standard library.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    /// Uniform on [0, 1).
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// Uniform index in [0, n).
    std::size_t index(std::size_t n) { return static_cast<std::size_t>(uniform() * static_cast<double>(n)); }

    bool bernoulli(double p) { return uniform() < p; }

    /// Point drawn uniformly from the probability simplex of dimension n.
    std::vector<double> simplex_point(std::size_t n) {
        std::vector<double> w(n);
        double total = 0.0;
        for (auto& x : w) {
            x = -std::log1p(-uniform());
            total += x;
        }
        for (auto& x : w) x /= total;
        return w;
    }

    std::uint64_t next() { return engine_(); }

private:
    std::mt19937_64 engine_;
};

} // namespace cap
