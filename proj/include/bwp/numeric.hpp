#pragma once

#include <cstddef>
#include <span>

namespace bwp {

/// Neumaier-compensated running sum. Tolerates the alternating signs of the
/// (-T)^{-n} series.
class CompensatedSum {
public:
    void add(double v) noexcept;
    double value() const noexcept { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

/// Pairwise (cascade) summation. The result depends only on the sequence,
/// never on how callers partition work, and the rounding error grows as
/// O(log n).
double pairwise_sum(std::span<const double> xs);

/// P(lo <= G < hi) for G ~ N(0, 1), accurate in relative terms for narrow
/// intervals near the origin as well as in either tail.
double normal_interval_probability(double lo, double hi) noexcept;

/// Least-squares slope of log(y) against log(x). Points with y <= 0 are
/// skipped; returns NaN when fewer than two usable points remain.
double loglog_slope(std::span<const double> x, std::span<const double> y);

}  // namespace bwp
