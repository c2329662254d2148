#include "bwp/numeric.hpp"

#include <cmath>
#include <limits>
#include <vector>

namespace bwp {

void CompensatedSum::add(double v) noexcept {
    const double t = sum_ + v;
    if (std::abs(sum_) >= std::abs(v))
        comp_ += (sum_ - t) + v;
    else
        comp_ += (v - t) + sum_;
    sum_ = t;
}

double pairwise_sum(std::span<const double> xs) {
    constexpr std::size_t kBlock = 64;
    if (xs.size() <= kBlock) {
        double s = 0.0;
        for (double v : xs) s += v;
        return s;
    }
    const std::size_t half = xs.size() / 2;
    return pairwise_sum(xs.first(half)) + pairwise_sum(xs.subspan(half));
}

double normal_interval_probability(double lo, double hi) noexcept {
    if (!(hi > lo)) return 0.0;
    constexpr double kInvSqrt2 = 0.70710678118654752440;
    // Upper tail: difference of complementary error functions keeps the
    // small result accurate; lower tail by symmetry; otherwise erf, which is
    // accurate near zero.
    if (lo > 1.0) return 0.5 * (std::erfc(lo * kInvSqrt2) - std::erfc(hi * kInvSqrt2));
    if (hi < -1.0) return 0.5 * (std::erfc(-hi * kInvSqrt2) - std::erfc(-lo * kInvSqrt2));
    return 0.5 * (std::erf(hi * kInvSqrt2) - std::erf(lo * kInvSqrt2));
}

double loglog_slope(std::span<const double> x, std::span<const double> y) {
    std::vector<double> lx, ly;
    for (std::size_t i = 0; i < x.size() && i < y.size(); ++i) {
        if (y[i] > 0.0 && x[i] > 0.0 && std::isfinite(y[i])) {
            lx.push_back(std::log(x[i]));
            ly.push_back(std::log(y[i]));
        }
    }
    if (lx.size() < 2) return std::numeric_limits<double>::quiet_NaN();
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
        mx += lx[i];
        my += ly[i];
    }
    mx /= static_cast<double>(lx.size());
    my /= static_cast<double>(ly.size());
    double sxy = 0, sxx = 0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
        sxy += (lx[i] - mx) * (ly[i] - my);
        sxx += (lx[i] - mx) * (lx[i] - mx);
    }
    return sxy / sxx;
}

}  // namespace bwp
