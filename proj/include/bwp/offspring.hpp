#pragma once

#include <cstddef>
#include <vector>

namespace bwp {

enum class LawMode {
    Supercritical,  ///< requires m > 1 and sigma^2 > 0
    Test,           ///< any valid pmf (deterministic or subcritical laws in tests)
};

/// Finite offspring distribution P(Y = l) = p_l, l = 0..L.
class OffspringLaw {
public:
    static constexpr unsigned kMaxFactorialMoment = 8;

    explicit OffspringLaw(std::vector<double> pmf, LawMode mode = LawMode::Supercritical);

    const std::vector<double>& pmf() const noexcept { return pmf_; }
    LawMode mode() const noexcept { return mode_; }
    double mean() const noexcept { return mean_; }
    double variance() const noexcept { return variance_; }
    bool supercritical() const noexcept { return mean_ > 1.0 && variance_ > 0.0; }

    /// E[(Y)_k] = E[Y (Y-1) ... (Y-k+1)], k <= 8.
    double factorial_moment(unsigned k) const;

    /// Inverse-CDF draw from a uniform in (0, 1).
    unsigned sample(double u) const noexcept;

private:
    std::vector<double> pmf_;
    std::vector<double> cdf_;
    LawMode mode_;
    double mean_ = 0.0;
    double variance_ = 0.0;
};

}  // namespace bwp
