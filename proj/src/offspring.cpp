#include "bwp/offspring.hpp"

#include "bwp/errors.hpp"

#include <cmath>
#include <string>

namespace bwp {

OffspringLaw::OffspringLaw(std::vector<double> pmf, LawMode mode)
    : pmf_(std::move(pmf)), mode_(mode) {
    if (pmf_.empty()) throw ValidationError("offspring pmf must not be empty");
    double total = 0.0;
    for (double p : pmf_) {
        if (!(p >= 0.0) || !std::isfinite(p))
            throw ValidationError("offspring pmf entries must be finite and >= 0");
        total += p;
    }
    if (std::abs(total - 1.0) > 1e-12)
        throw ValidationError("offspring pmf sums to " + std::to_string(total) + ", expected 1");
    double second = 0.0;
    for (std::size_t l = 0; l < pmf_.size(); ++l) {
        mean_ += static_cast<double>(l) * pmf_[l];
        second += static_cast<double>(l * l) * pmf_[l];
    }
    variance_ = std::max(0.0, second - mean_ * mean_);
    if (mode_ == LawMode::Supercritical) {
        if (!(mean_ > 1.0))
            throw ValidationError("supercritical law requires mean > 1 (got " +
                                  std::to_string(mean_) + "); use test mode otherwise");
        if (!(variance_ > 0.0))
            throw ValidationError("supercritical law requires variance > 0; use test mode otherwise");
    }
    cdf_.resize(pmf_.size());
    double c = 0.0;
    for (std::size_t l = 0; l < pmf_.size(); ++l) {
        c += pmf_[l];
        cdf_[l] = c;
    }
    // Trailing zero-probability entries must stay unreachable.
    for (std::size_t l = pmf_.size(); l-- > 0;) {
        cdf_[l] = 2.0;
        if (pmf_[l] > 0.0) break;
    }
}

double OffspringLaw::factorial_moment(unsigned k) const {
    if (k > kMaxFactorialMoment)
        throw ValidationError("factorial moments are provided up to order 8");
    double m = 0.0;
    for (std::size_t l = 0; l < pmf_.size(); ++l) {
        double ff = 1.0;
        for (unsigned j = 0; j < k; ++j) ff *= static_cast<double>(l) - j;
        m += ff * pmf_[l];
    }
    return m;
}

unsigned OffspringLaw::sample(double u) const noexcept {
    std::size_t l = 0;
    while (l + 1 < cdf_.size() && !(u < cdf_[l])) ++l;
    return static_cast<unsigned>(l);
}

}  // namespace bwp
