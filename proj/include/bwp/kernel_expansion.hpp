#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <vector>

namespace bwp {

/// Largest truncation order accepted by the kernel expansions.
inline constexpr unsigned kMaxKernelOrder = 60;

/// Parameters of the 1/T expansion of the Gaussian kernel p_{T-t}.
struct KernelExpansionParams {
    std::size_t d = 1;
    double T = 1.0;  ///< terminal time, > 0
    double t = 0.0;  ///< early time, 0 <= t < T
    unsigned k = 0;  ///< truncation order

    /// Throws ValidationError unless d >= 1, 0 <= t < T and k <= kMaxKernelOrder.
    void validate() const;
    /// t/T <= 1/2. Outside this region results are still computed but the
    /// series converges slowly and callers should flag them.
    bool in_validated_region() const noexcept { return t <= 0.5 * T; }
};

/// (2 pi t)^{-d/2} exp(-|x|^2 / 2t).
double gauss_kernel(std::size_t d, double t, std::span<const double> x);

/// (2 pi T)^{-d/2} sum_{n<=k} (-T)^{-n} 2^{-n} sum_{|a|=n} H_{2a}(x, t) / a!,
/// the order-k approximation of p_{T-t}(x).
double truncated_kernel(const KernelExpansionParams& p, std::span<const double> x);

/// Same approximation of p_{T-t}(x - y), written through the addition formula
/// as sum_{b <= 2a} C(2a, b) (-x)^b H_{2a-b}(y, t). Agrees with
/// truncated_kernel(p, y - x) order by order.
double truncated_kernel_shifted(const KernelExpansionParams& p, std::span<const double> x,
                                std::span<const double> y);

struct TruncationScan {
    struct Row {
        unsigned k;
        double T;
        double error;         ///< |p_{T-t}(offset) - truncated_kernel|
        double scaled_error;  ///< error * (2 pi T)^{d/2}
        bool outside_validated_region;
    };
    std::vector<Row> rows;
    /// Log-log slope of scaled_error against T, one entry per k.
    std::vector<double> slope_per_k;
    /// Smallest scanned T from which error(k+1, T') <= error(k, T') for every
    /// scanned T' >= T; NaN if no such T. One entry per k < k_max.
    std::vector<double> monotone_from_T;

    /// CSV columns: k,T,error,scaled_error,fitted_slope_per_k,outside_validated_region
    void write_csv(std::ostream& os) const;
};

TruncationScan truncation_error_scan(std::size_t d, double t, std::span<const double> offset,
                                     unsigned k_max, std::span<const double> T_list);

}  // namespace bwp
