#include "bwp/kernel_expansion.hpp"

#include "bwp/errors.hpp"
#include "bwp/hermite.hpp"
#include "bwp/multiindex.hpp"
#include "bwp/numeric.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <ostream>
#include <string>

namespace bwp {

namespace {

void require_dim(std::size_t d, std::span<const double> x, const char* what) {
    if (x.size() != d)
        throw ValidationError(std::string(what) + ": point has dimension " +
                              std::to_string(x.size()) + ", expected " + std::to_string(d));
}

/// tables[i][j] = H_j(x_i, t), j = 0..top.
std::vector<std::vector<double>> hermite_tables(std::span<const double> x, double t,
                                                unsigned top) {
    std::vector<std::vector<double>> tables(x.size(), std::vector<double>(top + 1));
    for (std::size_t i = 0; i < x.size(); ++i) hermite_sequence(x[i], t, tables[i]);
    return tables;
}

double prefactor(std::size_t d, double T) {
    return std::pow(2.0 * std::numbers::pi * T, -0.5 * static_cast<double>(d));
}

}  // namespace

void KernelExpansionParams::validate() const {
    if (d == 0) throw ValidationError("kernel expansion requires d >= 1");
    if (!(T > 0.0) || !std::isfinite(T)) throw ValidationError("kernel expansion requires T > 0");
    if (!(t >= 0.0) || !(t < T)) throw ValidationError("kernel expansion requires 0 <= t < T");
    if (k > kMaxKernelOrder)
        throw ValidationError("kernel expansion order k=" + std::to_string(k) + " exceeds " +
                              std::to_string(kMaxKernelOrder));
}

double gauss_kernel(std::size_t d, double t, std::span<const double> x) {
    if (!(t > 0.0)) throw ValidationError("gauss_kernel requires t > 0");
    require_dim(d, x, "gauss_kernel");
    double p = 1.0;
    for (double xi : x) p *= std::exp(-xi * xi / (2.0 * t)) / std::sqrt(2.0 * std::numbers::pi * t);
    return p;
}

double truncated_kernel(const KernelExpansionParams& p, std::span<const double> x) {
    p.validate();
    require_dim(p.d, x, "truncated_kernel");
    const auto h = hermite_tables(x, p.t, 2 * p.k);
    CompensatedSum total;
    double scale = 1.0;  // (-1/(2T))^n
    for (unsigned n = 0; n <= p.k; ++n) {
        CompensatedSum inner;
        for (const auto& alpha : enumerate_order(p.d, n)) {
            double term = 1.0 / factorial_real(alpha);
            for (std::size_t i = 0; i < p.d; ++i) term *= h[i][2 * alpha[i]];
            inner.add(term);
        }
        total.add(scale * inner.value());
        scale *= -1.0 / (2.0 * p.T);
    }
    return prefactor(p.d, p.T) * total.value();
}

double truncated_kernel_shifted(const KernelExpansionParams& p, std::span<const double> x,
                                std::span<const double> y) {
    p.validate();
    require_dim(p.d, x, "truncated_kernel_shifted");
    require_dim(p.d, y, "truncated_kernel_shifted");
    const auto h = hermite_tables(y, p.t, 2 * p.k);
    std::vector<double> minus_x(x.begin(), x.end());
    for (double& v : minus_x) v = -v;
    CompensatedSum total;
    double scale = 1.0;
    for (unsigned n = 0; n <= p.k; ++n) {
        CompensatedSum inner;
        for (const auto& alpha : enumerate_order(p.d, n)) {
            const MultiIndex two_alpha = 2u * alpha;
            const double inv_fact = 1.0 / static_cast<double>(factorial(alpha));
            for (const auto& beta : sub_indices(two_alpha)) {
                double term = inv_fact * static_cast<double>(choose(two_alpha, beta)) *
                              monomial(beta, minus_x);
                for (std::size_t i = 0; i < p.d; ++i) term *= h[i][two_alpha[i] - beta[i]];
                inner.add(term);
            }
        }
        total.add(scale * inner.value());
        scale *= -1.0 / (2.0 * p.T);
    }
    return prefactor(p.d, p.T) * total.value();
}

TruncationScan truncation_error_scan(std::size_t d, double t, std::span<const double> offset,
                                     unsigned k_max, std::span<const double> T_input) {
    if (T_input.empty()) throw ValidationError("truncation_error_scan: empty T list");
    std::vector<double> T_list(T_input.begin(), T_input.end());
    std::sort(T_list.begin(), T_list.end());
    require_dim(d, offset, "truncation_error_scan");
    TruncationScan scan;
    std::vector<std::vector<double>> err(k_max + 1);
    for (unsigned k = 0; k <= k_max; ++k) {
        std::vector<double> scaled;
        for (double T : T_list) {
            KernelExpansionParams p{d, T, t, k};
            const double exact = gauss_kernel(d, T - t, offset);
            const double approx = truncated_kernel(p, offset);
            const double e = std::abs(exact - approx);
            const double s = e / prefactor(d, T);
            // Outside the validated region also when the scan's own
            // precondition T > 2t fails.
            scan.rows.push_back({k, T, e, s, !(T > 2.0 * t)});
            scaled.push_back(s);
            err[k].push_back(e);
        }
        scan.slope_per_k.push_back(loglog_slope(T_list, scaled));
    }
    for (unsigned k = 0; k < k_max; ++k) {
        double from = std::numeric_limits<double>::quiet_NaN();
        for (std::size_t j = T_list.size(); j-- > 0;) {
            if (err[k + 1][j] <= err[k][j])
                from = T_list[j];
            else
                break;
        }
        scan.monotone_from_T.push_back(from);
    }
    return scan;
}

void TruncationScan::write_csv(std::ostream& os) const {
    os << "k,T,error,scaled_error,fitted_slope_per_k,outside_validated_region\n";
    const auto old_prec = os.precision(17);
    for (const auto& r : rows)
        os << r.k << ',' << r.T << ',' << r.error << ',' << r.scaled_error << ','
           << slope_per_k.at(r.k) << ',' << (r.outside_validated_region ? 1 : 0) << '\n';
    os.precision(old_prec);
}

}  // namespace bwp
