#pragma once

#include "bwp/multiindex.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace bwp {

/// Highest degree with validated accuracy for the heat-variant polynomials.
inline constexpr unsigned kMaxHermiteDegree = 40;
/// Highest degree accepted by product_linearize (coefficients stay exact in
/// 64 bits up to here).
inline constexpr unsigned kMaxLinearizeDegree = 20;
inline constexpr unsigned kMaxGeneratingTerms = 60;
/// Highest degree accepted by hermite_sequence, which backs the long kernel
/// series (60 terms need degree 118).
inline constexpr unsigned kMaxSequenceDegree = 128;

/// Heat-variant Hermite polynomial H_n(x, t), the polynomial in x with
/// H_n(x, 0) = x^n for which H_n(W_t, t) is a martingale along Brownian
/// motion. Evaluated by H_{n+1} = x H_n - t n H_{n-1}. Accepts t = 0.
double hermite_1d(unsigned n, double x, double t);

/// Fills out[j] = H_j(x, t) for j = 0..out.size()-1 in one recurrence pass.
/// Degrees up to kMaxSequenceDegree.
void hermite_sequence(double x, double t, std::span<double> out);

/// H_alpha(x, t) = prod_i H_{alpha_i}(x_i, t).
double hermite_multi(const MultiIndex& alpha, std::span<const double> x, double t);

/// Right-hand side of the addition formula
///   H_n(x + y, t) = sum_j C(n, j) x^{n-j} H_j(y, t).
double addition_shift(unsigned n, double x, double y, double t);

/// H_n * H_m = sum_k coefficient_k t^{t_power_k} H_{degree_k}.
struct HermiteLinearization {
    struct Term {
        unsigned degree;
        unsigned t_power;
        std::uint64_t coefficient;
    };
    std::vector<Term> terms;

    double evaluate(double x, double t) const;
};

/// Exact linearization of H_n H_m with coefficients n! m! / (k! (n-k)! (m-k)!),
/// k = 0..min(n, m).
HermiteLinearization product_linearize(unsigned n, unsigned m);

/// sum_{n=0}^{N} s^n / n! H_n(x, t); tends to exp(s x - t s^2 / 2).
double generating_partial(double s, double x, double t, unsigned N);

}  // namespace bwp
