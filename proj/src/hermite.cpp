#include "bwp/hermite.hpp"

#include "bwp/errors.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace bwp {

namespace {

void require_time(double t) {
    if (!(t >= 0.0) || !std::isfinite(t))
        throw ValidationError("Hermite time parameter must be finite and >= 0");
}

void require_degree(unsigned n, unsigned cap) {
    if (n > cap)
        throw ValidationError("Hermite degree " + std::to_string(n) +
                              " outside validated range (max " + std::to_string(cap) + ")");
}

}  // namespace

void hermite_sequence(double x, double t, std::span<double> out) {
    if (out.empty()) return;
    require_time(t);
    require_degree(static_cast<unsigned>(out.size() - 1), kMaxSequenceDegree);
    out[0] = 1.0;
    if (out.size() == 1) return;
    out[1] = x;
    for (std::size_t n = 1; n + 1 < out.size(); ++n)
        out[n + 1] = x * out[n] - t * static_cast<double>(n) * out[n - 1];
}

double hermite_1d(unsigned n, double x, double t) {
    require_degree(n, kMaxHermiteDegree);
    require_time(t);
    double prev = 1.0;
    if (n == 0) return prev;
    double cur = x;
    for (unsigned j = 1; j < n; ++j) {
        const double next = x * cur - t * static_cast<double>(j) * prev;
        prev = cur;
        cur = next;
    }
    return cur;
}

double hermite_multi(const MultiIndex& alpha, std::span<const double> x, double t) {
    if (x.size() != alpha.dim())
        throw ValidationError("hermite_multi: index dimension " + std::to_string(alpha.dim()) +
                              " != point dimension " + std::to_string(x.size()));
    double p = 1.0;
    for (std::size_t i = 0; i < x.size(); ++i) p *= hermite_1d(alpha[i], x[i], t);
    return p;
}

double addition_shift(unsigned n, double x, double y, double t) {
    require_degree(n, kMaxHermiteDegree);
    std::vector<double> h(n + 1);
    hermite_sequence(y, t, h);
    double sum = 0.0;
    for (unsigned j = 0; j <= n; ++j)
        sum += static_cast<double>(binomial(n, j)) * std::pow(x, static_cast<int>(n - j)) * h[j];
    return sum;
}

double HermiteLinearization::evaluate(double x, double t) const {
    unsigned top = 0;
    for (const auto& term : terms) top = std::max(top, term.degree);
    std::vector<double> h(top + 1);
    hermite_sequence(x, t, h);
    double sum = 0.0;
    for (const auto& term : terms)
        sum += static_cast<double>(term.coefficient) * std::pow(t, static_cast<int>(term.t_power)) *
               h[term.degree];
    return sum;
}

HermiteLinearization product_linearize(unsigned n, unsigned m) {
    require_degree(n, kMaxLinearizeDegree);
    require_degree(m, kMaxLinearizeDegree);
    HermiteLinearization lin;
    const unsigned kmax = std::min(n, m);
    std::uint64_t kfact = 1;
    for (unsigned k = 0; k <= kmax; ++k) {
        if (k > 0) kfact *= k;
        // C(n,k) C(m,k) k! == n! m! / (k! (n-k)! (m-k)!)
        std::uint64_t c = 0;
        std::uint64_t partial = 0;
        if (__builtin_mul_overflow(binomial(n, k), binomial(m, k), &partial) ||
            __builtin_mul_overflow(partial, kfact, &c))
            throw NumericError("Hermite linearization coefficient overflowed 64 bits");
        lin.terms.push_back({n + m - 2 * k, k, c});
    }
    return lin;
}

double generating_partial(double s, double x, double t, unsigned N) {
    require_degree(N, kMaxGeneratingTerms);
    require_time(t);
    // Scaled recurrence on g_n = s^n/n! H_n(x,t):
    //   g_{n+1} = (s x g_n - t s^2 g_{n-1}) / (n+1)
    double prev = 1.0;
    double sum = prev;
    if (N == 0) return sum;
    double cur = s * x;
    sum += cur;
    for (unsigned n = 1; n < N; ++n) {
        const double next = (s * x * cur - t * s * s * prev) / static_cast<double>(n + 1);
        prev = cur;
        cur = next;
        sum += cur;
    }
    return sum;
}

}  // namespace bwp
