#include "bwp/expansion.hpp"

#include "bwp/errors.hpp"
#include "bwp/numeric.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numbers>
#include <unordered_map>

namespace bwp {

std::vector<MultiIndex> required_indices(unsigned k, std::size_t d) {
    std::vector<MultiIndex> out;
    for (unsigned n = 0; n <= k; ++n)
        for (const auto& alpha : enumerate_order(d, n)) {
            const MultiIndex two_alpha = 2u * alpha;
            for (const auto& beta : sub_indices(two_alpha)) out.push_back(two_alpha - beta);
        }
    std::sort(out.begin(), out.end(), [](const MultiIndex& a, const MultiIndex& b) {
        const unsigned oa = order(a), ob = order(b);
        if (oa != ob) return oa < ob;
        return a > b;
    });
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

double MomentCache::get(const Region& A, const MultiIndex& beta) {
    auto key = std::make_pair(A.hash(), beta);
    {
        std::shared_lock lock(mu_);
        if (auto it = values_.find(key); it != values_.end()) return it->second;
    }
    const double v = A.moment(beta);
    std::unique_lock lock(mu_);
    values_.emplace(std::move(key), v);
    return v;
}

std::size_t MomentCache::size() const {
    std::shared_lock lock(mu_);
    return values_.size();
}

std::vector<double> expansion_coefficients(const Region& A, double T, unsigned k, MomentCache* cache) {
    if (!(T > 0.0) || !std::isfinite(T)) throw ValidationError("expansion requires T > 0");
    MomentCache local;
    MomentCache& moments = cache ? *cache : local;
    const std::size_t d = A.dim();
    const auto gammas = required_indices(k, d);
    std::unordered_map<MultiIndex, std::size_t, MultiIndexHash> column;
    for (std::size_t i = 0; i < gammas.size(); ++i) column.emplace(gammas[i], i);

    std::vector<CompensatedSum> acc(gammas.size());
    double scale = 1.0;  // (-1/(2T))^n
    for (unsigned n = 0; n <= k; ++n) {
        for (const auto& alpha : enumerate_order(d, n)) {
            const MultiIndex two_alpha = 2u * alpha;
            const double inv_fact = 1.0 / static_cast<double>(factorial(alpha));
            for (const auto& beta : sub_indices(two_alpha)) {
                const double sign = (order(beta) % 2 == 0) ? 1.0 : -1.0;
                const double c = scale * inv_fact * static_cast<double>(choose(two_alpha, beta)) * sign *
                                 moments.get(A, beta);
                acc[column.at(two_alpha - beta)].add(c);
            }
        }
        scale *= -1.0 / (2.0 * T);
    }
    std::vector<double> out(gammas.size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = acc[i].value();
    return out;
}

double expansion_value(const Region& A, double T, unsigned k, const NTable& n, MomentCache* cache) {
    if (n.dim() != A.dim()) throw ValidationError("expansion: N-table and region dimensions differ");
    const auto gammas = required_indices(k, A.dim());
    const auto coef = expansion_coefficients(A, T, k, cache);
    CompensatedSum s;
    for (std::size_t i = 0; i < gammas.size(); ++i) s.add(coef[i] * n.value(gammas[i]));
    return s.value();
}

double expansion_value(const ExpansionRequest& req) {
    return expansion_value(req.A, req.T, req.k, req.n_table);
}

double theorem_a_form(const Region& A, double T, double N0, std::span<const double> N1, double N2) {
    const std::size_t d = A.dim();
    if (N1.size() != d) throw ValidationError("theorem_a_form: N1 must have length d");
    if (!(T > 0.0)) throw ValidationError("theorem_a_form requires T > 0");
    const double vol = A.volume();
    double sq = 0.0, lin = 0.0;
    for (std::size_t i = 0; i < d; ++i) {
        sq += A.moment(2u * MultiIndex::unit(d, i));
        lin += N1[i] * A.moment(MultiIndex::unit(d, i));
    }
    return N0 * vol - (N0 * sq - 2.0 * lin + N2 * vol) / (2.0 * T);
}

double plugin_expansion(const Snapshot& s, const Region& A, double T, unsigned k, double m) {
    if (s.dim() != A.dim()) throw ValidationError("plugin_expansion: dimension mismatch");
    if (!(static_cast<double>(s.t()) < 0.5 * T))
        throw ValidationError("plugin_expansion requires snapshot time t < T/2");
    const auto gammas = required_indices(k, s.dim());
    const auto v = v_alphas(s, gammas);
    NTable n(s.dim(), m);
    const double norm = std::pow(m, s.t());
    for (std::size_t i = 0; i < gammas.size(); ++i) n.set(gammas[i], v[i] / norm);
    return expansion_value(A, T, k, n);
}

double predicted_count(double S_k, double T, double m, std::size_t d) {
    if (T > kMaxRawCountT)
        throw ValidationError("raw counts are only reported for T <= 40; use normalized units");
    return std::pow(m, T) * std::pow(2.0 * std::numbers::pi * T, -0.5 * static_cast<double>(d)) * S_k;
}

unsigned observation_time(double T, unsigned k, double fraction) {
    if (!(fraction > 0.0 && fraction < 1.0)) throw ValidationError("observation_time: fraction must be in (0,1)");
    if (!(T >= 1.0)) throw ValidationError("observation_time requires T >= 1");
    const double g = fraction / (2.0 * (k + 1.0));
    return static_cast<unsigned>(std::floor(std::pow(T, g)));
}

}  // namespace bwp
