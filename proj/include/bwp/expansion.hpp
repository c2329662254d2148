#pragma once

#include "bwp/martingales.hpp"
#include "bwp/multiindex.hpp"
#include "bwp/regions.hpp"
#include "bwp/snapshot.hpp"

#include <cstddef>
#include <map>
#include <optional>
#include <shared_mutex>
#include <span>
#include <utility>
#include <vector>

namespace bwp {

/// { 2a - b : |a| <= k, b <= 2a }, i.e. every gamma with
/// sum_i ceil(gamma_i / 2) <= k. Ordered by |gamma| ascending, then in
/// enumerate_order order (lexicographically descending).
std::vector<MultiIndex> required_indices(unsigned k, std::size_t d);

/// Region moments keyed by (region hash, beta). Concurrent readers, single
/// writer per insertion.
class MomentCache {
public:
    double get(const Region& A, const MultiIndex& beta);
    std::size_t size() const;

private:
    mutable std::shared_mutex mu_;
    std::map<std::pair<std::size_t, MultiIndex>, double> values_;
};

/// Coefficients c_gamma(A, T) such that
///   S_k = sum_n (-T)^{-n} 2^{-n} sum_{|a|=n} (1/a!) sum_{b <= 2a} C(2a,b) (-1)^{|b|} M_b(A) N_{2a-b}
///       = sum_gamma c_gamma N_gamma,
/// one entry per required_indices(k, d), in that order.
std::vector<double> expansion_coefficients(const Region& A, double T, unsigned k,
                                           MomentCache* cache = nullptr);

struct ExpansionRequest {
    Region A;
    double T;
    unsigned k;
    NTable n_table;
};

/// S_k, the order-k approximation of (2 pi T)^{d/2} psi(A, T) / m^T.
double expansion_value(const Region& A, double T, unsigned k, const NTable& n,
                       MomentCache* cache = nullptr);
double expansion_value(const ExpansionRequest& req);

/// N_0 |A| - (1/2T) integral_A (N_0 |x|^2 - 2 N_1 . x + N_2) dx.
double theorem_a_form(const Region& A, double T, double N0, std::span<const double> N1, double N2);

/// S_k with N_gamma replaced by V_gamma(t)/m^t of the snapshot. Requires
/// t < T/2 (ValidationError otherwise).
double plugin_expansion(const Snapshot& s, const Region& A, double T, unsigned k, double m);

/// m^T (2 pi T)^{-d/2} S_k. Only offered for T <= 40, where m^T is still a
/// reasonable double; throws ValidationError above.
double predicted_count(double S_k, double T, double m, std::size_t d);
inline constexpr double kMaxRawCountT = 40.0;

/// Observation time t = floor(T^g) with g = fraction / (2(k+1)), fraction in (0, 1).
unsigned observation_time(double T, unsigned k, double fraction = 0.9);

}  // namespace bwp
