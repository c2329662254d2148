#pragma once

#include "bwp/multiindex.hpp"
#include "bwp/offspring.hpp"
#include "bwp/regions.hpp"
#include "bwp/snapshot.hpp"

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include <json.hpp>

namespace bwp {

/// V_alpha(t) = sum over particles of H_alpha(position, t), t the snapshot time.
double v_alpha(const Snapshot& s, const MultiIndex& alpha);

/// V_alpha for several indices in one pass over the particles.
std::vector<double> v_alphas(const Snapshot& s, std::span<const MultiIndex> alphas);

struct MartingaleSeries {
    struct Point {
        unsigned t;
        double v;           ///< V_alpha(t)
        double normalized;  ///< V_alpha(t) / m^t
    };
    MultiIndex alpha;
    std::vector<Point> values;
};

MartingaleSeries martingale_series(std::span<const Snapshot> trajectory, const MultiIndex& alpha,
                                   double m);

/// Estimates of the limits N_alpha with per-entry error heuristics.
class NTable {
public:
    struct Entry {
        MultiIndex alpha;
        double value;
        double err;
    };

    NTable(std::size_t d, double m);

    std::size_t dim() const noexcept { return d_; }
    double m() const noexcept { return m_; }
    std::optional<unsigned> k;          ///< declared expansion order, if any
    std::optional<unsigned> source_t;   ///< time of the snapshot the values came from
    std::optional<std::uint64_t> seed;
    std::string note;                   ///< free-text error heuristic / caveat

    /// Inserts or overwrites.
    void set(const MultiIndex& alpha, double value, double err = 0.0);
    bool contains(const MultiIndex& alpha) const;
    /// Throws ValidationError naming the index if absent.
    double value(const MultiIndex& alpha) const;
    const std::vector<Entry>& entries() const noexcept { return entries_; }

    /// {"k":..,"d":..,"m":..,"entries":[{"alpha":[..],"value":..,"err":..},..]}
    nlohmann::json to_json() const;
    static NTable from_json(const nlohmann::json& j);

private:
    std::size_t d_;
    double m_;
    std::vector<Entry> entries_;
    std::unordered_map<MultiIndex, std::size_t, MultiIndexHash> index_;
};

/// N_alpha ~ V_alpha(t_last) / m^{t_last} from the last snapshot of an
/// increasing-time trajectory. err = m^{-t_last/2.5} * s where s is the RMS
/// of the observed increments |V/m^t - V/m^{t'}| rescaled by m^{t/2.5}
/// (s = 1 with a single snapshot).
NTable estimate_n(std::span<const Snapshot> trajectory, std::span<const MultiIndex> alphas, double m);

/// P(y + sqrt(variance) G in A) for G standard Gaussian in R^d. Closed form
/// for boxes; adaptive Gauss-Kronrod (relative tolerance 1e-10) for balls.
double gaussian_region_mass(const Region& A, std::span<const double> y, double variance);

/// E[psi(A,T) | F(t)] / m^T = m^{-t} sum_y integral_A p_{T-t}(y - x) dx.
double conditional_expectation_field(const Snapshot& s, const Region& A, double T, double m);

/// E[V_alpha(t)^2] by the one-step recursion
///   m^{t-1} a! (m (t^n - (t-1)^n) + sigma^2 (t-1)^n) + m^2 E[V_alpha(t-1)^2],
/// n = |alpha|, base E[V_alpha(0)^2] = [alpha == 0], 0^0 = 1.
double second_moment_oracle(const MultiIndex& alpha, unsigned t, double m, double sigma2);
double second_moment_oracle(const MultiIndex& alpha, unsigned t, const OffspringLaw& law);

/// lim_t E[V_alpha(t)^2] / m^{2t} for alpha != 0:
///   a! (m^{-2} sigma^2 sum_j m^{-j} j^n + sum_j m^{-j} (j^n - (j-1)^n)).
/// This is the limit of second_moment_oracle; see
/// n_second_moment_closed_form_printed for the variant whose sigma^2 term
/// carries m^{-1}. Throws ValidationError for alpha == 0.
double n_second_moment(const MultiIndex& alpha, const OffspringLaw& law);
double n_second_moment(const MultiIndex& alpha, double m, double sigma2);

/// a! m^{-1} (sigma^2 sum_j m^{-j} j^n + m sum_j m^{-j} (j^n - (j-1)^n)), the
/// closed form as commonly printed; differs from n_second_moment by the factor
/// m on the sigma^2 term. Reported by diagnostics, never used as an oracle.
double n_second_moment_closed_form_printed(const MultiIndex& alpha, double m, double sigma2);

/// lim_t E[Z_t^2] / m^{2t} = 1 + sigma^2 / (m^2 - m).
double n0_second_moment(double m, double sigma2);

/// Default population caps for u_statistic by tuple size p.
std::size_t u_statistic_cap(std::size_t p);

/// Sum over p-tuples of distinct particles of prod_h H_{alpha_h}(position, t),
/// p <= 3, computed from power sums by inclusion-exclusion. Throws
/// CapacityError when the population exceeds `limit` (default
/// u_statistic_cap(p)).
double u_statistic(const Snapshot& s, std::span<const MultiIndex> alphas,
                   std::optional<std::size_t> limit = std::nullopt);

/// A full trajectory from one particle at the origin: snapshots t = 0..t_max.
std::vector<Snapshot> simulate_trajectory(std::size_t d, const OffspringLaw& law,
                                          std::uint64_t seed, unsigned t_max,
                                          std::size_t population_cap = 100'000'000);

/// Monte Carlo moments of V_alpha(t)/m^t and V_alpha(t)^2 over independent
/// replicas, t = 0..t_max. Entry [a][t] refers to alphas[a].
struct ReplicaMoments {
    std::vector<MultiIndex> alphas;
    std::size_t replicas = 0;
    std::vector<std::vector<double>> mean_normalized, se_normalized;
    std::vector<std::vector<double>> mean_square, se_square;
};

ReplicaMoments replica_moments(const OffspringLaw& law, std::span<const MultiIndex> alphas,
                               unsigned t_max, std::size_t replicas, std::uint64_t seed,
                               unsigned workers = 1);

struct LpIncrementTable {
    struct Row {
        unsigned t;
        double norm;      ///< (mean |V(t)/m^t - V(t-1)/m^{t-1}|^p)^{1/p}
        double ratio;     ///< norm(t) / norm(t-1); NaN at t = 1 or when undefined
        double exact_l2;  ///< exact L2 norm of the increment from the recursion (p = 2)
    };
    MultiIndex alpha;
    unsigned p;
    std::vector<Row> rows;
    /// Mean of the defined ratios over t in [2, 8].
    double mean_ratio;

    /// CSV columns: t,norm,ratio,exact_l2
    void write_csv(std::ostream& os) const;
};

LpIncrementTable lp_increment_diagnostic(std::size_t replicas, const MultiIndex& alpha, unsigned p,
                                         unsigned t_max, const OffspringLaw& law,
                                         std::uint64_t seed, unsigned workers = 1);

}  // namespace bwp
