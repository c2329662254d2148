#pragma once

#include "bwp/martingales.hpp"
#include "bwp/multiindex.hpp"
#include "bwp/regions.hpp"

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace bwp {

inline constexpr double kDefaultConditionThreshold = 1e8;

/// Linear map from the unknowns N_gamma (gamma in required_indices(k, d)) to
/// the expansion values S_k(A, T0) over disjoint observation sets.
struct DesignSystem {
    std::vector<Region> sets;
    double T0 = 1.0;
    unsigned k = 0;
    std::size_t d = 1;
    std::vector<MultiIndex> columns;
    /// rows[i][j] = coefficient of N_{columns[j]} in S_k(sets[i], T0).
    std::vector<std::vector<double>> rows;
    /// 2-norm condition number after scaling every column to unit 2-norm;
    /// infinite when the matrix is rank deficient. This is the number that
    /// governs solve accuracy and is compared against the threshold.
    double condition_number = 0.0;
    /// 2-norm condition number of the unscaled matrix.
    double raw_condition_number = 0.0;
};

/// Throws ValidationError if the sets overlap, differ in dimension from d,
/// or are fewer than the unknowns.
DesignSystem design_matrix(const std::vector<Region>& sets, double T0, unsigned k, std::size_t d);

/// Solves for the N_gamma from observed counts at T0 (least squares when
/// overdetermined): b_A = (2 pi T0)^{d/2} count_A / m^{T0}. Throws
/// NumericError when the condition number exceeds `threshold`.
NTable solve_n(std::span<const double> observed_counts, const DesignSystem& sys, double m,
               double threshold = kDefaultConditionThreshold);

struct Prediction {
    double value;    ///< S_k: predicted (2 pi T)^{d/2} psi(A, T) / m^T
    double density;  ///< value / |A|
    std::optional<double> raw_count;  ///< expected psi(A, T), only for T <= 40
};

/// Forecast from an estimated table; requires T >= the table's source time
/// when one is recorded.
Prediction predict(const Region& A, double T, const NTable& n, unsigned k, double m);

/// |required_indices(k, d)| disjoint boxes [z scale, (z+1) scale) on integer
/// lattice cells z taken nearest-first around the origin (pattern 0), or
/// from a seeded shuffle of the nearest cells (patterns 1..9). Returns the
/// first pattern whose design system at T0 has condition number below
/// threshold; throws NumericError if none does.
std::vector<Region> default_sets(unsigned k, std::size_t d, double scale, double T0,
                                 double threshold = kDefaultConditionThreshold);

}  // namespace bwp
