#include "bwp/inference.hpp"

#include "bwp/errors.hpp"
#include "bwp/expansion.hpp"
#include "bwp/philox.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <sstream>

#include <Eigen/Dense>

namespace bwp {

namespace {

Eigen::MatrixXd to_matrix(const DesignSystem& sys) {
    Eigen::MatrixXd a(sys.rows.size(), sys.columns.size());
    for (std::size_t i = 0; i < sys.rows.size(); ++i)
        for (std::size_t j = 0; j < sys.columns.size(); ++j) a(i, j) = sys.rows[i][j];
    return a;
}

double condition_2norm(const Eigen::MatrixXd& a) {
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(a);
    const auto& s = svd.singularValues();
    const double smax = s(0);
    const double smin = s(s.size() - 1);
    // Treat singular values at roundoff level as exact zeros.
    if (!(smin > smax * 1e-15)) return std::numeric_limits<double>::infinity();
    return smax / smin;
}

Eigen::VectorXd column_scales(const Eigen::MatrixXd& a) {
    Eigen::VectorXd scale(a.cols());
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
        const double n = a.col(j).norm();
        scale(j) = n > 0.0 ? 1.0 / n : 1.0;
    }
    return scale;
}

}  // namespace

DesignSystem design_matrix(const std::vector<Region>& sets, double T0, unsigned k, std::size_t d) {
    DesignSystem sys;
    sys.sets = sets;
    sys.T0 = T0;
    sys.k = k;
    sys.d = d;
    sys.columns = required_indices(k, d);
    if (!(T0 > 0.0)) throw ValidationError("design_matrix requires T0 > 0");
    if (sets.size() < sys.columns.size())
        throw ValidationError("design_matrix: " + std::to_string(sets.size()) + " sets for " +
                              std::to_string(sys.columns.size()) + " unknowns");
    for (std::size_t i = 0; i < sets.size(); ++i) {
        if (sets[i].dim() != d) throw ValidationError("design_matrix: set dimension mismatch");
        for (std::size_t j = i + 1; j < sets.size(); ++j)
            if (sets[i].intersects(sets[j]))
                throw ValidationError("design_matrix: observation sets " + std::to_string(i) + " and " +
                                      std::to_string(j) + " overlap");
    }
    MomentCache cache;
    for (const auto& A : sets) sys.rows.push_back(expansion_coefficients(A, T0, k, &cache));
    const Eigen::MatrixXd a = to_matrix(sys);
    sys.raw_condition_number = condition_2norm(a);
    sys.condition_number = condition_2norm(a * column_scales(a).asDiagonal());
    return sys;
}

NTable solve_n(std::span<const double> observed_counts, const DesignSystem& sys, double m, double threshold) {
    if (observed_counts.size() != sys.sets.size())
        throw ValidationError("solve_n: " + std::to_string(observed_counts.size()) + " counts for " +
                              std::to_string(sys.sets.size()) + " sets");
    if (!(m > 0.0)) throw ValidationError("solve_n: m must be > 0");
    if (!(sys.condition_number <= threshold)) {
        std::ostringstream msg;
        msg << "solve_n: design condition number " << sys.condition_number << " exceeds " << threshold
            << "; choose observation sets that differ more in shape and position";
        if (sys.d > 1 && sys.k > 0)
            msg << " (for d > 1 and k > 0 the unknowns N_{2a}, |a| = k, all enter through |A|/a! "
                   "alone and cannot be separated by any choice of sets)";
        throw NumericError(msg.str());
    }
    const Eigen::MatrixXd a = to_matrix(sys);
    const Eigen::VectorXd scale = column_scales(a);
    const Eigen::MatrixXd scaled = a * scale.asDiagonal();
    const double norm = std::pow(2.0 * std::numbers::pi * sys.T0, 0.5 * static_cast<double>(sys.d)) /
                        std::pow(m, sys.T0);
    Eigen::VectorXd b(observed_counts.size());
    for (std::size_t i = 0; i < observed_counts.size(); ++i) b(i) = norm * observed_counts[i];
    const Eigen::VectorXd y = scaled.colPivHouseholderQr().solve(b);
    const Eigen::VectorXd x = scale.asDiagonal() * y;

    NTable table(sys.d, m);
    table.k = sys.k;
    table.source_t = static_cast<unsigned>(std::lround(sys.T0));
    std::ostringstream note;
    note.precision(6);
    note << "solved from counts at T0=" << sys.T0 << "; condition number " << sys.condition_number
         << "; values carry an o(T0^-" << sys.k << ") truncation error";
    table.note = note.str();
    const double residual = (a * x - b).norm();
    for (std::size_t j = 0; j < sys.columns.size(); ++j) table.set(sys.columns[j], x(j), residual);
    return table;
}

Prediction predict(const Region& A, double T, const NTable& n, unsigned k, double m) {
    if (n.source_t && T < static_cast<double>(*n.source_t))
        throw ValidationError("predict: T is earlier than the observation time of the table");
    const double v = expansion_value(A, T, k, n);
    Prediction p{v, v / A.volume(), std::nullopt};
    if (T <= kMaxRawCountT) p.raw_count = predicted_count(v, T, m, A.dim());
    return p;
}

std::vector<Region> default_sets(unsigned k, std::size_t d, double scale, double T0, double threshold) {
    if (!(scale > 0.0)) throw ValidationError("default_sets: scale must be > 0");
    const std::size_t need = required_indices(k, d).size();

    // Lattice cells in a cube large enough to offer 2*need candidates.
    int radius = 0;
    while (std::pow(2.0 * radius + 1.0, static_cast<double>(d)) < 2.0 * need) ++radius;
    std::vector<std::vector<int>> cells;
    std::vector<int> z(d, -radius);
    while (true) {
        cells.push_back(z);
        std::size_t i = 0;
        while (i < d && ++z[i] > radius) z[i++] = -radius;
        if (i == d) break;
    }
    auto center_dist = [&](const std::vector<int>& c) {
        double s = 0.0;
        for (int v : c) s += (v + 0.5) * (v + 0.5);
        return s;
    };
    std::stable_sort(cells.begin(), cells.end(), [&](const auto& a, const auto& b) {
        const double da = center_dist(a), db = center_dist(b);
        if (da != db) return da < db;
        return a < b;
    });
    cells.resize(std::min(cells.size(), 2 * need));

    double best = std::numeric_limits<double>::infinity();
    for (std::uint64_t pattern = 0; pattern < 10; ++pattern) {
        std::vector<std::size_t> order(cells.size());
        std::iota(order.begin(), order.end(), 0);
        if (pattern > 0) {
            // Fisher-Yates with a fixed per-pattern stream.
            for (std::size_t i = order.size(); i > 1; --i) {
                const std::uint64_t r = splitmix64(pattern * 0x9E3779B97F4A7C15ULL + i);
                std::swap(order[i - 1], order[r % i]);
            }
        }
        std::vector<Region> sets;
        for (std::size_t i = 0; i < need; ++i) {
            const auto& c = cells[order[i]];
            std::vector<double> lo(d), hi(d);
            for (std::size_t j = 0; j < d; ++j) {
                lo[j] = c[j] * scale;
                hi[j] = (c[j] + 1) * scale;
            }
            sets.push_back(Region::box(lo, hi));
        }
        const auto sys = design_matrix(sets, T0, k, d);
        if (sys.condition_number <= threshold) return sets;
        best = std::min(best, sys.condition_number);
    }
    std::ostringstream msg;
    msg << "default_sets: no pattern reached condition number <= " << threshold << " (best " << best << ")";
    if (d > 1 && k > 0) msg << "; for d > 1 and k > 0 the design is rank deficient for every choice of sets";
    throw NumericError(msg.str());
}

}  // namespace bwp
