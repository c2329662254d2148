#pragma once

#include "bwp/multiindex.hpp"

#include <cstddef>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

namespace bwp {

/// Half-open axis-aligned box [lower, upper).
struct Box {
    std::vector<double> lower;
    std::vector<double> upper;
};

/// Closed ball |x - center| <= radius.
struct Ball {
    std::vector<double> center;
    double radius = 1.0;
};

using RegionPiece = std::variant<Box, Ball>;

/// Largest |beta| accepted by Region::moment.
inline constexpr unsigned kMaxMomentOrder = 16;

/// A bounded subset of R^d: a box, a ball, or a disjoint union of boxes and
/// balls. Immutable after construction.
///
/// Boxes are half-open so that a tiling of a box by sub-boxes counts every
/// point exactly once. Union members must be pairwise disjoint up to shared
/// boundaries; overlapping members are rejected at construction.
class Region {
public:
    static Region box(std::vector<double> lower, std::vector<double> upper);
    static Region ball(std::vector<double> center, double radius);
    /// Nested unions are flattened.
    static Region disjoint_union(const std::vector<Region>& members);

    std::size_t dim() const noexcept { return dim_; }
    bool is_union() const noexcept { return pieces_.size() > 1; }
    std::span<const RegionPiece> pieces() const noexcept { return pieces_; }

    bool contains(std::span<const double> x) const;
    /// M_beta(A) = integral over A of x^beta dx.
    double moment(const MultiIndex& beta) const;
    double volume() const;

    /// Axis-aligned bounding box of the whole region.
    Box bounds() const;
    /// True when some member overlaps in a set of positive volume.
    bool intersects(const Region& other) const;

    nlohmann::json to_json() const;
    static Region from_json(const nlohmann::json& j);
    /// Stable hash of the canonical JSON text.
    std::size_t hash() const noexcept { return hash_; }

private:
    Region(std::size_t dim, std::vector<RegionPiece> pieces);

    std::size_t dim_;
    std::vector<RegionPiece> pieces_;
    std::size_t hash_ = 0;
};

/// Moment of a ball centred at the origin (zero if any beta_i is odd).
double centered_ball_moment(std::size_t d, double radius, const MultiIndex& beta);

}  // namespace bwp
