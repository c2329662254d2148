#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace bwp {

/// 128-bit particle identifier. A child's id is a hash of (parent id, child
/// index), so ids encode the genealogy and key each particle's randomness.
struct LineageId {
    std::uint64_t lo = 0;
    std::uint64_t hi = 0;
    friend bool operator==(const LineageId&, const LineageId&) = default;
    friend auto operator<=>(const LineageId&, const LineageId&) = default;
};

inline constexpr LineageId kRootLineage{0x0123456789ABCDEFULL, 0xFEDCBA9876543210ULL};

/// Population at one integer generation time t, stored as structure of
/// arrays: positions is row-major (particle i occupies [i*d, (i+1)*d)).
/// lineage is either one id per particle or empty when ids were not
/// recorded (snapshots loaded from file).
class Snapshot {
public:
    Snapshot(std::size_t dim, unsigned t, std::vector<double> positions,
             std::vector<LineageId> lineage = {});

    /// One particle at `position` at time 0.
    static Snapshot root(std::span<const double> position);

    std::size_t dim() const noexcept { return dim_; }
    unsigned t() const noexcept { return t_; }
    std::size_t size() const noexcept { return positions_.size() / dim_; }
    bool empty() const noexcept { return positions_.empty(); }

    std::span<const double> position(std::size_t i) const noexcept {
        return {positions_.data() + i * dim_, dim_};
    }
    std::span<const double> positions() const noexcept { return positions_; }
    std::span<const LineageId> lineage() const noexcept { return lineage_; }
    bool has_lineage() const noexcept { return !lineage_.empty(); }

    /// Concatenate populations observed at the same time t.
    static Snapshot merge(std::span<const Snapshot> parts);

private:
    std::size_t dim_;
    unsigned t_;
    std::vector<double> positions_;
    std::vector<LineageId> lineage_;
};

}  // namespace bwp
