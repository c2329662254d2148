#include "bwp/snapshot.hpp"

#include "bwp/errors.hpp"

namespace bwp {

Snapshot::Snapshot(std::size_t dim, unsigned t, std::vector<double> positions,
                   std::vector<LineageId> lineage)
    : dim_(dim), t_(t), positions_(std::move(positions)), lineage_(std::move(lineage)) {
    if (dim_ == 0) throw ValidationError("snapshot dimension must be >= 1");
    if (positions_.size() % dim_ != 0)
        throw ValidationError("snapshot positions length is not a multiple of the dimension");
    if (!lineage_.empty() && lineage_.size() != size())
        throw ValidationError("snapshot lineage length does not match particle count");
}

Snapshot Snapshot::root(std::span<const double> position) {
    return Snapshot(position.size(), 0, std::vector<double>(position.begin(), position.end()),
                    {kRootLineage});
}

Snapshot Snapshot::merge(std::span<const Snapshot> parts) {
    if (parts.empty()) throw ValidationError("merge needs at least one snapshot");
    if (parts.size() == 1) return parts.front();
    const std::size_t d = parts.front().dim();
    const unsigned t = parts.front().t();
    std::vector<double> pos;
    for (const auto& s : parts) {
        if (s.dim() != d || s.t() != t)
            throw ValidationError("merge requires equal dimension and time");
        pos.insert(pos.end(), s.positions_.begin(), s.positions_.end());
    }
    // Independent runs share the root id, so merged ids would repeat.
    return Snapshot(d, t, std::move(pos));
}

}  // namespace bwp
