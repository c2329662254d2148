#pragma once

#include "bwp/snapshot.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace bwp {

/// First record of a snapshot file.
struct SnapshotHeader {
    int version = 1;
    std::size_t d = 1;
    std::vector<double> pmf;
    std::uint64_t seed = 0;
    std::string sampler;
    /// Optional extra object embedded under "manifest".
    std::optional<nlohmann::json> manifest;
};

/// Line-oriented snapshot file writer:
///   {"type":"header","version":1,"d":..,"pmf":[..],"seed":..,"sampler":".."}
///   {"type":"snapshot","t":..,"n":..,"positions":[x11,..,x1d,x21,..]}
/// Reals are written with 17 significant digits, which round-trips every
/// double exactly. Single owner; not thread safe.
class SnapshotWriter {
public:
    explicit SnapshotWriter(std::ostream& os) : os_(os) {}
    void write_header(const SnapshotHeader& h);
    void write(const Snapshot& s);

private:
    std::ostream& os_;
    std::string buf_;
};

struct SnapshotFile {
    SnapshotHeader header;
    std::vector<Snapshot> snapshots;
};

/// Parses a snapshot file. Loaded snapshots carry no lineage ids.
SnapshotFile read_snapshot_file(std::istream& is);
SnapshotFile read_snapshot_file(const std::string& path);

/// Appends v formatted with 17 significant digits.
void append_real(std::string& out, double v);

}  // namespace bwp

namespace bwp {

struct SimConfig;
struct RunSummary;

/// Runs cfg and streams the header and every requested snapshot to os.
RunSummary write_run(const SimConfig& cfg, std::ostream& os,
                     std::optional<nlohmann::json> manifest = std::nullopt);

}  // namespace bwp
