#include "bwp/snapshot_io.hpp"

#include "bwp/errors.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>

namespace bwp {

void append_real(std::string& out, double v) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
    out.append(buf, res.ptr);
}

void SnapshotWriter::write_header(const SnapshotHeader& h) {
    buf_ = "{\"type\":\"header\",\"version\":" + std::to_string(h.version) +
           ",\"d\":" + std::to_string(h.d) + ",\"pmf\":[";
    for (std::size_t i = 0; i < h.pmf.size(); ++i) {
        if (i) buf_ += ',';
        append_real(buf_, h.pmf[i]);
    }
    buf_ += "],\"seed\":" + std::to_string(h.seed) + ",\"sampler\":" + nlohmann::json(h.sampler).dump();
    if (h.manifest) buf_ += ",\"manifest\":" + h.manifest->dump();
    buf_ += "}\n";
    os_ << buf_;
    if (!os_) throw IoError("failed writing snapshot header");
}

void SnapshotWriter::write(const Snapshot& s) {
    buf_.clear();
    buf_ += "{\"type\":\"snapshot\",\"t\":" + std::to_string(s.t()) +
            ",\"n\":" + std::to_string(s.size()) + ",\"positions\":[";
    const auto pos = s.positions();
    for (std::size_t i = 0; i < pos.size(); ++i) {
        if (i) buf_ += ',';
        append_real(buf_, pos[i]);
    }
    buf_ += "]}\n";
    os_ << buf_;
    if (!os_) throw IoError("failed writing snapshot record");
}

SnapshotFile read_snapshot_file(std::istream& is) {
    SnapshotFile file;
    std::string line;
    bool have_header = false;
    std::size_t lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        if (line.empty()) continue;
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(line);
        } catch (const nlohmann::json::parse_error& e) {
            throw ValidationError("snapshot file line " + std::to_string(lineno) + ": " + e.what());
        }
        const auto type = j.value("type", std::string{});
        try {
            if (type == "header") {
                file.header.version = j.at("version").get<int>();
                file.header.d = j.at("d").get<std::size_t>();
                file.header.pmf = j.at("pmf").get<std::vector<double>>();
                file.header.seed = j.at("seed").get<std::uint64_t>();
                file.header.sampler = j.value("sampler", std::string{});
                if (j.contains("manifest")) file.header.manifest = j["manifest"];
                have_header = true;
            } else if (type == "snapshot") {
                if (!have_header) throw ValidationError("snapshot record before header");
                auto pos = j.at("positions").get<std::vector<double>>();
                const auto n = j.at("n").get<std::size_t>();
                if (pos.size() != n * file.header.d)
                    throw ValidationError("snapshot record: positions length != n*d");
                file.snapshots.emplace_back(file.header.d, j.at("t").get<unsigned>(), std::move(pos));
            } else {
                throw ValidationError("unknown record type '" + type + "'");
            }
        } catch (const nlohmann::json::exception& e) {
            throw ValidationError("snapshot file line " + std::to_string(lineno) + ": " + e.what());
        }
    }
    if (!have_header) throw ValidationError("snapshot file has no header");
    return file;
}

SnapshotFile read_snapshot_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open snapshot file '" + path + "'");
    return read_snapshot_file(in);
}

}  // namespace bwp

#include "bwp/simulator.hpp"

namespace bwp {

RunSummary write_run(const SimConfig& cfg, std::ostream& os, std::optional<nlohmann::json> manifest) {
    cfg.validate();
    SnapshotWriter writer(os);
    writer.write_header({1, cfg.d, cfg.pmf, cfg.seed, kSamplerName, std::move(manifest)});
    return run(cfg, [&](const Snapshot& s) { writer.write(s); });
}

}  // namespace bwp
