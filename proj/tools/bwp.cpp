// bwp: batch front end for simulating the branching Wiener process and
// evaluating its density expansion.
//
// Exit codes: 0 success, 2 validation, 3 numeric failure, 4 resource cap,
// 5 I/O.

#include "bwp/errors.hpp"
#include "bwp/expansion.hpp"
#include "bwp/inference.hpp"
#include "bwp/kernel_expansion.hpp"
#include "bwp/martingales.hpp"
#include "bwp/simulator.hpp"
#include "bwp/snapshot_io.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace {

using nlohmann::json;

constexpr const char* kToolVersion = "0.1.0";

enum ExitCode { kOk = 0, kValidation = 2, kNumeric = 3, kCapacity = 4, kIo = 5 };

struct Common {
    std::string config;
    std::optional<std::uint64_t> seed;
    std::string out;
    std::string format = "csv";
};

json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw bwp::IoError("cannot open " + path);
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw bwp::ValidationError(path + ": " + e.what());
    }
}

// Inline JSON, or @path to read it from a file.
json parse_json_arg(const std::string& arg) {
    if (!arg.empty() && arg[0] == '@') return load_json_file(arg.substr(1));
    try {
        return json::parse(arg);
    } catch (const json::parse_error& e) {
        throw bwp::ValidationError(std::string("malformed JSON argument: ") + e.what());
    }
}

std::vector<bwp::Region> parse_sets(const json& j) {
    const json& list = j.is_object() ? j.at("sets") : j;
    if (!list.is_array()) throw bwp::ValidationError("sets file must hold a JSON array or {\"sets\":[..]}");
    std::vector<bwp::Region> sets;
    for (const auto& r : list) sets.push_back(bwp::Region::from_json(r));
    return sets;
}

std::vector<bwp::Region> regions_from(const std::string& region, const std::string& sets_path) {
    if (!region.empty() && !sets_path.empty())
        throw bwp::ValidationError("give either --region or --sets, not both");
    if (!region.empty()) return {bwp::Region::from_json(parse_json_arg(region))};
    if (!sets_path.empty()) return parse_sets(load_json_file(sets_path));
    throw bwp::ValidationError("a region is required (--region or --sets)");
}

bwp::SimConfig sim_config(const json& j) {
    bwp::SimConfig cfg;
    try {
        cfg.d = j.value("d", cfg.d);
        cfg.pmf = j.at("pmf").get<std::vector<double>>();
        cfg.test_mode = j.value("test_mode", cfg.test_mode);
        cfg.seed = j.value("seed", cfg.seed);
        cfg.t_max = j.value("t_max", cfg.t_max);
        if (j.contains("population_cap"))
            cfg.population_cap = static_cast<std::size_t>(j["population_cap"].get<double>());
        cfg.snapshot_times = j.value("snapshot_times", cfg.snapshot_times);
        cfg.initial_position = j.value("initial_position", cfg.initial_position);
        cfg.workers = j.value("workers", cfg.workers);
        cfg.condition_on_survival = j.value("condition_on_survival", cfg.condition_on_survival);
        cfg.max_survival_attempts = j.value("max_survival_attempts", cfg.max_survival_attempts);
    } catch (const json::exception& e) {
        throw bwp::ValidationError(std::string("config: ") + e.what());
    }
    return cfg;
}

std::string utc_timestamp() {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    std::ostringstream os;
    os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
    return os.str();
}

class Run {
public:
    Run(std::string subcommand, const Common& c) : common_(c) {
        manifest_["subcommand"] = std::move(subcommand);
        manifest_["config"] = c.config.empty() ? json(nullptr) : json(c.config);
        manifest_["seed"] = c.seed ? json(*c.seed) : json(nullptr);
        manifest_["inputs"] = json::array();
        manifest_["outputs"] = json::array({c.out.empty() ? "-" : c.out});
        manifest_["tool_version"] = kToolVersion;
    }

    void input(const std::string& path) {
        if (!path.empty()) manifest_["inputs"].push_back(path);
    }
    void seed(std::uint64_t s) { manifest_["seed"] = s; }
    // Reproducible part of the manifest, embedded in outputs.
    const json& manifest() const { return manifest_; }

    std::ostream& out() {
        if (common_.out.empty()) return std::cout;
        if (!file_) {
            file_ = std::make_unique<std::ofstream>(common_.out, std::ios::binary);
            if (!*file_) throw bwp::IoError("cannot open " + common_.out + " for writing");
        }
        return *file_;
    }

    // Flushes the output and writes <out>.manifest.json next to it.
    void finish() {
        if (common_.out.empty()) {
            std::cout.flush();
            return;
        }
        out().flush();
        if (!*file_) throw bwp::IoError("write failed: " + common_.out);
        file_.reset();
        json full = manifest_;
        full["timestamp"] = utc_timestamp();
        const std::string side = common_.out + ".manifest.json";
        std::ofstream m(side);
        m << full.dump(2) << '\n';
        if (!m) throw bwp::IoError("write failed: " + side);
    }

private:
    Common common_;
    json manifest_;
    std::unique_ptr<std::ofstream> file_;
};

void check_format(const Common& c) {
    if (c.format != "csv" && c.format != "json")
        throw bwp::ValidationError("--format must be csv or json");
}

std::string real(double v) {
    std::string s;
    bwp::append_real(s, v);
    return s;
}

// Subcommand options; each subcommand reads the subset it registers.
struct Params {
    std::size_t d = 1;
    double t = 1.0;
    unsigned k = 0;
    bool k_set = false;
    std::vector<double> T_list;
    double T = 0.0;
    double T0 = 0.0;
    double offset = 0.7;
    double m = 0.0;
    double scale = 1.0;
    double threshold = bwp::kDefaultConditionThreshold;
    std::string region, sets, snapshots, ntable, counts;
    std::optional<unsigned> at_t;
    bool raw = false;
    bool emit_sets = false;
    std::string kind = "radius";
    std::size_t replicas = 100;
    unsigned p = 2;
    std::string alpha;
};

double m_from(const Params& p, const bwp::SnapshotHeader* h) {
    if (p.m > 0.0) return p.m;
    if (h) return bwp::OffspringLaw(h->pmf, bwp::LawMode::Test).mean();
    throw bwp::ValidationError("the offspring mean is required (--m)");
}

int cmd_simulate(const Common& c, const Params&) {
    if (c.config.empty()) throw bwp::ValidationError("simulate requires --config");
    Run run("simulate", c);
    run.input(c.config);
    auto cfg = sim_config(load_json_file(c.config));
    if (c.seed) cfg.seed = *c.seed;
    cfg.validate();
    run.seed(cfg.seed);
    const auto summary = bwp::write_run(cfg, run.out(), run.manifest());
    run.finish();
    std::cerr << "final t=" << summary.final_t << " n=" << summary.final_count
              << (summary.extinct ? " (extinct)" : "") << '\n';
    return kOk;
}

const bwp::Snapshot& pick(const bwp::SnapshotFile& f, std::optional<unsigned> t) {
    if (f.snapshots.empty()) throw bwp::ValidationError("snapshot file holds no snapshots");
    if (!t) return f.snapshots.back();
    for (const auto& s : f.snapshots)
        if (s.t() == *t) return s;
    throw bwp::ValidationError("no snapshot at t=" + std::to_string(*t));
}

int cmd_count(const Common& c, const Params& p) {
    check_format(c);
    if (p.snapshots.empty()) throw bwp::ValidationError("count requires --snapshots");
    Run run("count", c);
    run.input(p.snapshots);
    run.input(p.sets);
    const auto file = bwp::read_snapshot_file(p.snapshots);
    const auto& s = pick(file, p.at_t);
    const auto sets = regions_from(p.region, p.sets);
    auto& os = run.out();
    if (!p.region.empty() && c.format == "csv") {
        os << bwp::count(s, sets[0]) << '\n';
    } else if (c.format == "csv") {
        os << "region_id,count\n";
        for (std::size_t i = 0; i < sets.size(); ++i) os << i << ',' << bwp::count(s, sets[i]) << '\n';
    } else {
        json j{{"t", s.t()}, {"counts", json::array()}, {"manifest", run.manifest()}};
        for (const auto& A : sets) j["counts"].push_back(bwp::count(s, A));
        os << j.dump() << '\n';
    }
    run.finish();
    return kOk;
}

int cmd_kernel_check(const Common& c, const Params& p) {
    if (p.T_list.empty()) throw bwp::ValidationError("kernel-check: the T list is empty");
    Run run("kernel-check", c);
    const std::vector<double> offset(p.d, p.offset);
    const auto scan = bwp::truncation_error_scan(p.d, p.t, offset, p.k_set ? p.k : 2, p.T_list);
    scan.write_csv(run.out());
    run.finish();
    for (const auto& r : scan.rows)
        if (r.outside_validated_region) {
            std::cerr << "warning: some T are below 2t; those rows are flagged\n";
            break;
        }
    return kOk;
}

int cmd_estimate_n(const Common& c, const Params& p) {
    if (p.snapshots.empty()) throw bwp::ValidationError("estimate-n requires --snapshots");
    Run run("estimate-n", c);
    run.input(p.snapshots);
    const auto file = bwp::read_snapshot_file(p.snapshots);
    run.seed(file.header.seed);
    const auto alphas = bwp::required_indices(p.k, file.header.d);
    auto table = bwp::estimate_n(file.snapshots, alphas, m_from(p, &file.header));
    table.k = p.k;
    table.seed = file.header.seed;
    json j = table.to_json();
    j["manifest"] = run.manifest();
    run.out() << j.dump(2) << '\n';
    run.finish();
    return kOk;
}

bwp::NTable load_table(const std::string& path) {
    if (path.empty()) throw bwp::ValidationError("an N-table is required (--ntable)");
    return bwp::NTable::from_json(load_json_file(path));
}

void write_prediction_rows(Run& run, const Common& c, const std::vector<bwp::Region>& sets, double T,
                           unsigned k, const std::vector<bwp::Prediction>& preds, bool raw) {
    auto& os = run.out();
    if (c.format == "csv") {
        os << "region_id,T,k,S_k,density,raw_count\n";
        for (std::size_t i = 0; i < sets.size(); ++i) {
            os << i << ',' << real(T) << ',' << k << ',' << real(preds[i].value) << ','
               << real(preds[i].density) << ',';
            if (raw && preds[i].raw_count) os << real(*preds[i].raw_count);
            os << '\n';
        }
    } else {
        json rows = json::array();
        for (std::size_t i = 0; i < sets.size(); ++i) {
            json r{{"region_id", i}, {"T", T}, {"k", k}, {"S_k", preds[i].value}, {"density", preds[i].density}};
            if (raw && preds[i].raw_count) r["raw_count"] = *preds[i].raw_count;
            rows.push_back(r);
        }
        os << json{{"rows", rows}, {"manifest", run.manifest()}}.dump(2) << '\n';
    }
}

int cmd_expand(const Common& c, const Params& p) {
    check_format(c);
    if (!(p.T > 0.0)) throw bwp::ValidationError("expand requires --T > 0");
    Run run("expand", c);
    run.input(p.sets);
    const auto sets = regions_from(p.region, p.sets);
    std::optional<bwp::SnapshotFile> file;
    std::optional<bwp::NTable> table;
    double m = 0.0;
    unsigned k = p.k;
    if (!p.snapshots.empty()) {
        run.input(p.snapshots);
        file = bwp::read_snapshot_file(p.snapshots);
        m = m_from(p, &file->header);
    } else {
        run.input(p.ntable);
        table = load_table(p.ntable);
        m = table->m();
        if (!p.k_set) k = table->k.value_or(0);
    }
    std::vector<bwp::Prediction> preds;
    for (const auto& A : sets) {
        const double v = file ? bwp::plugin_expansion(pick(*file, p.at_t), A, p.T, k, m)
                              : bwp::expansion_value(A, p.T, k, *table);
        bwp::Prediction pr{v, v / A.volume(), std::nullopt};
        if (p.raw && p.T <= bwp::kMaxRawCountT) pr.raw_count = bwp::predicted_count(v, p.T, m, A.dim());
        preds.push_back(pr);
    }
    write_prediction_rows(run, c, sets, p.T, k, preds, p.raw);
    run.finish();
    return kOk;
}

std::vector<double> read_counts_csv(const std::string& path, std::size_t n) {
    std::ifstream in(path);
    if (!in) throw bwp::IoError("cannot open " + path);
    std::vector<std::optional<double>> counts(n);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line[0] == '#' || line.rfind("region_id", 0) == 0) continue;
        const auto comma = line.find(',');
        if (comma == std::string::npos) throw bwp::ValidationError(path + ":" + std::to_string(lineno) + ": expected region_id,count");
        std::size_t id = 0;
        double value = 0.0;
        try {
            id = std::stoul(line.substr(0, comma));
            value = std::stod(line.substr(comma + 1));
        } catch (const std::exception&) {
            throw bwp::ValidationError(path + ":" + std::to_string(lineno) + ": malformed row");
        }
        if (id >= n) throw bwp::ValidationError(path + ": region_id " + std::to_string(id) + " has no set");
        if (value < 0.0) throw bwp::ValidationError(path + ": negative count");
        counts[id] = value;
    }
    std::vector<double> out;
    for (std::size_t i = 0; i < n; ++i) {
        if (!counts[i]) throw bwp::ValidationError(path + ": no count for region " + std::to_string(i));
        out.push_back(*counts[i]);
    }
    return out;
}

int cmd_infer(const Common& c, const Params& p) {
    if (!(p.T0 > 0.0)) throw bwp::ValidationError("infer requires --T0 > 0");
    Run run("infer", c);
    if (p.emit_sets) {
        const auto sets = bwp::default_sets(p.k, p.d, p.scale, p.T0, p.threshold);
        const auto sys = bwp::design_matrix(sets, p.T0, p.k, p.d);
        json j{{"sets", json::array()}, {"condition_number", sys.condition_number}, {"manifest", run.manifest()}};
        for (const auto& A : sets) j["sets"].push_back(A.to_json());
        run.out() << j.dump(2) << '\n';
        run.finish();
        return kOk;
    }
    if (p.sets.empty() || p.counts.empty()) throw bwp::ValidationError("infer requires --sets and --counts");
    run.input(p.sets);
    run.input(p.counts);
    if (!(p.m > 0.0)) throw bwp::ValidationError("infer requires --m");
    const auto sets = parse_sets(load_json_file(p.sets));
    const auto counts = read_counts_csv(p.counts, sets.size());
    const std::size_t d = sets.empty() ? p.d : sets.front().dim();
    const auto sys = bwp::design_matrix(sets, p.T0, p.k, d);
    std::cerr << "condition number " << sys.condition_number << '\n';
    const auto table = bwp::solve_n(counts, sys, p.m, p.threshold);
    json j = table.to_json();
    j["condition_number"] = sys.condition_number;
    j["manifest"] = run.manifest();
    run.out() << j.dump(2) << '\n';
    run.finish();
    return kOk;
}

int cmd_predict(const Common& c, const Params& p) {
    check_format(c);
    if (!(p.T > 0.0)) throw bwp::ValidationError("predict requires --T > 0");
    Run run("predict", c);
    run.input(p.ntable);
    run.input(p.sets);
    const auto table = load_table(p.ntable);
    const unsigned k = p.k_set ? p.k : table.k.value_or(0);
    const auto sets = regions_from(p.region, p.sets);
    std::vector<bwp::Prediction> preds;
    for (const auto& A : sets) preds.push_back(bwp::predict(A, p.T, table, k, table.m()));
    write_prediction_rows(run, c, sets, p.T, k, preds, p.raw);
    run.finish();
    return kOk;
}

int cmd_diagnose(const Common& c, const Params& p) {
    Run run("diagnose", c);
    const json cfg_json = c.config.empty() ? json::object() : load_json_file(c.config);
    run.input(c.config);
    auto& os = run.out();
    if (p.kind == "second-moment") {
        if (p.ntable.empty() && !cfg_json.contains("pmf"))
            throw bwp::ValidationError("diagnose second-moment requires --config with a pmf");
        const auto cfg = sim_config(cfg_json);
        const auto law = bwp::OffspringLaw(cfg.pmf, bwp::LawMode::Test);
        os << "alpha,recursion_limit,closed_form_printed\n";
        for (const auto& a : bwp::required_indices(p.k_set ? p.k : 2, cfg.d)) {
            os << '"' << a.to_string() << "\",";
            if (a.is_zero()) {
                os << real(bwp::n0_second_moment(law.mean(), law.variance())) << ",\n";
            } else {
                os << real(bwp::n_second_moment(a, law)) << ','
                   << real(bwp::n_second_moment_closed_form_printed(a, law.mean(), law.variance())) << '\n';
            }
        }
        run.finish();
        return kOk;
    }
    auto cfg = sim_config(cfg_json);
    if (c.seed) cfg.seed = *c.seed;
    cfg.validate();
    run.seed(cfg.seed);
    const auto law = cfg.law();
    if (p.kind == "radius") {
        os << "replica,t,n,max_radius,bound,within_bound\n";
        for (std::size_t r = 0; r < p.replicas; ++r) {
            auto one = cfg;
            one.seed = bwp::replica_seed(cfg.seed, r);
            one.snapshot_times.clear();
            for (unsigned t = 0; t <= cfg.t_max; ++t) one.snapshot_times.push_back(t);
            bwp::run(one, [&](const bwp::Snapshot& s) {
                if (s.empty()) return;
                const double rad = bwp::max_radius(s);
                const double bound = static_cast<double>(s.t()) * s.t();
                os << r << ',' << s.t() << ',' << s.size() << ',' << real(rad) << ',' << real(bound) << ','
                   << (rad <= bound ? 1 : 0) << '\n';
            });
        }
    } else if (p.kind == "lp") {
        const bwp::MultiIndex alpha =
            p.alpha.empty() ? bwp::MultiIndex(cfg.d) : bwp::MultiIndex::parse(p.alpha);
        const auto table = bwp::lp_increment_diagnostic(p.replicas, alpha, p.p, cfg.t_max, law, cfg.seed, cfg.workers);
        table.write_csv(os);
        std::cerr << "mean ratio over t in [2,8]: " << table.mean_ratio << '\n';
    } else {
        throw bwp::ValidationError("--kind must be radius, lp or second-moment");
    }
    run.finish();
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Branching Wiener process simulator and density-expansion toolkit"};
    app.require_subcommand(1);
    Common common;
    Params p;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", common.config, "JSON config file");
        sub->add_option("--seed", common.seed, "override the configured 64-bit seed");
        sub->add_option("--out", common.out, "output file (default stdout); a .manifest.json sidecar is written next to it");
        sub->add_option("--format", common.format, "csv or json")->capture_default_str();
    };
    auto add_region = [&](CLI::App* sub) {
        sub->add_option("--region", p.region, "region JSON, or @file");
        sub->add_option("--sets", p.sets, "JSON file with a list of regions");
    };
    auto add_k = [&](CLI::App* sub, const char* help) {
        sub->add_option_function<unsigned>("--k", [&](unsigned v) { p.k = v; p.k_set = true; }, help);
    };

    auto* simulate = app.add_subcommand("simulate", "run the branching process and write a snapshot file");
    add_common(simulate);

    auto* count = app.add_subcommand("count", "count particles in a region");
    add_common(count);
    add_region(count);
    count->add_option("--snapshots", p.snapshots, "snapshot file")->required();
    count->add_option("--t", p.at_t, "snapshot time (default: last)");

    auto* kernel = app.add_subcommand("kernel-check", "truncation error of the 1/T kernel expansion");
    add_common(kernel);
    kernel->add_option("--d", p.d, "dimension")->capture_default_str();
    kernel->add_option("--t", p.t, "early time t")->capture_default_str();
    add_k(kernel, "largest truncation order (default 2)");
    p.T_list = {64, 128, 256, 512};
    kernel->add_option("--T", p.T_list, "terminal times")->delimiter(',')->capture_default_str();
    kernel->add_option("--offset", p.offset, "value of every offset component")->capture_default_str();

    auto* estimate = app.add_subcommand("estimate-n", "estimate N_alpha from the last snapshot");
    add_common(estimate);
    estimate->add_option("--snapshots", p.snapshots, "snapshot file")->required();
    add_k(estimate, "expansion order; estimates every required index (default 0)");
    estimate->add_option("--m", p.m, "offspring mean (default: from the file header)");

    auto* expand = app.add_subcommand("expand", "evaluate S_k from an N-table or a snapshot plug-in");
    add_common(expand);
    add_region(expand);
    add_k(expand, "expansion order (default: the table's k)");
    expand->add_option("--T", p.T, "terminal time")->required();
    expand->add_option("--ntable", p.ntable, "N-table JSON");
    expand->add_option("--snapshots", p.snapshots, "snapshot file for the plug-in expansion");
    expand->add_option("--t", p.at_t, "snapshot time (default: last)");
    expand->add_option("--m", p.m, "offspring mean for the plug-in (default: from the file header)");
    expand->add_flag("--raw", p.raw, "also report the expected raw count (T <= 40)");

    auto* infer = app.add_subcommand("infer", "solve for N_gamma from observed counts");
    add_common(infer);
    add_k(infer, "expansion order (default 0)");
    infer->add_option("--T0", p.T0, "observation time")->required();
    infer->add_option("--sets", p.sets, "observation sets JSON");
    infer->add_option("--counts", p.counts, "counts CSV: region_id,count");
    infer->add_option("--m", p.m, "offspring mean");
    infer->add_option("--threshold", p.threshold, "largest accepted condition number")->capture_default_str();
    infer->add_flag("--emit-sets", p.emit_sets, "write default observation sets instead of solving");
    infer->add_option("--d", p.d, "dimension for --emit-sets")->capture_default_str();
    infer->add_option("--scale", p.scale, "lattice cell size for --emit-sets")->capture_default_str();

    auto* predict = app.add_subcommand("predict", "forecast S_k at a later T from an inferred N-table");
    add_common(predict);
    add_region(predict);
    add_k(predict, "expansion order (default: the table's k)");
    predict->add_option("--T", p.T, "terminal time")->required();
    predict->add_option("--ntable", p.ntable, "N-table JSON")->required();
    predict->add_flag("--raw", p.raw, "also report the expected raw count (T <= 40)");

    auto* diagnose = app.add_subcommand("diagnose", "range, L^p increment and second-moment diagnostics");
    add_common(diagnose);
    diagnose->add_option("--kind", p.kind, "radius, lp or second-moment")->capture_default_str();
    diagnose->add_option("--replicas", p.replicas, "number of replicas")->capture_default_str();
    diagnose->add_option("--p", p.p, "exponent for --kind lp (2 or 4)")->capture_default_str();
    diagnose->add_option("--alpha", p.alpha, "multi-index for --kind lp, e.g. [1,0] (default zero)");
    add_k(diagnose, "order for --kind second-moment (default 2)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? kOk : kValidation;
    }

    try {
        if (*simulate) return cmd_simulate(common, p);
        if (*count) return cmd_count(common, p);
        if (*kernel) return cmd_kernel_check(common, p);
        if (*estimate) return cmd_estimate_n(common, p);
        if (*expand) return cmd_expand(common, p);
        if (*infer) return cmd_infer(common, p);
        if (*predict) return cmd_predict(common, p);
        if (*diagnose) return cmd_diagnose(common, p);
    } catch (const bwp::PopulationCapExceeded& e) {
        std::cerr << "error: " << e.what() << " (last complete generation t=" << e.last_t << ", n=" << e.last_count
                  << ")\n";
        return kCapacity;
    } catch (const bwp::ValidationError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kValidation;
    } catch (const bwp::NumericError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kNumeric;
    } catch (const bwp::CapacityError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kCapacity;
    } catch (const bwp::IoError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kIo;
    }
    return kValidation;
}
