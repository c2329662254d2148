#include "bwp/simulator.hpp"

#include "bwp/errors.hpp"
#include "bwp/philox.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace bwp {

namespace {

// Purpose tags occupy counter word 2; counter word 3 is the block index.
constexpr std::uint64_t kTagOffspring = 1;
constexpr std::uint64_t kTagDisplacement = 2;
constexpr std::uint64_t kTagLineage = 3;

constexpr std::uint64_t kSeedKeyHi = 0x62726E6368777072ULL;
constexpr Philox4x64::Key kLineageKey{0x6C696E6561676521ULL, 0x5A17C0DE5A17C0DEULL};

LineageId child_id(const LineageId& parent, std::uint64_t index) noexcept {
    const auto out = Philox4x64::block({parent.lo, parent.hi, kTagLineage, index}, kLineageKey);
    return {out[0], out[1]};
}

unsigned draw_offspring(const LineageId& id, const OffspringLaw& law, std::uint64_t seed) noexcept {
    const auto out = Philox4x64::block({id.lo, id.hi, kTagOffspring, 0}, {seed, kSeedKeyHi});
    return law.sample(to_open_unit(out[0]));
}

/// Writes d independent N(0,1) draws for particle `id` into out.
void gaussian_displacement(const LineageId& id, std::uint64_t seed, double* out,
                           std::size_t d) noexcept {
    std::size_t written = 0;
    for (std::uint64_t blk = 0; written < d; ++blk) {
        const auto w = Philox4x64::block({id.lo, id.hi, kTagDisplacement, blk}, {seed, kSeedKeyHi});
        for (int pair = 0; pair < 2 && written < d; ++pair) {
            const double u1 = to_open_unit(w[2 * pair]);
            const double u2 = to_open_unit(w[2 * pair + 1]);
            const double r = std::sqrt(-2.0 * std::log(u1));
            const double a = 2.0 * std::numbers::pi * u2;
            out[written++] = r * std::cos(a);
            if (written < d) out[written++] = r * std::sin(a);
        }
    }
}

}  // namespace

PopulationCapExceeded::PopulationCapExceeded(unsigned last_t_, std::size_t last_count_,
                                             std::size_t attempted_)
    : CapacityError("population cap exceeded: generation " + std::to_string(last_t_ + 1) +
                    " would hold " + std::to_string(attempted_) + " particles (generation " +
                    std::to_string(last_t_) + " completed with " + std::to_string(last_count_) +
                    ")"),
      last_t(last_t_),
      last_count(last_count_),
      attempted(attempted_) {}

Snapshot step(const Snapshot& s, const OffspringLaw& law, std::uint64_t seed,
              const StepOptions& opts) {
    const std::size_t n = s.size();
    const std::size_t d = s.dim();
    if (n > 0 && !s.has_lineage())
        throw ValidationError("step requires a snapshot with lineage ids");
    const auto ids = s.lineage();
    const auto pos = s.positions();
    const int workers = static_cast<int>(std::max(1u, opts.workers));

    std::vector<std::size_t> offset(n + 1, 0);
#pragma omp parallel for num_threads(workers) schedule(static)
    for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(n); ++i)
        offset[i + 1] = draw_offspring(ids[i], law, seed);
    for (std::size_t i = 0; i < n; ++i) offset[i + 1] += offset[i];
    const std::size_t total = offset[n];
    if (total > opts.population_cap) throw PopulationCapExceeded(s.t(), n, total);

    std::vector<double> child_pos(total * d);
    std::vector<LineageId> child_ids(total);
#pragma omp parallel for num_threads(workers) schedule(static)
    for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(n); ++i) {
        const double* parent = pos.data() + static_cast<std::size_t>(i) * d;
        for (std::size_t c = offset[i]; c < offset[i + 1]; ++c) {
            const LineageId id = child_id(ids[i], c - offset[i]);
            child_ids[c] = id;
            double* out = child_pos.data() + c * d;
            gaussian_displacement(id, seed, out, d);
            for (std::size_t k = 0; k < d; ++k) out[k] += parent[k];
        }
    }
    return Snapshot(d, s.t() + 1, std::move(child_pos), std::move(child_ids));
}

void SimConfig::validate() const {
    if (d == 0) throw ValidationError("config: d must be >= 1");
    if (population_cap < 1) throw ValidationError("config: population_cap must be >= 1");
    if (!initial_position.empty() && initial_position.size() != d)
        throw ValidationError("config: initial_position length must equal d");
    for (unsigned t : snapshot_times)
        if (t > t_max) throw ValidationError("config: snapshot time beyond t_max");
    if (condition_on_survival && max_survival_attempts == 0)
        throw ValidationError("config: max_survival_attempts must be >= 1");
    (void)law();
}

OffspringLaw SimConfig::law() const {
    return OffspringLaw(pmf, test_mode ? LawMode::Test : LawMode::Supercritical);
}

std::vector<unsigned> SimConfig::effective_snapshot_times() const {
    std::vector<unsigned> times = snapshot_times.empty() ? std::vector<unsigned>{t_max} : snapshot_times;
    std::sort(times.begin(), times.end());
    times.erase(std::unique(times.begin(), times.end()), times.end());
    return times;
}

std::uint64_t attempt_seed(std::uint64_t seed, unsigned attempt) noexcept {
    return attempt == 0 ? seed : splitmix64(seed ^ splitmix64(attempt));
}

std::uint64_t replica_seed(std::uint64_t base, std::uint64_t r) noexcept {
    return splitmix64(splitmix64(base) + r);
}

RunSummary run(const SimConfig& cfg, const SnapshotSink& sink) {
    cfg.validate();
    const OffspringLaw law = cfg.law();
    const auto times = cfg.effective_snapshot_times();
    const std::vector<double> origin =
        cfg.initial_position.empty() ? std::vector<double>(cfg.d, 0.0) : cfg.initial_position;
    const StepOptions opts{cfg.population_cap, cfg.workers};
    const unsigned attempts = cfg.condition_on_survival ? cfg.max_survival_attempts : 1;

    for (unsigned a = 0; a < attempts; ++a) {
        const std::uint64_t seed = attempt_seed(cfg.seed, a);
        std::vector<Snapshot> held;  // buffered only when conditioning on survival
        Snapshot cur = Snapshot::root(origin);
        auto emit = [&](const Snapshot& s) {
            if (cfg.condition_on_survival)
                held.push_back(s);
            else
                sink(s);
        };
        std::size_t next = 0;
        if (next < times.size() && times[next] == 0) {
            emit(cur);
            ++next;
        }
        for (unsigned t = 1; t <= cfg.t_max; ++t) {
            cur = step(cur, law, seed, opts);
            if (next < times.size() && times[next] == t) {
                emit(cur);
                ++next;
            }
        }
        const bool extinct = cur.empty();
        if (cfg.condition_on_survival && extinct) continue;
        for (const auto& s : held) sink(s);
        return {cfg.t_max, cur.size(), a + 1, seed, extinct};
    }
    throw CapacityError("no surviving trajectory after " + std::to_string(attempts) + " attempts");
}

std::size_t count(const Snapshot& s, const Region& A) {
    if (s.dim() != A.dim()) throw ValidationError("count: snapshot and region dimensions differ");
    std::size_t c = 0;
    for (std::size_t i = 0; i < s.size(); ++i)
        if (A.contains(s.position(i))) ++c;
    return c;
}

double max_radius(const Snapshot& s) {
    if (s.empty()) throw ValidationError("max_radius of an empty snapshot");
    double best = 0.0;
    for (std::size_t i = 0; i < s.size(); ++i) {
        double r2 = 0.0;
        for (double v : s.position(i)) r2 += v * v;
        best = std::max(best, r2);
    }
    return std::sqrt(best);
}

}  // namespace bwp
