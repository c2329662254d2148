#pragma once

#include "bwp/errors.hpp"
#include "bwp/offspring.hpp"
#include "bwp/regions.hpp"
#include "bwp/snapshot.hpp"

#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace bwp {

/// Name of the Gaussian sampler; recorded in snapshot file headers.
inline constexpr const char* kSamplerName = "philox4x64-10/box-muller";

inline constexpr std::size_t kDefaultPopulationCap = 100'000'000;

/// Thrown when a generation would exceed the population cap. Carries the
/// last completed generation so callers can report a partial result.
class PopulationCapExceeded : public CapacityError {
public:
    PopulationCapExceeded(unsigned last_t, std::size_t last_count, std::size_t attempted);
    unsigned last_t;
    std::size_t last_count;
    std::size_t attempted;
};

struct StepOptions {
    std::size_t population_cap = kDefaultPopulationCap;
    unsigned workers = 1;
};

/// One generation: each particle at y draws Y offspring; child j gets id
/// hash(parent id, j) and position y + G with G standard Gaussian. All draws
/// are keyed by (seed, lineage id, purpose), so the result does not depend
/// on `workers`. Requires a snapshot with lineage ids.
Snapshot step(const Snapshot& s, const OffspringLaw& law, std::uint64_t seed,
              const StepOptions& opts = {});

struct SimConfig {
    std::size_t d = 1;
    std::vector<double> pmf;
    bool test_mode = false;  ///< admit non-supercritical laws
    std::uint64_t seed = 0;
    unsigned t_max = 1;
    std::size_t population_cap = kDefaultPopulationCap;
    /// Times at which snapshots are emitted; empty means {t_max}.
    std::vector<unsigned> snapshot_times;
    /// Empty means the origin.
    std::vector<double> initial_position;
    unsigned workers = 1;
    /// Reject extinct trajectories and retry with derived seeds.
    bool condition_on_survival = false;
    unsigned max_survival_attempts = 1000;

    void validate() const;
    OffspringLaw law() const;
    /// Sorted, deduplicated snapshot times.
    std::vector<unsigned> effective_snapshot_times() const;
};

struct RunSummary {
    unsigned final_t = 0;
    std::size_t final_count = 0;
    unsigned attempts = 1;
    std::uint64_t effective_seed = 0;
    bool extinct = false;
};

using SnapshotSink = std::function<void(const Snapshot&)>;

/// Runs the process from one particle and hands every requested snapshot to
/// `sink` in increasing time order. Deterministic in cfg.
RunSummary run(const SimConfig& cfg, const SnapshotSink& sink);

/// Seed used for survival-conditioning attempt `attempt` (attempt 0 is the
/// configured seed).
std::uint64_t attempt_seed(std::uint64_t seed, unsigned attempt) noexcept;

/// Seed of replica r in Monte Carlo studies.
std::uint64_t replica_seed(std::uint64_t base, std::uint64_t r) noexcept;

/// psi(A, t): number of particles of s lying in A.
std::size_t count(const Snapshot& s, const Region& A);

/// max |position| over particles; throws ValidationError on an empty snapshot.
double max_radius(const Snapshot& s);

}  // namespace bwp
