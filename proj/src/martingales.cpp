#include "bwp/martingales.hpp"

#include "bwp/errors.hpp"
#include "bwp/hermite.hpp"
#include "bwp/numeric.hpp"
#include "bwp/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <ostream>

#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace bwp {

namespace {

constexpr std::size_t kSumBlock = 256;

/// Sum of f(i) over i < n: sequential within fixed blocks, pairwise across
/// block partials. Deterministic for a given n.
template <class F>
std::vector<double> blocked_sums(std::size_t n, std::size_t width, F&& f) {
    const std::size_t blocks = (n + kSumBlock - 1) / kSumBlock;
    std::vector<std::vector<double>> partial(width, std::vector<double>(blocks, 0.0));
    std::vector<double> row(width);
    for (std::size_t b = 0; b < blocks; ++b) {
        const std::size_t end = std::min(n, (b + 1) * kSumBlock);
        for (std::size_t i = b * kSumBlock; i < end; ++i) {
            f(i, row);
            for (std::size_t w = 0; w < width; ++w) partial[w][b] += row[w];
        }
    }
    std::vector<double> out(width);
    for (std::size_t w = 0; w < width; ++w) out[w] = pairwise_sum(partial[w]);
    return out;
}

void require_dims(const Snapshot& s, std::span<const MultiIndex> alphas) {
    for (const auto& a : alphas)
        if (a.dim() != s.dim())
            throw ValidationError("multi-index " + a.to_string() + " does not match snapshot dimension " +
                                  std::to_string(s.dim()));
}

/// Per-particle H values for a list of indices.
class HermiteEvaluator {
public:
    HermiteEvaluator(const Snapshot& s, std::span<const MultiIndex> alphas)
        : s_(s), alphas_(alphas), top_(s.dim(), 0), tables_(s.dim()) {
        for (const auto& a : alphas)
            for (std::size_t i = 0; i < s.dim(); ++i) top_[i] = std::max(top_[i], a[i]);
        for (std::size_t i = 0; i < s.dim(); ++i) tables_[i].resize(top_[i] + 1);
    }

    void operator()(std::size_t particle, std::vector<double>& out) {
        const auto x = s_.position(particle);
        const double t = static_cast<double>(s_.t());
        for (std::size_t i = 0; i < x.size(); ++i) hermite_sequence(x[i], t, tables_[i]);
        for (std::size_t a = 0; a < alphas_.size(); ++a) {
            double p = 1.0;
            for (std::size_t i = 0; i < x.size(); ++i) p *= tables_[i][alphas_[a][i]];
            out[a] = p;
        }
    }

private:
    const Snapshot& s_;
    std::span<const MultiIndex> alphas_;
    std::vector<unsigned> top_;
    std::vector<std::vector<double>> tables_;
};

double ipow(double base, unsigned e) {
    double r = 1.0;  // 0^0 = 1
    for (unsigned i = 0; i < e; ++i) r *= base;
    return r;
}

double ball_mass(std::span<const double> c, double r, std::span<const double> y, double sigma) {
    if (c.size() == 1)
        return normal_interval_probability((c[0] - r - y[0]) / sigma, (c[0] + r - y[0]) / sigma);
    // x_0 = c_0 + r sin(theta); the slice is a (d-1)-ball of radius r cos(theta).
    auto integrand = [&](double theta) {
        const double rc = r * std::cos(theta);
        if (rc <= 0.0) return 0.0;
        const double z = (c[0] + r * std::sin(theta) - y[0]) / sigma;
        const double dens = std::exp(-0.5 * z * z) / (sigma * std::sqrt(2.0 * std::numbers::pi));
        return rc * dens * ball_mass(c.subspan(1), rc, y.subspan(1), sigma);
    };
    return boost::math::quadrature::gauss_kronrod<double, 15>::integrate(
        integrand, -0.5 * std::numbers::pi, 0.5 * std::numbers::pi, 20, 1e-10);
}

}  // namespace

// ---------------------------------------------------------------- V_alpha

std::vector<double> v_alphas(const Snapshot& s, std::span<const MultiIndex> alphas) {
    require_dims(s, alphas);
    if (s.empty()) return std::vector<double>(alphas.size(), 0.0);
    HermiteEvaluator eval(s, alphas);
    return blocked_sums(s.size(), alphas.size(), eval);
}

double v_alpha(const Snapshot& s, const MultiIndex& alpha) {
    return v_alphas(s, std::span<const MultiIndex>(&alpha, 1)).front();
}

MartingaleSeries martingale_series(std::span<const Snapshot> trajectory, const MultiIndex& alpha,
                                   double m) {
    MartingaleSeries out{alpha, {}};
    for (const auto& s : trajectory) {
        const double v = v_alpha(s, alpha);
        out.values.push_back({s.t(), v, v / std::pow(m, s.t())});
    }
    return out;
}

// ---------------------------------------------------------------- NTable

NTable::NTable(std::size_t d, double m) : d_(d), m_(m) {
    if (d == 0) throw ValidationError("N-table dimension must be >= 1");
    if (!(m > 0.0)) throw ValidationError("N-table mean offspring m must be > 0");
}

void NTable::set(const MultiIndex& alpha, double value, double err) {
    if (alpha.dim() != d_) throw ValidationError("N-table index dimension mismatch");
    if (auto it = index_.find(alpha); it != index_.end()) {
        entries_[it->second].value = value;
        entries_[it->second].err = err;
        return;
    }
    index_.emplace(alpha, entries_.size());
    entries_.push_back({alpha, value, err});
}

bool NTable::contains(const MultiIndex& alpha) const { return index_.count(alpha) != 0; }

double NTable::value(const MultiIndex& alpha) const {
    const auto it = index_.find(alpha);
    if (it == index_.end()) throw ValidationError("N-table has no entry for index " + alpha.to_string());
    return entries_[it->second].value;
}

nlohmann::json NTable::to_json() const {
    nlohmann::json j;
    if (k)
        j["k"] = *k;
    else
        j["k"] = nullptr;
    j["d"] = d_;
    j["m"] = m_;
    if (source_t) j["t"] = *source_t;
    if (seed) j["seed"] = *seed;
    if (!note.empty()) j["note"] = note;
    auto arr = nlohmann::json::array();
    for (const auto& e : entries_) {
        std::vector<unsigned> comps(e.alpha.components().begin(), e.alpha.components().end());
        arr.push_back({{"alpha", comps}, {"value", e.value}, {"err", e.err}});
    }
    j["entries"] = arr;
    return j;
}

NTable NTable::from_json(const nlohmann::json& j) {
    try {
        NTable table(j.at("d").get<std::size_t>(), j.at("m").get<double>());
        if (j.contains("k") && !j["k"].is_null()) table.k = j["k"].get<unsigned>();
        if (j.contains("t")) table.source_t = j["t"].get<unsigned>();
        if (j.contains("seed")) table.seed = j["seed"].get<std::uint64_t>();
        table.note = j.value("note", std::string{});
        for (const auto& e : j.at("entries"))
            table.set(MultiIndex(e.at("alpha").get<std::vector<unsigned>>()), e.at("value").get<double>(),
                      e.value("err", 0.0));
        return table;
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError(std::string("malformed N-table JSON: ") + e.what());
    }
}

NTable estimate_n(std::span<const Snapshot> trajectory, std::span<const MultiIndex> alphas, double m) {
    if (trajectory.empty()) throw ValidationError("estimate_n: empty trajectory");
    if (!(m > 0.0)) throw ValidationError("estimate_n: m must be > 0");
    for (std::size_t i = 1; i < trajectory.size(); ++i)
        if (trajectory[i].t() <= trajectory[i - 1].t())
            throw ValidationError("estimate_n: snapshots must have increasing times");
    const std::size_t d = trajectory.front().dim();
    constexpr double kRateExponent = 1.0 / 2.5;

    std::vector<std::vector<double>> normalized;
    for (const auto& s : trajectory) {
        if (s.dim() != d) throw ValidationError("estimate_n: mixed snapshot dimensions");
        auto v = v_alphas(s, alphas);
        for (double& x : v) x /= std::pow(m, s.t());
        normalized.push_back(std::move(v));
    }
    const unsigned t_last = trajectory.back().t();
    NTable table(d, m);
    table.source_t = t_last;
    table.note = "value = V_alpha(t)/m^t at the last snapshot; err = m^(-t/2.5) * RMS rescaled increment";
    for (std::size_t a = 0; a < alphas.size(); ++a) {
        double scale = 1.0;
        if (trajectory.size() > 1) {
            double acc = 0.0;
            for (std::size_t i = 1; i < trajectory.size(); ++i) {
                const double inc = (normalized[i][a] - normalized[i - 1][a]) *
                                   std::pow(m, kRateExponent * trajectory[i].t());
                acc += inc * inc;
            }
            scale = std::sqrt(acc / static_cast<double>(trajectory.size() - 1));
        }
        table.set(alphas[a], normalized.back()[a], std::pow(m, -kRateExponent * t_last) * scale);
    }
    return table;
}

// ---------------------------------------------------------------- field

double gaussian_region_mass(const Region& A, std::span<const double> y, double variance) {
    if (y.size() != A.dim()) throw ValidationError("gaussian_region_mass: dimension mismatch");
    if (!(variance > 0.0)) throw ValidationError("gaussian_region_mass: variance must be > 0");
    const double sigma = std::sqrt(variance);
    double total = 0.0;
    for (const auto& piece : A.pieces()) {
        if (const auto* b = std::get_if<Box>(&piece)) {
            double p = 1.0;
            for (std::size_t i = 0; i < y.size(); ++i)
                p *= normal_interval_probability((b->lower[i] - y[i]) / sigma, (b->upper[i] - y[i]) / sigma);
            total += p;
        } else {
            const auto& ball = std::get<Ball>(piece);
            total += ball_mass(ball.center, ball.radius, y, sigma);
        }
    }
    return total;
}

double conditional_expectation_field(const Snapshot& s, const Region& A, double T, double m) {
    if (s.dim() != A.dim()) throw ValidationError("conditional_expectation_field: dimension mismatch");
    if (!(T > static_cast<double>(s.t())))
        throw ValidationError("conditional_expectation_field requires T > t");
    if (!(m > 0.0)) throw ValidationError("conditional_expectation_field: m must be > 0");
    const double variance = T - static_cast<double>(s.t());
    const auto sums = blocked_sums(s.size(), 1, [&](std::size_t i, std::vector<double>& out) {
        out[0] = gaussian_region_mass(A, s.position(i), variance);
    });
    return sums[0] / std::pow(m, s.t());
}

// ---------------------------------------------------------------- second moments

double second_moment_oracle(const MultiIndex& alpha, unsigned t, double m, double sigma2) {
    const unsigned n = order(alpha);
    const double afact = static_cast<double>(factorial(alpha));
    double e = alpha.is_zero() ? 1.0 : 0.0;
    for (unsigned s = 1; s <= t; ++s) {
        const double ts = static_cast<double>(s);
        const double bracket = m * (ipow(ts, n) - ipow(ts - 1.0, n)) + sigma2 * ipow(ts - 1.0, n);
        e = std::pow(m, s - 1.0) * afact * bracket + m * m * e;
    }
    return e;
}

double second_moment_oracle(const MultiIndex& alpha, unsigned t, const OffspringLaw& law) {
    return second_moment_oracle(alpha, t, law.mean(), law.variance());
}

namespace {

/// sum_{j>=1} m^{-j} f(j) until terms fall below 1e-12 absolute (after the
/// polynomial growth has peaked).
template <class F>
double geometric_series(double m, unsigned n, F&& f) {
    if (!(m > 1.0)) throw ValidationError("series requires m > 1");
    double sum = 0.0;
    const double peak = static_cast<double>(n) / std::log(m);
    for (unsigned j = 1; j < 100000; ++j) {
        const double term = std::pow(m, -static_cast<double>(j)) * f(static_cast<double>(j));
        sum += term;
        // Tail after j is bounded by term * ratio / (1 - ratio) once the
        // ratio of successive terms has dropped below 1.
        if (j > peak + 1) {
            const double ratio = std::pow((j + 1.0) / j, n) / m;
            if (ratio < 1.0 && std::abs(term) * ratio / (1.0 - ratio) < 1e-12) break;
        }
    }
    return sum;
}

}  // namespace

double n_second_moment(const MultiIndex& alpha, double m, double sigma2) {
    if (alpha.is_zero())
        throw ValidationError("n_second_moment is defined for alpha != 0; use n0_second_moment");
    const unsigned n = order(alpha);
    const double afact = static_cast<double>(factorial(alpha));
    const double pow_sum = geometric_series(m, n, [&](double j) { return ipow(j, n); });
    const double diff_sum = geometric_series(m, n, [&](double j) { return ipow(j, n) - ipow(j - 1.0, n); });
    return afact * (sigma2 * pow_sum / (m * m) + diff_sum);
}

double n_second_moment(const MultiIndex& alpha, const OffspringLaw& law) {
    return n_second_moment(alpha, law.mean(), law.variance());
}

double n_second_moment_closed_form_printed(const MultiIndex& alpha, double m, double sigma2) {
    if (alpha.is_zero())
        throw ValidationError("closed form is reported for alpha != 0 only");
    const unsigned n = order(alpha);
    const double afact = static_cast<double>(factorial(alpha));
    const double pow_sum = geometric_series(m, n, [&](double j) { return ipow(j, n); });
    const double diff_sum = geometric_series(m, n, [&](double j) { return ipow(j, n) - ipow(j - 1.0, n); });
    return afact / m * (sigma2 * pow_sum + m * diff_sum);
}

double n0_second_moment(double m, double sigma2) {
    if (!(m > 1.0)) throw ValidationError("n0_second_moment requires m > 1");
    return 1.0 + sigma2 / (m * m - m);
}

// ---------------------------------------------------------------- U-statistics

std::size_t u_statistic_cap(std::size_t p) {
    switch (p) {
        case 1: return static_cast<std::size_t>(-1);
        case 2: return 3000;
        case 3: return 300;
        default: throw ValidationError("u_statistic supports 1 <= p <= 3");
    }
}

double u_statistic(const Snapshot& s, std::span<const MultiIndex> alphas, std::optional<std::size_t> limit) {
    const std::size_t p = alphas.size();
    const std::size_t cap = limit.value_or(u_statistic_cap(p));
    require_dims(s, alphas);
    if (s.size() > cap)
        throw CapacityError("u_statistic: population " + std::to_string(s.size()) + " above cap " +
                            std::to_string(cap) + " for p=" + std::to_string(p));
    if (s.empty()) return 0.0;
    HermiteEvaluator eval(s, alphas);
    // Power sums over the particles of every product of a subset of the
    // factors; subset mask bit h selects alphas[h].
    const std::size_t masks = std::size_t{1} << p;
    const auto sums = blocked_sums(s.size(), masks, [&](std::size_t i, std::vector<double>& out) {
        std::vector<double> h(p);
        eval(i, h);
        for (std::size_t mask = 0; mask < masks; ++mask) {
            double prod = 1.0;
            for (std::size_t b = 0; b < p; ++b)
                if (mask & (std::size_t{1} << b)) prod *= h[b];
            out[mask] = prod;
        }
    });
    auto S = [&](std::size_t mask) { return sums[mask]; };
    switch (p) {
        case 1: return S(1);
        case 2: return S(1) * S(2) - S(3);
        default:
            return S(1) * S(2) * S(4) - S(3) * S(4) - S(5) * S(2) - S(6) * S(1) + 2.0 * S(7);
    }
}

// ---------------------------------------------------------------- Monte Carlo

std::vector<Snapshot> simulate_trajectory(std::size_t d, const OffspringLaw& law, std::uint64_t seed,
                                          unsigned t_max, std::size_t population_cap) {
    std::vector<Snapshot> out;
    out.reserve(t_max + 1);
    out.push_back(Snapshot::root(std::vector<double>(d, 0.0)));
    for (unsigned t = 1; t <= t_max; ++t) out.push_back(step(out.back(), law, seed, {population_cap, 1}));
    return out;
}

namespace {

struct MeanSe {
    double mean;
    double se;
};

MeanSe mean_se(std::span<const double> xs) {
    const double n = static_cast<double>(xs.size());
    const double mean = pairwise_sum(xs) / n;
    std::vector<double> dev(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) dev[i] = (xs[i] - mean) * (xs[i] - mean);
    const double var = xs.size() > 1 ? pairwise_sum(dev) / (n - 1.0) : 0.0;
    return {mean, std::sqrt(var / n)};
}

}  // namespace

ReplicaMoments replica_moments(const OffspringLaw& law, std::span<const MultiIndex> alphas, unsigned t_max,
                               std::size_t replicas, std::uint64_t seed, unsigned workers) {
    if (alphas.empty()) throw ValidationError("replica_moments: no indices");
    if (replicas < 2) throw ValidationError("replica_moments: need at least 2 replicas");
    const std::size_t d = alphas.front().dim();
    const std::size_t na = alphas.size();
    const double m = law.mean();
    // values[(a * (t_max+1) + t) * replicas + r]
    std::vector<double> norm(na * (t_max + 1) * replicas), sq(norm.size());
#pragma omp parallel for num_threads(static_cast<int>(std::max(1u, workers))) schedule(dynamic, 64)
    for (std::ptrdiff_t r = 0; r < static_cast<std::ptrdiff_t>(replicas); ++r) {
        const auto traj = simulate_trajectory(d, law, replica_seed(seed, static_cast<std::uint64_t>(r)), t_max);
        for (unsigned t = 0; t <= t_max; ++t) {
            const auto v = v_alphas(traj[t], alphas);
            for (std::size_t a = 0; a < na; ++a) {
                const std::size_t idx = (a * (t_max + 1) + t) * replicas + static_cast<std::size_t>(r);
                norm[idx] = v[a] / std::pow(m, t);
                sq[idx] = v[a] * v[a];
            }
        }
    }
    ReplicaMoments out;
    out.alphas.assign(alphas.begin(), alphas.end());
    out.replicas = replicas;
    for (std::size_t a = 0; a < na; ++a) {
        std::vector<double> mn, sn, ms, ss;
        for (unsigned t = 0; t <= t_max; ++t) {
            const std::size_t base = (a * (t_max + 1) + t) * replicas;
            const auto x = mean_se(std::span<const double>(norm).subspan(base, replicas));
            const auto y = mean_se(std::span<const double>(sq).subspan(base, replicas));
            mn.push_back(x.mean);
            sn.push_back(x.se);
            ms.push_back(y.mean);
            ss.push_back(y.se);
        }
        out.mean_normalized.push_back(mn);
        out.se_normalized.push_back(sn);
        out.mean_square.push_back(ms);
        out.se_square.push_back(ss);
    }
    return out;
}

LpIncrementTable lp_increment_diagnostic(std::size_t replicas, const MultiIndex& alpha, unsigned p,
                                         unsigned t_max, const OffspringLaw& law, std::uint64_t seed,
                                         unsigned workers) {
    if (p != 2 && p != 4) throw ValidationError("lp_increment_diagnostic supports p in {2, 4}");
    if (t_max < 1) throw ValidationError("lp_increment_diagnostic requires t_max >= 1");
    if (replicas < 1) throw ValidationError("lp_increment_diagnostic requires replicas >= 1");
    const double m = law.mean();
    const std::size_t d = alpha.dim();
    // inc[(t-1) * replicas + r] = |increment|^p
    std::vector<double> inc(static_cast<std::size_t>(t_max) * replicas);
#pragma omp parallel for num_threads(static_cast<int>(std::max(1u, workers))) schedule(dynamic, 16)
    for (std::ptrdiff_t r = 0; r < static_cast<std::ptrdiff_t>(replicas); ++r) {
        const auto traj = simulate_trajectory(d, law, replica_seed(seed, static_cast<std::uint64_t>(r)), t_max);
        double prev = v_alpha(traj[0], alpha);
        for (unsigned t = 1; t <= t_max; ++t) {
            const double cur = v_alpha(traj[t], alpha) / std::pow(m, t);
            inc[(t - 1) * replicas + static_cast<std::size_t>(r)] = std::pow(std::abs(cur - prev), p);
            prev = cur;
        }
    }
    LpIncrementTable out{alpha, p, {}, 0.0};
    double prev_norm = std::numeric_limits<double>::quiet_NaN();
    double ratio_sum = 0.0;
    int ratio_count = 0;
    for (unsigned t = 1; t <= t_max; ++t) {
        const auto slice = std::span<const double>(inc).subspan((t - 1) * replicas, replicas);
        const double norm = std::pow(pairwise_sum(slice) / static_cast<double>(replicas), 1.0 / p);
        const double ratio = (t > 1 && prev_norm > 0.0) ? norm / prev_norm : std::numeric_limits<double>::quiet_NaN();
        double exact = std::numeric_limits<double>::quiet_NaN();
        if (p == 2) {
            const double cur2 = second_moment_oracle(alpha, t, law) / std::pow(m, 2.0 * t);
            const double prv2 = second_moment_oracle(alpha, t - 1, law) / std::pow(m, 2.0 * (t - 1));
            exact = std::sqrt(std::max(0.0, cur2 - prv2));
        }
        out.rows.push_back({t, norm, ratio, exact});
        if (t >= 2 && t <= 8 && std::isfinite(ratio)) {
            ratio_sum += ratio;
            ++ratio_count;
        }
        prev_norm = norm;
    }
    out.mean_ratio = ratio_count ? ratio_sum / ratio_count : std::numeric_limits<double>::quiet_NaN();
    return out;
}

void LpIncrementTable::write_csv(std::ostream& os) const {
    const auto old = os.precision(17);
    os << "t,norm,ratio,exact_l2\n";
    for (const auto& r : rows) os << r.t << ',' << r.norm << ',' << r.ratio << ',' << r.exact_l2 << '\n';
    os.precision(old);
}

}  // namespace bwp
