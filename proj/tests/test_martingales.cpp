#include "bwp/errors.hpp"
#include "bwp/hermite.hpp"
#include "bwp/martingales.hpp"
#include "bwp/simulator.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <optional>
#include <sstream>

using bwp::MultiIndex;
using bwp::OffspringLaw;
using bwp::Region;
using bwp::Snapshot;

namespace {

const OffspringLaw kLaw({0.25, 0.25, 0.5});
const OffspringLaw kTwo({0.0, 0.0, 1.0}, bwp::LawMode::Test);

double phi(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

double hval(const MultiIndex& a, std::span<const double> x, double t) {
    double v = 1.0;
    for (std::size_t i = 0; i < a.dim(); ++i) v *= oracle::hermite_raw(a[i], x[i], t);
    return v;
}

}  // namespace

TEST_CASE("v_alpha") {
    const auto traj = bwp::simulate_trajectory(2, kLaw, 5, 5);
    for (const auto& s : traj) CHECK(bwp::v_alpha(s, MultiIndex(2)) == static_cast<double>(s.size()));
    const Snapshot one(1, 3, {1.7});
    CHECK(bwp::v_alpha(one, {2}) == doctest::Approx(1.7 * 1.7 - 3.0));
    CHECK(bwp::v_alpha(Snapshot(2, 4, {}), {1, 1}) == 0.0);
    CHECK(bwp::v_alpha(traj[0], {0, 0}) == 1.0);
    CHECK(bwp::v_alpha(traj[0], {1, 0}) == 0.0);
    CHECK_THROWS_AS(bwp::v_alpha(one, {1, 1}), bwp::ValidationError);

    const MultiIndex as[] = {{0, 0}, {1, 0}, {2, 1}, {0, 3}};
    const auto& last = traj.back();
    const auto many = bwp::v_alphas(last, as);
    for (std::size_t j = 0; j < 4; ++j) {
        double want = 0.0, scale = 0.0;
        for (std::size_t i = 0; i < last.size(); ++i) {
            want += hval(as[j], last.position(i), last.t());
            scale += std::fabs(hval(as[j], last.position(i), last.t()));
        }
        CHECK(std::fabs(many[j] - want) <= 1e-12 * (scale + 1.0));
    }

    const auto series = bwp::martingale_series(traj, {0, 0}, kLaw.mean());
    REQUIRE(series.values.size() == traj.size());
    CHECK(series.values[3].normalized == doctest::Approx(traj[3].size() / std::pow(1.25, 3)));
}

TEST_CASE("estimate_n") {
    const auto traj = bwp::simulate_trajectory(1, kTwo, 1, 8);
    const MultiIndex zero[] = {MultiIndex(1)};
    const auto t = bwp::estimate_n(traj, zero, 2.0);
    CHECK(t.value(MultiIndex(1)) == 1.0);
    CHECK(t.source_t == 8u);

    const OffspringLaw none({1.0}, bwp::LawMode::Test);
    const auto dead = bwp::simulate_trajectory(1, none, 1, 3);
    const MultiIndex as[] = {{0}, {1}, {2}};
    const auto te = bwp::estimate_n(dead, as, 1.5);
    for (const auto& a : as) CHECK(te.value(a) == 0.0);
    CHECK_THROWS_AS(te.value({3}), bwp::ValidationError);
    CHECK_THROWS_AS(bwp::estimate_n(std::span<const Snapshot>{}, as, 2.0), bwp::ValidationError);

    std::vector<double> n0;
    for (std::uint64_t r = 0; r < 20000; ++r) {
        const auto tr = bwp::simulate_trajectory(1, kLaw, bwp::replica_seed(8, r), 6);
        n0.push_back(bwp::estimate_n(tr, zero, kLaw.mean()).value(MultiIndex(1)));
    }
    const auto ms = oracle::mean_se(n0);
    CHECK(std::fabs(ms.mean - 1.0) <= 4.0 * ms.se);
}

TEST_CASE("NTable JSON") {
    bwp::NTable t(2, 1.5);
    t.k = 1;
    t.source_t = 9;
    t.note = "x";
    t.set({0, 0}, 1.25, 0.1);
    t.set({1, 0}, -0.5);
    t.set({1, 0}, -0.75);
    const auto j = t.to_json();
    CHECK(j["k"] == 1);
    CHECK(j["entries"].size() == 2);
    const auto back = bwp::NTable::from_json(j);
    CHECK(back.value({1, 0}) == -0.75);
    CHECK(back.dim() == 2);
    CHECK(back.m() == 1.5);
    CHECK(back.to_json() == j);
    CHECK_THROWS_AS(bwp::NTable::from_json(nlohmann::json::parse(R"({"d":1})")), bwp::ValidationError);
    CHECK_THROWS_AS(t.set({1}, 0.0), bwp::ValidationError);
}

TEST_CASE("conditional expectation field") {
    const auto traj = bwp::simulate_trajectory(2, kLaw, 17, 4);
    const auto& s = traj.back();
    REQUIRE(s.size() > 0);
    const auto huge = Region::box({-1e3, -1e3}, {1e3, 1e3});
    CHECK(oracle::rel_err(bwp::conditional_expectation_field(s, huge, 5.0, 1.25), s.size() / std::pow(1.25, 4)) <= 1e-9);

    const double origin[] = {0.0, 0.0};
    const auto root = Snapshot::root(origin);
    const Snapshot at3(2, 3, {0.0, 0.0});
    const double a = -0.4, b = 1.1, T = 7.0, sd = 2.0;
    const double want = std::pow(2.0, -3.0) * std::pow(phi(b / sd) - phi(a / sd), 2);
    CHECK(oracle::rel_err(bwp::conditional_expectation_field(at3, Region::box({a, a}, {b, b}), T, 2.0), want) <= 1e-12);
    CHECK(bwp::conditional_expectation_field(Snapshot(2, 2, {}), huge, 5.0, 2.0) == 0.0);
    CHECK_THROWS_AS(bwp::conditional_expectation_field(at3, huge, 3.0, 2.0), bwp::ValidationError);

    // Disc mass against polar quadrature of the Gaussian density.
    std::vector<double> gx, gw;
    oracle::gauss_legendre(60, gx, gw);
    const double cx = 0.9, cy = -0.3, r = 1.2, var = 2.5;
    double q = 0.0;
    for (std::size_t i = 0; i < gx.size(); ++i) {
        const double rho = 0.5 * r * (gx[i] + 1.0);
        for (std::size_t j = 0; j < gx.size(); ++j) {
            const double th = std::numbers::pi * (gx[j] + 1.0);
            const double x = cx + rho * std::cos(th), y = cy + rho * std::sin(th);
            q += gw[i] * gw[j] * 0.5 * r * std::numbers::pi * rho * std::exp(-(x * x + y * y) / (2 * var)) /
                 (2 * std::numbers::pi * var);
        }
    }
    const double y0[] = {0.0, 0.0};
    CHECK(oracle::rel_err(bwp::gaussian_region_mass(Region::ball({cx, cy}, r), y0, var), q) <= 1e-8);
    // Far tail of a box stays accurate in relative terms.
    const double far[] = {0.0};
    const double tail = bwp::gaussian_region_mass(Region::box({12.0}, {13.0}), far, 1.0);
    CHECK(oracle::rel_err(tail, phi(-12.0) - phi(-13.0)) <= 1e-10);
}

TEST_CASE("tower property of the field") {
    const auto traj = bwp::simulate_trajectory(1, kLaw, 4, 2);
    const auto& s = traj.back();
    REQUIRE(s.size() > 0);
    const auto A = Region::box({-1.0}, {1.5});
    const double T = 5.0, m = kLaw.mean();
    std::vector<double> obs;
    for (std::uint64_t r = 0; r < 20000; ++r) {
        Snapshot cur = s;
        for (unsigned t = 2; t < 5; ++t) cur = bwp::step(cur, kLaw, bwp::replica_seed(1000, r) + t);
        obs.push_back(bwp::count(cur, A) / std::pow(m, T));
    }
    const auto ms = oracle::mean_se(obs);
    CHECK(std::fabs(ms.mean - bwp::conditional_expectation_field(s, A, T, m)) <= 4.0 * ms.se);
}

TEST_CASE("second moment oracle") {
    const double m = kLaw.mean(), s2 = kLaw.variance();
    CHECK(bwp::second_moment_oracle(MultiIndex(1), 1, kLaw) == doctest::Approx(s2 + m * m));
    CHECK(bwp::second_moment_oracle({2}, 1, kLaw) == doctest::Approx(2.0 * m));
    for (unsigned t = 1; t <= 10; ++t) {
        const double gw = s2 * std::pow(m, t - 1) * (std::pow(m, t) - 1.0) / (m - 1.0) + std::pow(m, 2 * t);
        CHECK(oracle::rel_err(bwp::second_moment_oracle(MultiIndex(1), t, kLaw), gw) <= 1e-10);
    }
    CHECK(bwp::n_second_moment({1}, 2.0, 0.0) == doctest::Approx(1.0).epsilon(1e-12));
    for (const MultiIndex a : {MultiIndex{1}, MultiIndex{2}}) {
        const double lim = bwp::second_moment_oracle(a, 200, 2.0, 0.5) / std::pow(2.0, 400);
        CHECK(std::fabs(bwp::n_second_moment(a, 2.0, 0.5) - lim) <= 1e-8);
        const double v1 = bwp::n_second_moment(a, 2.0, 1.0), v0 = bwp::n_second_moment(a, 2.0, 0.0);
        CHECK(bwp::n_second_moment(a, 2.0, 3.0) == doctest::Approx(v0 + 3.0 * (v1 - v0)).epsilon(1e-12));
    }
    CHECK_THROWS_AS(bwp::n_second_moment(MultiIndex(1), 2.0, 0.5), bwp::ValidationError);
    CHECK(bwp::n0_second_moment(2.0, 0.5) == doctest::Approx(1.25));
    const double lim0 = bwp::second_moment_oracle(MultiIndex(1), 200, 2.0, 0.5) / std::pow(2.0, 400);
    CHECK(bwp::n0_second_moment(2.0, 0.5) == doctest::Approx(lim0).epsilon(1e-10));
}

TEST_CASE("Monte Carlo second moments on a small run") {
    const MultiIndex as[] = {{0}, {1}, {2}};
    const auto mom = bwp::replica_moments(kLaw, as, 4, 20000, 55);
    for (std::size_t a = 0; a < 3; ++a)
        for (unsigned t = 1; t <= 4; ++t) {
            const double want = bwp::second_moment_oracle(as[a], t, kLaw);
            CHECK(std::fabs(mom.mean_square[a][t] - want) <= 4.0 * mom.se_square[a][t]);
            const double mean_want = a == 0 ? 1.0 : 0.0;
            CHECK(std::fabs(mom.mean_normalized[a][t] - mean_want) <= 4.0 * mom.se_normalized[a][t] + 1e-12);
        }
}

TEST_CASE("replica moments do not depend on worker count") {
    const MultiIndex as[] = {{0, 0}, {1, 1}};
    const auto a = bwp::replica_moments(kLaw, as, 4, 300, 9, 1);
    const auto b = bwp::replica_moments(kLaw, as, 4, 300, 9, 3);
    CHECK(a.mean_square == b.mean_square);
    CHECK(a.mean_normalized == b.mean_normalized);
}

TEST_CASE("u_statistic against naive loops") {
    std::optional<Snapshot> found;
    for (std::uint64_t seed = 321; !found; ++seed)
        for (const auto& snap : bwp::simulate_trajectory(2, kLaw, seed, 6))
            if (snap.size() >= 5 && snap.size() <= 50) found = snap;
    const Snapshot& s = *found;
    const double t = s.t();
    const MultiIndex a{1, 0}, b{0, 2}, c{1, 1};
    double naive2 = 0.0, naive3 = 0.0;
    for (std::size_t i = 0; i < s.size(); ++i)
        for (std::size_t j = 0; j < s.size(); ++j) {
            if (i == j) continue;
            naive2 += hval(a, s.position(i), t) * hval(b, s.position(j), t);
            for (std::size_t k = 0; k < s.size(); ++k)
                if (k != i && k != j)
                    naive3 += hval(a, s.position(i), t) * hval(b, s.position(j), t) * hval(c, s.position(k), t);
        }
    const MultiIndex p2[] = {a, b};
    const MultiIndex p3[] = {a, b, c};
    CHECK(bwp::u_statistic(s, p2) == doctest::Approx(naive2).epsilon(1e-10));
    CHECK(bwp::u_statistic(s, p3) == doctest::Approx(naive3).epsilon(1e-9));
    const MultiIndex p1[] = {b};
    CHECK(bwp::u_statistic(s, p1) == doctest::Approx(bwp::v_alpha(s, b)));
    const MultiIndex zeros[] = {MultiIndex(2), MultiIndex(2)};
    const double z = s.size();
    CHECK(bwp::u_statistic(s, zeros) == z * (z - 1));
    CHECK_THROWS_AS(bwp::u_statistic(s, zeros, 2), bwp::CapacityError);
    const MultiIndex four[] = {a, a, a, a};
    CHECK_THROWS_AS(bwp::u_statistic(s, four), bwp::ValidationError);
}

TEST_CASE("L^p increment diagnostic") {
    const auto zero = bwp::lp_increment_diagnostic(50, MultiIndex(1), 2, 6, kTwo, 1);
    for (const auto& r : zero.rows) CHECK(r.norm == 0.0);
    const OffspringLaw law({0.0, 0.25, 0.5, 0.25});
    const auto tab = bwp::lp_increment_diagnostic(4000, MultiIndex(1), 2, 8, law, 3);
    REQUIRE(tab.rows.size() == 8);
    for (const auto& r : tab.rows) {
        // Exact squared increment of Z_t/m^t is sigma^2 / m^{t+1}.
        CHECK(r.exact_l2 == doctest::Approx(std::sqrt(0.5 / std::pow(2.0, r.t + 1))).epsilon(1e-12));
        CHECK(r.norm == doctest::Approx(r.exact_l2).epsilon(0.1));
    }
    CHECK(tab.mean_ratio < 1.0);
    std::ostringstream csv;
    tab.write_csv(csv);
    CHECK(csv.str().rfind("t,norm,ratio,exact_l2\n", 0) == 0);
    CHECK_THROWS_AS(bwp::lp_increment_diagnostic(10, MultiIndex(1), 3, 4, law, 1), bwp::ValidationError);
}
