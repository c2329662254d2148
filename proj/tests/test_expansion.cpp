#include "bwp/errors.hpp"
#include "bwp/expansion.hpp"
#include "bwp/kernel_expansion.hpp"
#include "bwp/simulator.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <set>

using bwp::MultiIndex;
using bwp::NTable;
using bwp::Region;
using bwp::Snapshot;

namespace {

NTable random_table(std::size_t d, unsigned k, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    NTable t(d, 2.0);
    t.k = k;
    for (const auto& g : bwp::required_indices(k, d)) t.set(g, u(rng));
    return t;
}

Region random_box(std::size_t d, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> lo(-2.0, 1.0), w(0.1, 2.0);
    std::vector<double> a(d), b(d);
    for (std::size_t i = 0; i < d; ++i) {
        a[i] = lo(rng);
        b[i] = a[i] + w(rng);
    }
    return Region::box(a, b);
}

// m^{-t} sum_y (2 pi T)^{d/2} integral over the box of the truncated shifted
// kernel, by tensor Gauss-Legendre (exact for these polynomial integrands).
double plugin_oracle(const Snapshot& s, const Region& A, double T, unsigned k, double m) {
    const auto& box = std::get<bwp::Box>(A.pieces()[0]);
    const std::size_t d = s.dim();
    std::vector<double> gx, gw;
    oracle::gauss_legendre(k + 2, gx, gw);
    const bwp::KernelExpansionParams p{d, T, static_cast<double>(s.t()), k};
    const std::size_t n = gx.size();
    std::size_t total_nodes = 1;
    for (std::size_t i = 0; i < d; ++i) total_nodes *= n;
    double sum = 0.0;
    std::vector<double> x(d);
    for (std::size_t part = 0; part < s.size(); ++part)
        for (std::size_t node = 0; node < total_nodes; ++node) {
            double w = 1.0;
            std::size_t rest = node;
            for (std::size_t i = 0; i < d; ++i) {
                const std::size_t j = rest % n;
                rest /= n;
                const double h = 0.5 * (box.upper[i] - box.lower[i]);
                x[i] = 0.5 * (box.upper[i] + box.lower[i]) + h * gx[j];
                w *= h * gw[j];
            }
            sum += w * bwp::truncated_kernel_shifted(p, x, s.position(part));
        }
    return sum * std::pow(2.0 * std::numbers::pi * T, 0.5 * d) / std::pow(m, s.t());
}

}  // namespace

TEST_CASE("required_indices") {
    CHECK(bwp::required_indices(0, 3) == std::vector<MultiIndex>{MultiIndex(3)});
    CHECK(bwp::required_indices(1, 1) == std::vector<MultiIndex>{{0}, {1}, {2}});
    CHECK(bwp::required_indices(1, 2) == std::vector<MultiIndex>{{0, 0}, {1, 0}, {0, 1}, {2, 0}, {0, 2}});
    // Exhaustive definition: {2a - b : |a| <= k, b <= 2a}.
    for (std::size_t d = 1; d <= 3; ++d)
        for (unsigned k = 0; k <= 3; ++k) {
            std::set<MultiIndex> want;
            for (unsigned n = 0; n <= k; ++n)
                for (const auto& a : bwp::enumerate_order(d, n))
                    for (const auto& b : bwp::sub_indices(2u * a)) want.insert(2u * a - b);
            const auto got = bwp::required_indices(k, d);
            CHECK(std::set<MultiIndex>(got.begin(), got.end()) == want);
            CHECK(got.size() == want.size());
        }
}

TEST_CASE("expansion_value examples") {
    NTable t(1, 2.0);
    t.set({0}, 1.0);
    t.set({1}, 2.0);
    t.set({2}, 3.0);
    const auto A = Region::box({0}, {1});
    CHECK(oracle::rel_err(bwp::expansion_value(A, 10.0, 1, t), 14.0 / 15.0) <= 1e-14);
    CHECK(bwp::expansion_value(A, 10.0, 0, t) == doctest::Approx(1.0));
    const auto ball = Region::ball({0.3, 0.1}, 0.7);
    NTable t2(2, 2.0);
    t2.set({0, 0}, 2.5);
    CHECK(bwp::expansion_value(ball, 3.0, 0, t2) == doctest::Approx(2.5 * ball.volume()));
    std::mt19937_64 rng(3);
    auto zeros = random_table(2, 2, rng);
    for (const auto& e : std::vector(zeros.entries())) zeros.set(e.alpha, 0.0);
    CHECK(bwp::expansion_value(ball, 7.0, 2, zeros) == 0.0);
    CHECK_THROWS_AS(bwp::expansion_value(ball, 7.0, 1, t2), bwp::ValidationError);
    const bwp::ExpansionRequest req{A, 10.0, 1, t};
    CHECK(bwp::expansion_value(req) == bwp::expansion_value(A, 10.0, 1, t));
}

TEST_CASE("order-1 expansion equals the two-term form") {
    std::mt19937_64 rng(11);
    for (std::size_t d = 1; d <= 3; ++d)
        for (double T : {10.0, 100.0})
            for (int rep = 0; rep < 10; ++rep) {
                const auto table = random_table(d, 1, rng);
                const auto A = random_box(d, rng);
                std::vector<double> n1(d);
                double n2 = 0.0;
                for (std::size_t i = 0; i < d; ++i) {
                    n1[i] = table.value(MultiIndex::unit(d, i));
                    n2 += table.value(2u * MultiIndex::unit(d, i));
                }
                const double want = bwp::theorem_a_form(A, T, table.value(MultiIndex(d)), n1, n2);
                CHECK(oracle::rel_err(bwp::expansion_value(A, T, 1, table), want) <= 1e-12);
            }
    // Symmetric A: the linear term drops out.
    const auto sym = Region::box({-1, -1}, {1, 1});
    const double a1[] = {5.0, -3.0}, a0[] = {0.0, 0.0};
    CHECK(bwp::theorem_a_form(sym, 10.0, 1.0, a1, 2.0) == doctest::Approx(bwp::theorem_a_form(sym, 10.0, 1.0, a0, 2.0)));
    CHECK(bwp::theorem_a_form(sym, 1e12, 1.5, a1, 2.0) == doctest::Approx(1.5 * 4.0));
}

TEST_CASE("coefficients agree with expansion_value") {
    std::mt19937_64 rng(5);
    for (unsigned k = 0; k <= 3; ++k) {
        const auto table = random_table(2, k, rng);
        const auto A = Region::disjoint_union({random_box(2, rng), Region::ball({5, 5}, 0.5)});
        const auto c = bwp::expansion_coefficients(A, 20.0, k);
        const auto idx = bwp::required_indices(k, 2);
        double v = 0.0;
        for (std::size_t j = 0; j < idx.size(); ++j) v += c[j] * table.value(idx[j]);
        CHECK(oracle::rel_err(v, bwp::expansion_value(A, 20.0, k, table), 1e-14) <= 1e-12);
    }
    bwp::MomentCache cache;
    const auto A = Region::box({0, 0}, {1, 2});
    bwp::expansion_coefficients(A, 5.0, 2, &cache);
    const auto n = cache.size();
    CHECK(n > 0);
    bwp::expansion_coefficients(A, 9.0, 2, &cache);
    CHECK(cache.size() == n);
}

TEST_CASE("plug-in expansion") {
    const bwp::OffspringLaw law({0.1, 0.3, 0.6});
    const auto traj = bwp::simulate_trajectory(2, law, 44, 3);
    const auto& s = traj.back();
    const double m = law.mean();
    const auto A = Region::box({-0.5, 0.0}, {1.0, 1.5});
    for (unsigned k = 0; k <= 2; ++k)
        for (double T : {10.0, 40.0}) {
            const double got = bwp::plugin_expansion(s, A, T, k, m);
            CHECK(oracle::rel_err(got, plugin_oracle(s, A, T, k, m), 1e-12) <= 1e-9);
        }
    CHECK(bwp::plugin_expansion(s, A, 10.0, 0, m) == doctest::Approx(s.size() / std::pow(m, 3) * A.volume()));
    CHECK(bwp::plugin_expansion(Snapshot(2, 3, {}), A, 10.0, 2, m) == 0.0);
    CHECK_THROWS_AS(bwp::plugin_expansion(s, A, 6.0, 1, m), bwp::ValidationError);

    const double origin[] = {0.0, 0.0};
    const auto root = Snapshot::root(origin);
    for (unsigned k = 0; k <= 3; ++k)
        CHECK(oracle::rel_err(bwp::plugin_expansion(root, A, 12.0, k, m), plugin_oracle(root, A, 12.0, k, m), 1e-12) <= 1e-9);
}

TEST_CASE("helpers") {
    CHECK(bwp::predicted_count(2.0, 10.0, 1.5, 1) == doctest::Approx(std::pow(1.5, 10) * 2.0 / std::sqrt(20 * std::numbers::pi)));
    CHECK_THROWS_AS(bwp::predicted_count(1.0, 41.0, 2.0, 1), bwp::ValidationError);
    CHECK(bwp::observation_time(1e6, 0) == static_cast<unsigned>(std::floor(std::pow(1e6, 0.45))));
    CHECK(bwp::observation_time(1e6, 2) == static_cast<unsigned>(std::floor(std::pow(1e6, 0.15))));
    CHECK_THROWS_AS(bwp::observation_time(100.0, 1, 1.0), bwp::ValidationError);
}
