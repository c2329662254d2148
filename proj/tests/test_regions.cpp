#include "bwp/errors.hpp"
#include "bwp/regions.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

using bwp::MultiIndex;
using bwp::Region;

namespace {

// Tensor Gauss-Legendre integral of x^beta over a box.
double box_moment_oracle(const std::vector<double>& lo, const std::vector<double>& hi, const MultiIndex& beta) {
    std::vector<double> gx, gw;
    oracle::gauss_legendre(12, gx, gw);
    double total = 1.0;
    for (std::size_t i = 0; i < lo.size(); ++i) {
        double s = 0.0;
        const double h = 0.5 * (hi[i] - lo[i]), c = 0.5 * (hi[i] + lo[i]);
        for (std::size_t j = 0; j < gx.size(); ++j) s += gw[j] * h * std::pow(c + h * gx[j], beta[i]);
        total *= s;
    }
    return total;
}

// Polar Gauss-Legendre integral of x^beta over a disc.
double disc_moment_oracle(double cx, double cy, double r, const MultiIndex& beta) {
    std::vector<double> gx, gw;
    oracle::gauss_legendre(40, gx, gw);
    double s = 0.0;
    for (std::size_t i = 0; i < gx.size(); ++i) {
        const double rho = 0.5 * r * (gx[i] + 1.0);
        for (std::size_t j = 0; j < gx.size(); ++j) {
            const double th = std::numbers::pi * (gx[j] + 1.0);
            const double x = cx + rho * std::cos(th), y = cy + rho * std::sin(th);
            s += gw[i] * gw[j] * 0.5 * r * std::numbers::pi * rho * std::pow(x, beta[0]) * std::pow(y, beta[1]);
        }
    }
    return s;
}

}  // namespace

TEST_CASE("contains") {
    const auto box = Region::box({0, 0}, {1, 1});
    const double a[] = {0, 0}, b[] = {1, 0}, c[] = {0.6, 0.8};
    CHECK(box.contains(a));
    CHECK_FALSE(box.contains(b));
    CHECK(Region::ball({0, 0}, 1.0).contains(c));
    const double three[] = {0, 0, 0};
    CHECK_THROWS_AS(box.contains(three), bwp::ValidationError);
}

TEST_CASE("moments") {
    CHECK(Region::box({0, 0}, {1, 1}).moment({1, 0}) == doctest::Approx(0.5));
    CHECK(Region::box({-1}, {1}).moment({1}) == 0.0);
    CHECK(Region::ball({0, 0}, 1.0).moment({2, 0}) == doctest::Approx(std::numbers::pi / 4.0).epsilon(1e-14));
    CHECK(Region::ball({0, 0}, 1.0).volume() == doctest::Approx(std::numbers::pi));
    CHECK(Region::box({0, 0, 0}, {1, 1, 1}).volume() == doctest::Approx(1.0));
    CHECK(Region::ball({0, 0, 0}, 2.0).volume() == doctest::Approx(4.0 / 3.0 * std::numbers::pi * 8.0));
    CHECK_THROWS_AS(Region::box({0}, {1}).moment({17}), bwp::ValidationError);
    CHECK_THROWS_AS(Region::box({0}, {1}).moment({1, 1}), bwp::ValidationError);

    for (unsigned n = 0; n <= 6; ++n)
        for (const auto& beta : bwp::enumerate_order(3, n)) {
            const std::vector<double> lo{-0.7, 0.2, -2.0}, hi{1.3, 0.9, -0.5};
            CHECK(oracle::rel_err(Region::box(lo, hi).moment(beta), box_moment_oracle(lo, hi, beta), 1e-14) <= 1e-12);
        }
    for (unsigned n = 0; n <= 6; ++n)
        for (const auto& beta : bwp::enumerate_order(2, n)) {
            const double f1 = std::numbers::pi * 0.64 * std::pow(1.3 + 0.8, n);
            const double f2 = std::numbers::pi * 1.7 * 1.7 * std::pow(1.7, n);
            CHECK(oracle::rel_err(Region::ball({0.4, -1.3}, 0.8).moment(beta), disc_moment_oracle(0.4, -1.3, 0.8, beta),
                                  f1) <= 1e-10);
            CHECK(oracle::rel_err(Region::ball({0.0, 0.0}, 1.7).moment(beta), disc_moment_oracle(0, 0, 1.7, beta), f2) <=
                  1e-10);
        }
}

TEST_CASE("translation of box moments") {
    const std::vector<double> lo{-0.3, 0.5, 1.0}, hi{0.8, 1.5, 1.2}, c{0.7, -1.1, 0.25};
    std::vector<double> lo2(3), hi2(3);
    for (int i = 0; i < 3; ++i) {
        lo2[i] = lo[i] + c[i];
        hi2[i] = hi[i] + c[i];
    }
    const auto A = Region::box(lo, hi), Ac = Region::box(lo2, hi2);
    for (unsigned n = 0; n <= 4; ++n)
        for (const auto& beta : bwp::enumerate_order(3, n)) {
            double want = 0.0;
            for (const auto& g : bwp::sub_indices(beta))
                want += static_cast<double>(bwp::choose(beta, g)) * bwp::monomial(beta - g, c) * A.moment(g);
            CHECK(oracle::rel_err(Ac.moment(beta), want, 1e-14) <= 1e-10);
        }
}

TEST_CASE("hit-or-miss Monte Carlo moments") {
    const auto A = Region::disjoint_union({Region::ball({0.5, 0.0}, 0.5), Region::box({-1.0, -0.5}, {0.0, 0.5})});
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> ux(-1.0, 1.0), uy(-0.5, 0.5);
    const std::size_t n = 1'000'000;
    const double box_area = 2.0;
    std::vector<MultiIndex> betas;
    for (unsigned k = 0; k <= 3; ++k)
        for (const auto& b : bwp::enumerate_order(2, k)) betas.push_back(b);
    std::vector<double> s(betas.size()), s2(betas.size());
    for (std::size_t i = 0; i < n; ++i) {
        const double p[] = {ux(rng), uy(rng)};
        if (!A.contains(p)) continue;
        for (std::size_t j = 0; j < betas.size(); ++j) {
            const double v = bwp::monomial(betas[j], p) * box_area;
            s[j] += v;
            s2[j] += v * v;
        }
    }
    for (std::size_t j = 0; j < betas.size(); ++j) {
        const double mean = s[j] / n;
        const double se = std::sqrt((s2[j] / n - mean * mean) / (n - 1));
        CHECK(std::fabs(A.moment(betas[j]) - mean) <= 4.0 * se + 1e-12);
    }
}

TEST_CASE("odd moments of symmetric regions vanish") {
    const auto ball = Region::ball({0, 0, 0}, 1.3);
    const auto box = Region::box({-1, -2, -0.5}, {1, 2, 0.5});
    for (const auto& beta : std::vector<MultiIndex>{{1, 0, 0}, {3, 2, 0}, {2, 1, 2}, {1, 1, 1}}) {
        CHECK(ball.moment(beta) == 0.0);
        CHECK(std::fabs(box.moment(beta)) <= 1e-15);
    }
}

TEST_CASE("unions") {
    const auto a = Region::box({0, 0}, {1, 1});
    const auto b = Region::box({1, 0}, {2, 1});
    const auto c = Region::ball({5, 5}, 1.0);
    const auto u = Region::disjoint_union({a, Region::disjoint_union({b, c})});
    CHECK(u.pieces().size() == 3);
    CHECK(u.volume() == doctest::Approx(2.0 + std::numbers::pi));
    CHECK(u.moment({1, 0}) == doctest::Approx(a.moment({1, 0}) + b.moment({1, 0}) + c.moment({1, 0})));
    CHECK_THROWS_AS(Region::disjoint_union({a, Region::box({0.5, 0.5}, {1.5, 1.5})}), bwp::ValidationError);
    CHECK_THROWS_AS(Region::disjoint_union({Region::ball({0, 0}, 1.0), Region::ball({1.5, 0}, 1.0)}),
                    bwp::ValidationError);
    // A ball touching the corner region of a box but not the box itself.
    CHECK_NOTHROW(Region::disjoint_union({a, Region::ball({1.8, 1.8}, 1.0)}));
    CHECK(a.intersects(Region::box({0.9, 0.9}, {3, 3})));
    CHECK_FALSE(a.intersects(b));
}

TEST_CASE("validation") {
    CHECK_THROWS_AS(Region::box({0, 1}, {1, 1}), bwp::ValidationError);
    CHECK_THROWS_AS(Region::box({0}, {1, 2}), bwp::ValidationError);
    CHECK_THROWS_AS(Region::ball({0}, 0.0), bwp::ValidationError);
    CHECK_THROWS_AS(Region::ball({0}, INFINITY), bwp::ValidationError);
}

TEST_CASE("JSON round trip and hash") {
    const auto u = Region::disjoint_union({Region::box({0, 0}, {1, 1}), Region::ball({3, 0}, 0.5)});
    const auto j = u.to_json();
    CHECK(j["type"] == "union");
    const auto back = Region::from_json(j);
    CHECK(back.to_json() == j);
    CHECK(back.hash() == u.hash());
    CHECK(Region::from_json(nlohmann::json::parse(R"({"type":"box","lower":[0],"upper":[2]})")).volume() == 2.0);
    CHECK(Region::from_json(nlohmann::json::parse(R"({"type":"ball","center":[0,0],"radius":1})")).volume() ==
          doctest::Approx(std::numbers::pi));
    CHECK_THROWS_AS(Region::from_json(nlohmann::json::parse(R"({"type":"cone"})")), bwp::ValidationError);
    CHECK(Region::box({0}, {1}).hash() != Region::box({0}, {2}).hash());
}
