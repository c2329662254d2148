#include "bwp/regions.hpp"

#include "bwp/errors.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

namespace bwp {

namespace {

void require_dim(std::size_t d, std::span<const double> x, const char* what) {
    if (x.size() != d)
        throw ValidationError(std::string(what) + ": dimension " + std::to_string(x.size()) +
                              " does not match region dimension " + std::to_string(d));
}

/// (u^{b+1} - l^{b+1}) / (b+1) without cancellation when l and u share a sign.
double interval_power_integral(double l, double u, unsigned b) {
    if (l >= 0.0 || u <= 0.0) {
        double s = 0.0;
        double up = 1.0;
        for (unsigned j = 0; j <= b; ++j) {
            double lp = 1.0;
            for (unsigned i = 0; i < b - j; ++i) lp *= l;
            s += up * lp;
            up *= u;
        }
        return (u - l) * s / static_cast<double>(b + 1);
    }
    return (std::pow(u, b + 1) - std::pow(l, b + 1)) / static_cast<double>(b + 1);
}

double box_moment(const Box& b, const MultiIndex& beta) {
    double m = 1.0;
    for (std::size_t i = 0; i < b.lower.size(); ++i)
        m *= interval_power_integral(b.lower[i], b.upper[i], beta[i]);
    return m;
}

double ball_moment(const Ball& b, const MultiIndex& beta) {
    const std::size_t d = b.center.size();
    const bool centered =
        std::all_of(b.center.begin(), b.center.end(), [](double c) { return c == 0.0; });
    if (centered) return centered_ball_moment(d, b.radius, beta);
    // x = c + u: x^beta = sum_{g <= beta} C(beta, g) c^{beta-g} u^g
    double m = 0.0;
    for (const auto& g : sub_indices(beta)) {
        const double inner = centered_ball_moment(d, b.radius, g);
        if (inner == 0.0) continue;
        m += static_cast<double>(choose(beta, g)) * monomial(beta - g, b.center) * inner;
    }
    return m;
}

double sq_distance_to_box(std::span<const double> c, const Box& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < c.size(); ++i) {
        const double q = std::clamp(c[i], b.lower[i], b.upper[i]);
        s += (c[i] - q) * (c[i] - q);
    }
    return s;
}

bool pieces_overlap(const RegionPiece& a, const RegionPiece& b) {
    if (const auto* ba = std::get_if<Box>(&a)) {
        if (const auto* bb = std::get_if<Box>(&b)) {
            for (std::size_t i = 0; i < ba->lower.size(); ++i)
                if (!(std::max(ba->lower[i], bb->lower[i]) < std::min(ba->upper[i], bb->upper[i])))
                    return false;
            return true;
        }
        const auto& ball = std::get<Ball>(b);
        return sq_distance_to_box(ball.center, *ba) < ball.radius * ball.radius;
    }
    const auto& ball = std::get<Ball>(a);
    if (const auto* bb = std::get_if<Box>(&b))
        return sq_distance_to_box(ball.center, *bb) < ball.radius * ball.radius;
    const auto& other = std::get<Ball>(b);
    double s = 0.0;
    for (std::size_t i = 0; i < ball.center.size(); ++i)
        s += (ball.center[i] - other.center[i]) * (ball.center[i] - other.center[i]);
    const double r = ball.radius + other.radius;
    return s < r * r;
}

std::vector<double> json_vector(const nlohmann::json& j, const char* key) {
    if (!j.contains(key) || !j[key].is_array())
        throw ValidationError(std::string("region JSON missing array '") + key + "'");
    std::vector<double> v;
    for (const auto& e : j[key]) {
        if (!e.is_number()) throw ValidationError(std::string("region JSON '") + key + "' must be numeric");
        v.push_back(e.get<double>());
    }
    return v;
}

}  // namespace

double centered_ball_moment(std::size_t d, double radius, const MultiIndex& beta) {
    for (unsigned b : beta.components())
        if (b % 2 != 0) return 0.0;
    // surface integral of u^beta over the unit sphere:
    //   2 prod Gamma((beta_i+1)/2) / Gamma((|beta|+d)/2)
    const double total = static_cast<double>(order(beta) + d);
    double log_sphere = std::log(2.0) - std::lgamma(0.5 * total);
    for (unsigned b : beta.components()) log_sphere += std::lgamma(0.5 * (b + 1.0));
    return std::exp(log_sphere) * std::pow(radius, total) / total;
}

Region::Region(std::size_t dim, std::vector<RegionPiece> pieces)
    : dim_(dim), pieces_(std::move(pieces)), hash_(std::hash<std::string>{}(to_json().dump())) {}

Region Region::box(std::vector<double> lower, std::vector<double> upper) {
    if (lower.empty() || lower.size() != upper.size())
        throw ValidationError("box needs non-empty lower/upper of equal length");
    for (std::size_t i = 0; i < lower.size(); ++i)
        if (!(lower[i] < upper[i]) || !std::isfinite(lower[i]) || !std::isfinite(upper[i]))
            throw ValidationError("box requires finite lower_i < upper_i in every coordinate");
    const std::size_t d = lower.size();
    return Region(d, {Box{std::move(lower), std::move(upper)}});
}

Region Region::ball(std::vector<double> center, double radius) {
    if (center.empty()) throw ValidationError("ball needs a non-empty center");
    if (!(radius > 0.0) || !std::isfinite(radius)) throw ValidationError("ball radius must be > 0");
    for (double c : center)
        if (!std::isfinite(c)) throw ValidationError("ball center must be finite");
    const std::size_t d = center.size();
    return Region(d, {Ball{std::move(center), radius}});
}

Region Region::disjoint_union(const std::vector<Region>& members) {
    if (members.empty()) throw ValidationError("union needs at least one member");
    const std::size_t d = members.front().dim();
    std::vector<RegionPiece> pieces;
    for (const auto& m : members) {
        if (m.dim() != d) throw ValidationError("union members must share one dimension");
        pieces.insert(pieces.end(), m.pieces_.begin(), m.pieces_.end());
    }
    for (std::size_t i = 0; i < pieces.size(); ++i)
        for (std::size_t j = i + 1; j < pieces.size(); ++j)
            if (pieces_overlap(pieces[i], pieces[j]))
                throw ValidationError("union members " + std::to_string(i) + " and " +
                                      std::to_string(j) + " overlap");
    return Region(d, std::move(pieces));
}

bool Region::contains(std::span<const double> x) const {
    require_dim(dim_, x, "contains");
    for (const auto& p : pieces_) {
        if (const auto* b = std::get_if<Box>(&p)) {
            bool in = true;
            for (std::size_t i = 0; i < dim_ && in; ++i) in = b->lower[i] <= x[i] && x[i] < b->upper[i];
            if (in) return true;
        } else {
            const auto& ball = std::get<Ball>(p);
            double s = 0.0;
            for (std::size_t i = 0; i < dim_; ++i) s += (x[i] - ball.center[i]) * (x[i] - ball.center[i]);
            if (s <= ball.radius * ball.radius) return true;
        }
    }
    return false;
}

double Region::moment(const MultiIndex& beta) const {
    if (beta.dim() != dim_)
        throw ValidationError("moment: index dimension does not match region dimension");
    if (order(beta) > kMaxMomentOrder)
        throw ValidationError("moment order " + std::to_string(order(beta)) + " above cap " +
                              std::to_string(kMaxMomentOrder));
    double m = 0.0;
    for (const auto& p : pieces_) {
        if (const auto* b = std::get_if<Box>(&p))
            m += box_moment(*b, beta);
        else
            m += ball_moment(std::get<Ball>(p), beta);
    }
    return m;
}

double Region::volume() const { return moment(MultiIndex(dim_)); }

Box Region::bounds() const {
    Box out{std::vector<double>(dim_, INFINITY), std::vector<double>(dim_, -INFINITY)};
    for (const auto& p : pieces_) {
        for (std::size_t i = 0; i < dim_; ++i) {
            double lo, hi;
            if (const auto* b = std::get_if<Box>(&p)) {
                lo = b->lower[i];
                hi = b->upper[i];
            } else {
                const auto& ball = std::get<Ball>(p);
                lo = ball.center[i] - ball.radius;
                hi = ball.center[i] + ball.radius;
            }
            out.lower[i] = std::min(out.lower[i], lo);
            out.upper[i] = std::max(out.upper[i], hi);
        }
    }
    return out;
}

bool Region::intersects(const Region& other) const {
    if (other.dim_ != dim_) throw ValidationError("intersects: dimension mismatch");
    for (const auto& a : pieces_)
        for (const auto& b : other.pieces_)
            if (pieces_overlap(a, b)) return true;
    return false;
}

nlohmann::json Region::to_json() const {
    auto piece_json = [](const RegionPiece& p) {
        if (const auto* b = std::get_if<Box>(&p))
            return nlohmann::json{{"type", "box"}, {"lower", b->lower}, {"upper", b->upper}};
        const auto& ball = std::get<Ball>(p);
        return nlohmann::json{{"type", "ball"}, {"center", ball.center}, {"radius", ball.radius}};
    };
    if (pieces_.size() == 1) return piece_json(pieces_.front());
    nlohmann::json members = nlohmann::json::array();
    for (const auto& p : pieces_) members.push_back(piece_json(p));
    return {{"type", "union"}, {"members", members}};
}

Region Region::from_json(const nlohmann::json& j) {
    if (!j.is_object() || !j.contains("type") || !j["type"].is_string())
        throw ValidationError("region JSON must be an object with a string 'type'");
    const auto type = j["type"].get<std::string>();
    if (type == "box") return box(json_vector(j, "lower"), json_vector(j, "upper"));
    if (type == "ball") {
        if (!j.contains("radius") || !j["radius"].is_number())
            throw ValidationError("ball JSON needs numeric 'radius'");
        return ball(json_vector(j, "center"), j["radius"].get<double>());
    }
    if (type == "union") {
        if (!j.contains("members") || !j["members"].is_array())
            throw ValidationError("union JSON needs array 'members'");
        std::vector<Region> members;
        for (const auto& m : j["members"]) members.push_back(from_json(m));
        return disjoint_union(members);
    }
    throw ValidationError("unknown region type '" + type + "'");
}

}  // namespace bwp
