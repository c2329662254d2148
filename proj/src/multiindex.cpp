#include "bwp/multiindex.hpp"

#include "bwp/errors.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <functional>

namespace bwp {

namespace {

std::uint64_t checked_mul(std::uint64_t a, std::uint64_t b) {
    std::uint64_t out = 0;
    if (__builtin_mul_overflow(a, b, &out))
        throw NumericError("exact multi-index arithmetic overflowed 64 bits");
    return out;
}

std::uint64_t factorial_u(unsigned n) {
    std::uint64_t f = 1;
    for (unsigned i = 2; i <= n; ++i) f = checked_mul(f, i);
    return f;
}

void require_same_dim(const MultiIndex& a, const MultiIndex& b) {
    if (a.dim() != b.dim())
        throw ValidationError("multi-index dimension mismatch: " + a.to_string() + " vs " +
                              b.to_string());
}

}  // namespace

MultiIndex::MultiIndex(std::size_t dim) : c_(dim, 0u) {
    if (dim == 0) throw ValidationError("multi-index dimension must be >= 1");
}

MultiIndex::MultiIndex(std::initializer_list<unsigned> components) : c_(components) {
    if (c_.empty()) throw ValidationError("multi-index dimension must be >= 1");
}

MultiIndex::MultiIndex(std::vector<unsigned> components) : c_(std::move(components)) {
    if (c_.empty()) throw ValidationError("multi-index dimension must be >= 1");
}

bool MultiIndex::is_zero() const noexcept {
    return std::all_of(c_.begin(), c_.end(), [](unsigned v) { return v == 0; });
}

MultiIndex MultiIndex::unit(std::size_t dim, std::size_t i) {
    MultiIndex e(dim);
    e.c_.at(i) = 1;
    return e;
}

std::string MultiIndex::to_string() const {
    std::string s = "[";
    for (std::size_t i = 0; i < c_.size(); ++i) {
        if (i) s += ',';
        s += std::to_string(c_[i]);
    }
    s += ']';
    return s;
}

MultiIndex MultiIndex::parse(std::string_view text) {
    std::vector<unsigned> out;
    std::size_t i = 0;
    auto skip_ws = [&] {
        while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
    };
    skip_ws();
    if (i >= text.size() || text[i] != '[') throw ValidationError("multi-index must start with '['");
    ++i;
    skip_ws();
    while (i < text.size() && text[i] != ']') {
        if (!std::isdigit(static_cast<unsigned char>(text[i])))
            throw ValidationError("multi-index component must be a non-negative integer");
        unsigned long v = 0;
        while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) {
            v = v * 10 + static_cast<unsigned long>(text[i] - '0');
            if (v > 1'000'000) throw ValidationError("multi-index component too large");
            ++i;
        }
        out.push_back(static_cast<unsigned>(v));
        skip_ws();
        if (i < text.size() && text[i] == ',') {
            ++i;
            skip_ws();
        }
    }
    if (i >= text.size()) throw ValidationError("multi-index missing closing ']'");
    return MultiIndex(std::move(out));
}

std::size_t MultiIndexHash::operator()(const MultiIndex& a) const noexcept {
    std::size_t h = a.dim();
    for (unsigned v : a.components()) h = h * 1000003u ^ std::hash<unsigned>{}(v);
    return h;
}

unsigned order(const MultiIndex& alpha) noexcept {
    unsigned n = 0;
    for (unsigned v : alpha.components()) n += v;
    return n;
}

std::uint64_t factorial(const MultiIndex& alpha) {
    std::uint64_t f = 1;
    for (unsigned v : alpha.components()) f = checked_mul(f, factorial_u(v));
    return f;
}

double factorial_real(const MultiIndex& alpha) {
    double f = 1.0;
    for (unsigned v : alpha.components()) {
        if (v > 170) throw NumericError("factorial_real: component " + std::to_string(v) + " overflows");
        for (unsigned i = 2; i <= v; ++i) f *= i;
    }
    return f;
}

bool precedes(const MultiIndex& beta, const MultiIndex& alpha) {
    require_same_dim(alpha, beta);
    for (std::size_t i = 0; i < alpha.dim(); ++i)
        if (beta[i] > alpha[i]) return false;
    return true;
}

std::uint64_t binomial(unsigned n, unsigned k) {
    if (k > n) return 0;
    k = std::min(k, n - k);
    // Multiplicative formula; each partial product is itself a binomial
    // coefficient so the division is exact. 128-bit intermediate avoids
    // spurious overflow in the numerator.
    unsigned __int128 r = 1;
    for (unsigned i = 1; i <= k; ++i) {
        r = r * (n - k + i) / i;
        if (r > static_cast<unsigned __int128>(UINT64_MAX))
            throw NumericError("binomial coefficient overflowed 64 bits");
    }
    return static_cast<std::uint64_t>(r);
}

std::uint64_t choose(const MultiIndex& alpha, const MultiIndex& beta) {
    if (!precedes(beta, alpha))
        throw ValidationError("choose(alpha, beta) requires beta <= alpha: alpha=" +
                              alpha.to_string() + " beta=" + beta.to_string());
    std::uint64_t c = 1;
    for (std::size_t i = 0; i < alpha.dim(); ++i) c = checked_mul(c, binomial(alpha[i], beta[i]));
    return c;
}

MultiIndex operator-(const MultiIndex& alpha, const MultiIndex& beta) {
    if (!precedes(beta, alpha))
        throw ValidationError("multi-index subtraction requires beta <= alpha");
    MultiIndex out(alpha.dim());
    for (std::size_t i = 0; i < alpha.dim(); ++i) out[i] = alpha[i] - beta[i];
    return out;
}

MultiIndex operator+(const MultiIndex& alpha, const MultiIndex& beta) {
    require_same_dim(alpha, beta);
    MultiIndex out(alpha.dim());
    for (std::size_t i = 0; i < alpha.dim(); ++i) out[i] = alpha[i] + beta[i];
    return out;
}

MultiIndex operator*(unsigned factor, const MultiIndex& alpha) {
    MultiIndex out(alpha.dim());
    for (std::size_t i = 0; i < alpha.dim(); ++i) out[i] = factor * alpha[i];
    return out;
}

std::vector<MultiIndex> enumerate_order(std::size_t d, unsigned n) {
    if (d == 0) throw ValidationError("enumerate_order requires d >= 1");
    std::vector<MultiIndex> out;
    MultiIndex cur(d);
    // Depth-first over the first component from n down to 0 yields
    // lexicographically descending order.
    std::function<void(std::size_t, unsigned)> rec = [&](std::size_t pos, unsigned remaining) {
        if (pos + 1 == d) {
            cur[pos] = remaining;
            out.push_back(cur);
            return;
        }
        for (unsigned v = remaining + 1; v-- > 0;) {
            cur[pos] = v;
            rec(pos + 1, remaining - v);
        }
    };
    rec(0, n);
    return out;
}

std::vector<MultiIndex> sub_indices(const MultiIndex& alpha) {
    std::vector<MultiIndex> out;
    MultiIndex cur(alpha.dim());
    const std::size_t d = alpha.dim();
    while (true) {
        out.push_back(cur);
        std::size_t i = d;
        while (i-- > 0) {
            if (cur[i] < alpha[i]) {
                ++cur[i];
                break;
            }
            cur[i] = 0;
            if (i == 0) return out;
        }
    }
}

double monomial(const MultiIndex& alpha, std::span<const double> x) {
    if (x.size() != alpha.dim()) throw ValidationError("monomial: dimension mismatch");
    double p = 1.0;
    for (std::size_t i = 0; i < x.size(); ++i)
        for (unsigned j = 0; j < alpha[i]; ++j) p *= x[i];
    return p;
}

}  // namespace bwp
