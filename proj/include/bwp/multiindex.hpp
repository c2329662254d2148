#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace bwp {

/// Element of Z_+^d. Indexes Hermite products H_alpha, moments M_beta and the
/// martingales V_alpha. Dimension is fixed at construction and never zero.
class MultiIndex {
public:
    /// The zero index in dimension `dim`.
    explicit MultiIndex(std::size_t dim);
    MultiIndex(std::initializer_list<unsigned> components);
    explicit MultiIndex(std::vector<unsigned> components);

    std::size_t dim() const noexcept { return c_.size(); }
    unsigned operator[](std::size_t i) const { return c_[i]; }
    unsigned& operator[](std::size_t i) { return c_[i]; }
    std::span<const unsigned> components() const noexcept { return c_; }

    bool is_zero() const noexcept;

    /// Unit vector e_i in dimension `dim`.
    static MultiIndex unit(std::size_t dim, std::size_t i);

    /// Bracketed text form, e.g. "[2,0,1]".
    std::string to_string() const;
    static MultiIndex parse(std::string_view text);

    friend bool operator==(const MultiIndex&, const MultiIndex&) = default;
    friend auto operator<=>(const MultiIndex&, const MultiIndex&) = default;

private:
    std::vector<unsigned> c_;
};

struct MultiIndexHash {
    std::size_t operator()(const MultiIndex& a) const noexcept;
};

/// Largest order for which factorial/choose are guaranteed exact.
inline constexpr unsigned kMaxExactOrder = 20;

/// |alpha| = sum of components.
unsigned order(const MultiIndex& alpha) noexcept;

/// alpha! = prod alpha_i!. Throws NumericError if the value does not fit in
/// 64 bits (never happens for |alpha| <= 20).
std::uint64_t factorial(const MultiIndex& alpha);

/// alpha! in double precision, accepting components up to 170; exact while
/// alpha! < 2^53.
double factorial_real(const MultiIndex& alpha);

/// beta <= alpha componentwise (same dimension required).
bool precedes(const MultiIndex& beta, const MultiIndex& alpha);

/// prod_i C(alpha_i, beta_i). Throws ValidationError unless beta <= alpha.
std::uint64_t choose(const MultiIndex& alpha, const MultiIndex& beta);

/// Componentwise alpha - beta; requires beta <= alpha.
MultiIndex operator-(const MultiIndex& alpha, const MultiIndex& beta);
MultiIndex operator+(const MultiIndex& alpha, const MultiIndex& beta);
/// Componentwise scaling, e.g. 2*alpha.
MultiIndex operator*(unsigned factor, const MultiIndex& alpha);

/// All alpha in Z_+^d with |alpha| = n, in lexicographically descending order
/// of the component vector: d=2, n=2 gives (2,0),(1,1),(0,2).
std::vector<MultiIndex> enumerate_order(std::size_t d, unsigned n);

/// All beta <= alpha, in lexicographically ascending order (last component
/// varies fastest): (1,1) gives (0,0),(0,1),(1,0),(1,1).
std::vector<MultiIndex> sub_indices(const MultiIndex& alpha);

/// x^alpha = prod x_i^alpha_i with 0^0 = 1.
double monomial(const MultiIndex& alpha, std::span<const double> x);

/// Exact binomial coefficient C(n, k) for n <= 62 or whenever it fits; throws
/// NumericError on overflow.
std::uint64_t binomial(unsigned n, unsigned k);

}  // namespace bwp
