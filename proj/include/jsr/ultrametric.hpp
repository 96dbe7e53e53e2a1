#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <boost/multiprecision/gmp.hpp>

#include "jsr/matrix_core.hpp"

/// Exact joint spectral radius over Q with a p-adic absolute value.
///
/// Magnitudes are carried as exponents e of p^(-e); nothing in this
/// namespace touches floating point.
namespace jsr::padic {

using BigInt = boost::multiprecision::mpz_int;
using BigRational = boost::multiprecision::mpq_rational;

/// Parses "a/b" or "a" (base 10, optional sign). Throws ParseError.
BigRational parse_rational(std::string_view text);
std::string format_rational(const BigRational& q);

bool is_prime(std::uint64_t n);

/// v_p(q); nullopt stands for the valuation of zero.
std::optional<long> valuation(const BigInt& z, std::uint64_t p);
std::optional<long> padic_valuation(const BigRational& q, std::uint64_t p);

/// |.| = p^(-exponent), or zero (bottom).
class PAdicMagnitude {
public:
    static PAdicMagnitude bottom() { return PAdicMagnitude(); }
    static PAdicMagnitude from_exponent(BigRational e) { return PAdicMagnitude(std::move(e)); }
    static PAdicMagnitude one() { return from_exponent(0); }

    bool is_bottom() const noexcept { return !exponent_.has_value(); }
    /// Precondition: !is_bottom().
    const BigRational& exponent() const { return *exponent_; }

    PAdicMagnitude operator*(const PAdicMagnitude& o) const;
    PAdicMagnitude pow(long k) const;
    /// k-th root (exponent / k).
    PAdicMagnitude root(long k) const;

    /// Orders by size of the magnitude: bottom is smallest, and a larger
    /// exponent means a smaller magnitude.
    std::strong_ordering operator<=>(const PAdicMagnitude& o) const;
    bool operator==(const PAdicMagnitude& o) const;

    std::string to_string() const;

private:
    PAdicMagnitude() = default;
    explicit PAdicMagnitude(BigRational e) : exponent_(std::move(e)) {}

    std::optional<BigRational> exponent_;
};

class RationalMatrix {
public:
    RationalMatrix() = default;
    explicit RationalMatrix(std::size_t d) : dim_(d), data_(d * d) {}
    static RationalMatrix identity(std::size_t d);

    std::size_t dim() const noexcept { return dim_; }
    BigRational& operator()(std::size_t i, std::size_t j) { return data_[i * dim_ + j]; }
    const BigRational& operator()(std::size_t i, std::size_t j) const { return data_[i * dim_ + j]; }
    const std::vector<BigRational>& entries() const noexcept { return data_; }

    RationalMatrix operator*(const RationalMatrix& o) const;
    bool is_zero() const;
    friend bool operator==(const RationalMatrix&, const RationalMatrix&) = default;

private:
    std::size_t dim_ = 0;
    std::vector<BigRational> data_;
};

class PAdicMatrixSet {
public:
    /// Throws InvalidArgument for an empty set, mismatched shapes or a
    /// non-prime p.
    PAdicMatrixSet(std::vector<RationalMatrix> members, std::uint64_t prime,
                   const Limits& limits = {});

    std::size_t dim() const noexcept { return dim_; }
    std::uint64_t prime() const noexcept { return prime_; }
    std::size_t size() const noexcept { return members_.size(); }
    const RationalMatrix& operator[](std::size_t i) const { return members_[i]; }
    const std::vector<RationalMatrix>& members() const noexcept { return members_; }

    /// The k-fold product set, ordered like MatrixSet::power.
    PAdicMatrixSet power(int k, const Limits& limits = {}) const;

private:
    std::size_t dim_ = 0;
    std::uint64_t prime_ = 2;
    std::vector<RationalMatrix> members_;
};

RationalMatrix evaluate(const PAdicMatrixSet& s, const Word& w);

/// Monic characteristic polynomial det(tI - A), coefficients a_0..a_d
/// (ascending, a_d = 1). Division-free Berkowitz on the integer matrix
/// obtained by clearing denominators.
std::vector<BigRational> char_poly_exact(const RationalMatrix& a);

struct NewtonPolygon {
    /// (i, v_p(a_i)) for nonzero coefficients.
    std::vector<std::pair<long, long>> points;
    /// Vertices of the lower convex hull, left to right.
    std::vector<std::pair<long, long>> lower_hull;
    /// Root valuations with multiplicities, one entry per hull segment,
    /// largest valuation first.
    std::vector<std::pair<BigRational, long>> root_valuations;
    /// Smallest root valuation; nullopt when every root is zero.
    std::optional<BigRational> min_root_valuation;
    /// Multiplicity of the root 0.
    long zero_roots = 0;
};

NewtonPolygon newton_polygon(const std::vector<BigRational>& coeffs, std::uint64_t p);

/// Largest |root|_p of a monic polynomial: p^(-m) with m the smallest
/// root valuation, or bottom for t^d.
PAdicMagnitude max_root_magnitude(const std::vector<BigRational>& coeffs, std::uint64_t p);

/// min(d^2, ceil(2 d log2 d) + 4d - 4) for d >= 2; 1 for d = 1.
int ell_bound(int d);

/// Entrywise max of |.|_p over all members.
PAdicMagnitude ultrametric_set_norm(const PAdicMatrixSet& s);

struct PAdicJsr {
    PAdicMagnitude rho = PAdicMagnitude::bottom();
    /// Shortlex-smallest word attaining rho (empty when rho is bottom).
    Word witness;
    int max_length = 0;
    std::uint64_t words = 0;
};

struct PAdicOptions {
    /// Overrides ell_bound(d) when set.
    std::optional<int> max_length;
    Limits limits{};
};

/// max_{1<=k<=L} Lambda(S^k)^(1/k) over all words, exactly.
PAdicJsr padic_lambda_max(const PAdicMatrixSet& s, int max_length, const Limits& limits = {});

/// The exact joint spectral radius: padic_lambda_max with L = ell_bound(d).
/// Throws BudgetExceeded if |S|^L words exceed the cap.
PAdicJsr padic_jsr_exact(const PAdicMatrixSet& s, const PAdicOptions& opt = {});

struct UltraBocaReport {
    /// max over words of length d of the entrywise magnitude.
    PAdicMagnitude lhs = PAdicMagnitude::bottom();
    PAdicMagnitude rho = PAdicMagnitude::bottom();
    PAdicMagnitude set_norm = PAdicMagnitude::bottom();
    /// rho * set_norm^(d-1).
    PAdicMagnitude rhs = PAdicMagnitude::bottom();
    bool holds = false;
    /// Word of length d attaining lhs.
    Word extremal;
    Word rho_witness;
};

/// |S^d|_0 <= rho(S) |S|_0^(d-1), both sides exact.
UltraBocaReport check_ultra_boca(const PAdicMatrixSet& s, const PAdicOptions& opt = {});

/// Exact algebra closure over Q followed by the d-fold product test.
bool padic_nilpotency_exact(const PAdicMatrixSet& s);

} // namespace jsr::padic
