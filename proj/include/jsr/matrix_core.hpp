#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "jsr/config.hpp"
#include "jsr/error.hpp"

namespace jsr {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

/// Throws InvalidArgument unless `m` is square, non-empty, within the
/// dimension cap and has only finite entries.
void validate_matrix(const Matrix& m, const Limits& limits = {});

/// A finite, ordered, nonempty family of d x d complex matrices.
///
/// Order only matters for naming products through words. Duplicate members
/// are accepted (they do not change the joint spectral radius) but are
/// recorded in `warnings()`.
class MatrixSet {
public:
    explicit MatrixSet(std::vector<Matrix> members, const Limits& limits = {});

    std::size_t dim() const noexcept { return dim_; }
    std::size_t size() const noexcept { return members_.size(); }
    const Matrix& operator[](std::size_t i) const { return members_[i]; }
    const std::vector<Matrix>& members() const noexcept { return members_; }
    const std::vector<std::string>& warnings() const noexcept { return warnings_; }

    /// Returns {c * s : s in S}.
    MatrixSet scaled(double c) const;
    /// Returns {g s g^-1 : s in S}.
    MatrixSet conjugated(const Matrix& g) const;
    /// Returns the k-fold product set S^k, members ordered by word index
    /// (first letter varies slowest).
    MatrixSet power(int k, const Limits& limits = {}) const;

private:
    std::size_t dim_ = 0;
    std::vector<Matrix> members_;
    std::vector<std::string> warnings_;
};

/// Indices into a MatrixSet. The first index is applied first:
/// eval((i1, ..., ik)) = S[ik] * ... * S[i1].
struct Word {
    std::vector<int> indices;

    std::size_t length() const noexcept { return indices.size(); }
    bool empty() const noexcept { return indices.empty(); }
    std::string to_string() const;

    friend bool operator==(const Word&, const Word&) = default;
};

/// Shortest first, then lexicographic on indices.
bool shortlex_less(const Word& a, const Word& b);

Matrix evaluate(const MatrixSet& s, const Word& w);

enum class NormKind { Spectral, MaxRowSum, MaxColSum, Ellipsoidal };

/// Vector norm together with its induced operator norm.
///
/// Polytope (Barabanov-type) norms live in jsr_bounds.hpp since they are
/// built from a matrix set.
class NormSpec {
public:
    NormSpec() = default;
    static NormSpec spectral() { return NormSpec(NormKind::Spectral); }
    static NormSpec max_row_sum() { return NormSpec(NormKind::MaxRowSum); }
    static NormSpec max_col_sum() { return NormSpec(NormKind::MaxColSum); }
    /// Norm x -> |g x|_2. Throws InvalidArgument if g is singular or its
    /// condition number exceeds `tol.max_condition`.
    static NormSpec ellipsoidal(const Matrix& g, const Tolerances& tol = {});

    NormKind kind() const noexcept { return kind_; }
    const Matrix& g() const noexcept { return g_; }
    const Matrix& g_inverse() const noexcept { return g_inv_; }
    std::string name() const;

private:
    explicit NormSpec(NormKind kind) : kind_(kind) {}

    NormKind kind_ = NormKind::Spectral;
    Matrix g_;
    Matrix g_inv_;
};

/// Largest eigenvalue modulus. Throws NumericalFailure if the eigensolver
/// does not converge.
double spectral_radius(const Matrix& a);

/// Largest singular value.
double spectral_norm(const Matrix& a);

double operator_norm(const Matrix& a, const NormSpec& n);
double vector_norm(const Vector& x, const NormSpec& n);
double set_norm(const MatrixSet& s, const NormSpec& n);

/// Number of words of length 1..depth over an alphabet of `letters`,
/// saturating at UINT64_MAX.
std::uint64_t word_count(std::size_t letters, int depth);

/// Largest depth whose full word tree fits in `cap` (0 if even depth 1
/// does not fit).
int max_depth_within(std::size_t letters, std::uint64_t cap);

/// One node of the product tree.
struct ProductNode {
    const std::vector<int>& indices;
    const Matrix& product;
    /// Norm of `product` under the enumeration's NormSpec.
    double norm;
};

/// Visitor result: whether to descend below the visited node.
enum class Descend { Yes, No };

struct EnumerationOptions {
    int depth = 1;
    /// Words whose prefix-product norm is <= threshold are dropped together
    /// with their extensions. Zero (or absent) means exhaustive.
    std::optional<double> prune_threshold;
    NormSpec norm = NormSpec::spectral();
    /// Restricts the walk to words starting with this letter.
    std::optional<int> first_letter;
    Limits limits{};
};

/// Depth-first (lexicographic preorder) walk of all words of length
/// 1..depth. Throws BudgetExceeded if the full tree is larger
/// than the enumeration cap.
void for_each_product(const MatrixSet& s, const EnumerationOptions& opt,
                      const std::function<Descend(const ProductNode&)>& visit);

struct ProductEntry {
    Word word;
    Matrix product;
};

/// Materialized form of for_each_product.
std::vector<ProductEntry> enumerate_products(const MatrixSet& s, const EnumerationOptions& opt);

} // namespace jsr
