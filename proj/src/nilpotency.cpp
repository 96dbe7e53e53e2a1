#include <cmath>
#include <deque>

#include "jsr/jsr_bounds.hpp"

namespace jsr {

namespace {

// Decisions with relative residual in (rank_tol, kBand * rank_tol) are
// reported as indeterminate rather than guessed.
constexpr double kBand = 1e3;

// Orthonormal basis of a subspace of C^{d*d}, matrices stored vectorized.
class Span {
public:
    explicit Span(double rank_tol) : tol_(rank_tol) {}

    /// Adds `m` if it is independent of the current span; returns whether it
    /// was added. Candidates are compared by relative residual, with the
    /// absolute floor `zero_floor` below which `m` counts as zero.
    bool add(const Matrix& m, double zero_floor)
    {
        Eigen::VectorXcd v = m.reshaped();
        const double size = v.norm();
        if (size <= zero_floor * tol_)
            return false;
        if (size < zero_floor * tol_ * kBand)
            throw Error(ErrorCode::Indeterminate,
                        "product norm " + std::to_string(size) +
                            " lies inside the rank tolerance band; rescale the input");
        v /= size;
        // Classical Gram-Schmidt, applied twice.
        for (int pass = 0; pass < 2; ++pass)
            for (const auto& b : basis_)
                v -= b.dot(v) * b;
        const double residual = v.norm();
        if (residual <= tol_)
            return false;
        if (residual < tol_ * kBand)
            throw Error(ErrorCode::Indeterminate,
                        "rank decision residual " + std::to_string(residual) +
                            " lies inside the tolerance band; rescale the input");
        basis_.push_back(v / residual);
        return true;
    }

    std::size_t size() const { return basis_.size(); }
    Matrix element(std::size_t i, Eigen::Index d) const { return basis_[i].reshaped(d, d); }

private:
    double tol_;
    std::vector<Eigen::VectorXcd> basis_;
};

} // namespace

NilpotencyResult nilpotency_test(const MatrixSet& s, const Tolerances& tol)
{
    const auto d = static_cast<Eigen::Index>(s.dim());

    // Generators are rescaled to unit Frobenius norm: the generated algebra
    // is unchanged, and every product of basis elements has norm <= 1.
    std::vector<Matrix> gens;
    for (const auto& m : s.members()) {
        const double f = m.norm();
        if (f > 0.0)
            gens.push_back(m / f);
    }

    Span algebra(tol.rank);
    std::deque<Matrix> queue(gens.begin(), gens.end());
    while (!queue.empty()) {
        Matrix c = std::move(queue.front());
        queue.pop_front();
        // Candidates are generators or generator * unit-norm basis element.
        if (!algebra.add(c, 1.0))
            continue;
        const Matrix b = algebra.element(algebra.size() - 1, d);
        for (const auto& g : gens)
            queue.push_back(g * b);
    }

    NilpotencyResult out;
    out.algebra_dim = static_cast<int>(algebra.size());
    if (algebra.size() == 0) {
        out.is_nilpotent = true;
        return out;
    }

    // W_1 = A, W_{k+1} = span(A W_k); nilpotent iff W_d = 0.
    std::vector<Matrix> basis;
    for (std::size_t i = 0; i < algebra.size(); ++i)
        basis.push_back(algebra.element(i, d));
    std::vector<Matrix> layer = basis;
    for (Eigen::Index k = 1; k < d && !layer.empty(); ++k) {
        Span next(tol.rank);
        std::vector<Matrix> next_layer;
        for (const auto& a : basis)
            for (const auto& w : layer)
                if (next.add(a * w, 1.0))
                    next_layer.push_back(next.element(next.size() - 1, d));
        layer = std::move(next_layer);
    }
    out.is_nilpotent = layer.empty();
    return out;
}

} // namespace jsr
