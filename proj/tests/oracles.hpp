#pragma once

// Reference implementations used only by tests. They take deliberately
// different routes from the library: real-embedding eigenvalues, SVD for
// norms, breadth-first brute-force word lists, determinant interpolation
// for characteristic polynomials.

#include <cmath>
#include <random>
#include <vector>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "jsr/matrix_core.hpp"
#include "jsr/ultrametric.hpp"

namespace oracle {

using jsr::Complex;
using jsr::Matrix;
using jsr::Vector;
using jsr::padic::BigInt;
using jsr::padic::BigRational;

// The real 2d x 2d embedding has spectrum {lambda_i} U {conj(lambda_i)}.
inline double spectral_radius(const Matrix& a)
{
    const Eigen::Index d = a.rows();
    Eigen::MatrixXd r(2 * d, 2 * d);
    r << a.real(), -a.imag(), a.imag(), a.real();
    Eigen::EigenSolver<Eigen::MatrixXd> es(r, false);
    return es.eigenvalues().cwiseAbs().maxCoeff();
}

inline double spectral_norm(const Matrix& a)
{
    Eigen::JacobiSVD<Matrix> svd(a);
    return svd.singularValues()(0);
}

inline double row_sum_norm(const Matrix& a)
{
    double best = 0.0;
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        double s = 0.0;
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            s += std::abs(a(i, j));
        best = std::max(best, s);
    }
    return best;
}

inline double col_sum_norm(const Matrix& a)
{
    return row_sum_norm(a.transpose());
}

// All words of length exactly k, in lexicographic order.
inline std::vector<std::vector<int>> words_of_length(int letters, int k)
{
    std::vector<std::vector<int>> out{{}};
    for (int step = 0; step < k; ++step) {
        std::vector<std::vector<int>> next;
        for (const auto& w : out)
            for (int i = 0; i < letters; ++i) {
                auto v = w;
                v.push_back(i);
                next.push_back(std::move(v));
            }
        out = std::move(next);
    }
    return out;
}

// eval(w) = S[w_k] ... S[w_1].
inline Matrix eval(const std::vector<Matrix>& s, const std::vector<int>& w)
{
    const Eigen::Index d = s.front().rows();
    Matrix m = Matrix::Identity(d, d);
    for (int i : w)
        m = s[i] * m;
    return m;
}

struct LowerOracle {
    double value = 0.0;
    std::vector<int> witness;
};

// Brute-force max of Lambda(w)^(1/|w|); ties within rel are broken by
// shortest and then lexicographically smallest word (shorter words are
// visited first, and lexicographically within a length).
inline LowerOracle lower(const std::vector<Matrix>& s, int depth, double rel = 1e-9)
{
    LowerOracle best;
    bool have = false;
    for (int k = 1; k <= depth; ++k)
        for (const auto& w : words_of_length(static_cast<int>(s.size()), k)) {
            const double v = std::pow(spectral_radius(eval(s, w)), 1.0 / k);
            if (!have || v > best.value * (1.0 + rel) + 1e-300) {
                best = {v, w};
                have = true;
            }
        }
    return best;
}

template <class Norm>
double level_norm(const std::vector<Matrix>& s, int k, Norm norm)
{
    double m = 0.0;
    for (const auto& w : words_of_length(static_cast<int>(s.size()), k))
        m = std::max(m, norm(eval(s, w)));
    return m;
}

template <class Norm>
double upper(const std::vector<Matrix>& s, int depth, Norm norm)
{
    double best = INFINITY;
    for (int k = 1; k <= depth; ++k)
        best = std::min(best, std::pow(level_norm(s, k, norm), 1.0 / k));
    return best;
}

inline Matrix random_gaussian(std::size_t d, std::mt19937_64& rng, double scale = 1.0)
{
    std::normal_distribution<double> n(0.0, scale);
    Matrix m(d, d);
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j)
            m(i, j) = Complex(n(rng), n(rng));
    return m;
}

inline Matrix random_real_gaussian(std::size_t d, std::mt19937_64& rng)
{
    std::normal_distribution<double> n;
    Matrix m(d, d);
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j)
            m(i, j) = n(rng);
    return m;
}

// ---- exact side ----

using QMatrix = std::vector<std::vector<BigRational>>;

inline BigRational det_cofactor(const QMatrix& a)
{
    const std::size_t n = a.size();
    if (n == 1)
        return a[0][0];
    BigRational total = 0;
    for (std::size_t j = 0; j < n; ++j) {
        if (a[0][j] == 0)
            continue;
        QMatrix minor;
        for (std::size_t i = 1; i < n; ++i) {
            std::vector<BigRational> row;
            for (std::size_t c = 0; c < n; ++c)
                if (c != j)
                    row.push_back(a[i][c]);
            minor.push_back(std::move(row));
        }
        const BigRational term = a[0][j] * det_cofactor(minor);
        total += (j % 2 == 0) ? term : BigRational(-term);
    }
    return total;
}

// det(tI - A) ascending, by evaluating at t = 0..d and Lagrange
// interpolation over Q.
inline std::vector<BigRational> char_poly(const QMatrix& a)
{
    const std::size_t d = a.size();
    std::vector<BigRational> values;
    for (std::size_t t = 0; t <= d; ++t) {
        QMatrix m = a;
        for (std::size_t i = 0; i < d; ++i)
            for (std::size_t j = 0; j < d; ++j)
                m[i][j] = (i == j ? BigRational(static_cast<long>(t)) : BigRational(0)) - a[i][j];
        values.push_back(det_cofactor(m));
    }
    std::vector<BigRational> coeffs(d + 1);
    for (std::size_t i = 0; i <= d; ++i) {
        // Basis polynomial prod_{j != i} (t - j) / (i - j).
        std::vector<BigRational> basis{BigRational(1)};
        BigRational denom = 1;
        for (std::size_t j = 0; j <= d; ++j) {
            if (j == i)
                continue;
            std::vector<BigRational> next(basis.size() + 1);
            for (std::size_t k = 0; k < basis.size(); ++k) {
                next[k + 1] += basis[k];
                next[k] -= basis[k] * static_cast<long>(j);
            }
            basis = std::move(next);
            denom *= static_cast<long>(i) - static_cast<long>(j);
        }
        for (std::size_t k = 0; k <= d; ++k)
            coeffs[k] += values[i] * basis[k] / denom;
    }
    return coeffs;
}

inline long valuation_by_division(BigInt z, long p)
{
    long v = 0;
    while (z % p == 0) {
        z /= p;
        ++v;
    }
    return v;
}

inline std::optional<long> valuation(const BigRational& q, long p)
{
    if (q == 0)
        return std::nullopt;
    return valuation_by_division(boost::multiprecision::numerator(q), p) -
           valuation_by_division(boost::multiprecision::denominator(q), p);
}

// Smallest root valuation of a monic polynomial: min_{i<d} v(a_i)/(d-i).
inline std::optional<BigRational> min_root_valuation(const std::vector<BigRational>& c, long p)
{
    const long d = static_cast<long>(c.size()) - 1;
    std::optional<BigRational> best;
    for (long i = 0; i < d; ++i)
        if (const auto v = valuation(c[i], p)) {
            BigRational cand(*v, d - i);
            if (!best || cand < *best)
                best = cand;
        }
    return best;
}

inline QMatrix mul(const QMatrix& a, const QMatrix& b)
{
    const std::size_t d = a.size();
    QMatrix out(d, std::vector<BigRational>(d));
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t k = 0; k < d; ++k)
            for (std::size_t j = 0; j < d; ++j)
                out[i][j] += a[i][k] * b[k][j];
    return out;
}

inline QMatrix to_q(const jsr::padic::RationalMatrix& m)
{
    QMatrix out(m.dim(), std::vector<BigRational>(m.dim()));
    for (std::size_t i = 0; i < m.dim(); ++i)
        for (std::size_t j = 0; j < m.dim(); ++j)
            out[i][j] = m(i, j);
    return out;
}

// Exponent of max_{|w|<=L} Lambda_p(w)^(1/|w|) by brute force; nullopt is 0.
inline std::optional<BigRational> padic_rho_exponent(const std::vector<QMatrix>& s, int max_len,
                                                     long p)
{
    std::optional<BigRational> best;
    for (int k = 1; k <= max_len; ++k)
        for (const auto& w : words_of_length(static_cast<int>(s.size()), k)) {
            QMatrix m = s[w[0]];
            for (std::size_t i = 1; i < w.size(); ++i)
                m = mul(s[w[i]], m);
            if (const auto e = min_root_valuation(char_poly(m), p)) {
                const BigRational per = *e / k;
                if (!best || per < *best)
                    best = per;
            }
        }
    return best;
}

} // namespace oracle
