#include "jsr/certificates.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "detail.hpp"

namespace jsr {

ResidualCertificate residual_certificate(const Matrix& a, const Vector& x, Complex lambda,
                                         const NormSpec& n, const Tolerances& tol)
{
    validate_matrix(a);
    if (x.size() != a.rows())
        throw Error(ErrorCode::InvalidArgument, "vector dimension mismatch");
    const double a_norm = operator_norm(a, n);
    if (a_norm > 1.0 + tol.rel)
        throw Error(ErrorCode::HypothesisUnmet,
                    "operator norm |A| = " + std::to_string(a_norm) + " exceeds 1");
    const double x_norm = vector_norm(x, n);
    if (std::abs(x_norm - 1.0) > tol.rel)
        throw Error(ErrorCode::HypothesisUnmet,
                    "|x| = " + std::to_string(x_norm) + " is not 1");
    const double mod = std::abs(lambda);
    if (mod > 2.0)
        throw Error(ErrorCode::HypothesisUnmet, "|lambda| = " + std::to_string(mod) + " exceeds 2");

    ResidualCertificate c;
    c.a = a;
    c.x = x;
    c.lambda = lambda;
    c.norm_name = n.name();
    c.residual = vector_norm(a * x - lambda * x, n);
    const double d = static_cast<double>(a.rows());
    if (mod > 0.0)
        c.eps = std::pow(c.residual, 1.0 / d) / mod;
    else
        c.eps = c.residual > 0.0 ? std::numeric_limits<double>::infinity() : 0.0;
    c.bound = std::max(0.0, mod * (1.0 - 4.0 * c.eps));
    return c;
}

bool siegel_hypothesis(std::size_t n, std::size_t d, int t, double eps)
{
    if (t < 1 || !(eps > 0.0))
        return false;
    const double lhs = static_cast<double>(n) * std::log1p(static_cast<double>(t));
    const double rhs = static_cast<double>(d) *
                       std::log1p(2.0 * static_cast<double>(n) * static_cast<double>(t) / eps);
    return lhs > rhs;
}

namespace {

// K with |z|_2 <= K |z| for the given norm, so that points within eps in
// that norm are within K eps in every real coordinate.
double euclidean_factor(const NormSpec& n, std::size_t d)
{
    switch (n.kind()) {
    case NormKind::Spectral: return 1.0;
    case NormKind::MaxRowSum: return std::sqrt(static_cast<double>(d));
    case NormKind::MaxColSum: return 1.0;
    case NormKind::Ellipsoidal: return spectral_norm(n.g_inverse());
    }
    return 1.0;
}

} // namespace

SiegelResult siegel_combination(const std::vector<Vector>& xs, int t, double eps,
                                const NormSpec& n, const SiegelOptions& opt)
{
    if (xs.empty())
        throw Error(ErrorCode::InvalidArgument, "need at least one vector");
    if (t < 1 || !(eps > 0.0))
        throw Error(ErrorCode::InvalidArgument, "need T >= 1 and eps > 0");
    const std::size_t count = xs.size();
    const std::size_t d = static_cast<std::size_t>(xs.front().size());
    for (const auto& x : xs) {
        if (static_cast<std::size_t>(x.size()) != d)
            throw Error(ErrorCode::InvalidArgument, "vectors must share a dimension");
        if (vector_norm(x, n) > 1.0 + 1e-12)
            throw Error(ErrorCode::HypothesisUnmet, "input vectors must have norm <= 1");
    }
    if (opt.require_hypothesis && !siegel_hypothesis(count, d, t, eps))
        throw Error(ErrorCode::HypothesisUnmet, "(1+T)^n > (1+2nT/eps)^d does not hold");

    const double total = std::pow(static_cast<double>(t + 1), static_cast<double>(count));
    if (total > static_cast<double>(opt.enumeration_cap))
        throw Error(ErrorCode::BudgetExceeded,
                    "(T+1)^n = " + std::to_string(total) + " coefficient vectors exceed the cap");
    const std::size_t points = static_cast<std::size_t>(total);
    const std::size_t dims = 2 * d;

    // Digits of point p in base T+1 are its nonnegative coefficients.
    auto digits = [&](std::size_t p) {
        std::vector<int> out(count);
        for (std::size_t i = 0; i < count; ++i) {
            out[i] = static_cast<int>(p % static_cast<std::size_t>(t + 1));
            p /= static_cast<std::size_t>(t + 1);
        }
        return out;
    };
    std::vector<double> coords(points * dims);
    for (std::size_t p = 0; p < points; ++p) {
        const auto c = digits(p);
        Vector sum = Vector::Zero(d);
        for (std::size_t i = 0; i < count; ++i)
            if (c[i])
                sum += static_cast<double>(c[i]) * xs[i];
        for (std::size_t j = 0; j < d; ++j) {
            coords[p * dims + 2 * j] = sum(j).real();
            coords[p * dims + 2 * j + 1] = sum(j).imag();
        }
    }

    const double cell = euclidean_factor(n, d) * eps;
    std::vector<std::int64_t> keys(points * dims);
    for (std::size_t i = 0; i < keys.size(); ++i)
        keys[i] = static_cast<std::int64_t>(std::floor(coords[i] / cell));
    auto key_less = [&](std::size_t a, std::size_t b) {
        return std::lexicographical_compare(keys.begin() + a * dims, keys.begin() + (a + 1) * dims,
                                            keys.begin() + b * dims, keys.begin() + (b + 1) * dims);
    };
    std::vector<std::size_t> order(points);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), key_less);

    auto try_pair = [&](std::size_t a, std::size_t b) -> std::optional<SiegelResult> {
        const auto da = digits(a);
        const auto db = digits(b);
        SiegelResult r;
        r.coefficients.resize(count);
        Vector sum = Vector::Zero(d);
        for (std::size_t i = 0; i < count; ++i) {
            r.coefficients[i] = db[i] - da[i];
            if (r.coefficients[i])
                sum += static_cast<double>(r.coefficients[i]) * xs[i];
        }
        r.residual = vector_norm(sum, n);
        if (r.residual <= eps)
            return r;
        return std::nullopt;
    };

    // Pass 1: pairs sharing a cell.
    for (std::size_t lo = 0; lo < points;) {
        std::size_t hi = lo + 1;
        while (hi < points && !key_less(order[lo], order[hi]))
            ++hi;
        for (std::size_t i = lo; i < hi; ++i)
            for (std::size_t j = i + 1; j < hi; ++j)
                if (auto r = try_pair(order[i], order[j]))
                    return *r;
        lo = hi;
    }

    // Pass 2: pairs in adjacent cells. Complete, since eps-close points
    // differ by at most one cell in every coordinate.
    std::vector<std::int64_t> probe(dims);
    auto probe_less = [&](std::size_t a, const std::vector<std::int64_t>& k) {
        return std::lexicographical_compare(keys.begin() + a * dims, keys.begin() + (a + 1) * dims,
                                            k.begin(), k.end());
    };
    auto k_less = [&](const std::vector<std::int64_t>& k, std::size_t a) {
        return std::lexicographical_compare(k.begin(), k.end(), keys.begin() + a * dims,
                                            keys.begin() + (a + 1) * dims);
    };
    const std::size_t offsets = static_cast<std::size_t>(std::pow(3.0, static_cast<double>(dims)));
    for (std::size_t p = 0; p < points; ++p) {
        for (std::size_t o = 0; o < offsets; ++o) {
            std::size_t code = o;
            bool zero = true;
            for (std::size_t j = 0; j < dims; ++j) {
                const int delta = static_cast<int>(code % 3) - 1;
                code /= 3;
                zero = zero && delta == 0;
                probe[j] = keys[p * dims + j] + delta;
            }
            if (zero)
                continue;
            auto first = std::lower_bound(order.begin(), order.end(), probe, probe_less);
            auto last = std::upper_bound(first, order.end(), probe, k_less);
            for (auto it = first; it != last; ++it)
                if (*it > p)
                    if (auto r = try_pair(p, *it))
                        return *r;
        }
    }
    throw Error(ErrorCode::NotFound,
                "no small integer combination found; for complex vectors the counting bound "
                "only guarantees one under (1+T)^n > (1+2nT/eps)^(2d)");
}

double trace_bound(const Matrix& a)
{
    validate_matrix(a);
    const Eigen::Index d = a.rows();
    Matrix power = a;
    double eps = 0.0;
    for (Eigen::Index k = 1; k <= d; ++k) {
        if (k > 1)
            power = (power * a).eval();
        eps = std::max(eps, std::pow(std::abs(power.trace()), 1.0 / static_cast<double>(k)));
    }
    return 2.0 * eps;
}

ConvexHullReport convex_hull_bound_check(const MatrixSet& s, int n, int samples,
                                         std::uint64_t seed, const Tolerances& tol,
                                         const Limits& limits)
{
    if (n < 1 || samples < 0)
        throw Error(ErrorCode::InvalidArgument, "need n >= 1 and samples >= 0");
    const std::size_t d = s.dim();
    ConvexHullReport report;
    report.eps = lower_bound(s, n * static_cast<int>(d), limits, tol).value;
    if (report.eps > 1.0 + tol.rel)
        throw Error(ErrorCode::HypothesisUnmet,
                    "max_{k<=nd} Lambda(S^k)^(1/k) = " + std::to_string(report.eps) + " > 1");
    report.limit = 2.0 * static_cast<double>(d) * report.eps;

    EnumerationOptions eo;
    eo.depth = n;
    eo.limits = limits;
    const auto pool = enumerate_products(s, eo);

    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
    std::uniform_int_distribution<int> terms(1, static_cast<int>(std::min<std::size_t>(pool.size(), 6)));
    std::normal_distribution<double> normal;
    for (int i = 0; i < samples; ++i) {
        const int m = terms(rng);
        std::vector<Complex> alpha(m);
        double total = 0.0;
        for (auto& a : alpha) {
            a = Complex(normal(rng), normal(rng));
            total += std::abs(a);
        }
        Matrix combo = Matrix::Zero(d, d);
        for (int j = 0; j < m; ++j)
            combo += (alpha[j] / total) * pool[pick(rng)].product;
        const double lam = spectral_radius(combo);
        const double slack = tol.rel * spectral_norm(combo);
        if (lam > report.limit * (1.0 + tol.rel) + slack)
            ++report.violations;
        const double ratio = report.limit > 0.0 ? lam / report.limit : (lam > slack ? INFINITY : 0.0);
        report.max_ratio = std::max(report.max_ratio, ratio);
        ++report.samples;
    }
    return report;
}

} // namespace jsr
