#include <cmath>
#include <optional>

#include "jsr/jsr_bounds.hpp"

namespace jsr {

namespace {

constexpr double kBase = 2.0;
constexpr double kEllipsoidStep = 0.1;
constexpr int kMaxDoublings = 40;

class Objective {
public:
    Objective(const MatrixSet& s, const Tolerances& tol) : set_(s), tol_(tol) {}

    /// |g S g^-1|_2, or nothing if g is too ill-conditioned to trust.
    std::optional<double> operator()(const Matrix& g) const
    {
        Eigen::JacobiSVD<Matrix> svd(g);
        const auto& sv = svd.singularValues();
        const double smin = sv(sv.size() - 1);
        if (!(smin > 0.0) || sv(0) / smin > tol_.max_condition)
            return std::nullopt;
        const Matrix g_inv = g.inverse();
        double worst = 0.0;
        for (const auto& m : set_.members())
            worst = std::max(worst, spectral_norm(g * m * g_inv));
        if (!std::isfinite(worst))
            return std::nullopt;
        return worst;
    }

private:
    const MatrixSet& set_;
    const Tolerances& tol_;
};

// Coordinate search over g <- diag(base^e) g, doubling the step while it
// keeps improving.
double rebalance(Matrix& g, double current, const Objective& objective)
{
    const Eigen::Index d = g.rows();
    for (Eigen::Index i = 0; i < d; ++i) {
        for (double direction : {kBase, 1.0 / kBase}) {
            double factor = direction;
            bool improved = false;
            for (int step = 0; step < kMaxDoublings; ++step) {
                Matrix trial = g;
                trial.row(i) *= factor;
                const auto v = objective(trial);
                if (!v || *v >= current)
                    break;
                g = std::move(trial);
                current = *v;
                improved = true;
                factor *= factor;
            }
            if (improved)
                break;
        }
    }
    return current;
}

// P <- (1 - eta) P + eta * mean_s s^H P s, trace-normalized; g = chol(P).
std::optional<Matrix> ellipsoid_step(const Matrix& g, const MatrixSet& s)
{
    const Eigen::Index d = g.rows();
    const Matrix p = g.adjoint() * g;
    Matrix q = Matrix::Zero(d, d);
    for (const auto& m : s.members())
        q += m.adjoint() * p * m;
    q /= static_cast<double>(s.size());
    Matrix next = (1.0 - kEllipsoidStep) * p + kEllipsoidStep * q;
    next = 0.5 * (next + next.adjoint()).eval();
    const double trace = next.trace().real();
    if (!(trace > 0.0) || !std::isfinite(trace))
        return std::nullopt;
    next *= static_cast<double>(d) / trace;
    Eigen::LLT<Matrix> llt(next);
    if (llt.info() != Eigen::Success)
        return std::nullopt;
    return Matrix(llt.matrixU());
}

} // namespace

ConjugationResult conjugation_search(const MatrixSet& s, int iterations, const Tolerances& tol)
{
    if (iterations < 0)
        throw Error(ErrorCode::InvalidArgument, "iterations must be >= 0");
    const Eigen::Index d = static_cast<Eigen::Index>(s.dim());
    const Objective objective(s, tol);

    ConjugationResult best;
    best.g = Matrix::Identity(d, d);
    best.initial = set_norm(s, NormSpec::spectral());
    best.value = best.initial;

    Matrix g = best.g;
    double current = best.value;
    auto keep = [&](const Matrix& candidate, double v) {
        if (v < best.value) {
            best.value = v;
            best.g = candidate;
        }
    };

    for (int it = 0; it < iterations; ++it) {
        current = rebalance(g, current, objective);
        keep(g, current);

        auto stepped = ellipsoid_step(g, s);
        if (!stepped)
            continue;
        const auto v = objective(*stepped);
        if (!v)
            continue;
        g = std::move(*stepped);
        current = *v;
        keep(g, current);
    }
    return best;
}

} // namespace jsr
