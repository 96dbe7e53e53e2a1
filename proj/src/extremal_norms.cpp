#include <algorithm>
#include <cmath>
#include <random>

#include "detail.hpp"
#include "jsr/jsr_bounds.hpp"

namespace jsr {

namespace {

// level[n] = |S^n x| for n = 0..trunc.
std::vector<double> orbit_norms(const MatrixSet& s, const Vector& x, int trunc,
                                const NormSpec& n)
{
    std::vector<double> level(trunc + 1, 0.0);
    level[0] = vector_norm(x, n);
    std::vector<Vector> stack(trunc + 1, Vector(s.dim()));
    stack[0] = x;
    // Explicit DFS; vectors are cheaper than the matrix products the
    // generic walker would build.
    auto walk = [&](auto&& self, int depth) -> void {
        if (depth == trunc)
            return;
        for (const auto& m : s.members()) {
            stack[depth + 1].noalias() = m * stack[depth];
            level[depth + 1] = std::max(level[depth + 1], vector_norm(stack[depth + 1], n));
            self(self, depth + 1);
        }
    };
    walk(walk, 0);
    return level;
}

} // namespace

RotaStrangValue rota_strang_norm(const MatrixSet& s, double r, const Vector& x, int trunc,
                                 const NormSpec& n, const Limits& limits)
{
    if (trunc < 1)
        throw Error(ErrorCode::InvalidArgument, "truncation must be >= 1");
    if (!(r >= 0.0))
        throw Error(ErrorCode::InvalidArgument, "r must be >= 0");
    if (static_cast<std::size_t>(x.size()) != s.dim())
        throw Error(ErrorCode::InvalidArgument, "vector dimension mismatch");
    if (word_count(s.size(), trunc) > limits.enumeration_cap)
        throw Error(ErrorCode::BudgetExceeded, "truncation depth exceeds the enumeration cap");

    const int ub_depth = std::max(1, std::min(8, max_depth_within(s.size(), limits.enumeration_cap)));
    const auto ub = upper_bound_detail(s, ub_depth, n, limits);
    if (!(r * ub.value < 1.0))
        throw Error(ErrorCode::InvalidArgument,
                    "r * upper bound on rho = " + std::to_string(r * ub.value) +
                        " >= 1; series is not certifiably convergent");

    const auto level = orbit_norms(s, x, trunc, n);
    RotaStrangValue out;
    double rn = 1.0;
    for (int k = 0; k <= trunc; ++k) {
        out.value += level[k] * rn;
        rn *= r;
    }

    const double xnorm = level[0];
    if (ub.value == 0.0) {
        // |S^k| = 0 for k = ub.depth, so only finitely many terms remain.
        double rk = std::pow(r, trunc + 1);
        for (int k = trunc + 1; k < ub.depth; ++k) {
            out.tail_bound += ub.level_norms[k] * xnorm * rk;
            rk *= r;
        }
        return out;
    }
    // |S^n| <= C U^n with U = |S^k|^(1/k), C = max_{j<k} |S^j| / U^j.
    const double u = ub.value;
    double c = 0.0;
    for (int j = 0; j < ub.depth; ++j)
        c = std::max(c, ub.level_norms[j] / std::pow(u, j));
    const double q = r * u;
    out.tail_bound = c * xnorm * std::pow(q, trunc + 1) / (1.0 - q);
    return out;
}

PolytopeNorm::PolytopeNorm(std::vector<Matrix> scaled_products, double rho_hat, int depth)
    : products_(std::move(scaled_products)), rho_hat_(rho_hat), depth_(depth)
{
    if (products_.empty())
        throw Error(ErrorCode::InvalidArgument, "polytope norm needs at least one product");
}

double PolytopeNorm::operator()(const Vector& x) const
{
    double best = 0.0;
    for (const auto& p : products_)
        best = std::max(best, (p * x).norm());
    return best;
}

std::size_t PolytopeNorm::dim() const
{
    return static_cast<std::size_t>(products_.front().rows());
}

PolytopeNorm barabanov_approx(const MatrixSet& s, double rho_hat, int depth,
                              const BarabanovOptions& opt)
{
    if (!(rho_hat > 0.0))
        throw Error(ErrorCode::InvalidArgument, "rho_hat must be > 0");
    if (depth < 1)
        throw Error(ErrorCode::InvalidArgument, "depth must be >= 1");

    const std::size_t d = s.dim();
    std::vector<Matrix> products;
    products.push_back(Matrix::Identity(d, d));
    EnumerationOptions eo;
    eo.depth = depth;
    eo.limits = opt.limits;
    for_each_product(s, eo, [&](const ProductNode& node) {
        products.push_back(node.product / std::pow(rho_hat, node.indices.size()));
        return Descend::Yes;
    });
    PolytopeNorm norm(std::move(products), rho_hat, depth);

    std::vector<Vector> directions;
    for (std::size_t i = 0; i < d; ++i)
        directions.push_back(Vector::Unit(d, i));
    std::mt19937_64 rng(opt.seed);
    for (int i = 0; i < opt.samples; ++i)
        directions.push_back(detail::random_unit_vector(d, rng));

    double slack = -std::numeric_limits<double>::infinity();
    double deficit = -std::numeric_limits<double>::infinity();
    for (const auto& x : directions) {
        const double vx = norm(x);
        double best_ratio = 0.0;
        for (const auto& m : s.members()) {
            const double ratio = norm(m * x) / (rho_hat * vx);
            best_ratio = std::max(best_ratio, ratio);
        }
        slack = std::max(slack, best_ratio - 1.0);
        deficit = std::max(deficit, 1.0 - best_ratio);
    }
    norm.set_quality(slack, deficit);
    return norm;
}

} // namespace jsr
