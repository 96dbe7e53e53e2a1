#include "jsr/matrix_core.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace jsr {

std::string_view to_string(ErrorCode code)
{
    switch (code) {
    case ErrorCode::InvalidArgument: return "INVALID_ARGUMENT";
    case ErrorCode::BudgetExceeded: return "BUDGET_EXCEEDED";
    case ErrorCode::HypothesisUnmet: return "HYPOTHESIS_UNMET";
    case ErrorCode::Indeterminate: return "INDETERMINATE";
    case ErrorCode::NumericalFailure: return "NUMERICAL_FAILURE";
    case ErrorCode::NotFound: return "NOT_FOUND";
    case ErrorCode::ParseError: return "PARSE_ERROR";
    }
    return "UNKNOWN";
}

void validate_matrix(const Matrix& m, const Limits& limits)
{
    if (m.rows() == 0 || m.rows() != m.cols())
        throw Error(ErrorCode::InvalidArgument, "matrix must be square and non-empty");
    if (static_cast<std::size_t>(m.rows()) > limits.max_dim)
        throw Error(ErrorCode::InvalidArgument,
                    "dimension " + std::to_string(m.rows()) + " exceeds cap " +
                        std::to_string(limits.max_dim));
    for (Eigen::Index j = 0; j < m.cols(); ++j)
        for (Eigen::Index i = 0; i < m.rows(); ++i)
            if (!std::isfinite(m(i, j).real()) || !std::isfinite(m(i, j).imag()))
                throw Error(ErrorCode::InvalidArgument, "matrix has a non-finite entry");
}

MatrixSet::MatrixSet(std::vector<Matrix> members, const Limits& limits)
    : members_(std::move(members))
{
    if (members_.empty())
        throw Error(ErrorCode::InvalidArgument, "matrix set must have at least one member");
    dim_ = static_cast<std::size_t>(members_.front().rows());
    for (std::size_t i = 0; i < members_.size(); ++i) {
        validate_matrix(members_[i], limits);
        if (static_cast<std::size_t>(members_[i].rows()) != dim_)
            throw Error(ErrorCode::InvalidArgument,
                        "member " + std::to_string(i) + " has dimension " +
                            std::to_string(members_[i].rows()) + ", expected " +
                            std::to_string(dim_));
    }
    for (std::size_t i = 0; i < members_.size(); ++i)
        for (std::size_t j = i + 1; j < members_.size(); ++j)
            if (members_[i] == members_[j])
                warnings_.push_back("duplicate members " + std::to_string(i) + " and " +
                                    std::to_string(j));
}

MatrixSet MatrixSet::scaled(double c) const
{
    std::vector<Matrix> out;
    out.reserve(members_.size());
    for (const auto& m : members_)
        out.push_back(c * m);
    return MatrixSet(std::move(out));
}

MatrixSet MatrixSet::conjugated(const Matrix& g) const
{
    const Matrix g_inv = g.inverse();
    std::vector<Matrix> out;
    out.reserve(members_.size());
    for (const auto& m : members_)
        out.push_back(g * m * g_inv);
    return MatrixSet(std::move(out));
}

MatrixSet MatrixSet::power(int k, const Limits& limits) const
{
    if (k < 1)
        throw Error(ErrorCode::InvalidArgument, "power must be >= 1");
    double count = std::pow(static_cast<double>(members_.size()), k);
    if (count > static_cast<double>(limits.enumeration_cap))
        throw Error(ErrorCode::BudgetExceeded, "product set S^" + std::to_string(k) +
                                                   " exceeds the enumeration cap");
    std::vector<Matrix> current = members_;
    for (int step = 1; step < k; ++step) {
        std::vector<Matrix> next;
        next.reserve(current.size() * members_.size());
        for (const auto& prefix : current)
            for (const auto& s : members_)
                next.push_back(s * prefix);
        current = std::move(next);
    }
    return MatrixSet(std::move(current), limits);
}

std::string Word::to_string() const
{
    std::ostringstream os;
    os << '(';
    for (std::size_t i = 0; i < indices.size(); ++i)
        os << (i ? "," : "") << indices[i];
    os << ')';
    return os.str();
}

bool shortlex_less(const Word& a, const Word& b)
{
    if (a.length() != b.length())
        return a.length() < b.length();
    return a.indices < b.indices;
}

Matrix evaluate(const MatrixSet& s, const Word& w)
{
    Matrix out = Matrix::Identity(s.dim(), s.dim());
    for (int i : w.indices) {
        if (i < 0 || static_cast<std::size_t>(i) >= s.size())
            throw Error(ErrorCode::InvalidArgument, "word index " + std::to_string(i) +
                                                        " out of range");
        out = s[i] * out;
    }
    return out;
}

NormSpec NormSpec::ellipsoidal(const Matrix& g, const Tolerances& tol)
{
    validate_matrix(g);
    Eigen::JacobiSVD<Matrix> svd(g);
    const auto& sv = svd.singularValues();
    const double smax = sv(0);
    const double smin = sv(sv.size() - 1);
    if (!(smin > 0.0) || smax / smin > tol.max_condition)
        throw Error(ErrorCode::InvalidArgument, "ellipsoidal norm matrix is singular or too "
                                                "ill-conditioned");
    NormSpec n(NormKind::Ellipsoidal);
    n.g_ = g;
    n.g_inv_ = g.inverse();
    return n;
}

std::string NormSpec::name() const
{
    switch (kind_) {
    case NormKind::Spectral: return "spectral";
    case NormKind::MaxRowSum: return "rowsum";
    case NormKind::MaxColSum: return "colsum";
    case NormKind::Ellipsoidal: return "ellipsoidal";
    }
    return "unknown";
}

namespace {

// Closed forms for d <= 2; these dominate the cost of product enumeration.
double spectral_radius_2x2(const Matrix& a)
{
    const Complex half_trace = 0.5 * (a(0, 0) + a(1, 1));
    const Complex half_diff = 0.5 * (a(0, 0) - a(1, 1));
    const Complex disc = std::sqrt(half_diff * half_diff + a(0, 1) * a(1, 0));
    return std::max(std::abs(half_trace + disc), std::abs(half_trace - disc));
}

// Largest eigenvalue of the hermitian A^H A = [[p, q], [conj(q), r]]; a sum
// of nonnegative terms, so no cancellation near unitary A.
double spectral_norm_2x2(const Matrix& a)
{
    const double p = std::norm(a(0, 0)) + std::norm(a(1, 0));
    const double r = std::norm(a(0, 1)) + std::norm(a(1, 1));
    const Complex q = std::conj(a(0, 0)) * a(0, 1) + std::conj(a(1, 0)) * a(1, 1);
    const double half_gap = 0.5 * (p - r);
    return std::sqrt(0.5 * (p + r) + std::hypot(half_gap, std::abs(q)));
}

} // namespace

double spectral_radius(const Matrix& a)
{
    double r;
    if (a.rows() == 1) {
        r = std::abs(a(0, 0));
    } else if (a.rows() == 2) {
        r = spectral_radius_2x2(a);
    } else {
        Eigen::ComplexEigenSolver<Matrix> solver(a, /*computeEigenvectors=*/false);
        if (solver.info() != Eigen::Success)
            throw Error(ErrorCode::NumericalFailure, "eigenvalue iteration did not converge");
        r = solver.eigenvalues().cwiseAbs().maxCoeff();
    }
    if (!std::isfinite(r))
        throw Error(ErrorCode::NumericalFailure, "spectral radius is not finite");
    return r;
}

double spectral_norm(const Matrix& a)
{
    if (a.rows() == 1)
        return std::abs(a(0, 0));
    if (a.rows() == 2)
        return spectral_norm_2x2(a);
    const double scale = a.cwiseAbs().maxCoeff();
    if (scale == 0.0)
        return 0.0;
    const Matrix b = a / scale;
    Eigen::SelfAdjointEigenSolver<Matrix> solver(b.adjoint() * b, Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success)
        throw Error(ErrorCode::NumericalFailure, "singular value iteration did not converge");
    return scale * std::sqrt(std::max(0.0, solver.eigenvalues().maxCoeff()));
}

double operator_norm(const Matrix& a, const NormSpec& n)
{
    switch (n.kind()) {
    case NormKind::Spectral: return spectral_norm(a);
    case NormKind::MaxRowSum: return a.cwiseAbs().rowwise().sum().maxCoeff();
    case NormKind::MaxColSum: return a.cwiseAbs().colwise().sum().maxCoeff();
    case NormKind::Ellipsoidal: return spectral_norm(n.g() * a * n.g_inverse());
    }
    return 0.0;
}

double vector_norm(const Vector& x, const NormSpec& n)
{
    switch (n.kind()) {
    case NormKind::Spectral: return x.norm();
    case NormKind::MaxRowSum: return x.cwiseAbs().maxCoeff();
    case NormKind::MaxColSum: return x.cwiseAbs().sum();
    case NormKind::Ellipsoidal: return (n.g() * x).norm();
    }
    return 0.0;
}

double set_norm(const MatrixSet& s, const NormSpec& n)
{
    double best = 0.0;
    for (const auto& m : s.members())
        best = std::max(best, operator_norm(m, n));
    return best;
}

std::uint64_t word_count(std::size_t letters, int depth)
{
    constexpr auto kMax = std::numeric_limits<std::uint64_t>::max();
    std::uint64_t total = 0;
    std::uint64_t level = 1;
    for (int k = 1; k <= depth; ++k) {
        if (level > kMax / letters)
            return kMax;
        level *= letters;
        if (total > kMax - level)
            return kMax;
        total += level;
    }
    return total;
}

int max_depth_within(std::size_t letters, std::uint64_t cap)
{
    if (letters <= 1)
        return static_cast<int>(std::min<std::uint64_t>(cap, 1u << 20));
    int depth = 0;
    while (word_count(letters, depth + 1) <= cap)
        ++depth;
    return depth;
}

namespace {

struct Walker {
    const MatrixSet& set;
    const EnumerationOptions& opt;
    const std::function<Descend(const ProductNode&)>& visit;
    std::vector<int> indices;
    std::vector<Matrix> stack;
    double threshold = 0.0;

    void descend(const Matrix& prefix, int level)
    {
        const std::size_t letters = set.size();
        const bool root = level == 0;
        for (std::size_t i = 0; i < letters; ++i) {
            if (root && opt.first_letter && static_cast<int>(i) != *opt.first_letter)
                continue;
            Matrix& product = stack[level];
            if (root)
                product = set[i];
            else
                product.noalias() = set[i] * prefix;
            const double norm = operator_norm(product, opt.norm);
            if (threshold > 0.0 && norm <= threshold)
                continue;
            indices.push_back(static_cast<int>(i));
            const Descend d = visit(ProductNode{indices, product, norm});
            if (d == Descend::Yes && level + 1 < opt.depth)
                descend(product, level + 1);
            indices.pop_back();
        }
    }
};

} // namespace

void for_each_product(const MatrixSet& s, const EnumerationOptions& opt,
                      const std::function<Descend(const ProductNode&)>& visit)
{
    if (opt.depth < 1)
        throw Error(ErrorCode::InvalidArgument, "enumeration depth must be >= 1");
    if (opt.prune_threshold && *opt.prune_threshold < 0.0)
        throw Error(ErrorCode::InvalidArgument, "prune threshold must be >= 0");
    if (opt.first_letter && (*opt.first_letter < 0 ||
                             static_cast<std::size_t>(*opt.first_letter) >= s.size()))
        throw Error(ErrorCode::InvalidArgument, "first letter out of range");

    std::uint64_t count = word_count(s.size(), opt.depth);
    if (opt.first_letter)
        count = 1 + word_count(s.size(), opt.depth - 1);
    if (count > opt.limits.enumeration_cap)
        throw Error(ErrorCode::BudgetExceeded,
                    "enumerating words up to depth " + std::to_string(opt.depth) + " over " +
                        std::to_string(s.size()) + " letters exceeds the cap of " +
                        std::to_string(opt.limits.enumeration_cap) + " words");

    Walker w{s, opt, visit, {}, {}, opt.prune_threshold.value_or(0.0)};
    w.indices.reserve(opt.depth);
    w.stack.assign(opt.depth, Matrix(s.dim(), s.dim()));
    w.descend(Matrix(), 0);
}

std::vector<ProductEntry> enumerate_products(const MatrixSet& s, const EnumerationOptions& opt)
{
    std::vector<ProductEntry> out;
    for_each_product(s, opt, [&](const ProductNode& node) {
        out.push_back(ProductEntry{Word{node.indices}, node.product});
        return Descend::Yes;
    });
    return out;
}

} // namespace jsr
