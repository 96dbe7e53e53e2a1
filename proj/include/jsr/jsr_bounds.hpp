#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "jsr/matrix_core.hpp"

namespace jsr {

/// Two-sided bounds  Lambda(S^k)^(1/k) <= rho(S) <= |S^n|^(1/n).
///
/// `lower` and `upper` are the raw floating values. The certified_* accessors
/// apply the configured round-off backoff (shrink lower, inflate upper) and
/// are what the theorem checkers consume.
struct JsrInterval {
    double lower = 0.0;
    double upper = 0.0;
    Word lower_witness;
    int upper_depth = 0;
    NormSpec norm_used;
    std::map<std::string, double> diagnostics;
    double backoff = Tolerances{}.backoff;

    double width() const { return upper - lower; }
    double certified_lower() const { return lower * (1.0 - backoff); }
    double certified_upper() const { return upper * (1.0 + backoff); }
    bool contains(double rho) const
    {
        return certified_lower() <= rho && rho <= certified_upper();
    }
};

struct UpperBoundResult {
    double value = 0.0;
    /// The k attaining min_k |S^k|^(1/k) (smallest such k).
    int depth = 0;
    /// level_norms[k] = |S^k| for k = 1..depth; index 0 holds 1 (= |S^0|).
    std::vector<double> level_norms;
};

/// min over 1 <= k <= depth of |S^k|^(1/k).
UpperBoundResult upper_bound_detail(const MatrixSet& s, int depth, const NormSpec& n,
                                    const Limits& limits = {});

inline double upper_bound(const MatrixSet& s, int depth, const NormSpec& n,
                          const Limits& limits = {})
{
    return upper_bound_detail(s, depth, n, limits).value;
}

struct LowerBoundResult {
    double value = 0.0;
    Word witness;
};

/// max over words w with |w| <= depth of Lambda(eval(w))^(1/|w|). Values
/// within tol.rel of each other are ties and resolve to the shortlex-smallest
/// word.
LowerBoundResult lower_bound(const MatrixSet& s, int depth, const Limits& limits = {},
                             const Tolerances& tol = {});

struct EstimateConfig {
    int depth = 8;
    NormSpec norm = NormSpec::spectral();
    /// Stop deepening once upper - lower <= target_width.
    std::optional<double> target_width;
    /// Skip subtrees that provably cannot change either bound.
    bool prune = true;
    Tolerances tol{};
    Limits limits{};
};

/// Joint lower/upper estimate in one walk of the product tree.
///
/// If the requested depth exceeds the enumeration cap the depth is clamped,
/// the partial interval is returned and diagnostics["budget_clamped"] = 1.
JsrInterval jsr_estimate(const MatrixSet& s, const EstimateConfig& config = {});

struct ConjugationResult {
    Matrix g;
    /// |g S g^-1|_2, an upper bound on rho(S).
    double value = 0.0;
    /// |S|_2, the identity baseline.
    double initial = 0.0;
};

/// Searches for g in GL_d(C) with small |g S g^-1|_2 by alternating
/// diagonal rebalancing and a damped ellipsoid update; keeps the best g seen.
ConjugationResult conjugation_search(const MatrixSet& s, int iterations,
                                     const Tolerances& tol = {});

struct RotaStrangValue {
    double value = 0.0;
    /// Bound on the omitted terms n > trunc.
    double tail_bound = 0.0;
};

/// Truncation of v_r(x) = sum_{n>=0} |S^n x| r^n with a certified tail
/// bound. Throws InvalidArgument unless r * (upper bound on rho) < 1.
RotaStrangValue rota_strang_norm(const MatrixSet& s, double r, const Vector& x, int trunc,
                                 const NormSpec& n = NormSpec::spectral(),
                                 const Limits& limits = {});

/// v(x) = max_{0<=k<=depth} max_{|w|=k} |eval(w) x|_2 / rho_hat^k, kept as
/// the list of scaled products (identity included, so v >= |.|_2 > 0 off
/// the origin).
class PolytopeNorm {
public:
    PolytopeNorm(std::vector<Matrix> scaled_products, double rho_hat, int depth);

    double operator()(const Vector& x) const;
    std::size_t dim() const;
    double rho_hat() const noexcept { return rho_hat_; }
    int depth() const noexcept { return depth_; }
    const std::vector<Matrix>& scaled_products() const noexcept { return products_; }

    /// max over members s and sampled directions x of v(sx) / (rho_hat v(x)) - 1.
    double slack() const noexcept { return slack_; }
    /// max over sampled x of 1 - max_s v(sx) / (rho_hat v(x)); zero for an
    /// exact Barabanov norm.
    double deficit() const noexcept { return deficit_; }

    void set_quality(double slack, double deficit)
    {
        slack_ = slack;
        deficit_ = deficit;
    }

private:
    std::vector<Matrix> products_;
    double rho_hat_;
    int depth_;
    double slack_ = 0.0;
    double deficit_ = 0.0;
};

struct BarabanovOptions {
    int samples = 256;
    std::uint64_t seed = 1;
    Limits limits{};
};

PolytopeNorm barabanov_approx(const MatrixSet& s, double rho_hat, int depth,
                              const BarabanovOptions& opt = {});

struct NilpotencyResult {
    bool is_nilpotent = false;
    int algebra_dim = 0;
};

/// Decides rho(S) = 0 by testing whether the algebra generated by S is
/// nilpotent. Throws Indeterminate when a rank decision lands inside the
/// tolerance band.
NilpotencyResult nilpotency_test(const MatrixSet& s, const Tolerances& tol = {});

} // namespace jsr
