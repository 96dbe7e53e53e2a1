#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "jsr/jsr_bounds.hpp"
#include "jsr/matrix_core.hpp"

namespace jsr {

/// Eigenvalue lower bound from an approximate eigenpair:
/// if |A| <= 1, |x| = 1, |lambda| <= 2 and |Ax - lambda x| <= (eps |lambda|)^d
/// then Lambda(A) >= |lambda| (1 - 4 eps).
struct ResidualCertificate {
    Matrix a;
    Vector x;
    Complex lambda;
    double residual = 0.0;
    double eps = 0.0;
    /// |lambda| (1 - 4 eps), clamped at 0.
    double bound = 0.0;
    std::string norm_name;
};

/// Builds and validates a certificate. Throws HypothesisUnmet naming the
/// violated precondition.
ResidualCertificate residual_certificate(const Matrix& a, const Vector& x, Complex lambda,
                                         const NormSpec& n, const Tolerances& tol = {});

struct SiegelOptions {
    /// The search runs even when the counting hypothesis fails; the result is
    /// still verified, but existence is no longer guaranteed.
    bool require_hypothesis = true;
    std::uint64_t enumeration_cap = 2'000'000;
};

/// True iff (1+T)^n > (1 + 2 n T / eps)^d.
bool siegel_hypothesis(std::size_t n, std::size_t d, int t, double eps);

struct SiegelResult {
    std::vector<int> coefficients;
    double residual = 0.0;
};

/// Integers c_i, not all zero, |c_i| <= T, with |sum c_i x_i| <= eps.
/// Errors: HypothesisUnmet, BudgetExceeded ((T+1)^n above the cap),
/// NotFound (complex input under the exponent-d count, or
/// require_hypothesis = false).
SiegelResult siegel_combination(const std::vector<Vector>& xs, int t, double eps,
                                const NormSpec& n, const SiegelOptions& opt = {});

/// 2 max_{k<=d} |tr(A^k)|^(1/k), an upper bound on Lambda(A).
double trace_bound(const Matrix& a);

struct ConvexHullReport {
    double eps = 0.0;
    double limit = 0.0;
    double max_ratio = 0.0;
    int samples = 0;
    int violations = 0;
};

/// Samples complex convex combinations of S u ... u S^n and checks
/// Lambda <= 2 d eps with eps = max_{k <= n d} Lambda(S^k)^(1/k).
ConvexHullReport convex_hull_bound_check(const MatrixSet& s, int n, int samples,
                                         std::uint64_t seed, const Tolerances& tol = {},
                                         const Limits& limits = {});

using WorkingNorm = std::variant<NormSpec, PolytopeNorm>;

struct TrajectoryOptions {
    int maxlen = 64;
    std::optional<Vector> x0;
    std::uint64_t seed = 1;
    int max_restarts = 8;
    /// Certificates whose bounds are within this distance of the best one
    /// are ties; the shortest word wins.
    double tie_tolerance = 1e-6;
    /// Used for the closest-return grid beyond `all_pairs_limit`.
    double eps = 0.25;
    int all_pairs_limit = 4096;
    Tolerances tol{};
};

struct TrajectoryCandidate {
    Word word;
    ResidualCertificate certificate;
    double return_distance = 0.0;
};

struct TrajectoryResult {
    Word word;
    ResidualCertificate certificate;
    /// Working-norm distance between the two returning trajectory points.
    double return_distance = 0.0;
    int restarts = 0;
    /// True when no return within distance 1 was seen.
    bool vacuous = false;
    /// Every certified return, closest first (at most 32).
    std::vector<TrajectoryCandidate> candidates;
};

/// Greedy norm-maximizing trajectory x_k = s_k ... s_1 x0; a close return
/// x_n ~ x_n' yields A = s_n' ... s_{n+1} with an approximate eigenvector,
/// certified through residual_certificate under the spectral norm.
TrajectoryResult trajectory_return_search(const MatrixSet& s, const WorkingNorm& norm,
                                          const TrajectoryOptions& opt = {});

struct IdempotentHit {
    Word word;
    double defect = 0.0;
};

/// Word minimizing |W^2 - W|_2 / |W|_2 among |W|_2 >= 1/2, if the defect is
/// <= tol. Lengths beyond the enumeration cap are not searched.
std::optional<IdempotentHit> near_idempotent_search(const MatrixSet& s, int maxlen, double tol,
                                                    const Limits& limits = {});

enum class TheoremId { PolBd, BocaNew, BgEl };
enum class Verdict { Confirmed, Refuted, Inconclusive };

std::string to_string(TheoremId id);
std::string to_string(Verdict v);

struct TheoremReport {
    TheoremId theorem;
    double lhs = 0.0;
    double rhs_at_lower = 0.0;
    double rhs_at_upper = 0.0;
    Verdict verdict = Verdict::Inconclusive;
    std::vector<Word> witnesses;
    std::map<std::string, double> constants;
    std::map<std::string, double> budget;
    std::vector<std::string> notes;
};

struct CheckOptions {
    Tolerances tol{};
    Limits limits{};
};

/// max_{k <= 2d^3} Lambda(S^k)^(1/k) >= rho(S) / (2^8 d^5).
TheoremReport check_polbd(const MatrixSet& s, const JsrInterval& interval,
                          const CheckOptions& opt = {});

/// |S^{n1}| <= 2^7 d^4 rho(S) |S|^{n1 - 1} with n1 = 2 d^2.
TheoremReport check_boca_new(const MatrixSet& s, const NormSpec& n, const JsrInterval& interval,
                             const CheckOptions& opt = {});

struct BgElOptions {
    int maxlen = 4096;
    std::uint64_t seed = 1;
    CheckOptions check{};
};

/// Searches for a word w with Lambda(w) >= (1 - eps) rho^{|w|} by trajectory
/// return, after rescaling S by 1 / interval.upper. The witness is the
/// shortest return whose certificate alone proves the bound; failing that,
/// the best certificate, checked directly against Lambda.
TheoremReport check_bg_el(const MatrixSet& s, const JsrInterval& interval, double eps,
                          const BgElOptions& opt = {});

/// 3^d 4^(d^2) as a double (infinite when it overflows).
double bg_el_n0(std::size_t d);

} // namespace jsr
