#include <algorithm>
#include <cmath>

#include "jsr/certificates.hpp"

namespace jsr {

std::string to_string(TheoremId id)
{
    switch (id) {
    case TheoremId::PolBd: return "POLBD";
    case TheoremId::BocaNew: return "BOCA_NEW";
    case TheoremId::BgEl: return "BG_EL";
    }
    return "UNKNOWN";
}

std::string to_string(Verdict v)
{
    switch (v) {
    case Verdict::Confirmed: return "CONFIRMED";
    case Verdict::Refuted: return "REFUTED";
    case Verdict::Inconclusive: return "INCONCLUSIVE";
    }
    return "UNKNOWN";
}

double bg_el_n0(std::size_t d)
{
    const double dd = static_cast<double>(d);
    return std::pow(3.0, dd) * std::pow(4.0, dd * dd);
}

TheoremReport check_polbd(const MatrixSet& s, const JsrInterval& interval, const CheckOptions& opt)
{
    const double d = static_cast<double>(s.dim());
    const int full_depth = 2 * static_cast<int>(s.dim() * s.dim() * s.dim());
    const int feasible = max_depth_within(s.size(), opt.limits.enumeration_cap);
    const int depth = std::min(full_depth, feasible);
    const bool clamped = depth < full_depth;
    const double c = 1.0 / (256.0 * std::pow(d, 5.0));

    TheoremReport r;
    r.theorem = TheoremId::PolBd;
    const auto lb = lower_bound(s, depth, opt.limits, opt.tol);
    r.lhs = lb.value;
    r.rhs_at_lower = c * interval.lower;
    r.rhs_at_upper = c * interval.upper;
    r.witnesses.push_back(lb.witness);
    r.constants = {{"d", d}, {"c", c}, {"k_max", static_cast<double>(full_depth)}};
    r.budget = {{"depth", static_cast<double>(depth)},
                {"full_depth", static_cast<double>(full_depth)},
                {"clamped", clamped ? 1.0 : 0.0}};

    const double lhs_low = r.lhs * (1.0 - opt.tol.backoff);
    if (lhs_low >= c * interval.certified_upper())
        r.verdict = Verdict::Confirmed;
    else if (!clamped && r.lhs < c * interval.certified_lower() * (1.0 - opt.tol.rel))
        r.verdict = Verdict::Refuted;
    else
        r.verdict = Verdict::Inconclusive;
    if (clamped)
        r.notes.push_back("depth 2d^3 clamped to the enumeration cap; REFUTED is disabled");
    return r;
}

TheoremReport check_boca_new(const MatrixSet& s, const NormSpec& n, const JsrInterval& interval,
                             const CheckOptions& opt)
{
    const std::size_t dim = s.dim();
    const double d = static_cast<double>(dim);
    const int n1 = 2 * static_cast<int>(dim * dim);
    const int feasible = max_depth_within(s.size(), opt.limits.enumeration_cap);
    const bool clamped = feasible < n1;
    const int depth = std::min(n1, feasible);
    if (depth < 1)
        throw Error(ErrorCode::BudgetExceeded, "enumeration cap too small for depth 1");
    const double constant = 128.0 * std::pow(d, 4.0);

    TheoremReport r;
    r.theorem = TheoremId::BocaNew;
    const auto ub = upper_bound_detail(s, depth, n, opt.limits);
    const double set = ub.level_norms[1];
    const double log_set = std::log(set);

    // log |S^{n1}|, exact when n1 fits the budget; otherwise the best
    // submultiplicative bound |S^j|^q |S^r| with n1 = q j + r.
    double log_lhs;
    if (!clamped) {
        log_lhs = std::log(ub.level_norms[n1]);
    } else {
        log_lhs = n1 * log_set;
        for (int j = 1; j <= depth; ++j) {
            const int q = n1 / j;
            const int rem = n1 % j;
            log_lhs = std::min(log_lhs, q * std::log(ub.level_norms[j]) +
                                            std::log(ub.level_norms[rem]));
        }
    }
    r.lhs = std::exp(log_lhs);
    const double log_tail = (n1 - 1) * log_set;
    r.rhs_at_lower = constant * interval.lower * std::exp(log_tail);
    r.rhs_at_upper = constant * interval.upper * std::exp(log_tail);
    r.constants = {{"d", d}, {"n1", static_cast<double>(n1)}, {"C", constant}, {"set_norm", set}};
    r.budget = {{"depth", static_cast<double>(depth)},
                {"n1", static_cast<double>(n1)},
                {"clamped", clamped ? 1.0 : 0.0}};

    // Compared in log space: |S|^{n1-1} overflows quickly for large d.
    const double log_c = std::log(constant);
    const double log_rhs_low = log_c + std::log(interval.certified_lower()) + log_tail;
    const double log_rhs_high = log_c + std::log(interval.certified_upper()) + log_tail;
    if (log_lhs <= log_rhs_low)
        r.verdict = Verdict::Confirmed;
    else if (!clamped && log_lhs > log_rhs_high + std::log1p(opt.tol.rel))
        r.verdict = Verdict::Refuted;
    else
        r.verdict = Verdict::Inconclusive;
    if (clamped)
        r.notes.push_back("n1 = 2d^2 exceeds the enumeration cap; lhs is a submultiplicative "
                          "upper bound and REFUTED is disabled");
    return r;
}

TheoremReport check_bg_el(const MatrixSet& s, const JsrInterval& interval, double eps,
                          const BgElOptions& opt)
{
    if (!(eps > 0.0 && eps < 1.0))
        throw Error(ErrorCode::InvalidArgument, "eps must lie in (0, 1)");
    const std::size_t dim = s.dim();
    const double d = static_cast<double>(dim);
    const double n0 = bg_el_n0(dim);
    const double n_required = std::ceil(std::pow(eps, -d * d) * n0);

    TheoremReport r;
    r.theorem = TheoremId::BgEl;
    r.constants = {{"d", d}, {"eps", eps}, {"n0", n0}, {"n_required", n_required}};

    int maxlen = std::max(2, opt.maxlen);
    bool full_budget = false;
    if (dim == 1 && n_required <= 1e7) {
        maxlen = std::max(maxlen, static_cast<int>(n_required));
        full_budget = true;
    }
    r.budget = {{"maxlen", static_cast<double>(maxlen)}, {"full_budget", full_budget ? 1.0 : 0.0}};
    if (!full_budget)
        r.notes.push_back("n0(d) budget not reachable; checking for a witness within maxlen only");

    if (!(interval.upper > 0.0)) {
        r.verdict = Verdict::Inconclusive;
        r.notes.push_back("rho(S) = 0; the statement assumes rho(S) = 1");
        return r;
    }

    const double scale = 1.0 / interval.upper;
    const MatrixSet scaled = s.scaled(scale);
    const double lower = interval.certified_lower() * scale;
    r.constants["scale"] = scale;

    TrajectoryOptions to;
    to.maxlen = maxlen;
    to.seed = opt.seed;
    to.eps = eps;
    to.tol = opt.check.tol;
    const auto found = trajectory_return_search(scaled, NormSpec::spectral(), to);

    // A certificate for A = eval(w) / |eval(w)| proves Lambda(eval(w)) >= bound * |eval(w)|.
    const TrajectoryCandidate* chosen = nullptr;
    for (const auto& c : found.candidates) {
        const double k = static_cast<double>(c.word.length());
        const double proven = c.certificate.bound * spectral_norm(evaluate(scaled, c.word));
        if (proven >= (1.0 - eps) * std::pow(lower, k) &&
            (!chosen || shortlex_less(c.word, chosen->word)))
            chosen = &c;
    }
    const Word& w = chosen ? chosen->word : found.word;
    const double k = static_cast<double>(w.length());
    const double lam = spectral_radius(evaluate(scaled, w));

    r.lhs = lam;
    r.rhs_at_lower = (1.0 - eps) * std::pow(lower, k);
    r.rhs_at_upper = (1.0 - eps);
    r.witnesses.push_back(w);
    r.constants["certificate_bound"] = chosen ? chosen->certificate.bound : found.certificate.bound;
    r.constants["return_distance"] = chosen ? chosen->return_distance : found.return_distance;
    r.constants["certified_by_residual"] = chosen ? 1.0 : 0.0;
    r.verdict = lam >= r.rhs_at_lower ? Verdict::Confirmed : Verdict::Inconclusive;
    return r;
}

} // namespace jsr
