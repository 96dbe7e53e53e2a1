#include "jsr/jsr_bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "detail.hpp"

namespace jsr {

bool detail::LowerTracker::offer(double v, const std::vector<int>& w)
{
    if (!has_value) {
        value = v;
        witness.indices = w;
        has_value = true;
        return true;
    }
    const double band = tol * std::max(v, value);
    const double diff = v - value;
    if (diff > band || (diff >= -band && shortlex_less(Word{w}, witness))) {
        value = v;
        witness.indices = w;
        return true;
    }
    return false;
}

UpperBoundResult upper_bound_detail(const MatrixSet& s, int depth, const NormSpec& n,
                                    const Limits& limits)
{
    if (depth < 1)
        throw Error(ErrorCode::InvalidArgument, "upper_bound depth must be >= 1");
    UpperBoundResult out;
    out.level_norms.assign(depth + 1, 0.0);
    out.level_norms[0] = 1.0;
    EnumerationOptions opt;
    opt.depth = depth;
    opt.norm = n;
    opt.limits = limits;
    for_each_product(s, opt, [&](const ProductNode& node) {
        double& m = out.level_norms[node.indices.size()];
        m = std::max(m, node.norm);
        return Descend::Yes;
    });
    out.value = std::numeric_limits<double>::infinity();
    for (int k = 1; k <= depth; ++k) {
        const double v = std::pow(out.level_norms[k], 1.0 / k);
        if (v < out.value) {
            out.value = v;
            out.depth = k;
        }
    }
    return out;
}

LowerBoundResult lower_bound(const MatrixSet& s, int depth, const Limits& limits,
                             const Tolerances& tol)
{
    if (depth < 1)
        throw Error(ErrorCode::InvalidArgument, "lower_bound depth must be >= 1");
    detail::LowerTracker best{tol.rel, 0.0, {}, false};
    EnumerationOptions opt;
    opt.depth = depth;
    opt.limits = limits;
    for_each_product(s, opt, [&](const ProductNode& node) {
        const double k = static_cast<double>(node.indices.size());
        best.offer(std::pow(spectral_radius(node.product), 1.0 / k), node.indices);
        return Descend::Yes;
    });
    return LowerBoundResult{best.value, best.witness};
}

namespace {

struct EstimatePass {
    double lower = 0.0;
    Word witness;
    std::vector<double> level_norms;
    std::uint64_t visited = 0;
    std::uint64_t pruned = 0;
};

// A node w of length k is cut when every extension of length k+m (m <= rest)
// satisfies |eval| <= |w| |S|^m < lower^(k+m). Such extensions can neither
// beat the running lower bound nor attain a level maximum, since
// |S^j| >= rho^j >= lower^j; both bounds therefore equal the exhaustive ones.
EstimatePass run_estimate_pass(const MatrixSet& s, int depth, const EstimateConfig& cfg)
{
    EstimatePass pass;
    pass.level_norms.assign(depth + 1, 0.0);
    pass.level_norms[0] = 1.0;
    detail::LowerTracker best{cfg.tol.rel, 0.0, {}, false};

    const double log_set_norm = std::log(set_norm(s, cfg.norm));
    const double log_margin = std::log1p(-2.0 * cfg.tol.rel);

    EnumerationOptions opt;
    opt.depth = depth;
    opt.norm = cfg.norm;
    opt.limits = cfg.limits;
    for_each_product(s, opt, [&](const ProductNode& node) {
        ++pass.visited;
        const int k = static_cast<int>(node.indices.size());
        double& level = pass.level_norms[k];
        level = std::max(level, node.norm);
        best.offer(std::pow(spectral_radius(node.product), 1.0 / k), node.indices);

        if (!cfg.prune || k == depth || !(best.value > 0.0))
            return Descend::Yes;
        const double log_lower = std::log(best.value);
        const int rest = depth - k;
        const double growth = std::max(0.0, rest * (log_set_norm - log_lower));
        const double log_ratio = std::log(node.norm) - k * log_lower + growth;
        if (log_ratio < log_margin) {
            ++pass.pruned;
            return Descend::No;
        }
        return Descend::Yes;
    });
    pass.lower = best.value;
    pass.witness = best.witness;
    return pass;
}

} // namespace

JsrInterval jsr_estimate(const MatrixSet& s, const EstimateConfig& config)
{
    if (config.depth < 1)
        throw Error(ErrorCode::InvalidArgument, "estimate depth must be >= 1");
    JsrInterval out;
    out.norm_used = config.norm;
    out.backoff = config.tol.backoff;

    int depth = config.depth;
    const int feasible = max_depth_within(s.size(), config.limits.enumeration_cap);
    out.diagnostics["requested_depth"] = config.depth;
    out.diagnostics["budget_clamped"] = 0.0;
    if (depth > feasible) {
        if (feasible < 1)
            throw Error(ErrorCode::BudgetExceeded, "enumeration cap too small for depth 1");
        depth = feasible;
        out.diagnostics["budget_clamped"] = 1.0;
    }

    // With a target width, deepen one level at a time; otherwise go straight
    // to the final depth.
    int start = config.target_width ? 1 : depth;
    EstimatePass pass;
    std::uint64_t visited = 0;
    std::uint64_t pruned = 0;
    int reached = start;
    for (int d = start; d <= depth; ++d) {
        pass = run_estimate_pass(s, d, config);
        visited += pass.visited;
        pruned += pass.pruned;
        reached = d;
        double upper = std::numeric_limits<double>::infinity();
        for (int k = 1; k <= d; ++k)
            upper = std::min(upper, std::pow(pass.level_norms[k], 1.0 / k));
        if (config.target_width && upper - pass.lower <= *config.target_width)
            break;
    }

    out.lower = pass.lower;
    out.lower_witness = pass.witness;
    out.upper = std::numeric_limits<double>::infinity();
    for (int k = 1; k <= reached; ++k) {
        const double v = std::pow(pass.level_norms[k], 1.0 / k);
        if (v < out.upper) {
            out.upper = v;
            out.upper_depth = k;
        }
    }
    out.diagnostics["depth_reached"] = reached;
    out.diagnostics["words_visited"] = static_cast<double>(visited);
    out.diagnostics["subtrees_pruned"] = static_cast<double>(pruned);
    return out;
}

} // namespace jsr
