#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <unordered_map>

#include "detail.hpp"
#include "jsr/certificates.hpp"

namespace jsr {

namespace {

constexpr std::size_t kCandidateLengths = 32;

double working_norm(const WorkingNorm& n, const Vector& x)
{
    return std::visit(
        [&](const auto& norm) -> double {
            using T = std::decay_t<decltype(norm)>;
            if constexpr (std::is_same_v<T, NormSpec>)
                return vector_norm(x, norm);
            else
                return norm(x);
        },
        n);
}

struct Trajectory {
    std::vector<Vector> points;   // normalized in the working norm
    std::vector<int> letters;     // letters[k] maps points[k] to points[k+1]
};

Trajectory greedy_trajectory(const MatrixSet& s, const WorkingNorm& norm, Vector x, int maxlen,
                             bool allow_restart, bool& decayed)
{
    Trajectory t;
    x /= working_norm(norm, x);
    t.points.push_back(x);
    double log_scale = 0.0;
    decayed = false;
    for (int k = 0; k < maxlen; ++k) {
        int best = 0;
        double best_norm = -1.0;
        Vector best_image;
        for (std::size_t i = 0; i < s.size(); ++i) {
            Vector image = s[i] * t.points.back();
            const double v = working_norm(norm, image);
            if (v > best_norm) {
                best_norm = v;
                best = static_cast<int>(i);
                best_image = std::move(image);
            }
        }
        if (!(best_norm > 0.0)) {
            decayed = true;
            return t;
        }
        log_scale += std::log(best_norm);
        if (allow_restart && log_scale < std::log(0.5)) {
            decayed = true;
            return t;
        }
        t.letters.push_back(best);
        t.points.push_back(best_image / best_norm);
    }
    return t;
}

// Distance after aligning the phase of `b` to `a`.
double aligned_distance(const WorkingNorm& norm, const Vector& a, const Vector& b)
{
    const Complex overlap = b.dot(a);
    const double mod = std::abs(overlap);
    const Complex phase = mod > 0.0 ? overlap / mod : Complex(1.0);
    return working_norm(norm, a - phase * b);
}

struct ReturnPair {
    int from = 0;
    int to = 0;
    double distance = INFINITY;
};

// Closest return for every gap length, either from all pairs or from a
// grid of cell size delta/2 over the real coordinates.
std::vector<ReturnPair> closest_returns(const Trajectory& t, const WorkingNorm& norm,
                                        const TrajectoryOptions& opt, std::size_t d)
{
    const int count = static_cast<int>(t.points.size());
    std::vector<ReturnPair> by_gap(count);
    auto consider = [&](int a, int b) {
        const double dist = aligned_distance(norm, t.points[b], t.points[a]);
        ReturnPair& slot = by_gap[b - a];
        if (dist < slot.distance)
            slot = ReturnPair{a, b, dist};
    };
    const auto* spec = std::get_if<NormSpec>(&norm);
    if (count - 1 <= opt.all_pairs_limit && spec && spec->kind() == NormKind::Spectral) {
        // Unit vectors: |a - phase b|^2 = 2 - 2 |<a, b>|. Rank by overlap,
        // then measure the winner of each gap exactly.
        Matrix points(static_cast<Eigen::Index>(d), count);
        for (int i = 0; i < count; ++i)
            points.col(i) = t.points[i] / t.points[i].norm();
        std::vector<double> best_overlap(count, -1.0);
        std::vector<int> best_from(count, -1);
        for (int b = 1; b < count; ++b) {
            const Eigen::VectorXd overlaps = (points.leftCols(b).adjoint() * points.col(b)).cwiseAbs();
            for (int a = 0; a < b; ++a)
                if (overlaps(a) > best_overlap[b - a]) {
                    best_overlap[b - a] = overlaps(a);
                    best_from[b - a] = a;
                }
        }
        for (int gap = 1; gap < count; ++gap)
            consider(best_from[gap], best_from[gap] + gap);
    } else if (count - 1 <= opt.all_pairs_limit) {
        for (int b = 1; b < count; ++b)
            for (int a = 0; a < b; ++a)
                consider(a, b);
    } else {
        const double delta = std::pow(opt.eps / 4.0, static_cast<double>(d));
        const double cell = delta / 2.0;
        std::map<std::vector<std::int64_t>, std::vector<int>> grid;
        for (int i = 0; i < count; ++i) {
            std::vector<std::int64_t> key(2 * d);
            for (std::size_t j = 0; j < d; ++j) {
                key[2 * j] = static_cast<std::int64_t>(std::floor(t.points[i](j).real() / cell));
                key[2 * j + 1] = static_cast<std::int64_t>(std::floor(t.points[i](j).imag() / cell));
            }
            grid[key].push_back(i);
        }
        for (const auto& [key, members] : grid)
            for (std::size_t x = 0; x < members.size(); ++x)
                for (std::size_t y = x + 1; y < members.size(); ++y)
                    consider(members[x], members[y]);
        // Consecutive points always give a (possibly poor) candidate.
        for (int b = 1; b < count; ++b)
            consider(b - 1, b);
    }
    std::vector<ReturnPair> out;
    for (int gap = 1; gap < count; ++gap)
        if (std::isfinite(by_gap[gap].distance))
            out.push_back(by_gap[gap]);
    std::stable_sort(out.begin(), out.end(), [](const ReturnPair& x, const ReturnPair& y) {
        return x.distance < y.distance;
    });
    if (out.size() > kCandidateLengths)
        out.resize(kCandidateLengths);
    return out;
}

} // namespace

TrajectoryResult trajectory_return_search(const MatrixSet& s, const WorkingNorm& norm,
                                          const TrajectoryOptions& opt)
{
    if (opt.maxlen < 2)
        throw Error(ErrorCode::InvalidArgument, "maxlen must be >= 2");
    const std::size_t d = s.dim();
    std::mt19937_64 rng(opt.seed);

    Vector x0 = opt.x0 ? *opt.x0 : detail::random_unit_vector(d, rng);
    if (static_cast<std::size_t>(x0.size()) != d || !(x0.norm() > 0.0))
        throw Error(ErrorCode::InvalidArgument, "x0 must be a nonzero vector of dimension d");

    TrajectoryResult result;
    Trajectory t;
    for (int attempt = 0;; ++attempt) {
        bool decayed = false;
        t = greedy_trajectory(s, norm, x0, opt.maxlen, attempt < opt.max_restarts, decayed);
        if (!decayed || attempt >= opt.max_restarts)
            break;
        ++result.restarts;
        x0 = detail::random_unit_vector(d, rng);
    }
    if (t.letters.empty())
        throw Error(ErrorCode::NotFound, "trajectory collapsed to zero immediately");

    const auto candidates = closest_returns(t, norm, opt, d);
    const NormSpec spectral = NormSpec::spectral();
    bool have = false;
    for (const auto& pair : candidates) {
        Word w;
        Matrix a = Matrix::Identity(d, d);
        for (int k = pair.from; k < pair.to; ++k) {
            w.indices.push_back(t.letters[k]);
            a = (s[t.letters[k]] * a).eval();
        }
        const double a_norm = spectral_norm(a);
        if (!(a_norm > 0.0))
            continue;
        a /= a_norm;
        Vector x = t.points[pair.from];
        x /= x.norm();
        const Complex lambda = x.dot(a * x);
        ResidualCertificate cert = residual_certificate(a, x, lambda, spectral, opt.tol);
        result.candidates.push_back({w, cert, pair.distance});
        const bool better =
            !have || cert.bound > result.certificate.bound + opt.tie_tolerance ||
            (cert.bound >= result.certificate.bound - opt.tie_tolerance &&
             shortlex_less(w, result.word));
        if (better) {
            result.word = std::move(w);
            result.certificate = std::move(cert);
            result.return_distance = pair.distance;
            have = true;
        }
    }
    if (!have)
        throw Error(ErrorCode::NotFound, "every return product vanished");
    result.vacuous = !(result.return_distance < 1.0);
    return result;
}

std::optional<IdempotentHit> near_idempotent_search(const MatrixSet& s, int maxlen, double tol,
                                                    const Limits& limits)
{
    if (maxlen < 1)
        throw Error(ErrorCode::InvalidArgument, "maxlen must be >= 1");
    const int depth = std::min(maxlen, max_depth_within(s.size(), limits.enumeration_cap));
    if (depth < 1)
        return std::nullopt;
    EnumerationOptions eo;
    eo.depth = depth;
    eo.limits = limits;
    std::optional<IdempotentHit> best;
    for_each_product(s, eo, [&](const ProductNode& node) {
        const double size = spectral_norm(node.product);
        if (size < 0.5)
            return Descend::Yes;
        const double defect = spectral_norm(node.product * node.product - node.product) / size;
        Word w{node.indices};
        if (!best || defect < best->defect - 1e-15 ||
            (defect <= best->defect + 1e-15 && shortlex_less(w, best->word)))
            best = IdempotentHit{std::move(w), defect};
        return Descend::Yes;
    });
    if (best && best->defect <= tol)
        return best;
    return std::nullopt;
}

} // namespace jsr
