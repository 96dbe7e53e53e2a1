#include "jsr/ultrametric.hpp"

#include <algorithm>
#include <cctype>
#include <deque>

namespace jsr::padic {

namespace mp = boost::multiprecision;

BigRational parse_rational(std::string_view text)
{
    while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front())))
        text.remove_prefix(1);
    while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back())))
        text.remove_suffix(1);
    auto bad = [&](const char* why) {
        return Error(ErrorCode::ParseError,
                     "invalid rational \"" + std::string(text) + "\": " + why);
    };
    const auto slash = text.find('/');
    std::string_view num = text.substr(0, slash);
    std::string_view den = slash == std::string_view::npos ? std::string_view("1")
                                                           : text.substr(slash + 1);
    auto integer = [&](std::string_view s, bool allow_sign) {
        std::string_view digits = s;
        if (allow_sign && !digits.empty() && (digits.front() == '-' || digits.front() == '+'))
            digits.remove_prefix(1);
        if (digits.empty() ||
            !std::all_of(digits.begin(), digits.end(),
                         [](char c) { return std::isdigit(static_cast<unsigned char>(c)); }))
            throw bad("expected base-10 digits");
        std::string clean(s);
        if (clean.front() == '+')
            clean.erase(0, 1);
        return BigInt(clean);
    };
    const BigInt n = integer(num, true);
    const BigInt d = integer(den, false);
    if (d == 0)
        throw bad("zero denominator");
    return BigRational(n, d);
}

std::string format_rational(const BigRational& q)
{
    if (mp::denominator(q) == 1)
        return mp::numerator(q).str();
    return mp::numerator(q).str() + "/" + mp::denominator(q).str();
}

bool is_prime(std::uint64_t n)
{
    if (n < 2)
        return false;
    for (std::uint64_t f = 2; f <= n / f; ++f)
        if (n % f == 0)
            return false;
    return true;
}

std::optional<long> valuation(const BigInt& z, std::uint64_t p)
{
    if (z == 0)
        return std::nullopt;
    BigInt rest;
    const BigInt prime(p);
    return static_cast<long>(
        mpz_remove(rest.backend().data(), z.backend().data(), prime.backend().data()));
}

std::optional<long> padic_valuation(const BigRational& q, std::uint64_t p)
{
    if (q == 0)
        return std::nullopt;
    return *valuation(mp::numerator(q), p) - *valuation(mp::denominator(q), p);
}

PAdicMagnitude PAdicMagnitude::operator*(const PAdicMagnitude& o) const
{
    if (is_bottom() || o.is_bottom())
        return bottom();
    return from_exponent(exponent() + o.exponent());
}

PAdicMagnitude PAdicMagnitude::pow(long k) const
{
    if (k == 0)
        return one();
    if (is_bottom())
        return bottom();
    return from_exponent(exponent() * k);
}

PAdicMagnitude PAdicMagnitude::root(long k) const
{
    if (k < 1)
        throw Error(ErrorCode::InvalidArgument, "root index must be >= 1");
    if (is_bottom())
        return bottom();
    return from_exponent(exponent() / k);
}

std::strong_ordering PAdicMagnitude::operator<=>(const PAdicMagnitude& o) const
{
    if (is_bottom() || o.is_bottom())
        return o.is_bottom() <=> is_bottom();
    if (exponent() == o.exponent())
        return std::strong_ordering::equal;
    return exponent() > o.exponent() ? std::strong_ordering::less : std::strong_ordering::greater;
}

bool PAdicMagnitude::operator==(const PAdicMagnitude& o) const
{
    return (*this <=> o) == std::strong_ordering::equal;
}

std::string PAdicMagnitude::to_string() const
{
    if (is_bottom())
        return "0";
    return "p^(" + format_rational(-exponent()) + ")";
}

RationalMatrix RationalMatrix::identity(std::size_t d)
{
    RationalMatrix m(d);
    for (std::size_t i = 0; i < d; ++i)
        m(i, i) = 1;
    return m;
}

RationalMatrix RationalMatrix::operator*(const RationalMatrix& o) const
{
    RationalMatrix out(dim_);
    for (std::size_t i = 0; i < dim_; ++i)
        for (std::size_t k = 0; k < dim_; ++k) {
            const BigRational& a = (*this)(i, k);
            if (a == 0)
                continue;
            for (std::size_t j = 0; j < dim_; ++j)
                out(i, j) += a * o(k, j);
        }
    return out;
}

bool RationalMatrix::is_zero() const
{
    return std::all_of(data_.begin(), data_.end(), [](const BigRational& q) { return q == 0; });
}

PAdicMatrixSet::PAdicMatrixSet(std::vector<RationalMatrix> members, std::uint64_t prime,
                               const Limits& limits)
    : prime_(prime), members_(std::move(members))
{
    if (members_.empty())
        throw Error(ErrorCode::InvalidArgument, "matrix set must have at least one member");
    if (!is_prime(prime))
        throw Error(ErrorCode::InvalidArgument, std::to_string(prime) + " is not prime");
    dim_ = members_.front().dim();
    if (dim_ == 0 || dim_ > limits.max_dim)
        throw Error(ErrorCode::InvalidArgument, "dimension out of range");
    for (const auto& m : members_)
        if (m.dim() != dim_)
            throw Error(ErrorCode::InvalidArgument, "members must share a dimension");
}

PAdicMatrixSet PAdicMatrixSet::power(int k, const Limits& limits) const
{
    if (k < 1)
        throw Error(ErrorCode::InvalidArgument, "power must be >= 1");
    if (std::pow(static_cast<double>(size()), k) > static_cast<double>(limits.enumeration_cap))
        throw Error(ErrorCode::BudgetExceeded, "product set exceeds the enumeration cap");
    std::vector<RationalMatrix> current = members_;
    for (int step = 1; step < k; ++step) {
        std::vector<RationalMatrix> next;
        for (const auto& prefix : current)
            for (const auto& s : members_)
                next.push_back(s * prefix);
        current = std::move(next);
    }
    return PAdicMatrixSet(std::move(current), prime_, limits);
}

RationalMatrix evaluate(const PAdicMatrixSet& s, const Word& w)
{
    RationalMatrix out = RationalMatrix::identity(s.dim());
    for (int i : w.indices) {
        if (i < 0 || static_cast<std::size_t>(i) >= s.size())
            throw Error(ErrorCode::InvalidArgument, "word index out of range");
        out = s[i] * out;
    }
    return out;
}

namespace {

// det(tI - M) for row-major integer M, coefficients in descending order.
std::vector<BigInt> berkowitz(const std::vector<BigInt>& m, std::size_t n)
{
    auto at = [&](std::size_t i, std::size_t j) -> const BigInt& { return m[i * n + j]; };
    std::vector<BigInt> vect{BigInt(1), BigInt(-at(0, 0))};
    for (std::size_t r = 1; r < n; ++r) {
        std::vector<BigInt> q(r + 2);
        q[0] = 1;
        q[1] = -at(r, r);
        std::vector<BigInt> v(r);
        for (std::size_t i = 0; i < r; ++i)
            v[i] = at(i, r);
        for (std::size_t k = 2; k <= r + 1; ++k) {
            BigInt dot = 0;
            for (std::size_t i = 0; i < r; ++i)
                dot += at(r, i) * v[i];
            q[k] = -dot;
            if (k == r + 1)
                break;
            std::vector<BigInt> next(r);
            for (std::size_t i = 0; i < r; ++i)
                for (std::size_t j = 0; j < r; ++j)
                    next[i] += at(i, j) * v[j];
            v = std::move(next);
        }
        std::vector<BigInt> out(r + 2);
        for (std::size_t i = 0; i < r + 2; ++i)
            for (std::size_t j = 0; j <= std::min(i, r); ++j)
                out[i] += q[i - j] * vect[j];
        vect = std::move(out);
    }
    return vect;
}

// A = M / D with integer M and D = lcm of entry denominators.
struct ClearedMatrix {
    std::vector<BigInt> m;
    BigInt denominator;
};

ClearedMatrix clear_denominators(const RationalMatrix& a)
{
    ClearedMatrix c;
    c.denominator = 1;
    for (const auto& q : a.entries())
        c.denominator = mp::lcm(c.denominator, mp::denominator(q));
    c.m.reserve(a.entries().size());
    for (const auto& q : a.entries())
        c.m.push_back(mp::numerator(q) * (c.denominator / mp::denominator(q)));
    return c;
}

// Smallest root valuation of det(tI - M) from descending integer coefficients.
std::optional<BigRational> min_root_valuation(const std::vector<BigInt>& desc, std::uint64_t p)
{
    const long d = static_cast<long>(desc.size()) - 1;
    std::optional<BigRational> best;
    // desc[j] is the coefficient of t^(d-j).
    for (long j = 1; j <= d; ++j) {
        const auto v = valuation(desc[j], p);
        if (!v)
            continue;
        BigRational candidate(*v, j);
        if (!best || candidate < *best)
            best = std::move(candidate);
    }
    return best;
}

} // namespace

std::vector<BigRational> char_poly_exact(const RationalMatrix& a)
{
    const std::size_t d = a.dim();
    if (d == 0)
        throw Error(ErrorCode::InvalidArgument, "empty matrix");
    const auto cleared = clear_denominators(a);
    const auto desc = berkowitz(cleared.m, d);
    // Coefficient of t^i in det(tI - M/D) is b_i / D^(d-i).
    std::vector<BigRational> asc(d + 1);
    BigInt scale = 1;
    for (std::size_t i = d + 1; i-- > 0;) {
        asc[i] = BigRational(desc[d - i], scale);
        scale *= cleared.denominator;
    }
    return asc;
}

NewtonPolygon newton_polygon(const std::vector<BigRational>& coeffs, std::uint64_t p)
{
    if (coeffs.size() < 2)
        throw Error(ErrorCode::InvalidArgument, "polynomial must have degree >= 1");
    NewtonPolygon poly;
    for (std::size_t i = 0; i < coeffs.size(); ++i)
        if (const auto v = padic_valuation(coeffs[i], p))
            poly.points.emplace_back(static_cast<long>(i), *v);
    if (poly.points.empty())
        throw Error(ErrorCode::InvalidArgument, "zero polynomial");
    poly.zero_roots = poly.points.front().first;

    // Monotone chain, lower hull only.
    auto cross = [](const std::pair<long, long>& o, const std::pair<long, long>& a,
                    const std::pair<long, long>& b) {
        return (a.first - o.first) * (b.second - o.second) -
               (a.second - o.second) * (b.first - o.first);
    };
    for (const auto& pt : poly.points) {
        while (poly.lower_hull.size() >= 2 &&
               cross(poly.lower_hull[poly.lower_hull.size() - 2], poly.lower_hull.back(), pt) <= 0)
            poly.lower_hull.pop_back();
        poly.lower_hull.push_back(pt);
    }
    for (std::size_t k = 0; k + 1 < poly.lower_hull.size(); ++k) {
        const auto& [i, vi] = poly.lower_hull[k];
        const auto& [j, vj] = poly.lower_hull[k + 1];
        poly.root_valuations.emplace_back(BigRational(vi - vj, j - i), j - i);
    }
    if (!poly.root_valuations.empty())
        poly.min_root_valuation = poly.root_valuations.back().first;
    return poly;
}

PAdicMagnitude max_root_magnitude(const std::vector<BigRational>& coeffs, std::uint64_t p)
{
    if (coeffs.size() < 2 || coeffs.back() != 1)
        throw Error(ErrorCode::InvalidArgument, "polynomial must be monic of degree >= 1");
    const auto poly = newton_polygon(coeffs, p);
    if (!poly.min_root_valuation)
        return PAdicMagnitude::bottom();
    return PAdicMagnitude::from_exponent(*poly.min_root_valuation);
}

int ell_bound(int d)
{
    if (d < 1)
        throw Error(ErrorCode::InvalidArgument, "d must be >= 1");
    if (d == 1)
        return 1;
    // ceil(2 d log2 d) is the least m with 2^m >= d^(2d).
    const BigInt power = mp::pow(BigInt(d), static_cast<unsigned>(2 * d));
    long m = static_cast<long>(mp::msb(power));
    if (power != (BigInt(1) << m))
        ++m;
    const long shitov = m + 4L * d - 4;
    return static_cast<int>(std::min<long>(static_cast<long>(d) * d, shitov));
}

PAdicMagnitude ultrametric_set_norm(const PAdicMatrixSet& s)
{
    PAdicMagnitude best = PAdicMagnitude::bottom();
    for (const auto& m : s.members())
        for (const auto& q : m.entries())
            if (const auto v = padic_valuation(q, s.prime())) {
                auto mag = PAdicMagnitude::from_exponent(*v);
                if (mag > best)
                    best = std::move(mag);
            }
    return best;
}

namespace {

struct WordBest {
    PAdicMagnitude value = PAdicMagnitude::bottom();
    Word word;
    bool has = false;

    void offer(PAdicMagnitude v, const std::vector<int>& w)
    {
        Word candidate{w};
        if (!has || v > value || (v == value && shortlex_less(candidate, word))) {
            value = std::move(v);
            word = std::move(candidate);
            has = true;
        }
    }
};

// DFS over words with integer products; visit(indices, product, scale_valuation)
// where eval(w) = p^(scale_valuation) * unit * product.
template <class Visit>
void walk_integer_products(const PAdicMatrixSet& s, int max_length, const Limits& limits,
                           Visit&& visit)
{
    if (max_length < 1)
        throw Error(ErrorCode::InvalidArgument, "word length must be >= 1");
    if (word_count(s.size(), max_length) > limits.enumeration_cap)
        throw Error(ErrorCode::BudgetExceeded,
                    "exact enumeration up to length " + std::to_string(max_length) + " over " +
                        std::to_string(s.size()) + " members exceeds the cap of " +
                        std::to_string(limits.enumeration_cap) +
                        " words; raise --cap or use a smaller instance");
    const std::size_t d = s.dim();
    std::vector<std::vector<BigInt>> ints;
    std::vector<long> scale;
    for (const auto& m : s.members()) {
        auto c = clear_denominators(m);
        ints.push_back(std::move(c.m));
        scale.push_back(-*valuation(c.denominator, s.prime()));
    }
    std::vector<std::vector<BigInt>> stack(max_length, std::vector<BigInt>(d * d));
    std::vector<int> indices;
    auto rec = [&](auto&& self, int level, long scale_val) -> void {
        for (std::size_t i = 0; i < s.size(); ++i) {
            auto& prod = stack[level];
            if (level == 0) {
                prod = ints[i];
            } else {
                const auto& prev = stack[level - 1];
                const auto& a = ints[i];
                for (std::size_t r = 0; r < d; ++r)
                    for (std::size_t c = 0; c < d; ++c) {
                        BigInt acc = 0;
                        for (std::size_t k = 0; k < d; ++k)
                            acc += a[r * d + k] * prev[k * d + c];
                        prod[r * d + c] = std::move(acc);
                    }
            }
            indices.push_back(static_cast<int>(i));
            const long v = scale_val + scale[i];
            visit(indices, prod, v);
            if (level + 1 < max_length)
                self(self, level + 1, v);
            indices.pop_back();
        }
    };
    rec(rec, 0, 0);
}

} // namespace

PAdicJsr padic_lambda_max(const PAdicMatrixSet& s, int max_length, const Limits& limits)
{
    const std::size_t d = s.dim();
    WordBest best;
    PAdicJsr out;
    out.max_length = max_length;
    walk_integer_products(s, max_length, limits,
                          [&](const std::vector<int>& w, const std::vector<BigInt>& prod, long v) {
                              ++out.words;
                              const auto m = min_root_valuation(berkowitz(prod, d), s.prime());
                              if (!m) {
                                  best.offer(PAdicMagnitude::bottom(), w);
                                  return;
                              }
                              // Eigenvalues of p^v u M have valuations m + v.
                              const long k = static_cast<long>(w.size());
                              best.offer(PAdicMagnitude::from_exponent((*m + v) / k), w);
                          });
    out.rho = best.value;
    if (!out.rho.is_bottom())
        out.witness = best.word;
    return out;
}

PAdicJsr padic_jsr_exact(const PAdicMatrixSet& s, const PAdicOptions& opt)
{
    const int length = opt.max_length.value_or(ell_bound(static_cast<int>(s.dim())));
    return padic_lambda_max(s, length, opt.limits);
}

UltraBocaReport check_ultra_boca(const PAdicMatrixSet& s, const PAdicOptions& opt)
{
    const std::size_t d = s.dim();
    UltraBocaReport r;
    const auto jsr = padic_jsr_exact(s, opt);
    r.rho = jsr.rho;
    r.rho_witness = jsr.witness;
    r.set_norm = ultrametric_set_norm(s);
    r.rhs = r.rho * r.set_norm.pow(static_cast<long>(d) - 1);

    WordBest lhs;
    walk_integer_products(s, static_cast<int>(d), opt.limits,
                          [&](const std::vector<int>& w, const std::vector<BigInt>& prod, long v) {
                              if (w.size() != d)
                                  return;
                              std::optional<long> min_v;
                              for (const auto& z : prod)
                                  if (const auto vz = valuation(z, s.prime()))
                                      min_v = min_v ? std::min(*min_v, *vz) : *vz;
                              lhs.offer(min_v ? PAdicMagnitude::from_exponent(*min_v + v)
                                              : PAdicMagnitude::bottom(),
                                        w);
                          });
    r.lhs = lhs.value;
    r.extremal = lhs.word;
    r.holds = r.lhs <= r.rhs;
    return r;
}

namespace {

// Row-echelon span over Q of vectorized matrices.
class ExactSpan {
public:
    bool add(std::vector<BigRational> v)
    {
        for (const auto& [pivot, row] : rows_) {
            if (v[pivot] == 0)
                continue;
            const BigRational f = v[pivot];
            for (std::size_t j = 0; j < v.size(); ++j)
                if (row[j] != 0)
                    v[j] -= f * row[j];
        }
        const auto it = std::find_if(v.begin(), v.end(), [](const BigRational& q) { return q != 0; });
        if (it == v.end())
            return false;
        const std::size_t pivot = static_cast<std::size_t>(it - v.begin());
        const BigRational f = v[pivot];
        for (auto& q : v)
            q /= f;
        // Keep existing rows reduced in the new pivot column.
        for (auto& [p, row] : rows_) {
            if (row[pivot] == 0)
                continue;
            const BigRational g = row[pivot];
            for (std::size_t j = 0; j < v.size(); ++j)
                if (v[j] != 0)
                    row[j] -= g * v[j];
        }
        rows_.emplace_back(pivot, std::move(v));
        return true;
    }

    std::size_t size() const { return rows_.size(); }
    RationalMatrix element(std::size_t i, std::size_t d) const
    {
        RationalMatrix m(d);
        for (std::size_t k = 0; k < d * d; ++k)
            m(k / d, k % d) = rows_[i].second[k];
        return m;
    }

private:
    std::vector<std::pair<std::size_t, std::vector<BigRational>>> rows_;
};

} // namespace

bool padic_nilpotency_exact(const PAdicMatrixSet& s)
{
    const std::size_t d = s.dim();
    ExactSpan algebra;
    std::deque<RationalMatrix> queue(s.members().begin(), s.members().end());
    while (!queue.empty()) {
        RationalMatrix c = std::move(queue.front());
        queue.pop_front();
        if (!algebra.add(c.entries()))
            continue;
        const RationalMatrix b = algebra.element(algebra.size() - 1, d);
        for (const auto& g : s.members())
            queue.push_back(g * b);
    }
    if (algebra.size() == 0)
        return true;
    std::vector<RationalMatrix> basis;
    for (std::size_t i = 0; i < algebra.size(); ++i)
        basis.push_back(algebra.element(i, d));
    std::vector<RationalMatrix> layer = basis;
    for (std::size_t k = 1; k < d && !layer.empty(); ++k) {
        ExactSpan next;
        std::vector<RationalMatrix> next_layer;
        for (const auto& a : basis)
            for (const auto& w : layer)
                if (next.add((a * w).entries()))
                    next_layer.push_back(next.element(next.size() - 1, d));
        layer = std::move(next_layer);
    }
    return layer.empty();
}

} // namespace jsr::padic
