#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "jsr/certificates.hpp"
#include "oracles.hpp"

using namespace jsr;

namespace {

Matrix m2(Complex a, Complex b, Complex c, Complex d)
{
    Matrix m(2, 2);
    m << a, b, c, d;
    return m;
}

Matrix unit(std::size_t d, std::size_t i, std::size_t j)
{
    Matrix m = Matrix::Zero(d, d);
    m(i, j) = 1.0;
    return m;
}

Matrix rotation(double t)
{
    return m2(std::cos(t), -std::sin(t), std::sin(t), std::cos(t));
}

Vector vec(std::initializer_list<Complex> xs)
{
    Vector v(static_cast<Eigen::Index>(xs.size()));
    Eigen::Index i = 0;
    for (Complex x : xs)
        v(i++) = x;
    return v;
}

const double kPhi = (1.0 + std::sqrt(5.0)) / 2.0;

JsrInterval estimate(const MatrixSet& s, int depth)
{
    EstimateConfig c;
    c.depth = depth;
    return jsr_estimate(s, c);
}

} // namespace

TEST_CASE("residual certificate examples")
{
    const Matrix a = m2(0.5, 0.1, 0.0, 0.2);
    const auto exact = residual_certificate(a, vec({1, 0}), 0.5, NormSpec::spectral());
    CHECK(exact.eps == 0.0);
    CHECK(exact.bound == doctest::Approx(0.5));

    const auto idem = residual_certificate(m2(1, 0, 0, 0), vec({1, 0}), 1.0, NormSpec::spectral());
    CHECK(idem.residual == 0.0);
    CHECK(idem.bound == doctest::Approx(1.0));

    const auto vac = residual_certificate(m2(0.9, 0, 0, 0.1), vec({1, 0}), 1.0, NormSpec::spectral());
    CHECK(vac.residual == doctest::Approx(0.1));
    CHECK(vac.eps == doctest::Approx(std::sqrt(0.1)));
    CHECK(vac.bound == 0.0);
}

TEST_CASE("residual certificate rejects unmet hypotheses")
{
    auto code = [](auto&& f) {
        try {
            f();
        } catch (const Error& e) {
            return e.code();
        }
        return ErrorCode::InvalidArgument;
    };
    CHECK(code([] { residual_certificate(m2(2, 0, 0, 0), vec({1, 0}), 1.0, NormSpec::spectral()); }) ==
          ErrorCode::HypothesisUnmet);
    CHECK(code([] { residual_certificate(m2(1, 0, 0, 0), vec({2, 0}), 1.0, NormSpec::spectral()); }) ==
          ErrorCode::HypothesisUnmet);
    CHECK(code([] { residual_certificate(m2(1, 0, 0, 0), vec({1, 0}), 3.0, NormSpec::spectral()); }) ==
          ErrorCode::HypothesisUnmet);
}

TEST_CASE("residual certificate bound never exceeds the spectral radius")
{
    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> unif(-1.0, 1.0);
    int informative = 0;
    for (int rep = 0; rep < 300; ++rep) {
        const std::size_t d = 1 + rep % 4;
        Matrix a = oracle::random_gaussian(d, rng);
        a /= spectral_norm(a);
        // Perturbed eigenpairs give small but nonzero residuals.
        Eigen::ComplexEigenSolver<Matrix> es(a);
        Vector x = es.eigenvectors().col(0) + 1e-3 * unif(rng) * oracle::random_gaussian(d, rng).col(0);
        x /= x.norm();
        Complex lambda = es.eigenvalues()(0) * (1.0 + 1e-3 * unif(rng));
        if (std::abs(lambda) > 2.0)
            continue;
        const auto c = residual_certificate(a, x, lambda, NormSpec::spectral());
        CHECK(c.bound <= oracle::spectral_radius(a) * (1 + 1e-9));
        informative += c.bound > 0.0;
    }
    CHECK(informative > 50);
}

TEST_CASE("siegel combination examples")
{
    const Vector v = vec({0.3, Complex(0.1, 0.2)});
    const auto dup = siegel_combination({v, v}, 1, 0.1, NormSpec::spectral(), {false});
    CHECK(std::abs(dup.coefficients[0]) == 1);
    CHECK(dup.coefficients[0] == -dup.coefficients[1]);
    CHECK(dup.residual == 0.0);

    const int t = 3;
    const double eps = 0.05;
    const Vector e1 = vec({1, 0});
    const Vector near = vec({1, eps / t});
    const auto close = siegel_combination({e1 / near.norm(), near / near.norm()}, t, eps,
                                          NormSpec::spectral(), {false});
    CHECK(close.residual <= eps);

    // d = 1: brute force says (1, -2, 0) reaches 0.
    const std::vector<Vector> xs{vec({1.0}), vec({0.5}), vec({1.0 / 3.0})};
    const auto r = siegel_combination(xs, 2, 1.0 / 3.0, NormSpec::spectral(), {false});
    Complex sum = 0.0;
    bool nonzero = false;
    for (std::size_t i = 0; i < 3; ++i) {
        CHECK(std::abs(r.coefficients[i]) <= 2);
        nonzero = nonzero || r.coefficients[i] != 0;
        sum += static_cast<double>(r.coefficients[i]) * xs[i](0);
    }
    CHECK(nonzero);
    CHECK(std::abs(sum) <= 1.0 / 3.0 + 1e-12);
}

TEST_CASE("siegel hypothesis gate")
{
    CHECK_FALSE(siegel_hypothesis(2, 2, 1, 0.1));
    CHECK(siegel_hypothesis(12, 1, 1, 1.0));
    try {
        siegel_combination({vec({1, 0}), vec({0, 1})}, 1, 0.1, NormSpec::spectral());
        CHECK(false);
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::HypothesisUnmet);
    }
}

TEST_CASE("siegel output re-verifies whenever the hypothesis holds")
{
    std::mt19937_64 rng(32);
    std::uniform_real_distribution<double> unif(-1.0, 1.0);
    int checked = 0;
    for (int rep = 0; rep < 200; ++rep) {
        const std::size_t d = 1;
        const std::size_t n = 6 + rep % 5;
        const int t = 1 + rep % 2;
        const double eps = 0.5 + 0.5 * (rep % 3);
        if (!siegel_hypothesis(n, d, t, eps))
            continue;
        std::vector<Vector> xs;
        for (std::size_t i = 0; i < n; ++i) {
            Vector x = vec({Complex(unif(rng), unif(rng))});
            if (x.norm() > 1.0)
                x /= x.norm();
            xs.push_back(x);
        }
        const auto r = siegel_combination(xs, t, eps, NormSpec::spectral());
        Vector sum = Vector::Zero(1);
        bool nonzero = false;
        for (std::size_t i = 0; i < n; ++i) {
            CHECK(std::abs(r.coefficients[i]) <= t);
            nonzero = nonzero || r.coefficients[i] != 0;
            sum += static_cast<double>(r.coefficients[i]) * xs[i];
        }
        CHECK(nonzero);
        CHECK(sum.norm() <= eps * (1 + 1e-12));
        ++checked;
    }
    CHECK(checked > 20);
}

TEST_CASE("trace bound examples")
{
    CHECK(trace_bound(unit(3, 0, 2)) == 0.0);
    CHECK(trace_bound(Matrix::Identity(2, 2)) == doctest::Approx(4.0));
    CHECK(trace_bound(m2(1, 0, 0, -1)) == doctest::Approx(2.0 * std::sqrt(2.0)));
}

TEST_CASE("trace bound dominates the spectral radius")
{
    std::mt19937_64 rng(33);
    std::uniform_real_distribution<double> unif(-1.0, 1.0);
    for (int rep = 0; rep < 300; ++rep) {
        const std::size_t d = 1 + rep % 5;
        Matrix a(d, d);
        for (std::size_t i = 0; i < d; ++i)
            for (std::size_t j = 0; j < d; ++j)
                a(i, j) = Complex(unif(rng), unif(rng)) / std::sqrt(2.0);
        CHECK(trace_bound(a) >= oracle::spectral_radius(a) * (1 - 1e-9));
    }
}

TEST_CASE("convex hull bound examples")
{
    const auto z = convex_hull_bound_check(MatrixSet({Matrix::Zero(2, 2)}), 1, 50, 1);
    CHECK(z.violations == 0);
    CHECK(z.max_ratio == 0.0);

    const auto sh = convex_hull_bound_check(MatrixSet({unit(2, 0, 1), unit(2, 1, 0)}), 1, 200, 2);
    CHECK(sh.eps == doctest::Approx(1.0));
    CHECK(sh.violations == 0);
    CHECK(sh.max_ratio <= 1.0 / 4.0 + 1e-9);

    const auto h = convex_hull_bound_check(MatrixSet({0.5 * Matrix::Identity(2, 2)}), 1, 50, 3);
    CHECK(h.violations == 0);
    CHECK(h.eps == doctest::Approx(0.5));

    CHECK_THROWS_AS(convex_hull_bound_check(MatrixSet({2.0 * Matrix::Identity(2, 2)}), 1, 5, 1),
                    Error);
}

TEST_CASE("trajectory search examples")
{
    const auto rot = trajectory_return_search(MatrixSet({rotation(2 * M_PI / 5)}),
                                              NormSpec::spectral());
    CHECK(rot.word.length() == 5);
    CHECK(rot.certificate.residual <= 1e-9);
    CHECK(rot.certificate.bound >= 1 - 1e-6);

    std::vector<Matrix> shift3{unit(3, 0, 1), unit(3, 1, 2), unit(3, 2, 0)};
    TrajectoryOptions basis;
    basis.x0 = vec({1, 0, 0});
    const auto sh = trajectory_return_search(MatrixSet(shift3), NormSpec::spectral(), basis);
    CHECK(sh.word.length() == 3);
    CHECK(sh.certificate.bound == doctest::Approx(1.0));

    const MatrixSet up({m2(1, 1, 0, 1) / kPhi, m2(1, 0, 1, 1) / kPhi});
    const auto u = trajectory_return_search(up, NormSpec::spectral());
    CHECK(u.certificate.bound >= 0.8);
}

TEST_CASE("trajectory certificates re-verify")
{
    std::mt19937_64 rng(34);
    for (int rep = 0; rep < 20; ++rep) {
        const std::size_t d = 2 + rep % 2;
        MatrixSet raw({oracle::random_gaussian(d, rng), oracle::random_gaussian(d, rng)});
        const auto iv = estimate(raw, 6);
        const MatrixSet s = raw.scaled(1.0 / iv.upper);
        TrajectoryOptions o;
        o.seed = static_cast<std::uint64_t>(rep);
        const auto r = trajectory_return_search(s, NormSpec::spectral(), o);
        Matrix a = evaluate(s, r.word);
        a /= spectral_norm(a);
        CHECK((a - r.certificate.a).norm() <= 1e-9 * (1 + a.norm()));
        const double residual = (a * r.certificate.x - r.certificate.lambda * r.certificate.x).norm();
        CHECK(residual == doctest::Approx(r.certificate.residual).epsilon(1e-9).scale(1e-12));
        const auto again = residual_certificate(a, r.certificate.x, r.certificate.lambda,
                                                NormSpec::spectral());
        CHECK(again.bound == doctest::Approx(r.certificate.bound).epsilon(1e-9));
        CHECK(r.certificate.bound <= oracle::spectral_radius(a) * (1 + 1e-9));
    }
}

TEST_CASE("trajectory search is deterministic under a seed")
{
    const MatrixSet s({m2(0.6, 0.8, -0.8, 0.6), m2(0.9, 0, 0.3, 0.2)});
    TrajectoryOptions o;
    o.seed = 99;
    const auto a = trajectory_return_search(s, NormSpec::spectral(), o);
    const auto b = trajectory_return_search(s, NormSpec::spectral(), o);
    CHECK(a.word == b.word);
    CHECK(a.certificate.bound == b.certificate.bound);
}

TEST_CASE("near idempotent search examples")
{
    const auto e11 = near_idempotent_search(MatrixSet({unit(2, 0, 0)}), 4, 1e-9);
    REQUIRE(e11);
    CHECK(e11->word == Word{{0}});
    CHECK(e11->defect == 0.0);

    std::vector<Matrix> elementary;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            elementary.push_back(unit(2, i, j));
    const auto el = near_idempotent_search(MatrixSet(elementary), 3, 1e-9);
    REQUIRE(el);
    CHECK(el->word.length() == 1);
    CHECK(el->defect == 0.0);

    const double golden = 2 * M_PI * (std::sqrt(5.0) - 1) / 2;
    CHECK_FALSE(near_idempotent_search(MatrixSet({rotation(golden)}), 50, 1e-3));
    // Oracle scan: no power up to 50 is within 1e-3 of idempotent.
    Matrix p = Matrix::Identity(2, 2);
    for (int k = 1; k <= 50; ++k) {
        p = rotation(golden) * p;
        CHECK(oracle::spectral_norm(p * p - p) > 1e-3);
    }
}

TEST_CASE("polbd checker examples")
{
    const MatrixSet id({Matrix::Identity(2, 2)});
    const auto a = check_polbd(id, estimate(id, 4));
    CHECK(a.lhs == doctest::Approx(1.0));
    CHECK(a.verdict == Verdict::Confirmed);

    const MatrixSet sh({unit(2, 0, 1), unit(2, 1, 0)});
    const auto b = check_polbd(sh, estimate(sh, 4));
    CHECK(b.lhs == doctest::Approx(1.0));
    CHECK(b.budget.at("depth") == 16.0);
    CHECK(b.rhs_at_upper == doctest::Approx(1.0 / (256.0 * 32.0)));
    CHECK(b.verdict == Verdict::Confirmed);

    std::mt19937_64 rng(35);
    const MatrixSet g({oracle::random_real_gaussian(2, rng), oracle::random_real_gaussian(2, rng)});
    CHECK(check_polbd(g, estimate(g, 8)).verdict == Verdict::Confirmed);
}

TEST_CASE("polbd refutes a forged interval")
{
    // An interval far above the truth must be refuted at full depth.
    const MatrixSet s({0.5 * Matrix::Identity(2, 2)});
    JsrInterval forged;
    forged.lower = forged.upper = 1e6;
    CHECK(check_polbd(s, forged).verdict == Verdict::Refuted);
}

TEST_CASE("boca checker examples")
{
    const MatrixSet id({Matrix::Identity(2, 2)});
    const auto a = check_boca_new(id, NormSpec::spectral(), estimate(id, 4));
    CHECK(a.lhs == doctest::Approx(1.0));
    CHECK(a.verdict == Verdict::Confirmed);

    const MatrixSet nil({unit(2, 0, 1)});
    const auto b = check_boca_new(nil, NormSpec::spectral(), estimate(nil, 4));
    CHECK(b.lhs == 0.0);
    CHECK(b.verdict == Verdict::Confirmed);

    const std::vector<Matrix> up{m2(1, 1, 0, 1), m2(1, 0, 1, 1)};
    const MatrixSet u(up);
    const auto c = check_boca_new(u, NormSpec::spectral(), estimate(u, 8));
    CHECK(c.constants.at("n1") == 8.0);
    CHECK(c.lhs == doctest::Approx(oracle::level_norm(up, 8, oracle::spectral_norm)).epsilon(1e-9));
    CHECK(c.verdict == Verdict::Confirmed);
}

TEST_CASE("boca refutes a forged interval")
{
    const MatrixSet s({Matrix::Identity(2, 2)});
    JsrInterval forged;
    forged.lower = forged.upper = 1e-9;
    CHECK(check_boca_new(s, NormSpec::spectral(), forged).verdict == Verdict::Refuted);
}

TEST_CASE("bg-el checker examples")
{
    const MatrixSet one({Matrix::Identity(1, 1)});
    const auto a = check_bg_el(one, estimate(one, 2), 0.5);
    CHECK(a.constants.at("n0") == 12.0);
    CHECK(a.budget.at("full_budget") == 1.0);
    CHECK(a.verdict == Verdict::Confirmed);
    REQUIRE(!a.witnesses.empty());

    std::mt19937_64 rng(36);
    std::vector<Matrix> mix;
    for (int k = 0; k < 4; ++k) {
        Eigen::HouseholderQR<Matrix> qr(oracle::random_gaussian(2, rng));
        mix.push_back(qr.householderQ());
    }
    Matrix t = Matrix::Zero(2, 2);
    t.diagonal() << 0.5, 1.0 / 3.0;
    mix.push_back(t);
    const MatrixSet m(mix);
    CHECK(check_bg_el(m, estimate(m, 4), 0.25).verdict == Verdict::Confirmed);

    const double golden = 2 * M_PI * (std::sqrt(5.0) - 1) / 2;
    const MatrixSet rot({rotation(golden)});
    std::size_t previous = 0;
    for (double eps : {0.25, 0.05, 0.01}) {
        const auto r = check_bg_el(rot, estimate(rot, 2), eps);
        CHECK(r.verdict == Verdict::Confirmed);
        REQUIRE(!r.witnesses.empty());
        CHECK(r.witnesses.front().length() >= previous);
        previous = r.witnesses.front().length();
    }

    const MatrixSet zero({Matrix::Zero(2, 2)});
    CHECK(check_bg_el(zero, estimate(zero, 2), 0.25).verdict == Verdict::Inconclusive);
    CHECK(bg_el_n0(2) == 9.0 * 256.0);
}
