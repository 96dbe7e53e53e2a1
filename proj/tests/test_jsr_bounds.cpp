#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "jsr/jsr_bounds.hpp"
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

std::vector<Matrix> shift(std::size_t d)
{
    std::vector<Matrix> s;
    for (std::size_t i = 0; i + 1 < d; ++i)
        s.push_back(unit(d, i, i + 1));
    s.push_back(unit(d, d - 1, 0));
    return s;
}

const double kPhi = (1.0 + std::sqrt(5.0)) / 2.0;
const std::vector<Matrix> kUnipotent{m2(1, 1, 0, 1), m2(1, 0, 1, 1)};

Vector e(std::size_t d, std::size_t i)
{
    Vector v = Vector::Zero(d);
    v(i) = 1.0;
    return v;
}

} // namespace

TEST_CASE("upper bound examples")
{
    CHECK(upper_bound(MatrixSet({2.0 * Matrix::Identity(2, 2)}), 3, NormSpec::spectral()) ==
          doctest::Approx(2.0));
    CHECK(upper_bound(MatrixSet({unit(2, 0, 1), unit(2, 1, 0)}), 4, NormSpec::spectral()) ==
          doctest::Approx(1.0));
    const double u = upper_bound(MatrixSet(kUnipotent), 12, NormSpec::spectral());
    CHECK(u >= 1.618);
    CHECK(u <= 1.90);
    CHECK(u == doctest::Approx(oracle::upper(kUnipotent, 12, oracle::spectral_norm)).epsilon(1e-9));
}

TEST_CASE("upper bound detail records every level")
{
    const auto r = upper_bound_detail(MatrixSet(kUnipotent), 5, NormSpec::max_row_sum());
    REQUIRE(r.level_norms.size() == 6);
    CHECK(r.level_norms[0] == 1.0);
    for (int k = 1; k <= 5; ++k)
        CHECK(r.level_norms[k] ==
              doctest::Approx(oracle::level_norm(kUnipotent, k, oracle::row_sum_norm)).epsilon(1e-12));
}

TEST_CASE("lower bound examples")
{
    const MatrixSet s3(shift(3));
    CHECK(lower_bound(s3, 2).value == 0.0);
    const auto lb = lower_bound(s3, 3);
    CHECK(lb.value == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(lb.witness.length() == 3);
    CHECK(spectral_radius(evaluate(s3, lb.witness)) == doctest::Approx(1.0));

    const auto up = lower_bound(MatrixSet(kUnipotent), 2);
    CHECK(up.value == doctest::Approx(kPhi).epsilon(1e-12));
    CHECK(up.witness == Word{{0, 1}});
}

TEST_CASE("lower bound matches brute force with shortlex ties")
{
    std::mt19937_64 rng(21);
    for (int rep = 0; rep < 30; ++rep) {
        const std::size_t d = 1 + rep % 3;
        const std::vector<Matrix> s{oracle::random_gaussian(d, rng), oracle::random_gaussian(d, rng)};
        const auto got = lower_bound(MatrixSet(s), 5);
        const auto want = oracle::lower(s, 5);
        CHECK(got.value == doctest::Approx(want.value).epsilon(1e-9));
        CHECK(got.witness.indices == want.witness);
    }
    // Exact ties: every word of {I} has Lambda 1; the shortest wins.
    CHECK(lower_bound(MatrixSet({Matrix::Identity(2, 2), Matrix::Identity(2, 2)}), 4).witness ==
          Word{{0}});
}

TEST_CASE("jsr_estimate examples")
{
    Matrix d = Matrix::Zero(2, 2);
    d.diagonal() << 0.5, 1.0 / 3.0;
    EstimateConfig one;
    one.depth = 1;
    const auto a = jsr_estimate(MatrixSet({d}), one);
    CHECK(a.lower == doctest::Approx(0.5));
    CHECK(a.upper == doctest::Approx(0.5));

    std::vector<Matrix> elementary;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            elementary.push_back(unit(2, i, j));
    EstimateConfig four;
    four.depth = 4;
    const auto b = jsr_estimate(MatrixSet(elementary), four);
    CHECK(b.contains(1.0));
    CHECK(b.width() <= 1e-9);

    EstimateConfig two;
    two.depth = 2;
    const auto c = jsr_estimate(MatrixSet({unit(2, 0, 1), Matrix::Zero(2, 2)}), two);
    CHECK(c.lower == 0.0);
    CHECK(c.upper <= 1e-9);
}

TEST_CASE("jsr_estimate equals the exhaustive bounds")
{
    std::mt19937_64 rng(22);
    for (int rep = 0; rep < 30; ++rep) {
        const std::size_t d = 1 + rep % 3;
        const std::vector<Matrix> s{oracle::random_gaussian(d, rng), oracle::random_gaussian(d, rng),
                                    oracle::random_gaussian(d, rng)};
        EstimateConfig cfg;
        cfg.depth = 5;
        const auto iv = jsr_estimate(MatrixSet(s), cfg);
        const auto lo = oracle::lower(s, 5);
        CHECK(iv.lower == doctest::Approx(lo.value).epsilon(1e-9));
        CHECK(iv.lower_witness.indices == lo.witness);
        CHECK(iv.upper == doctest::Approx(oracle::upper(s, 5, oracle::spectral_norm)).epsilon(1e-9));
        CHECK(iv.lower <= iv.upper * (1 + 1e-9));
        CHECK(std::pow(spectral_radius(evaluate(MatrixSet(s), iv.lower_witness)),
                       1.0 / iv.lower_witness.length()) == doctest::Approx(iv.lower).epsilon(1e-9));
    }
}

TEST_CASE("jsr_estimate clamps to the budget and can deepen to a width")
{
    EstimateConfig cfg;
    cfg.depth = 40;
    cfg.limits.enumeration_cap = 1000;
    const auto iv = jsr_estimate(MatrixSet(kUnipotent), cfg);
    CHECK(iv.diagnostics.at("budget_clamped") == 1.0);
    CHECK(iv.diagnostics.at("depth_reached") == 8.0);

    EstimateConfig w;
    w.depth = 10;
    w.target_width = 1e-9;
    const auto sh = jsr_estimate(MatrixSet(shift(3)), w);
    CHECK(sh.width() <= 1e-9);
}

TEST_CASE("conjugation search examples")
{
    Matrix d = Matrix::Zero(2, 2);
    d.diagonal() << 2.0, 0.5;
    const auto a = conjugation_search(MatrixSet({d}), 20);
    CHECK(a.value == doctest::Approx(2.0));

    const MatrixSet skew({m2(1, 100, 0, 0.5)});
    const auto b = conjugation_search(skew, 60);
    CHECK(b.value <= 1.5);
    CHECK(b.initial == doctest::Approx(spectral_norm(skew[0])));
    // Oracle: the explicit scaling diag(1e-3, 1).
    Matrix t = Matrix::Zero(2, 2);
    t.diagonal() << 1e-3, 1.0;
    CHECK(spectral_norm(t * skew[0] * t.inverse()) <= 1.5);
    CHECK(operator_norm(skew[0], NormSpec::ellipsoidal(b.g)) == doctest::Approx(b.value).epsilon(1e-9));

    const double theta = 0.7;
    const Matrix u1 = m2(std::cos(theta), -std::sin(theta), std::sin(theta), std::cos(theta));
    const Matrix u2 = m2(Complex(0, 1), 0, 0, Complex(std::cos(1.0), std::sin(1.0)));
    const Matrix g0 = m2(30, 7, 0, 0.1);
    const MatrixSet hidden({g0.inverse() * u1 * g0, g0.inverse() * u2 * g0});
    const auto c = conjugation_search(hidden, 1000);
    CHECK(c.value <= 1.0 + 1e-3);
    CHECK(c.value <= set_norm(hidden, NormSpec::spectral()) * (1 + 1e-9));
}

TEST_CASE("rota-strang norm examples")
{
    const auto z = rota_strang_norm(MatrixSet({Matrix::Zero(2, 2)}), 0.7, e(2, 0), 10);
    CHECK(z.value == doctest::Approx(1.0));
    CHECK(z.tail_bound == 0.0);

    const int trunc = 16;
    const auto h = rota_strang_norm(MatrixSet({0.5 * Matrix::Identity(2, 2)}), 1.0, e(2, 0), trunc);
    CHECK(h.value == doctest::Approx(2.0 - std::pow(2.0, -trunc)).epsilon(1e-12));
    CHECK(h.tail_bound <= std::pow(2.0, -trunc) * (1 + 1e-9));
    CHECK(h.value + h.tail_bound >= 2.0 - 1e-12);

    const auto s = rota_strang_norm(MatrixSet({unit(2, 0, 1), unit(2, 1, 0)}), 0.5, e(2, 0), trunc);
    CHECK(s.value == doctest::Approx(2.0 - std::pow(2.0, -trunc)).epsilon(1e-12));
    CHECK(s.tail_bound <= std::pow(2.0, -trunc + 1) * (1 + 1e-9));

    CHECK_THROWS_AS(rota_strang_norm(MatrixSet({Matrix::Identity(2, 2)}), 1.0, e(2, 0), 5), Error);
}

TEST_CASE("barabanov approximation examples")
{
    const auto id = barabanov_approx(MatrixSet({Matrix::Identity(2, 2)}), 1.0, 3);
    std::mt19937_64 rng(23);
    for (int i = 0; i < 10; ++i) {
        const Vector x = oracle::random_gaussian(2, rng).col(0);
        CHECK(id(x) == doctest::Approx(x.norm()));
    }
    CHECK(id.slack() <= 1e-12);

    // {I} U (1/2) * sampled unitaries: the Euclidean norm is already extremal.
    std::vector<Matrix> eps{Matrix::Identity(2, 2)};
    for (int k = 0; k < 8; ++k) {
        Eigen::HouseholderQR<Matrix> qr(oracle::random_gaussian(2, rng));
        eps.push_back(0.5 * Matrix(qr.householderQ()));
    }
    const auto ei = barabanov_approx(MatrixSet(eps), 1.0, 3);
    CHECK(ei.slack() <= 1e-9);
    const Vector y = oracle::random_gaussian(2, rng).col(0);
    CHECK(ei(y) == doctest::Approx(y.norm()).epsilon(1e-12));

    const auto up = barabanov_approx(MatrixSet(kUnipotent), kPhi, 8);
    CHECK(up.slack() <= 0.05);
    // Oracle: direct evaluation on a 360-point grid of real directions.
    double worst = 0.0;
    for (int k = 0; k < 360; ++k) {
        const double t = 2.0 * M_PI * k / 360.0;
        Vector x(2);
        x << std::cos(t), std::sin(t);
        double image = 0.0;
        for (const auto& s : kUnipotent)
            image = std::max(image, up(s * x));
        worst = std::max(worst, image / (kPhi * up(x)) - 1.0);
    }
    CHECK(worst <= 0.05);
}

TEST_CASE("nilpotency examples")
{
    const auto a = nilpotency_test(MatrixSet({unit(2, 0, 1)}));
    CHECK(a.is_nilpotent);
    CHECK(a.algebra_dim == 1);
    const auto b = nilpotency_test(MatrixSet({unit(2, 0, 1), unit(2, 1, 0)}));
    CHECK_FALSE(b.is_nilpotent);
    CHECK(b.algebra_dim == 4);
    const auto c = nilpotency_test(MatrixSet({unit(3, 0, 1) + unit(3, 0, 2), unit(3, 1, 2)}));
    CHECK(c.is_nilpotent);
    CHECK(c.algebra_dim <= 3);
    CHECK(upper_bound(MatrixSet({unit(3, 0, 1) + unit(3, 0, 2), unit(3, 1, 2)}), 3,
                      NormSpec::spectral()) <= 1e-9);
}

TEST_CASE("nilpotency versus hidden nilpotent conjugates")
{
    std::mt19937_64 rng(24);
    for (int rep = 0; rep < 20; ++rep) {
        const std::size_t d = 2 + rep % 3;
        Matrix g = oracle::random_gaussian(d, rng) + 2.0 * Matrix::Identity(d, d);
        std::vector<Matrix> ms;
        for (int k = 0; k < 2; ++k) {
            Matrix n = oracle::random_gaussian(d, rng).triangularView<Eigen::StrictlyUpper>();
            ms.push_back(g * n * g.inverse());
        }
        const MatrixSet s(ms);
        CHECK(nilpotency_test(s).is_nilpotent);
        const auto ub = upper_bound_detail(s, static_cast<int>(d), NormSpec::spectral());
        CHECK(ub.level_norms[d] <= 1e-12 * std::pow(ub.level_norms[1], static_cast<double>(d)));
    }
}
