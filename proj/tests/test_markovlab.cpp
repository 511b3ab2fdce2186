#include "expcurve/markovlab.hpp"
#include "expcurve/random.hpp"

#include <doctest.h>

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numbers>

using namespace expcurve;

namespace {

double chebyshev(int n, double x) {
    if (std::abs(x) <= 1.0) return std::cos(n * std::acos(x));
    const double v = std::cosh(n * std::acosh(std::abs(x)));
    return (x < 0 && n % 2 == 1) ? -v : v;
}

ExpPoly random_poly(SplitMix64& rng, const CurveSpec& curve, int n) {
    ExpPoly P(curve, n);
    for (auto [i, j] : full_terms(n)) P.set_coeff(i, j, rng.uniform(-1, 1));
    return P;
}

}  // namespace

TEST_CASE("classical Markov factors are n^2") {
    const auto report = run_markov_experiment(polynomial_curve(-1, 1), 1, 8);
    REQUIRE(report.rows.size() == 8);
    for (const auto& row : report.rows) {
        CHECK(row.dimension == row.n + 1);
        CHECK(row.lambda == doctest::Approx(row.n * row.n).epsilon(5e-3));
        CHECK(std::abs(std::abs(row.argmax) - 1.0) < 1e-12);
    }
    CHECK(report.monotone());
    REQUIRE(report.fit);
    CHECK(report.fit->slope == doctest::Approx(2.0).epsilon(0.025));
    CHECK(report.fit->residual < 1e-2);
}

TEST_CASE("classical extremal is Chebyshev up to sign") {
    for (int n : {2, 3, 5, 8}) {
        const auto m = markov_factor(polynomial_curve(-1, 1), n);
        REQUIRE(m.extremal);
        double plus = 0.0, minus = 0.0;
        for (int k = 0; k <= 2000; ++k) {
            const double x = -1.0 + k / 1000.0;
            const double f = m.extremal->evaluate(x).to_complex().real();
            plus = std::max(plus, std::abs(f - chebyshev(n, x)));
            minus = std::max(minus, std::abs(f + chebyshev(n, x)));
        }
        CHECK(std::min(plus, minus) < 1e-3);
    }
}

TEST_CASE("n = 1 on y = e^x against random search") {
    const auto m = markov_factor(exponential_curve(0, 1), 1);
    CHECK(m.dimension == 3);
    CHECK(m.converged);
    // regression baseline from the first verified run
    CHECK(m.lambda == doctest::Approx(9.4399761375956466).epsilon(1e-6));

    // Independent oracle: orthonormalize {1, x, e^x} on a dense grid and
    // sample directions in those coordinates.
    const int m_grid = 1001;
    Eigen::MatrixXd A(m_grid, 3), D(m_grid, 3);
    for (int k = 0; k < m_grid; ++k) {
        const double x = static_cast<double>(k) / (m_grid - 1);
        A.row(k) << 1.0, x, std::exp(x);
        D.row(k) << 0.0, 1.0, std::exp(x);
    }
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(A);
    const Eigen::MatrixXd Rinv = qr.matrixQR().topRows(3).triangularView<Eigen::Upper>().solve(Eigen::MatrixXd::Identity(3, 3));
    const Eigen::MatrixXd Q = A * Rinv, DQ = D * Rinv;
    SplitMix64 rng(2024);
    double best = 0.0;
    for (int s = 0; s < 1000000; ++s) {
        const Eigen::Vector3d u(rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1));
        const double sup = (Q * u).cwiseAbs().maxCoeff();
        const double dmax = std::max(std::abs(DQ.row(0).dot(u)), std::abs(DQ.row(m_grid - 1).dot(u)));
        best = std::max(best, dmax / sup);
    }
    CHECK(best <= m.lambda * 1.001);
    CHECK(best >= 0.98 * m.lambda);
}

TEST_CASE("degree 1 polynomials have Markov factor 1") {
    const auto m = markov_factor(polynomial_curve(-1, 1), 1);
    CHECK(m.lambda == doctest::Approx(1.0).epsilon(1e-9));
    CHECK_THROWS_AS(markov_factor(polynomial_curve(-1, 1), 0), std::invalid_argument);
}

TEST_CASE("single degree run has no fit") {
    const auto report = run_markov_experiment(polynomial_curve(-1, 1), 3, 3);
    CHECK(report.rows.size() == 1);
    CHECK_FALSE(report.fit);
}

TEST_CASE("fit_loglog recovers a power law") {
    std::vector<double> n{1, 2, 3, 4, 5}, y;
    for (double v : n) y.push_back(3.0 * std::pow(v, 2.5));
    const auto fit = fit_loglog(n, y);
    CHECK(fit.slope == doctest::Approx(2.5).epsilon(1e-12));
    CHECK(fit.intercept == doctest::Approx(std::log(3.0)).epsilon(1e-12));
    CHECK(fit.residual < 1e-12);
}

TEST_CASE("envelope of lambda_n / n^4 for t = x and t = x^2") {
    for (const CurveSpec& curve : {exponential_curve(0, 1), CurveSpec({0, 0, 1}, 0, 1)}) {
        const auto report = run_markov_experiment(curve, 1, 8);
        CHECK(report.monotone());
        CHECK(report.envelope_bounded(3.0));
        REQUIRE(report.fit);
        CHECK(report.fit->slope <= 4.3);
        for (const auto& row : report.rows) CHECK(row.converged);
    }
}

TEST_CASE("doubling of cubics from [0, 1] to [0, 2]") {
    const auto d = doubling_ratio(polynomial_curve(0, 1), 3, EvaluationGrid::chebyshev_interval(0, 1, 257),
                                  EvaluationGrid::chebyshev_interval(0, 2, 257));
    CHECK(d.ratio == doctest::Approx(chebyshev(3, 3.0)).epsilon(5e-3));
    CHECK(d.ratio >= 8.0);  // x^3 alone doubles by 8
    CHECK(std::abs(d.argmax - 2.0) < 1e-12);
}

TEST_CASE("doubling of V_1 near the origin beats 2^(N-1)") {
    const double r = 1e-3;
    const auto d = doubling_ratio(exponential_curve(0, r), 1, EvaluationGrid::chebyshev_interval(0, r, 257),
                                  EvaluationGrid::chebyshev_interval(0, 2 * r, 257));
    CHECK(d.ratio >= 0.9 * 4);
}

TEST_CASE("doubling ratio is at least 1") {
    const auto g = EvaluationGrid::chebyshev_interval(0, 1, 129);
    const auto d = doubling_ratio(exponential_curve(0, 1), 2, g, g);
    CHECK(d.ratio == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("Bernstein-Walsh fit on anchor samples") {
    // R1 = R2: no growth, c = 0 suffices
    auto fit = bernstein_walsh_fit({{1, 1.0, 1.0, 0.0, 0.0}});
    CHECK(fit.feasible);
    CHECK(fit.c1 == 0.0);
    CHECK(fit.c2 == 0.0);
    CHECK(fit.slack[0] >= 0.0);

    // f = e^z, R2 = 2 R1 = 2: growth R1 = 1; c1 = 1/2 alone is the tight choice on the c1 axis
    fit = bernstein_walsh_fit({{1, 1.0, 2.0, 0.0, 1.0}});
    CHECK(fit.feasible);
    CHECK(fit.slack[0] >= -1e-12);
    CHECK(fit.c1 * 2.0 + fit.c2 * std::log(2.0) == doctest::Approx(1.0).epsilon(1e-12));
    // minimum norm point of c1 * 2 + c2 ln 2 >= 1
    const double q = 4.0 + std::log(2.0) * std::log(2.0);
    CHECK(fit.c1 == doctest::Approx(2.0 / q).epsilon(1e-12));
    CHECK(fit.c2 == doctest::Approx(std::log(2.0) / q).epsilon(1e-12));
    fit = bernstein_walsh_fit({{1, 1.0, 2.0, 0.0, 1.0}, {1, 1.0, 1.0, 0.0, 0.0}});
    CHECK(fit.slack[0] >= -1e-12);

    // with R2 = R1 only c1 can absorb growth
    fit = bernstein_walsh_fit({{1, 1.0, 1.0, 0.0, 0.5}});
    CHECK(fit.c1 == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(fit.c2 == 0.0);
}

TEST_CASE("Bernstein-Walsh battery") {
    std::vector<BernsteinWalshSample> samples;
    for (int n = 1; n <= 5; ++n)
        for (double r1 : {0.5, 1.0})
            for (double r2 : {1.0, 2.0, 4.0})
                if (r2 >= r1) samples.push_back(measure_bernstein_walsh(n, r1, r2, 0.0));
    for (const auto& s : samples) CHECK(s.log_growth >= -1e-9);
    const auto fit = bernstein_walsh_fit(samples);
    CHECK(fit.feasible);
    CHECK(fit.c1 >= 0.0);
    CHECK(fit.c2 >= 0.0);
    for (double s : fit.slack) CHECK(s >= -1e-9);
    // regression baseline from the first verified run
    CHECK(fit.c1 == doctest::Approx(1.1859392838090728).epsilon(1e-4));
    CHECK(fit.c2 == doctest::Approx(0.82203047088753944).epsilon(1e-4));
}

TEST_CASE("doubling bound is consistent with the valency") {
    const auto r = doubling_valency_consistency(5, 1.0, 2.0, 0.0, 32, 7);
    REQUIRE(r.rows.size() == 5);
    for (const auto& row : r.rows) {
        CHECK(row.p >= 1);
        CHECK(row.ratio >= 1.0);
    }
    CHECK(r.stable);
    CHECK(r.spread <= 2.0);
}

TEST_CASE("Cauchy bound anchors") {
    ExpPoly one(exponential_curve(0, 1), 1);
    one.set_coeff(0, 0, 1.0);
    auto c = cauchy_derivative_bound_check(one, 0.5, 0.1);
    CHECK(c.lhs == 0.0);
    CHECK(c.rhs == doctest::Approx(10.0).epsilon(1e-12));
    CHECK(c.pass);

    ExpPoly z(exponential_curve(-1, 1), 1);
    z.set_coeff(1, 0, 1.0);
    c = cauchy_derivative_bound_check(z, 0.0, 1.0);
    CHECK(c.lhs == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(c.rhs == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(c.pass);
}

TEST_CASE("Cauchy bound on random V_4") {
    SplitMix64 rng(4);
    const CurveSpec curve = exponential_curve(0, 1);
    for (int trial = 0; trial < 100; ++trial) {
        const auto c = cauchy_derivative_bound_check(random_poly(rng, curve, 4), 0.5, 0.1);
        CHECK(c.pass);
    }
}

TEST_CASE("Joukowski factor") {
    CHECK(joukowski_factor(0.3, -1, 1) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(joukowski_factor(2.0, -1, 1) == doctest::Approx(2.0 + std::sqrt(3.0)).epsilon(1e-12));
    CHECK(joukowski_factor(-2.0, -1, 1) == doctest::Approx(2.0 + std::sqrt(3.0)).epsilon(1e-12));
    // affine invariance
    CHECK(joukowski_factor(std::complex<double>(3, 1), 1, 5) ==
          doctest::Approx(joukowski_factor(std::complex<double>(0, 0.5), -1, 1)).epsilon(1e-12));
    // the two branches multiply to 1
    const std::complex<double> u(0.7, 0.2);
    const std::complex<double> sq = std::sqrt(u * u - 1.0);
    CHECK(std::abs((u + sq) * (u - sq)) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(joukowski_factor(u, -1, 1) >= 1.0);
}

TEST_CASE("step choice anchors") {
    const double s = 0.01;
    CHECK(joukowski_max_on_circle(1.0, s, -1, 1) == doctest::Approx(1 + s + std::sqrt(2 * s + s * s)).epsilon(1e-6));
    CHECK(joukowski_max_on_circle(0.0, s, -1, 1) == doctest::Approx(s + std::sqrt(1 + s * s)).epsilon(1e-6));
    CHECK(joukowski_max_on_circle(0.0, 1e-8, -1, 1) == doctest::Approx(1.0).epsilon(1e-7));
    CHECK(joukowski_constant(-1, 1) == doctest::Approx(1 + std::sqrt(3.0)).epsilon(1e-6));

    ExpPoly z(polynomial_curve(-1, 1), 1);
    z.set_coeff(1, 0, 1.0);
    const auto sc = step_choice_check(z);
    CHECK(sc.s == 1.0);
    CHECK(sc.bound == doctest::Approx(2 + std::sqrt(3.0)).epsilon(1e-6));
    CHECK(sc.pass);

    SplitMix64 rng(5);
    for (int n = 2; n <= 6; ++n) {
        const auto r = step_choice_check(random_poly(rng, exponential_curve(0, 1), n));
        CHECK(r.s == doctest::Approx(1.0 / std::pow(n, 4)).epsilon(1e-12));
        CHECK(r.bound <= r.envelope);
        CHECK(r.pass);
    }
}
