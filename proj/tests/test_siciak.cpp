#include "expcurve/siciak.hpp"
#include "expcurve/random.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace expcurve;

namespace {

using cd = std::complex<double>;

ExpPoly random_poly(SplitMix64& rng, const CurveSpec& curve, int n) {
    ExpPoly P(curve, n);
    for (auto [i, j] : full_terms(n)) P.set_coeff(i, j, rng.uniform(-1, 1));
    return P;
}

}  // namespace

TEST_CASE("phi functions") {
    CHECK(PhiFunction::n_squared()(3) == 9.0);
    CHECK(PhiFunction::n_linear()(3) == 3.0);
    const auto c = PhiFunction::custom({1.0, 2.5, 2.5});
    CHECK(c(2) == 2.5);
    CHECK_THROWS_AS(c(4), std::out_of_range);
    CHECK_THROWS_AS(PhiFunction::custom({2.0, 1.0}), std::invalid_argument);
    CHECK_THROWS_AS(PhiFunction::custom({0.0}), std::invalid_argument);
    CHECK_THROWS_AS(PhiFunction::n_linear()(0), std::invalid_argument);
}

TEST_CASE("Siciak value is 1 on the grid") {
    const auto K = EvaluationGrid::chebyshev_interval(0, 1, 65);
    for (int k : {0, 10, 32, 64}) {
        const auto s = siciak_value(K, K.nodes()[k], 3, exponential_curve(0, 1), PhiFunction::n_squared());
        CHECK(s.phi_value == doctest::Approx(1.0).epsilon(1e-9));
    }
    const auto D = EvaluationGrid::circle(0.0, 1.0, 64);
    const auto s = siciak_value(D, D.nodes()[5], 2, exponential_curve(-1, 1), PhiFunction::n_squared());
    CHECK(s.phi_value == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("classical Siciak function of [-1, 1] at 2") {
    const auto K = EvaluationGrid::chebyshev_interval(-1, 1, 257);
    double prev = 0.0;
    for (int n : {1, 2, 4, 8, 16}) {
        const auto s = siciak_value(K, 2.0, n, polynomial_curve(-1, 1), PhiFunction::n_linear());
        // T_n(2)^(1/n)
        CHECK(s.phi_value == doctest::Approx(std::pow(std::cosh(n * std::acosh(2.0)), 1.0 / n)).epsilon(1e-9));
        CHECK(s.phi_value > prev);
        CHECK(s.phi_value < 2 + std::sqrt(3.0));
        prev = s.phi_value;
    }
}

TEST_CASE("classical Siciak function off the real axis") {
    // sup over deg <= n of |p(z)| on ||p||_[-1,1] <= 1 is at most |J(z)|^n
    const auto K = EvaluationGrid::chebyshev_interval(-1, 1, 257);
    const cd z(0.3, 0.8);
    const double J = joukowski_factor(z, -1, 1);
    for (int n : {1, 3, 6}) {
        const auto s = siciak_value(K, z, n, polynomial_curve(-1, 1), PhiFunction::n_linear());
        CHECK(s.phi_value <= J * (1 + 1e-6));
        // |T_n(z)| is a competitor
        const double tn = std::abs(std::cosh(static_cast<double>(n) * std::acosh(z)));
        CHECK(s.phi_value >= std::pow(tn, 1.0 / n) * (1 - 1e-3));
    }
}

TEST_CASE("adding constraint nodes never increases the maximum") {
    const auto coarse = EvaluationGrid::chebyshev_interval(0, 1, 33);
    const auto fine = EvaluationGrid::chebyshev_interval(0, 1, 65);  // contains the coarse nodes
    for (cd z : {cd(2.0), cd(-0.5), cd(0.5, 0.7)}) {
        const auto a = siciak_value(coarse, z, 2, exponential_curve(0, 1), PhiFunction::n_squared());
        const auto b = siciak_value(fine, z, 2, exponential_curve(0, 1), PhiFunction::n_squared());
        CHECK(b.raw_log_max <= a.raw_log_max + 1e-9);
    }
}

TEST_CASE("verdict rules") {
    CHECK(boundedness_verdict({{3, 2, 2.1}}) == Verdict::bounded);
    CHECK(boundedness_verdict({{1, 1, 1}}) == Verdict::bounded);
    CHECK(boundedness_verdict({{1, 2, 3}}) == Verdict::unbounded_trend);
    CHECK(boundedness_verdict({{2, 1, 2.5}}) == Verdict::inconclusive);
    // unbounded-trend takes precedence at any probe
    CHECK(boundedness_verdict({{3, 2, 2}, {1, 1.2, 1.6}}) == Verdict::unbounded_trend);
    CHECK(to_string(Verdict::unbounded_trend) == "unbounded-trend");
}

TEST_CASE("n^2 is needed on y = e^x") {
    const auto K = EvaluationGrid::chebyshev_interval(0, 1, 513);
    const std::vector<cd> probes{-1.0, 2.0, cd(0.5, 1.0)};
    const auto sq = boundedness_sweep(K, probes, 1, 8, exponential_curve(0, 1), PhiFunction::n_squared());
    CHECK(sq.verdict == Verdict::bounded);
    const auto lin = sq.with_phi(PhiFunction::n_linear());
    CHECK(lin.verdict == Verdict::unbounded_trend);
    // recomputing under phi(n) = n gives the same table
    const auto direct = boundedness_sweep(K, probes, 1, 3, exponential_curve(0, 1), PhiFunction::n_linear(),
                                          Execution::reference);
    for (int k = 0; k < 3; ++k)
        for (int p = 0; p < 3; ++p)
            CHECK(direct.samples[k][p].phi_value == doctest::Approx(lin.samples[k][p].phi_value).epsilon(1e-9));
}

TEST_CASE("probes on K give a flat sweep") {
    const auto K = EvaluationGrid::chebyshev_interval(0, 1, 65);
    const auto s = boundedness_sweep(K, {K.nodes()[3], K.nodes()[40]}, 1, 4, exponential_curve(0, 1),
                                     PhiFunction::n_squared());
    for (const auto& row : s.samples)
        for (const auto& x : row) CHECK(x.phi_value == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(s.verdict == Verdict::bounded);
}

TEST_CASE("Siciak values for the unit disk at 1.5") {
    const auto K = EvaluationGrid::filled_disk(0.0, 1.0, 4, 64);
    const auto s = boundedness_sweep(K, {1.5}, 1, 6, exponential_curve(-1, 1), PhiFunction::n_squared());
    CHECK(s.verdict == Verdict::bounded);
    // regression baseline from the first verified run
    const double baseline[] = {3.090577, 1.9373159, 1.658947, 1.5360722, 1.4670951, 1.4230581};
    for (int k = 0; k < 6; ++k) CHECK(s.samples[k][0].phi_value == doctest::Approx(baseline[k]).epsilon(1e-5));
}

TEST_CASE("relative extremal anchors") {
    const EllipseSpec e{-1, 1, 1};
    CHECK(relative_extremal(0.3, e) == 0.0);
    CHECK(relative_extremal(-1.0, e) == 0.0);
    CHECK(relative_extremal(2.0, e) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(relative_extremal(1.5, e) ==
          doctest::Approx(std::log(1.5 + std::sqrt(1.25)) / std::log(2 + std::sqrt(3.0))).epsilon(1e-14));
    CHECK(relative_extremal(1.5, e) == doctest::Approx(0.7308).epsilon(1e-4));
    CHECK_THROWS_AS(relative_extremal(2.01, e), std::domain_error);
    CHECK_THROWS_AS(relative_extremal(cd(0, 1.8), e), std::domain_error);
}

TEST_CASE("relative extremal is 0 to 1, level-wise constant and monotone on the axis") {
    const EllipseSpec e{0, 1, 1};
    const double rho = e.rho();
    for (int k = 0; k <= 10; ++k) {
        const double level = std::pow(rho, k / 10.0);
        for (cd z : e.level_curve(level, 37)) {
            const double u = relative_extremal(z, e);
            CHECK(u >= 0.0);
            CHECK(u <= 1.0);
            CHECK(u == doctest::Approx(k / 10.0).epsilon(1e-9));
        }
    }
    double prev = 0.0;
    for (int k = 0; k <= 100; ++k) {
        const double u = relative_extremal(1.0 + k / 100.0, e);
        CHECK(u >= prev);
        prev = u;
    }
    CHECK(prev == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("competitor inequality on random V_n") {
    const EllipseSpec e{0, 1, 1};
    const auto E = EvaluationGrid::chebyshev_interval(0, 1, 257);
    const auto omega = EvaluationGrid::ellipse_boundary(0, 1, 1, 1024);
    const auto nodes = filled_ellipse_nodes(e, 12, 96);
    SplitMix64 rng(77);
    double worst = -1.0;
    for (int trial = 0; trial < 100; ++trial) {
        const int n = rng.uniform_int(1, 4);
        const auto c = competitor_inequality_check(random_poly(rng, exponential_curve(0, 1), n), e, E, omega, nodes);
        CHECK_FALSE(c.skipped);
        CHECK(c.pass);
        CHECK(c.max_violation <= 1e-9);
        CHECK(c.norm_omega > c.norm_e);
        worst = std::max(worst, c.max_violation);
    }
    MESSAGE("worst competitor violation " << worst);
}

TEST_CASE("competitor check skips constants") {
    const EllipseSpec e{0, 1, 1};
    ExpPoly k(exponential_curve(0, 1), 1);
    k.set_coeff(0, 0, 3.0);
    const auto c = competitor_inequality_check(k, e, EvaluationGrid::chebyshev_interval(0, 1, 33),
                                               EvaluationGrid::ellipse_boundary(0, 1, 1, 512),
                                               filled_ellipse_nodes(e, 4, 32));
    CHECK(c.skipped);
    CHECK(c.norm_e == doctest::Approx(3.0).epsilon(1e-12));
}

TEST_CASE("exponent of the real-complex comparison") {
    CHECK(cartan_exponent() == doctest::Approx(3.0 + std::log(24.0)).epsilon(1e-15));
    CHECK(cartan_exponent() == doctest::Approx(6.1781).epsilon(1e-4));
}

TEST_CASE("z on the interval and the disk") {
    ExpPoly z(exponential_curve(-1, 1), 1);
    z.set_coeff(1, 0, 1.0);
    CHECK(interval_disk_ratio(EntireFunction::of(z), 0.0, 1.0) == doctest::Approx(1.0).epsilon(1e-12));
    ExpPoly e(exponential_curve(-1, 1), 1);
    e.set_coeff(0, 1, 1.0);
    // |e^z| peaks at the real endpoint x0 + R1 as well
    CHECK(interval_disk_ratio(EntireFunction::of(e), 0.0, 1.0) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("real-complex comparison for y = e^x") {
    const auto rc = real_complex_comparison(1, 5, exponential_curve(-1, 1), 0.0, 1.0);
    REQUIRE(rc.rows.size() == 5);
    CHECK(rc.pass);
    // regression baseline from the first verified run
    const double rho[] = {3.00002, 41.2812, 1411.77, 116531, 2.31086e+07};
    for (int k = 0; k < 5; ++k) {
        const auto& r = rc.rows[k];
        CHECK(r.rho >= 1.0);
        CHECK(r.pass);
        CHECK(std::log(r.rho) <= r.log_bound);
        CHECK(r.rho == doctest::Approx(rho[k]).epsilon(1e-4));
    }
}
