#include "expcurve/valency.hpp"
#include "expcurve/random.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

using namespace expcurve;

namespace {

using cd = std::complex<double>;

ExpPoly exp_minus_one() {
    ExpPoly f(exponential_curve(0, 1), 1);
    f.set_coeff(0, 1, 1.0);
    f.set_coeff(0, 0, -1.0);
    return f;
}

ExpPoly monomial(int i, int j, const CurveSpec& curve) {
    ExpPoly f(curve, i + j);
    f.set_coeff(i, j, 1.0);
    return f;
}

ExpPoly random_poly(SplitMix64& rng, const CurveSpec& curve, int n) {
    ExpPoly P(curve, n);
    for (auto [i, j] : full_terms(n)) P.set_coeff(i, j, rng.uniform(-1, 1));
    return P;
}

bool contains_root(const std::vector<cd>& roots, cd z) {
    return std::any_of(roots.begin(), roots.end(), [&](cd r) { return std::abs(r - z) < 1e-12; });
}

}  // namespace

TEST_CASE("winding of z^3 about the origin") {
    const auto c = count_zeros(EntireFunction::of(monomial(3, 0, exponential_curve(0, 1))), {0.0, 1.0, 256});
    CHECK(c.status == CountStatus::accepted);
    CHECK(c.winding == 3);
    CHECK(c.integral_residual <= 1e-6);
}

TEST_CASE("zeros of e^z - 1 at 2 pi i k") {
    const auto f = EntireFunction::of(exp_minus_one());
    CHECK(count_zeros(f, {0.0, 1.0, 256}).winding == 1);
    CHECK(count_zeros(f, {0.0, 7.0, 256}).winding == 3);
    // radius 13 encloses k = -2..2
    CHECK(count_zeros(f, {0.0, 13.0, 256}).winding == 5);
    // a disk around 2 pi i alone
    CHECK(count_zeros(f, {cd(0, 2 * std::numbers::pi), 1.0, 256}).winding == 1);
}

TEST_CASE("e^z has no zeros") {
    const auto f = EntireFunction::of(monomial(0, 1, exponential_curve(0, 1)));
    for (double r : {0.5, 3.0, 20.0}) {
        const auto c = count_zeros(f, {cd(1, -2), r, 256});
        CHECK(c.status == CountStatus::accepted);
        CHECK(c.winding == 0);
    }
}

TEST_CASE("multiplicity is counted") {
    // (z - 0.3)^2 (z + 0.2) expanded
    ExpPoly f(exponential_curve(0, 1), 3);
    f.set_coeff(3, 0, 1.0);
    f.set_coeff(2, 0, -0.4);
    f.set_coeff(1, 0, -0.03);
    f.set_coeff(0, 0, 0.018);
    CHECK(count_zeros(EntireFunction::of(f), {0.0, 1.0, 256}).winding == 3);
    CHECK(count_zeros(EntireFunction::of(f), {0.3, 0.1, 256}).winding == 2);
}

TEST_CASE("a zero on the contour is moved off by perturbing the radius") {
    // zero at z = 1 on the unit circle
    ExpPoly f(exponential_curve(0, 1), 1);
    f.set_coeff(1, 0, 1.0);
    f.set_coeff(0, 0, -1.0);
    const auto c = count_zeros(EntireFunction::of(f), {0.0, 1.0, 256});
    CHECK(c.status == CountStatus::accepted);
    CHECK(c.retries >= 1);
    CHECK(c.contour.radius > 1.0);
    CHECK(c.winding == 1);
}

TEST_CASE("contour validation") {
    const auto f = EntireFunction::of(exp_minus_one());
    CHECK_THROWS_AS(count_zeros(f, {0.0, 0.0, 256}), std::invalid_argument);
    CHECK_THROWS_AS(count_zeros(f, {0.0, 1.0, 128}), std::invalid_argument);
    CHECK_THROWS_AS(count_zeros(f, {0.0, 1.0, 300}), std::invalid_argument);
}

TEST_CASE("conjugate disks hold equally many zeros of a real function") {
    SplitMix64 rng(11);
    for (int trial = 0; trial < 10; ++trial) {
        const CurveSpec curve({0.0, rng.uniform(-1, 1), rng.uniform(-1, 1)}, 0, 1);
        const auto f = EntireFunction::of(random_poly(rng, curve, 3));
        const double h = rng.uniform(0.2, 1.0);
        const auto up = count_zeros(f, {cd(0, h), 1.5, 256});
        const auto down = count_zeros(f, {cd(0, -h), 1.5, 256});
        REQUIRE(up.status == CountStatus::accepted);
        REQUIRE(down.status == CountStatus::accepted);
        CHECK(up.winding == down.winding);
    }
}

TEST_CASE("valency of z^2 sees c = 1/4 twice") {
    const auto f = EntireFunction::of(monomial(2, 0, exponential_curve(0, 1)));
    const auto c = count_zeros(f.minus(0.25), {0.0, 1.0, 256});
    CHECK(c.winding == 2);
    const auto v = valency(f, {0.0, 1.0, 256}, 16, 5);
    CHECK(v.p == 2);
    CHECK(v.c_values.front() == cd(0.0));
    for (const auto& k : v.counts)
        if (k.status == CountStatus::accepted) CHECK(k.winding <= v.p);
}

TEST_CASE("valency of e^z on the disk of radius 7") {
    const auto f = EntireFunction::of(monomial(0, 1, exponential_curve(0, 1)));
    CHECK(count_zeros(f.minus(1.0), {0.0, 7.0, 256}).winding == 3);
    const auto v = valency(f, {0.0, 7.0, 256}, 32, 9);
    CHECK(v.p >= 2);
    CHECK(v.p <= 3);
}

TEST_CASE("constant function") {
    ExpPoly k(exponential_curve(0, 1), 1);
    k.set_coeff(0, 0, 2.0);
    const auto f = EntireFunction::of(k);
    CHECK(count_zeros(f.minus(1.0), {0.0, 1.0, 256}).winding == 0);
    CHECK(count_zeros(f.minus(2.0), {0.0, 1.0, 256}).status == CountStatus::identically_zero);
    const auto v = valency(f, {0.0, 1.0, 256}, 8, 1);
    CHECK(v.p == 0);
    CHECK(v.dropped > 0);
}

TEST_CASE("valency is deterministic and independent of the execution mode") {
    const auto f = EntireFunction::of(exp_minus_one());
    const auto a = valency(f, {0.0, 7.0, 256}, 16, 42, Execution::parallel);
    const auto b = valency(f, {0.0, 7.0, 256}, 16, 42, Execution::reference);
    REQUIRE(a.c_values.size() == b.c_values.size());
    for (std::size_t k = 0; k < a.c_values.size(); ++k) {
        CHECK(a.c_values[k] == b.c_values[k]);
        CHECK(a.counts[k].winding == b.counts[k].winding);
    }
    CHECK(a.p == b.p);
}

TEST_CASE("bound for e^z - c on the disk of radius 7") {
    const auto t = tijdeman_bound_check(exp_minus_one(), 0.0, 7, 7, 32, 1);
    CHECK(t.d == 1);
    CHECK(t.n == 1);
    CHECK(t.r1 == doctest::Approx(7).epsilon(1e-12));
    CHECK(t.bound == doctest::Approx(32).epsilon(1e-12));
    CHECK(t.p_measured == 3);
    CHECK(t.pass);
}

TEST_CASE("R1 scales with (R / R0)^d") {
    const CurveSpec curve({0.0, 0.0, 1.0}, 0, 1);
    ExpPoly P(curve, 1);
    P.set_coeff(0, 1, 1.0);
    const auto a = tijdeman_bound_check(P, 0.0, 1, 1, 32, 2);
    const auto b = tijdeman_bound_check(P, 0.0, 2, 1, 32, 2);
    CHECK(a.r1 == doctest::Approx(1).epsilon(1e-12));
    CHECK(b.r1 == doctest::Approx(4).epsilon(1e-12));
    CHECK(b.bound == doctest::Approx(4 * (2 + 2 * 4)).epsilon(1e-12));
    CHECK_THROWS_AS(tijdeman_bound_check(P, 0.0, 1, 2, 32, 2), std::invalid_argument);
}

TEST_CASE("Aberth roots") {
    auto r = roots_of_t_minus_w(CurveSpec({0, 1}, 0, 1), 5.0);
    REQUIRE(r.size() == 1);
    CHECK(std::abs(r[0] - 5.0) < 1e-12);

    r = roots_of_t_minus_w(CurveSpec({0, 0, 1}, 0, 1), -1.0);
    REQUIRE(r.size() == 2);
    CHECK(contains_root(r, cd(0, 1)));
    CHECK(contains_root(r, cd(0, -1)));

    r = roots_of_t_minus_w(CurveSpec({0, -1, 0, 1}, 0, 1), 0.0);
    REQUIRE(r.size() == 3);
    for (double x : {-1.0, 0.0, 1.0}) CHECK(contains_root(r, x));

    // double root of z^2 at w = 0
    r = roots_of_t_minus_w(CurveSpec({0, 0, 1}, 0, 1), 0.0);
    REQUIRE(r.size() == 2);
    for (auto z : r) CHECK(std::abs(z) < 1e-6);

    CHECK_THROWS_AS(roots_of_t_minus_w(CurveSpec({3}, 0, 1), 1.0), std::invalid_argument);
}

TEST_CASE("Aberth roots satisfy the residual bound on random cubics") {
    SplitMix64 rng(17);
    for (int trial = 0; trial < 100; ++trial) {
        const CurveSpec curve({rng.uniform(-2, 2), rng.uniform(-2, 2), rng.uniform(-2, 2), rng.uniform(0.5, 2)}, 0, 1);
        const cd w(rng.uniform(-5, 5), rng.uniform(-5, 5));
        const auto r = roots_of_t_minus_w(curve, w);
        REQUIRE(r.size() == 3);
        for (auto z : r) CHECK(std::abs(curve.t(z) - w) <= 1e-10 * (1 + std::abs(w)));
        // Vieta: the roots sum to -c2/c3
        CHECK(std::abs(r[0] + r[1] + r[2] + curve.t_coeffs[2] / curve.t_coeffs[3]) < 1e-9);
    }
}

TEST_CASE("reduced value is the product over the roots") {
    // t = z^2, P = z + y: product over z = +-sqrt(w) of (z + e^w - c)
    const CurveSpec curve({0, 0, 1}, 0, 1);
    ExpPoly P(curve, 1);
    P.set_coeff(1, 0, 1.0);
    P.set_coeff(0, 1, 1.0);
    const cd w(0.3, -0.4), c(0.1, 0.2);
    const cd s = std::sqrt(w), e = std::exp(w);
    const cd expected = (s + e - c) * (-s + e - c);
    CHECK(std::abs(reduced_value(P, c, w) - expected) < 1e-13);
}

TEST_CASE("symmetric reduction for d = 1 is the identity") {
    SplitMix64 rng(23);
    const CurveSpec curve({0, 1}, 0, 1);
    const ExpPoly P = random_poly(rng, curve, 3);
    const cd c(0.5, 0.5);
    const auto red = symmetric_reduction_check(P, c, reduction_grid(3, 1));
    CHECK(red.residual < 1e-13);
    for (cd w : red.w_grid) CHECK(std::abs(reduced_value(P, c, w) - (evaluate(P, w).to_complex() - c)) < 1e-13);
}

TEST_CASE("symmetric reduction of y under t = z^2") {
    ExpPoly y(CurveSpec({0, 0, 1}, 0, 1), 1);
    y.set_coeff(0, 1, 1.0);
    const auto red = symmetric_reduction_check(y, 0.0, reduction_grid(1, 2));
    CHECK(red.residual < 1e-12);
    REQUIRE(red.degrees.size() == 3);
    CHECK(red.degrees[0] == -1);
    CHECK(red.degrees[1] == -1);
    CHECK(red.degrees[2] == 0);
    CHECK(std::abs(red.beta[2][0] - 1.0) < 1e-10);
    CHECK(std::abs(red.beta[2][1]) < 1e-8);
}

TEST_CASE("symmetric reduction grid size is checked") {
    ExpPoly y(CurveSpec({0, 0, 1}, 0, 1), 1);
    y.set_coeff(0, 1, 1.0);
    CHECK_THROWS_AS(symmetric_reduction_check(y, 0.0, std::vector<cd>(11, 0.1)), std::invalid_argument);
    CHECK(reduction_grid(3, 2).size() >= 2u * 7 * 4);
}

TEST_CASE("symmetric reduction battery with t = z^2") {
    SplitMix64 rng(31);
    const CurveSpec curve({0, 0, 1}, 0, 1);
    for (int trial = 0; trial < 50; ++trial) {
        const int n = rng.uniform_int(1, 3);
        const ExpPoly P = random_poly(rng, curve, n);
        const cd c(rng.uniform(-1, 1), rng.uniform(-1, 1));
        const auto red = symmetric_reduction_check(P, c, reduction_grid(n, 2));
        CHECK(red.residual <= 1e-8);
        for (int deg : red.degrees) CHECK(deg <= n);
    }
}

TEST_CASE("bound battery and the reduction chain") {
    SplitMix64 rng(37);
    for (int trial = 0; trial < 50; ++trial) {
        const int n = rng.uniform_int(1, 5);
        const int d = rng.uniform_int(1, 2);
        std::vector<double> tc(d + 1);
        for (auto& x : tc) x = rng.uniform(-1, 1);
        tc[d] = rng.uniform(0.5, 1.0);
        const CurveSpec curve(tc, 0, 1);
        const ExpPoly P = random_poly(rng, curve, n);
        const double R = rng.uniform(0.5, 2.0);
        const auto t = tijdeman_bound_check(P, 0.0, R, R, 32, 100 + trial);
        CHECK(t.pass);
        for (const auto& k : t.valency.counts)
            if (k.status == CountStatus::accepted) CHECK(k.integral_residual <= 1e-6);

        // p for c = 0 is at most the zero count of the reduced function on |w| <= R1
        const auto& lhs = t.valency.counts.front();
        if (lhs.status != CountStatus::accepted) continue;
        const auto rhs = count_reduced_zeros(P, 0.0, t.r1);
        if (rhs.status != CountStatus::accepted) continue;
        CHECK(lhs.winding <= rhs.winding);
    }
}
