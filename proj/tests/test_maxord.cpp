#include "expcurve/maxord.hpp"
#include "expcurve/random.hpp"

#include <doctest.h>

#include <cmath>

using namespace expcurve;

namespace {

// Laplace expansion along the first row; independent of the elimination code.
Integer cofactor_determinant(const std::vector<std::vector<Integer>>& m) {
    const std::size_t N = m.size();
    if (N == 1) return m[0][0];
    Integer det = 0;
    for (std::size_t c = 0; c < N; ++c) {
        if (m[0][c] == 0) continue;
        std::vector<std::vector<Integer>> minor;
        for (std::size_t r = 1; r < N; ++r) {
            std::vector<Integer> row;
            for (std::size_t k = 0; k < N; ++k)
                if (k != c) row.push_back(m[r][k]);
            minor.push_back(row);
        }
        const Integer sub = cofactor_determinant(minor);
        det += (c % 2 == 0 ? 1 : -1) * m[0][c] * sub;
    }
    return det;
}

// (d/dx)^s of x^i e^{jx} at 0 by expanding the product of the two series.
Integer derivative_by_series(int s, int i, int j) {
    // coefficient of x^s in x^i e^{jx} is j^{s-i} / (s-i)!, times s!
    if (s < i) return 0;
    Integer num = 1;
    for (int k = 2; k <= s; ++k) num *= k;
    Integer den = 1;
    for (int k = 2; k <= s - i; ++k) den *= k;
    Integer p = 1;
    for (int k = 0; k < s - i; ++k) p *= j;
    return num / den * p;
}

}  // namespace

TEST_CASE("derivative matrix for n = 1") {
    const auto m = derivative_matrix(1);
    REQUIRE(m.size() == 3);
    CHECK(m.terms[0] == BasisTerm{0, 0});
    CHECK(m.terms[1] == BasisTerm{1, 0});
    CHECK(m.terms[2] == BasisTerm{0, 1});
    const int expected[3][3] = {{1, 0, 1}, {0, 1, 1}, {0, 0, 1}};
    for (int s = 0; s < 3; ++s)
        for (int k = 0; k < 3; ++k) CHECK(m.entries[s][k] == expected[s][k]);
}

TEST_CASE("derivative entries") {
    CHECK(derivative_entry(3, 1, 2) == 12);
    CHECK(derivative_entry(0, 0, 0) == 1);
    CHECK(derivative_entry(2, 0, 0) == 0);
    CHECK(derivative_entry(2, 3, 1) == 0);
    for (int s = 0; s < 12; ++s)
        for (int i = 0; i <= 5; ++i)
            for (int j = 0; j <= 5; ++j) CHECK(derivative_entry(s, i, j) == derivative_by_series(s, i, j));
}

TEST_CASE("determinants") {
    CHECK(wronskian_determinant(0) == 1);
    CHECK(wronskian_determinant(1) == 1);
    const auto m2 = derivative_matrix(2);
    REQUIRE(m2.size() == 6);
    const Integer d2 = wronskian_determinant(2);
    CHECK(d2 != 0);
    CHECK(d2 == cofactor_determinant(m2.entries));
    // regression baseline
    CHECK(d2 == 16);
    const auto m3 = derivative_matrix(3);
    CHECK(bareiss_determinant(m3.entries) == cofactor_determinant(m3.entries));
    for (int n = 4; n <= 8; ++n) CHECK(wronskian_determinant(n) != 0);
}

TEST_CASE("duplicate column gives a zero determinant") {
    auto m = derivative_matrix(1).entries;
    for (auto& row : m) row[2] = row[1];  // e^x replaced by x
    CHECK(bareiss_determinant(m) == 0);
    CHECK(cofactor_determinant(m) == 0);
}

TEST_CASE("Bareiss against cofactor expansion on random integer matrices") {
    SplitMix64 rng(8);
    for (int trial = 0; trial < 50; ++trial) {
        const int N = rng.uniform_int(1, 6);
        std::vector<std::vector<Integer>> m(N, std::vector<Integer>(N));
        for (auto& row : m)
            for (auto& x : row) x = rng.uniform_int(-3, 3);
        CHECK(bareiss_determinant(m) == cofactor_determinant(m));
    }
}

TEST_CASE("maximally vanishing function for n = 0, 1, 2") {
    const auto c0 = max_vanishing_function(0);
    CHECK(c0.dimension == 1);
    CHECK(c0.verified_order == 0);
    CHECK(c0.alpha[0] == 1);

    // e^x - 1 - x
    const auto c1 = max_vanishing_function(1);
    CHECK(c1.verified_order == 2);
    CHECK(c1.wronskian_nonzero);
    CHECK(c1.alpha[0] == -1);
    CHECK(c1.alpha[1] == -1);
    CHECK(c1.alpha[2] == 1);
    CHECK(c1.alpha_strings() == std::vector<std::string>{"-1", "-1", "1"});

    const auto c2 = max_vanishing_function(2);
    CHECK(c2.dimension == 6);
    CHECK(c2.verified_order == 5);
}

TEST_CASE("certificates satisfy the conditions by exact substitution") {
    for (int n = 1; n <= 8; ++n) {
        const auto c = max_vanishing_function(n);
        const auto m = derivative_matrix(n);
        const int N = m.size();
        CHECK(c.verified_order == N - 1);
        for (int s = 0; s < N; ++s) {
            Rational v = 0;
            for (int k = 0; k < N; ++k) v += c.alpha[k] * m.entries[s][k];
            CHECK(v == (s == N - 1 ? 1 : 0));
        }
    }
    CHECK_THROWS_AS(max_vanishing_function(9), std::invalid_argument);
}

TEST_CASE("certified function is dominated by its leading Taylor term") {
    for (int n = 1; n <= 8; ++n) {
        const double d = taylor_domination(max_vanishing_function(n));
        CHECK(d >= 0.5);
        CHECK(d <= 2.0);
    }
    // the double-precision evaluator agrees where cancellation is mild
    for (int n : {1, 2}) {
        const auto c = max_vanishing_function(n);
        const ExpPoly f = c.to_exppoly();
        double fact = 1.0;
        for (int k = 2; k < c.dimension; ++k) fact *= k;
        for (double x : {-1e-2, -5e-3, 5e-3, 1e-2}) {
            const double lead = std::pow(std::abs(x), c.dimension - 1) / fact;
            const double v = std::abs(evaluate(f, x).to_complex().real());
            CHECK(v <= 2 * lead);
            CHECK(v >= 0.5 * lead);
        }
    }
}

TEST_CASE("doubling limit reaches 2^(N-1)") {
    const auto d1 = doubling_limit_experiment(1, {1e-1, 1e-2, 1e-3});
    CHECK(d1.target == 4.0);
    CHECK(d1.within_tolerance);
    CHECK(d1.monotone_tail);
    CHECK_FALSE(d1.exhausted_at);
    CHECK(d1.rows.back().ratio == doctest::Approx(4.0).epsilon(0.05));

    const auto d2 = doubling_limit_experiment(2, {1e-1, 1e-2, 1e-3, 1e-4});
    CHECK(d2.target == 32.0);
    CHECK(d2.within_tolerance);
    CHECK(d2.monotone_tail);
    CHECK(d2.rows.back().ratio == doctest::Approx(32.0).epsilon(0.05));
    // ratio(r) = 2^(N-1) (1 + O(r))
    for (const auto& row : d2.rows) CHECK(std::abs(row.ratio / 32.0 - 1.0) < 2 * row.r + 1e-9);

    CHECK_THROWS_AS(doubling_limit_experiment(1, {1e-3, 1e-2}), std::invalid_argument);
    CHECK_THROWS_AS(doubling_limit_experiment(1, {}), std::invalid_argument);
}

TEST_CASE("precision exhaustion is flagged") {
    const auto d = doubling_limit_experiment(3, {1e-2, 1e-30}, 64, 600);
    REQUIRE(d.exhausted_at);
    CHECK(d.rows[0].precision_ok);
    CHECK(*d.exhausted_at == 1e-30);
    CHECK_FALSE(d.within_tolerance);
}

TEST_CASE("nonvanishing f doubles to 1") {
    ExpPoly f(exponential_curve(0, 1), 1);
    f.set_coeff(0, 0, 1.0);
    f.set_coeff(0, 1, 0.5);
    f.set_coeff(1, 0, -2.0);
    CHECK(doubling_ratio_at(f, 1e-6, 256, 128) == doctest::Approx(1.0).epsilon(1e-4));
}

TEST_CASE("heuristic order") {
    CHECK(heuristic_order(max_vanishing_function(1).to_exppoly()) == 2);
    CHECK(heuristic_order(max_vanishing_function(2).to_exppoly()) == 5);
    ExpPoly one(exponential_curve(0, 1), 1);
    one.set_coeff(0, 0, 1.0);
    CHECK(heuristic_order(one) == 0);
    // e^{z^2} - 1 starts at z^2
    ExpPoly g(CurveSpec({0, 0, 1}, 0, 1), 1);
    g.set_coeff(0, 1, 1.0);
    g.set_coeff(0, 0, -1.0);
    CHECK(heuristic_order(g) == 2);
    for (int n = 0; n <= 3; ++n) CHECK(heuristic_maxord(exponential_curve(0, 1), n) == (n + 1) * (n + 2) / 2 - 1);
}
