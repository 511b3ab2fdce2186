#pragma once

// Exact vanishing order at 0 for V_n with t(z) = z: the derivative matrix
// of x^i e^{jx}, its determinant, the function vanishing to order N - 1, and
// the small-r doubling limit of that function.

#include "expcurve/expspace.hpp"

#include <boost/multiprecision/gmp.hpp>

#include <optional>
#include <string>
#include <vector>

namespace expcurve {

using Integer = boost::multiprecision::mpz_int;
using Rational = boost::multiprecision::mpq_rational;

struct DerivativeMatrix {
    int n = 0;
    std::vector<BasisTerm> terms;  // column order
    /// entries[s][k] = (d/dx)^s (x^i e^{jx}) at 0 for terms[k] = (i, j).
    std::vector<std::vector<Integer>> entries;

    int size() const { return static_cast<int>(terms.size()); }
};

/// C(s, i) i! j^(s - i) for s >= i, else 0, with 0^0 = 1.
Integer derivative_entry(int s, int i, int j);

DerivativeMatrix derivative_matrix(int n);

/// Fraction-free (Bareiss) elimination with row pivoting.
Integer bareiss_determinant(std::vector<std::vector<Integer>> m);

/// det of derivative_matrix(n); nonzero means the N conditions at 0 are independent.
Integer wronskian_determinant(int n);

struct VanishingCertificate {
    int n = 0;
    int dimension = 0;
    std::vector<BasisTerm> terms;
    std::vector<Rational> alpha;
    Integer determinant;
    bool wronskian_nonzero = false;
    /// Largest s with f^(k)(0) = 0 for all k < s, checked exactly; N - 1 when certified.
    int verified_order = 0;

    std::vector<std::string> alpha_strings() const;
    ExpPoly to_exppoly() const;
};

/// f in V_n with f^(s)(0) = 0 for s <= N - 2 and f^(N-1)(0) = 1, by exact
/// rational elimination and exact re-substitution. Requires 0 <= n <= 8.
VanishingCertificate max_vanishing_function(int n);

struct DoublingLimitRow {
    double r = 0.0;
    double ratio = 0.0;
    long bits = 0;
    bool precision_ok = true;
};

struct DoublingLimit {
    int n = 0;
    int dimension = 0;
    double target = 0.0;  // 2^(N-1)
    std::vector<DoublingLimitRow> rows;
    /// Smallest r whose ratio is within 5% of the target.
    bool within_tolerance = false;
    /// The last three ratios approach the target.
    bool monotone_tail = false;
    std::optional<double> exhausted_at;
};

/// ratio(r) = max_{[0, 2r]} |f| / max_{[0, r]} |f| on `nodes`-point Chebyshev
/// grids for the certified f, in MPFR with precision chosen per r so that
/// max |f| on [0, r] keeps at least 20 significant digits.
DoublingLimit doubling_limit_experiment(int n, const std::vector<double>& r_sequence, int nodes = 1024,
                                        long max_bits = 1 << 15);

/// Same ratio for an arbitrary ExpPoly (t(z) = z), evaluated in MPFR at `bits`.
double doubling_ratio_at(const ExpPoly& f, double r, int nodes, long bits);

/// max over 0 < |x| <= x_max of |f(x)| / (|x|^(N-1) / (N-1)!) for the certified f, in MPFR.
double taylor_domination(const VanishingCertificate& cert, double x_max = 1e-2, int samples = 64);

/// Heuristic: index of the first Taylor coefficient at 0 of f with modulus
/// above 1e-10 times the largest of the first `max_order` + 1, or -1.
int heuristic_order(const ExpPoly& f, int max_order = 60);

/// Heuristic maxord_0(V_n) for any polynomial t: the last Taylor order at which
/// the rank of the coefficient rows 0..s increases. Double precision.
int heuristic_maxord(const CurveSpec& curve, int n);

}  // namespace expcurve
