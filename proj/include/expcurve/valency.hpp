#pragma once

// Zero counting by the argument principle, valency of V_n functions on disks,
// and the symmetric-function reduction used to bound it.

#include "expcurve/conditioned_basis.hpp"
#include "expcurve/expspace.hpp"
#include "expcurve/parallel.hpp"

#include <complex>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace expcurve {

/// An entire function given by its value and derivative.
struct EntireFunction {
    std::function<ScaledValue(std::complex<double>)> value;
    std::function<ScaledValue(std::complex<double>)> derivative;

    static EntireFunction of(const ExpPoly& f);
    static EntireFunction of(const SpaceFunction& f);
    /// z -> f(z) - c
    EntireFunction minus(std::complex<double> c) const;
};

struct Contour {
    std::complex<double> center{0.0, 0.0};
    double radius = 1.0;
    /// Initial trapezoid nodes, a power of two >= 256.
    int node_count = 256;
};

enum class CountStatus { accepted, rejected_near_zero, identically_zero, unresolved };
std::string to_string(CountStatus status);

struct ZeroCount {
    Contour contour;  // the contour finally used (radius may be perturbed)
    int winding = 0;
    double integral_residual = 0.0;
    ScaledValue min_modulus;
    ScaledValue max_modulus;
    CountStatus status = CountStatus::accepted;
    int retries = 0;
    int nodes = 0;
};

struct CountControls {
    double residual_tol = 1e-6;
    /// Reject when |f'/f| r > 1 / near_zero somewhere on the contour, i.e. a zero
    /// lies within about near_zero * r of it.
    double near_zero = 1e-6;
    int max_retries = 5;
    double retry_growth = 1.01;
    int max_nodes = 1 << 16;
};

/// (1 / 2 pi i) of the contour integral of f'/f by the trapezoid rule on nested
/// node sets, doubling until the value is within residual_tol of an integer and
/// agrees with the previous level.
ZeroCount count_zeros(const EntireFunction& f, const Contour& contour, const CountControls& controls = {});

struct ValencyResult {
    Contour disk;
    std::vector<std::complex<double>> c_values;
    std::vector<ZeroCount> counts;
    /// Max accepted count.
    int p = 0;
    int dropped = 0;
};

/// Counts zeros of f - c on the disk for c = 0, values of f at random interior
/// points, and uniform draws from the bounding box of f on the boundary.
ValencyResult valency(const EntireFunction& f, const Contour& disk, int c_samples, std::uint64_t seed,
                      Execution mode = Execution::parallel);

struct TijdemanCheck {
    int d = 0;
    int n = 0;
    double r1 = 0.0;
    double bound = 0.0;
    int p_measured = 0;
    bool pass = false;
    ValencyResult valency;
};

/// R1 = (R/R0)^d max_{|z - z0| = R0} |t|, bound = 4 (d n^2 + d n R1).
TijdemanCheck tijdeman_bound_check(const ExpPoly& P, std::complex<double> z0, double R, double R0, int c_samples,
                                   std::uint64_t seed, Execution mode = Execution::parallel);

/// The d roots of t(z) = w by Aberth-Ehrlich iteration.
std::vector<std::complex<double>> roots_of_t_minus_w(const CurveSpec& curve, std::complex<double> w);

/// prod_j (P(z_j, e^w) - c) over the roots z_j of t(z) = w.
std::complex<double> reduced_value(const ExpPoly& P, std::complex<double> c, std::complex<double> w);

struct SymmetricReduction {
    double residual = 0.0;
    double condition = 0.0;
    bool regridded = false;
    /// Highest power of w with a non-negligible coefficient in b_k, or -1.
    std::vector<int> degrees;
    /// Fitted coefficients beta[k][l] of w^l e^{k w}.
    std::vector<std::vector<std::complex<double>>> beta;
    std::vector<std::complex<double>> w_grid;
};

/// Least squares fit of the reduced function by sum_{k <= nd} b_k(w) e^{k w}
/// with deg b_k <= n.
SymmetricReduction symmetric_reduction_check(const ExpPoly& P, std::complex<double> c,
                                             const std::vector<std::complex<double>>& w_grid);

/// Filled-disk grid on |w| <= radius with at least 2 (nd + 1)(n + 1) nodes.
std::vector<std::complex<double>> reduction_grid(int n, int d, double radius = 1.0);

/// Zeros of the reduced function on |w| <= radius, counted with the argument
/// principle applied to its logarithmic derivative
/// sum_j (P_z(z_j, e^w) / t'(z_j) + e^w P_y(z_j, e^w)) / (P(z_j, e^w) - c).
ZeroCount count_reduced_zeros(const ExpPoly& P, std::complex<double> c, double radius,
                              const CountControls& controls = {});

}  // namespace expcurve
