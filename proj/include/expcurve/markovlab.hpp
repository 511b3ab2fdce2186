#pragma once

// Markov factors, doubling ratios and the derivative-bound chain on the curve.

#include "expcurve/chebsolve.hpp"
#include "expcurve/conditioned_basis.hpp"
#include "expcurve/valency.hpp"

#include <optional>
#include <vector>

namespace expcurve {

struct GridControls {
    int initial_size = 257;
    double rel_tol = 1e-3;
    int max_doublings = 4;
    Execution mode = Execution::parallel;
};

struct MarkovFactor {
    int n = 0;
    int dimension = 0;
    double lambda = 0.0;
    /// Node where the derivative functional attains lambda.
    double argmax = 0.0;
    int grid_size = 0;
    int doublings = 0;
    bool converged = false;
    RefinementTrace trace;
    /// Extremal function with |f| <= 1 on the final grid and f'(argmax) = lambda.
    std::optional<SpaceFunction> extremal;
};

/// Discrete Markov factor of V_n on [a, b]: the largest LP value of f'(x) over
/// the Chebyshev-Lobatto nodes x, with |f| <= 1 on the same nodes, refined
/// m -> 2m - 1 until stable.
MarkovFactor markov_factor(const CurveSpec& curve, int n, const GridControls& controls = {});

struct LineFit {
    double slope = 0.0;
    double intercept = 0.0;
    /// Root mean square residual of ln lambda about the line.
    double residual = 0.0;
};

struct MarkovReport {
    CurveSpec curve;
    std::vector<MarkovFactor> rows;
    /// Least squares line through (ln n, ln lambda_n); absent for a single degree.
    std::optional<LineFit> fit;

    bool monotone() const;
    /// lambda_n / n^4 for the last degree is at most `factor` times the median.
    bool envelope_bounded(double factor = 3.0) const;
};

MarkovReport run_markov_experiment(const CurveSpec& curve, int n_min, int n_max, const GridControls& controls = {});

LineFit fit_loglog(const std::vector<double>& x, const std::vector<double>& y);

struct DoublingResult {
    /// M = max over outer nodes of |f(z)| subject to |f| <= 1 on the inner nodes.
    double ratio = 0.0;
    double log_ratio = 0.0;
    std::complex<double> argmax{0.0, 0.0};
    LpStatus status = LpStatus::optimal;
    std::optional<SpaceFunction> extremal;
};

/// Outer nodes with negative imaginary part are skipped (|f(conj z)| = |f(z)|).
/// Complex inner nodes are imposed through an inscribed polygon with `faces`
/// sides, which can only lower M, by at most a factor cos(pi / faces).
DoublingResult doubling_ratio(const CurveSpec& curve, int n, const EvaluationGrid& inner, const EvaluationGrid& outer,
                              Execution mode = Execution::parallel, int faces = 32);

struct BernsteinWalshSample {
    int n = 0;
    double r1 = 0.0;
    double r2 = 0.0;
    std::complex<double> z0{0.0, 0.0};
    /// ln M(R2) - ln M(R1) for the measured extremal function.
    double log_growth = 0.0;
};

struct BernsteinWalshFit {
    double c1 = 0.0;
    double c2 = 0.0;
    bool feasible = true;
    std::vector<BernsteinWalshSample> samples;
    /// c1 R2 n + c2 n^2 ln(R2/R1) - log_growth per sample.
    std::vector<double> slack;
};

/// Smallest (c1, c2) >= 0 in the Euclidean sense with
/// log_growth <= c1 R2 n + c2 n^2 ln(R2 / R1) on every sample.
BernsteinWalshFit bernstein_walsh_fit(std::vector<BernsteinWalshSample> samples);

/// For t(z) = z: M(R2) / M(R1) on circle grids about z0, with the extremal f
/// for the pair found by doubling_ratio on the circles.
BernsteinWalshSample measure_bernstein_walsh(int n, double r1, double r2, std::complex<double> z0, int nodes = 128,
                                             Execution mode = Execution::parallel);

struct DoublingValency {
    int n = 0;
    double ratio = 0.0;  // M(R2) / M(R1) for the extremal f
    int p = 0;           // valency of f on |z - z0| <= R2
    /// ratio^(1/p)
    double per_valency = 0.0;
};

struct DoublingValencyReport {
    double r1 = 0.0;
    double r2 = 0.0;
    std::vector<DoublingValency> rows;
    /// max / min of per_valency over the rows.
    double spread = 0.0;
    bool stable = false;  // spread <= 2
};

/// For t(z) = z and n = 1..n_max: the doubling extremal f between circles of
/// radius R1 and R2 about z0, its valency on the outer disk, and ratio^(1/p).
DoublingValencyReport doubling_valency_consistency(int n_max, double r1, double r2, std::complex<double> z0,
                                                   int c_samples, std::uint64_t seed, int nodes = 128,
                                                   Execution mode = Execution::parallel);

struct CauchyCheck {
    double lhs = 0.0;  // |f'(x)|
    double rhs = 0.0;  // max over |z - x| = s of |f| / s
    double log_lhs = 0.0;
    double log_rhs = 0.0;
    bool pass = false;
};

/// f is treated as the entire function z -> sum alpha_ij z^i e^{j t(z)}; the
/// circle maximum is sampled on 2048 nodes and again on 4096.
CauchyCheck cauchy_derivative_bound_check(const ExpPoly& f, double x, double s);

/// |w/r + sqrt((w/r)^2 - 1)| with w = z - (a+b)/2, r = (b-a)/2, on the branch with modulus >= 1.
double joukowski_factor(std::complex<double> z, double a, double b);

/// sup of (J(z) - 1) / sqrt(s) over |z - x| <= s, x in [a, b], s = 1/k^4 for k = 1..10.
double joukowski_constant(double a, double b);

struct StepChoice {
    double s = 0.0;
    double bound = 0.0;     // max Joukowski factor over the s-neighbourhood of [a, b]
    double envelope = 0.0;  // 1 + C sqrt(s)
    double constant = 0.0;  // C
    bool pass = false;
};

/// s = 1/phi(n)^2 with phi(n) = n^2 and n = deg f.
StepChoice step_choice_check(const ExpPoly& f);

/// Max of the Joukowski factor over the circle |z - x| = s (the disk maximum, by subharmonicity).
double joukowski_max_on_circle(double x, double s, double a, double b, int nodes = 1024);

}  // namespace expcurve
