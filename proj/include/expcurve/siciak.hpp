#pragma once

// Per-degree Siciak extremal functions, the relative extremal function of an
// interval in a confocal ellipse, and the real-versus-complex comparison.

#include "expcurve/chebsolve.hpp"
#include "expcurve/markovlab.hpp"
#include "expcurve/valency.hpp"

#include <complex>
#include <optional>
#include <string>
#include <vector>

namespace expcurve {

class PhiFunction {
public:
    enum class Kind { n_squared, n_linear, custom };

    static PhiFunction n_squared() { return PhiFunction(Kind::n_squared, {}); }
    static PhiFunction n_linear() { return PhiFunction(Kind::n_linear, {}); }
    /// table[n - 1] = phi(n); must be positive and nondecreasing.
    static PhiFunction custom(std::vector<double> table);

    Kind kind() const { return kind_; }
    double operator()(int n) const;
    std::string name() const;

private:
    PhiFunction(Kind kind, std::vector<double> table) : kind_(kind), table_(std::move(table)) {}
    Kind kind_;
    std::vector<double> table_;
};

struct SiciakSample {
    std::complex<double> z;
    int n = 0;
    /// ln of max |f(z)| over |f| <= 1 on the K grid.
    double raw_log_max = 0.0;
    double phi_n = 0.0;
    /// raw_max^(1 / phi(n)).
    double phi_value = 0.0;
    LpStatus status = LpStatus::optimal;
};

/// Phi_{K,n}(z) for f in V_n. Complex K nodes use the polygon relaxation of
/// ConditionedBasis::constraint_rows with `faces` sides.
SiciakSample siciak_value(const EvaluationGrid& K, std::complex<double> z, int n, const CurveSpec& curve,
                          const PhiFunction& phi, int faces = 32);

enum class Verdict { bounded, unbounded_trend, inconclusive };
std::string to_string(Verdict v);

/// unbounded-trend if some sequence rises by 1.5x or more from first to last;
/// otherwise bounded if every last value is at most 1.1x the max of the earlier
/// ones; otherwise inconclusive.
Verdict boundedness_verdict(const std::vector<std::vector<double>>& per_probe);

struct BoundednessSweep {
    std::vector<std::complex<double>> probes;
    int n_min = 1;
    int n_max = 1;
    PhiFunction phi = PhiFunction::n_squared();
    /// samples[n - n_min][probe]
    std::vector<std::vector<SiciakSample>> samples;
    Verdict verdict = Verdict::inconclusive;

    /// Same raw maxima reweighted by another phi.
    BoundednessSweep with_phi(const PhiFunction& other) const;
};

BoundednessSweep boundedness_sweep(const EvaluationGrid& K, const std::vector<std::complex<double>>& probes, int n_min,
                                   int n_max, const CurveSpec& curve, const PhiFunction& phi,
                                   Execution mode = Execution::parallel, int faces = 32);

struct EllipseSpec {
    double a = -1.0;
    double b = 1.0;
    double c = 1.0;

    double center() const { return 0.5 * (a + b); }
    double r() const { return 0.5 * (b - a); }
    double major() const { return r() + c; }
    /// Joukowski radius of the boundary: R/r + sqrt((R/r)^2 - 1).
    double rho() const;
    void validate() const;
    bool contains(std::complex<double> z, double rel_tol = 1e-12) const;
    /// The confocal ellipse with Joukowski radius level (1 <= level <= rho()) at m angles.
    std::vector<std::complex<double>> level_curve(double level, int m) const;
};

/// u(z) = ln|w/r + sqrt((w/r)^2 - 1)| / ln(rho) on the closed ellipse; throws
/// std::domain_error outside it.
double relative_extremal(std::complex<double> z, const EllipseSpec& ellipse);

/// Nodes of the closed ellipse: [a, b] at `angles` / 2 + 1 Chebyshev nodes and
/// `levels` confocal ellipses strictly between it and the boundary.
std::vector<std::complex<double>> filled_ellipse_nodes(const EllipseSpec& ellipse, int levels, int angles);

struct CompetitorCheck {
    double norm_e = 0.0;      // sup |f| over [a, b]
    double norm_omega = 0.0;  // sup |f| over the ellipse boundary
    double max_violation = 0.0;
    std::complex<double> worst{0.0, 0.0};
    bool skipped = false;  // norm_omega ~ norm_e, g undefined
    bool pass = false;     // skipped or max_violation <= 1e-9
};

/// max over `nodes` of g(z) - u(z) with g = (ln|f| - ln||f||_E) / (ln||f||_Omega - ln||f||_E).
/// The norms are maximized over e_grid and omega_grid and polished by golden
/// section between neighbouring nodes.
CompetitorCheck competitor_inequality_check(const ExpPoly& f, const EllipseSpec& ellipse, const EvaluationGrid& e_grid,
                                            const EvaluationGrid& omega_grid,
                                            const std::vector<std::complex<double>>& nodes);

/// 2 + ln(24 e)
double cartan_exponent();

struct ComparisonRow {
    int n = 0;
    double rho = 0.0;            // max over the disk / max over the interval, extremal f
    double growth = 0.0;         // M((4e+1) R1) / M(R1) for the same f
    double log_bound = 0.0;      // cartan_exponent() * ln growth
    double rho_per_phi = 0.0;    // rho^(1 / phi(n))
    bool pass = false;           // ln rho <= log_bound + ln(1 + 1e-6)
};

struct RealComplexComparison {
    double x0 = 0.0;
    double r1 = 1.0;
    std::vector<ComparisonRow> rows;
    bool pass = false;
};

/// For n in [n_min, n_max]: the extremal f of max over |z - x0| = R1 subject to
/// |f| <= 1 on [x0 - R1, x0 + R1], and the check rho_n <= (M((4e+1)R1)/M(R1))^(2 + ln 24e).
RealComplexComparison real_complex_comparison(int n_min, int n_max, const CurveSpec& curve, double x0, double r1,
                                              const PhiFunction& phi = PhiFunction::n_squared(), int nodes = 256,
                                              Execution mode = Execution::parallel);

/// max over the circle |z - x0| = R1 of |f| divided by max over [x0 - R1, x0 + R1].
double interval_disk_ratio(const EntireFunction& f, double x0, double r1, int nodes = 1024);

}  // namespace expcurve
