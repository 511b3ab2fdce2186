#pragma once

// The spaces V_n = { P(z, e^{t(z)}) : deg P <= n } on the curve y = e^{t(x)}.
//
// Basis functions are z^i e^{j t(z)} with i + j <= n, ordered lexicographically
// in (j, i): all j = 0 terms first (the plain polynomials), then the e^{t}
// block, and so on. When t is constant the e^{j t} factors are scalars and the
// space collapses to polynomials of degree <= n, so only the j = 0 block is a
// basis of the space.

#include "expcurve/scaled_value.hpp"

#include <Eigen/Dense>

#include <complex>
#include <span>
#include <string>
#include <vector>

namespace expcurve {

struct CurveSpec {
    std::vector<double> t_coeffs;  // ascending degree
    double interval_a = 0.0;
    double interval_b = 1.0;

    CurveSpec() : t_coeffs{0.0, 1.0} {}
    CurveSpec(std::vector<double> t, double a, double b);

    /// Index of the last nonzero coefficient; 0 for constant t.
    int degree() const;
    bool is_constant() const { return degree() == 0; }

    std::complex<double> t(std::complex<double> z) const;
    std::complex<double> t_prime(std::complex<double> z) const;

    /// Throws std::invalid_argument naming the offending field.
    void validate() const;
};

/// The curve y = e^x on [a, b].
CurveSpec exponential_curve(double a, double b);
/// t == 0: V_n collapses to polynomials of degree <= n.
CurveSpec polynomial_curve(double a, double b);

struct BasisTerm {
    int i;  // power of z
    int j;  // power of e^{t(z)}
    friend bool operator==(const BasisTerm&, const BasisTerm&) = default;
};

/// Number of pairs (i, j) with i + j <= n.
int full_term_count(int n);
/// Position of z^i e^{j t} in the full (j, i)-lexicographic table.
int term_index(int i, int j, int n);
/// Every (i, j) with i + j <= n in project order.
std::vector<BasisTerm> full_terms(int n);
/// Basis of V_n for this curve: full_terms(n), or the j = 0 block when t is constant.
std::vector<BasisTerm> space_terms(int n, const CurveSpec& curve);

/// dim V_n: (n+1)(n+2)/2, or n+1 when t is constant.
int dimension(int n, const CurveSpec& curve);

/// An element of V_n, stored densely over full_terms(n).
class ExpPoly {
public:
    ExpPoly(CurveSpec curve, int n);
    ExpPoly(CurveSpec curve, int n, std::vector<double> coeffs);

    /// Coordinates over space_terms(n, curve).
    static ExpPoly from_space(const CurveSpec& curve, int n, std::span<const double> coords);

    int degree() const { return n_; }
    const CurveSpec& curve() const { return curve_; }
    const std::vector<double>& coeffs() const { return coeffs_; }

    double coeff(int i, int j) const;
    void set_coeff(int i, int j, double value);
    bool is_zero() const;

    ExpPoly operator+(const ExpPoly& other) const;
    ExpPoly operator*(double s) const;

private:
    CurveSpec curve_;
    int n_;
    std::vector<double> coeffs_;
};

/// f(z) = sum alpha_ij z^i e^{j t(z)}, accumulated relative to the dominant
/// exponential block so no intermediate overflows.
ScaledValue evaluate(const ExpPoly& f, std::complex<double> z);

/// Derivative of the entire function z -> f(z) at a complex point.
ScaledValue derivative(const ExpPoly& f, std::complex<double> z);

/// d/dx P(x, e^{t(x)}) = sum alpha_ij (i x^{i-1} + j t'(x) x^i) e^{j t(x)}.
ScaledValue tangential_derivative(const ExpPoly& f, double x);

// ---------------------------------------------------------------------------
// Evaluation grids

enum class GridKind { chebyshev_interval, uniform_interval, circle, filled_disk, ellipse_boundary };

std::string to_string(GridKind kind);

struct GridGeometry {
    // intervals and ellipses
    double a = 0.0;
    double b = 0.0;
    // circles and disks
    std::complex<double> center{0.0, 0.0};
    double radius = 0.0;
    // ellipse: major axis [a - c, b + c]
    double c = 0.0;
};

class EvaluationGrid {
public:
    /// Chebyshev-Lobatto points (a+b)/2 - (b-a)/2 cos(k pi/(m-1)), endpoints included.
    /// Nested under m -> 2m - 1.
    static EvaluationGrid chebyshev_interval(double a, double b, int m);
    static EvaluationGrid uniform_interval(double a, double b, int m);
    /// m equally spaced points on |z - center| = radius starting at angle 0.
    /// As a set it stands for the closed disk (maximum principle).
    static EvaluationGrid circle(std::complex<double> center, double radius, int m);
    /// Center plus `rings` concentric circles at Chebyshev radii, outermost at `radius`.
    static EvaluationGrid filled_disk(std::complex<double> center, double radius, int rings, int angles);
    /// Joukowski image of a circle: boundary of the ellipse with foci a, b and
    /// major axis [a - c, b + c].
    static EvaluationGrid ellipse_boundary(double a, double b, double c, int m);

    GridKind kind() const { return kind_; }
    const GridGeometry& geometry() const { return geometry_; }
    const std::vector<std::complex<double>>& nodes() const& { return nodes_; }
    /// By value on temporaries, so `for (z : EvaluationGrid::circle(...).nodes())` is safe.
    std::vector<std::complex<double>> nodes() && { return std::move(nodes_); }
    std::size_t size() const { return nodes_.size(); }
    bool is_real() const;
    /// Membership in the declared closed set, within `rel_tol` of its scale.
    bool contains(std::complex<double> z, double rel_tol = 1e-12) const;
    /// Real parts of the nodes (valid when is_real()).
    std::vector<double> real_nodes() const;

private:
    EvaluationGrid(GridKind kind, GridGeometry geometry, std::vector<std::complex<double>> nodes);

    GridKind kind_;
    GridGeometry geometry_;
    std::vector<std::complex<double>> nodes_;
};

/// Rows are grid nodes, columns the space basis; each row is divided by its
/// largest entry modulus, which is recorded as a natural-log row scale, so
/// true entry = values(k, b) * e^{row_log_scale[k]}.
struct ScaledMatrix {
    Eigen::MatrixXcd values;
    std::vector<double> row_log_scale;
    std::vector<BasisTerm> terms;

    /// Real parts, for grids on the real axis.
    Eigen::MatrixXd real_values() const { return values.real(); }
};

/// Throws std::invalid_argument when derivative rows are requested on a non-real grid.
ScaledMatrix evaluation_matrix(const EvaluationGrid& grid, int n, const CurveSpec& curve, bool derivative);

}  // namespace expcurve
