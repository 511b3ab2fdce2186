#pragma once

// A well-conditioned coordinate system for V_n.
//
// The monomial-exponential basis z^i e^{j t(z)} is numerically dependent on
// short intervals (condition numbers near 1e50 at n = 8), so sup-norm problems
// cannot be posed in it with double-precision rows. Here the basis values at a
// set of anchor nodes are factored A P = Q R by column-pivoted Householder QR in
// MPFR arithmetic, and every function is written as f = q(z) . y with
// q(z) = R^{-T} P^T phi(z). The columns of Q are orthonormal on the anchors, so
// q stays O(1) there and the LP sees well-scaled rows. The transformation to and
// from raw coefficients is only ever applied in high precision.

#include "expcurve/expspace.hpp"
#include "expcurve/mp.hpp"

#include <Eigen/Dense>

#include <complex>
#include <memory>
#include <string>
#include <vector>

namespace expcurve {

/// Real rows with a natural-log scale each: true row k = rows.row(k) * e^{log_scale[k]}.
struct ScaledRows {
    Eigen::MatrixXd rows;
    std::vector<double> log_scale;
};

/// A complex linear functional y -> values . y scaled by e^{log_scale}.
struct ScaledFunctional {
    Eigen::VectorXcd values;
    double log_scale = 0.0;
};

class ConditionedBasis;

/// f = sum c_b phi_b with the raw coefficients c held in high precision.
class SpaceFunction {
public:
    ScaledValue evaluate(std::complex<double> z) const;
    /// d/dz of the entire function; on the real axis this is the tangential derivative.
    ScaledValue derivative(std::complex<double> z) const;

    int degree() const;
    const CurveSpec& curve() const;
    /// Raw coefficients over space_terms(n, curve), rounded to double.
    std::vector<double> coefficients() const;
    /// Raw coefficients as decimal strings with `digits` significant digits.
    std::vector<std::string> coefficient_strings(int digits = 20) const;
    /// Rounded copy; only meaningful when the coefficients are not cancelling.
    ExpPoly to_exppoly() const;

private:
    friend class ConditionedBasis;
    std::shared_ptr<const ConditionedBasis> basis_;
    std::vector<mp::Real> coeffs_;
};

class ConditionedBasis : public std::enable_shared_from_this<ConditionedBasis> {
public:
    /// Anchors with negative imaginary part are ignored: for real coefficients
    /// f(conj z) = conj f(z), so their conjugates carry the same information.
    static std::shared_ptr<const ConditionedBasis> create(const CurveSpec& curve, int n,
                                                         const std::vector<std::complex<double>>& anchors);

    int degree() const { return n_; }
    int size() const { return static_cast<int>(terms_.size()); }
    const CurveSpec& curve() const { return curve_; }
    const std::vector<BasisTerm>& terms() const { return terms_; }
    /// Working precision in bits.
    long precision() const { return bits_; }
    /// True when the anchors do not determine V_n; coordinates are then the raw basis.
    bool rank_deficient() const { return rank_deficient_; }
    /// log2 of min |R_kk| / max |R_kk| from the factorization.
    double log2_conditioning() const { return log2_cond_; }

    /// q(z): f(z) = q(z) . y.
    ScaledFunctional values(std::complex<double> z) const;
    /// q'(z): f'(z) = q'(z) . y.
    ScaledFunctional derivative_values(std::complex<double> z) const;

    /// Constraint rows for |f| <= 1 on the nodes. A real node gives one row. A
    /// node with positive imaginary part gives faces/2 rows describing the
    /// regular `faces`-gon inscribed in the unit circle (vertices at the
    /// roots of unity, so |f(z)| = 1 with arg f(z) = 0 stays feasible). Nodes
    /// with negative imaginary part are skipped by conjugate symmetry.
    ScaledRows constraint_rows(const std::vector<std::complex<double>>& nodes, int faces = 32) const;
    /// Rows of f'(x) at real nodes; each row is the derivative functional.
    ScaledRows derivative_rows(const std::vector<double>& nodes) const;

    /// Function with coordinates y scaled by e^{log_scale}.
    SpaceFunction function(const Eigen::VectorXd& y, double log_scale = 0.0) const;

private:
    friend class SpaceFunction;
    ConditionedBasis(CurveSpec curve, int n);

    struct MpVector;
    MpVector raw_values(std::complex<double> z, bool derivative) const;
    ScaledFunctional transform(MpVector&& phi) const;
    void factor(const std::vector<std::complex<double>>& anchors, long bits);

    CurveSpec curve_;
    int n_;
    std::vector<BasisTerm> terms_;
    long bits_ = 0;
    bool rank_deficient_ = false;
    double log2_cond_ = 0.0;
    std::vector<int> perm_;        // column k of A P is column perm_[k] of A
    std::vector<mp::Real> r_;      // upper triangle of R, row-major N x N
};

}  // namespace expcurve
