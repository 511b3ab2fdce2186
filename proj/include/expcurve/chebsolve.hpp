#pragma once

// Sup-norm extremal problems
//
//     maximize  g . c   subject to  |r_k . c| e^{s_k} <= 1  for every row k
//
// solved exactly at grid resolution by a dual simplex seeded from an
// artificial box, or by a parametric simplex from a warm vertex. Ties go to
// the smallest row index, which keeps results deterministic.

#include "expcurve/conditioned_basis.hpp"
#include "expcurve/parallel.hpp"

#include <Eigen/Dense>

#include <complex>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace expcurve {

struct SupNormProblem {
    Eigen::VectorXd objective;
    double objective_log_scale = 0.0;
    Eigen::MatrixXd constraint_rows;
    /// True row k is constraint_rows.row(k) * e^{row_scales[k]}; empty means all zero.
    std::vector<double> row_scales;

    void validate() const;
};

enum class LpStatus { optimal, unbounded, degenerate_resolved };
std::string to_string(LpStatus status);

struct ActiveConstraint {
    int row;
    int sign;  // +1: r.c at its upper bound, -1: at its lower bound
    /// objective = sum multiplier * sign * constraint_rows.row(k) (unscaled rows).
    double multiplier;
};

struct ExtremalSolution {
    /// Optimum is value * e^{log_scale}.
    double value = 0.0;
    double log_scale = 0.0;
    /// Maximizer is coefficients * e^{coefficient_log_scale}.
    Eigen::VectorXd coefficients;
    double coefficient_log_scale = 0.0;
    std::vector<ActiveConstraint> active_set;
    LpStatus status = LpStatus::optimal;
    int iterations = 0;
    /// For complex functionals: the rotation e^{-i angle} whose real part was maximized.
    double angle = 0.0;

    double log_value() const;
};

/// Preprocessed constraint set; `maximize` may be called concurrently.
class SupNormSolver {
public:
    SupNormSolver(const Eigen::MatrixXd& rows, const std::vector<double>& row_scales = {});
    explicit SupNormSolver(const ScaledRows& rows) : SupNormSolver(rows.rows, rows.log_scale) {}

    int rows() const { return static_cast<int>(a_.rows()); }
    int dimension() const { return static_cast<int>(a_.cols()); }

    /// Warm start from the active set of an earlier solution on the same rows;
    /// ignored if that vertex is not feasible.
    ExtremalSolution maximize(const Eigen::VectorXd& objective, double objective_log_scale = 0.0,
                              const ExtremalSolution* warm = nullptr) const;

    /// max |g . c| over the same constraints for a complex functional g.
    /// Scans 64 rotations of [0, pi) and refines the best by golden section to
    /// `angle_tol` radians; the reported value is |g . c| at the best c.
    ExtremalSolution max_abs(const Eigen::VectorXcd& objective, double objective_log_scale = 0.0,
                             double angle_tol = 1e-4) const;

private:
    Eigen::MatrixXd a_;        // rows scaled to unit max entry
    Eigen::VectorXd bound_;    // |a_k . y| <= bound_k, max bound 1
    Eigen::VectorXd row_norm_; // max entry of the original row
    double log_shift_ = 0.0;   // c = y e^{log_shift_}
    Eigen::MatrixXd aug_;      // a_ followed by the identity (artificial box rows)
    Eigen::VectorXd aug_bound_;
};

ExtremalSolution solve_supnorm_lp(const SupNormProblem& problem);

ExtremalSolution max_abs_functional(const Eigen::VectorXcd& objective, const SupNormProblem& rows,
                                    double angle_tol = 1e-4);

/// Largest |g_k . c| over several complex functionals. Every functional gets a
/// coarse 16-angle scan, which is within a factor cos(pi/32) of its true value;
/// only those that can still beat the best are solved in full.
struct MultiAbsResult {
    ExtremalSolution solution;
    int best_index = -1;
    int refined = 0;
};
MultiAbsResult max_abs_over(const SupNormSolver& solver, const std::vector<ScaledFunctional>& objectives,
                            Execution mode = Execution::parallel);

/// Independent maximizations of real objectives over one constraint set.
/// `reference` solves each from a cold start in a serial loop; `parallel`
/// splits the batch into fixed chunks of 64, warm-starts inside each chunk and
/// distributes the chunks over threads. Results are stored by index.
std::vector<ExtremalSolution> solve_batch(const SupNormSolver& solver, const ScaledRows& objectives,
                                          Execution mode = Execution::parallel);

struct RefinementStep {
    int grid_size;
    double value;
    double log_scale;
    int iterations;
};

struct RefinementTrace {
    std::vector<RefinementStep> steps;
    bool converged = false;
    int doublings = 0;
};

struct RefinedSolution {
    ExtremalSolution solution;
    RefinementTrace trace;
};

struct RefineControls {
    int initial_size = 257;
    double rel_tol = 1e-3;
    int max_doublings = 4;
};

/// Solves at controls.initial_size nodes and refines m -> 2m - 1 (nested
/// Chebyshev-Lobatto grids) until the optimum moves by less than rel_tol
/// relative. Non-convergence is recorded in the trace, not thrown.
RefinedSolution refine_until_stable(const std::function<SupNormProblem(int)>& builder, const RefineControls& controls);
RefinedSolution refine_until_stable(const std::function<ExtremalSolution(int)>& solve, const RefineControls& controls);

}  // namespace expcurve
