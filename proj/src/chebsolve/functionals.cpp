#include "expcurve/chebsolve.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace expcurve {

namespace {

constexpr int kScanAngles = 64;
constexpr int kCoarseAngles = 16;
constexpr int kChunk = 64;

Eigen::VectorXd rotated(const Eigen::VectorXcd& g, double theta) {
    // Re(e^{-i theta} g)
    return std::cos(theta) * g.real() + std::sin(theta) * g.imag();
}

bool is_real(const Eigen::VectorXcd& g) { return g.imag().cwiseAbs().maxCoeff() == 0.0; }

// |g . c| for the solution's c, in the solution's scale.
double modulus(const Eigen::VectorXcd& g, const ExtremalSolution& s) {
    return std::abs((g.transpose() * s.coefficients.cast<std::complex<double>>())(0));
}

// Best |g . c| over rotations theta_k = k pi / count, warm-started along the scan.
ExtremalSolution scan(const SupNormSolver& solver, const Eigen::VectorXcd& g, double log_scale, int count,
                      int* best_k) {
    ExtremalSolution best;
    double best_mod = -1.0;
    ExtremalSolution prev;
    for (int k = 0; k < count; ++k) {
        const double theta = std::numbers::pi * k / count;
        ExtremalSolution s = solver.maximize(rotated(g, theta), log_scale, k > 0 ? &prev : nullptr);
        s.angle = theta;
        const double mod = modulus(g, s);
        if (mod > best_mod) {
            best_mod = mod;
            best = s;
            if (best_k) *best_k = k;
        }
        prev = std::move(s);
    }
    best.value = best_mod;
    return best;
}

}  // namespace

ExtremalSolution SupNormSolver::max_abs(const Eigen::VectorXcd& objective, double objective_log_scale,
                                        double angle_tol) const {
    if (is_real(objective)) {
        ExtremalSolution s = maximize(objective.real(), objective_log_scale);
        s.value = std::abs(s.value);
        return s;
    }
    int k = 0;
    ExtremalSolution best = scan(*this, objective, objective_log_scale, kScanAngles, &k);
    if (best.status == LpStatus::unbounded) {
        best.value = std::numeric_limits<double>::infinity();
        return best;
    }
    double best_mod = best.value;

    // Golden section on the bracket around the best scan angle.
    const double h = std::numbers::pi / kScanAngles;
    double lo = best.angle - h, hi = best.angle + h;
    const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
    ExtremalSolution warm = best;
    auto eval = [&](double theta) {
        ExtremalSolution s = maximize(rotated(objective, theta), objective_log_scale, &warm);
        s.angle = theta;
        const double mod = modulus(objective, s);
        if (mod > best_mod) {
            best_mod = mod;
            best = s;
        }
        const double v = s.value;
        warm = std::move(s);
        return v;
    };
    double x1 = hi - invphi * (hi - lo), x2 = lo + invphi * (hi - lo);
    double f1 = eval(x1), f2 = eval(x2);
    while (hi - lo > angle_tol) {
        if (f1 >= f2) {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - invphi * (hi - lo);
            f1 = eval(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + invphi * (hi - lo);
            f2 = eval(x2);
        }
    }
    best.value = best_mod;
    return best;
}

ExtremalSolution max_abs_functional(const Eigen::VectorXcd& objective, const SupNormProblem& rows, double angle_tol) {
    if (rows.constraint_rows.cols() != objective.size())
        throw std::invalid_argument("max_abs_functional: objective length differs from constraint row length");
    SupNormSolver solver(rows.constraint_rows, rows.row_scales);
    return solver.max_abs(objective, rows.objective_log_scale, angle_tol);
}

MultiAbsResult max_abs_over(const SupNormSolver& solver, const std::vector<ScaledFunctional>& objectives,
                            Execution mode) {
    const int count = static_cast<int>(objectives.size());
    MultiAbsResult out;
    if (count == 0) return out;

    std::vector<ExtremalSolution> full(count);
    std::vector<char> survivor(count, 1);

    if (mode == Execution::parallel) {
        std::vector<double> coarse(count);
#pragma omp parallel for schedule(dynamic, 1)
        for (int k = 0; k < count; ++k) {
            const auto& g = objectives[k];
            ExtremalSolution s = is_real(g.values) ? solver.max_abs(g.values, g.log_scale)
                                                   : scan(solver, g.values, g.log_scale, kCoarseAngles, nullptr);
            coarse[k] = s.log_value();
            if (is_real(g.values)) full[k] = std::move(s);
        }
        const double top = *std::max_element(coarse.begin(), coarse.end());
        const double slack = -std::log(std::cos(std::numbers::pi / (2 * kCoarseAngles)));
        for (int k = 0; k < count; ++k) survivor[k] = coarse[k] + slack >= top;
#pragma omp parallel for schedule(dynamic, 1)
        for (int k = 0; k < count; ++k) {
            if (!survivor[k] || is_real(objectives[k].values)) continue;
            full[k] = solver.max_abs(objectives[k].values, objectives[k].log_scale);
        }
    } else {
        for (int k = 0; k < count; ++k) full[k] = solver.max_abs(objectives[k].values, objectives[k].log_scale);
    }

    double best = -std::numeric_limits<double>::infinity();
    for (int k = 0; k < count; ++k) {
        if (!survivor[k]) continue;
        out.refined += 1;
        const double v = full[k].status == LpStatus::unbounded ? std::numeric_limits<double>::infinity()
                                                               : full[k].log_value();
        if (v > best || out.best_index < 0) {
            best = v;
            out.best_index = k;
        }
    }
    out.solution = full[out.best_index];
    return out;
}

std::vector<ExtremalSolution> solve_batch(const SupNormSolver& solver, const ScaledRows& objectives,
                                          Execution mode) {
    const int count = static_cast<int>(objectives.rows.rows());
    std::vector<ExtremalSolution> out(count);
    auto scale = [&](int k) { return objectives.log_scale.empty() ? 0.0 : objectives.log_scale[k]; };
    if (mode == Execution::reference) {
        for (int k = 0; k < count; ++k) out[k] = solver.maximize(objectives.rows.row(k).transpose(), scale(k));
        return out;
    }
    const int chunks = (count + kChunk - 1) / kChunk;
#pragma omp parallel for schedule(dynamic, 1)
    for (int c = 0; c < chunks; ++c) {
        const int begin = c * kChunk;
        const int end = std::min(count, begin + kChunk);
        for (int k = begin; k < end; ++k) {
            const ExtremalSolution* warm = k > begin ? &out[k - 1] : nullptr;
            out[k] = solver.maximize(objectives.rows.row(k).transpose(), scale(k), warm);
        }
    }
    return out;
}

namespace {

double relative_change(const ExtremalSolution& a, const ExtremalSolution& b) {
    if (a.value == 0.0 && b.value == 0.0) return 0.0;
    if (a.value == 0.0 || b.value == 0.0) return std::numeric_limits<double>::infinity();
    return std::abs(std::expm1(a.log_value() - b.log_value()));
}

}  // namespace

RefinedSolution refine_until_stable(const std::function<ExtremalSolution(int)>& solve, const RefineControls& controls) {
    if (!(controls.rel_tol > 0.0)) throw std::invalid_argument("refine_until_stable: rel_tol must be positive");
    if (controls.initial_size < 2) throw std::invalid_argument("refine_until_stable: initial grid needs two nodes");
    RefinedSolution out;
    int m = controls.initial_size;
    out.solution = solve(m);
    out.trace.steps.push_back({m, out.solution.value, out.solution.log_scale, out.solution.iterations});
    if (out.solution.value == 0.0) {
        out.trace.converged = true;
        return out;
    }
    while (out.trace.doublings < controls.max_doublings) {
        m = 2 * m - 1;
        ExtremalSolution next = solve(m);
        out.trace.doublings += 1;
        out.trace.steps.push_back({m, next.value, next.log_scale, next.iterations});
        const double change = relative_change(next, out.solution);
        out.solution = std::move(next);
        if (change < controls.rel_tol) {
            out.trace.converged = true;
            break;
        }
    }
    return out;
}

RefinedSolution refine_until_stable(const std::function<SupNormProblem(int)>& builder, const RefineControls& controls) {
    return refine_until_stable(std::function<ExtremalSolution(int)>([&](int m) { return solve_supnorm_lp(builder(m)); }),
                               controls);
}

}  // namespace expcurve
