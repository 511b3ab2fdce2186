#include "expcurve/markovlab.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>

namespace expcurve {

namespace {

struct Level {
    int node = 0;
    double x = 0.0;
    ExtremalSolution solution;
};

// Index of the largest optimum; ties go to the smallest index.
int best_of(const std::vector<ExtremalSolution>& sols) {
    int best = 0;
    double top = -std::numeric_limits<double>::infinity();
    for (int k = 0; k < static_cast<int>(sols.size()); ++k) {
        if (sols[k].status == LpStatus::unbounded)
            throw std::runtime_error("markov_factor: derivative LP unbounded; the grid does not determine V_n");
        const double v = sols[k].value > 0.0 ? sols[k].log_value() : -std::numeric_limits<double>::infinity();
        if (v > top) {
            top = v;
            best = k;
        }
    }
    return best;
}

}  // namespace

MarkovFactor markov_factor(const CurveSpec& curve, int n, const GridControls& controls) {
    if (n < 1) throw std::invalid_argument("markov_factor: n must be at least 1");
    curve.validate();
    const double a = curve.interval_a, b = curve.interval_b;
    const auto anchors = EvaluationGrid::chebyshev_interval(a, b, controls.initial_size);
    const auto basis = ConditionedBasis::create(curve, n, anchors.nodes());

    std::map<int, Level> levels;
    auto solve = [&](int m) {
        const auto grid = EvaluationGrid::chebyshev_interval(a, b, m);
        const SupNormSolver solver(basis->constraint_rows(grid.nodes()));
        const auto sols = solve_batch(solver, basis->derivative_rows(grid.real_nodes()), controls.mode);
        const int k = best_of(sols);
        levels[m] = {k, grid.nodes()[k].real(), sols[k]};
        return sols[k];
    };
    const auto refined = refine_until_stable(std::function<ExtremalSolution(int)>(solve),
                                             {controls.initial_size, controls.rel_tol, controls.max_doublings});

    MarkovFactor out;
    out.n = n;
    out.dimension = basis->size();
    out.trace = refined.trace;
    out.grid_size = refined.trace.steps.back().grid_size;
    out.doublings = refined.trace.doublings;
    out.converged = refined.trace.converged;
    const Level& last = levels.at(out.grid_size);
    out.lambda = last.solution.value * std::exp(last.solution.log_scale);
    out.argmax = last.x;
    out.extremal = basis->function(last.solution.coefficients, last.solution.coefficient_log_scale);
    return out;
}

LineFit fit_loglog(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2) throw std::invalid_argument("fit_loglog: need two or more points");
    const std::size_t m = x.size();
    double sx = 0, sy = 0;
    std::vector<double> lx(m), ly(m);
    for (std::size_t k = 0; k < m; ++k) {
        if (!(x[k] > 0.0) || !(y[k] > 0.0)) throw std::invalid_argument("fit_loglog: values must be positive");
        lx[k] = std::log(x[k]);
        ly[k] = std::log(y[k]);
        sx += lx[k];
        sy += ly[k];
    }
    const double mx = sx / m, my = sy / m;
    double sxx = 0, sxy = 0;
    for (std::size_t k = 0; k < m; ++k) {
        sxx += (lx[k] - mx) * (lx[k] - mx);
        sxy += (lx[k] - mx) * (ly[k] - my);
    }
    if (sxx == 0.0) throw std::invalid_argument("fit_loglog: abscissae coincide");
    LineFit fit;
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    double ss = 0;
    for (std::size_t k = 0; k < m; ++k) {
        const double r = ly[k] - (fit.intercept + fit.slope * lx[k]);
        ss += r * r;
    }
    fit.residual = std::sqrt(ss / m);
    return fit;
}

bool MarkovReport::monotone() const {
    for (std::size_t k = 1; k < rows.size(); ++k)
        if (rows[k].lambda < rows[k - 1].lambda * (1 - 1e-9)) return false;
    return true;
}

bool MarkovReport::envelope_bounded(double factor) const {
    if (rows.empty()) return true;
    std::vector<double> q;
    for (const auto& r : rows) q.push_back(r.lambda / std::pow(static_cast<double>(r.n), 4));
    const double last = q.back();
    std::sort(q.begin(), q.end());
    const std::size_t m = q.size();
    const double median = m % 2 ? q[m / 2] : 0.5 * (q[m / 2 - 1] + q[m / 2]);
    return last <= factor * median;
}

MarkovReport run_markov_experiment(const CurveSpec& curve, int n_min, int n_max, const GridControls& controls) {
    if (n_min < 1 || n_max < n_min)
        throw std::invalid_argument("run_markov_experiment: need 1 <= n_min <= n_max");
    MarkovReport report;
    report.curve = curve;
    for (int n = n_min; n <= n_max; ++n) report.rows.push_back(markov_factor(curve, n, controls));
    if (n_max > n_min) {
        std::vector<double> x, y;
        for (const auto& r : report.rows) {
            x.push_back(r.n);
            y.push_back(r.lambda);
        }
        report.fit = fit_loglog(x, y);
    }
    return report;
}

DoublingResult doubling_ratio(const CurveSpec& curve, int n, const EvaluationGrid& inner, const EvaluationGrid& outer,
                              Execution mode, int faces) {
    if (n < 0) throw std::invalid_argument("doubling_ratio: n must be nonnegative");
    const auto basis = ConditionedBasis::create(curve, n, inner.nodes());
    const SupNormSolver solver(basis->constraint_rows(inner.nodes(), faces));
    std::vector<ScaledFunctional> fs;
    std::vector<std::complex<double>> zs;
    for (const auto& z : outer.nodes()) {
        if (z.imag() < 0.0) continue;
        fs.push_back(basis->values(z));
        zs.push_back(z);
    }
    if (fs.empty()) throw std::invalid_argument("doubling_ratio: outer grid has no nodes in the closed upper half plane");
    const MultiAbsResult best = max_abs_over(solver, fs, mode);
    DoublingResult out;
    out.status = best.solution.status;
    out.argmax = zs[best.best_index];
    if (out.status == LpStatus::unbounded) {
        out.ratio = out.log_ratio = std::numeric_limits<double>::infinity();
        return out;
    }
    out.log_ratio = best.solution.log_value();
    out.ratio = std::exp(out.log_ratio);
    out.extremal = basis->function(best.solution.coefficients, best.solution.coefficient_log_scale);
    return out;
}

namespace {

double log_max_on_circle(const SpaceFunction& f, std::complex<double> center, double radius, int nodes) {
    double top = -std::numeric_limits<double>::infinity();
    for (const auto& z : EvaluationGrid::circle(center, radius, nodes).nodes()) top = std::max(top, f.evaluate(z).log_abs());
    return top;
}

}  // namespace

BernsteinWalshSample measure_bernstein_walsh(int n, double r1, double r2, std::complex<double> z0, int nodes,
                                             Execution mode) {
    if (!(r1 > 0.0) || r2 < r1) throw std::invalid_argument("measure_bernstein_walsh: need 0 < R1 <= R2");
    const CurveSpec curve = exponential_curve(z0.real() - r1, z0.real() + r1);
    const auto inner = EvaluationGrid::circle(z0, r1, nodes);
    const auto outer = EvaluationGrid::circle(z0, r2, nodes);
    const DoublingResult d = doubling_ratio(curve, n, inner, outer, mode);
    if (!d.extremal) throw std::runtime_error("measure_bernstein_walsh: doubling LP unbounded");
    BernsteinWalshSample s{n, r1, r2, z0, 0.0};
    s.log_growth = log_max_on_circle(*d.extremal, z0, r2, 4 * nodes) - log_max_on_circle(*d.extremal, z0, r1, 4 * nodes);
    return s;
}

DoublingValencyReport doubling_valency_consistency(int n_max, double r1, double r2, std::complex<double> z0,
                                                   int c_samples, std::uint64_t seed, int nodes, Execution mode) {
    if (n_max < 1) throw std::invalid_argument("doubling_valency_consistency: n_max must be at least 1");
    if (!(r1 > 0.0) || r2 < r1) throw std::invalid_argument("doubling_valency_consistency: need 0 < R1 <= R2");
    DoublingValencyReport out{r1, r2, {}, 0.0, false};
    const CurveSpec curve = exponential_curve(z0.real() - r1, z0.real() + r1);
    const auto inner = EvaluationGrid::circle(z0, r1, nodes);
    const auto outer = EvaluationGrid::circle(z0, r2, nodes);
    double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
    for (int n = 1; n <= n_max; ++n) {
        const DoublingResult d = doubling_ratio(curve, n, inner, outer, mode);
        if (!d.extremal) throw std::runtime_error("doubling_valency_consistency: doubling LP unbounded");
        DoublingValency row;
        row.n = n;
        row.ratio = std::exp(log_max_on_circle(*d.extremal, z0, r2, 4 * nodes) -
                             log_max_on_circle(*d.extremal, z0, r1, 4 * nodes));
        const ValencyResult v = valency(EntireFunction::of(*d.extremal), Contour{z0, r2, 256}, c_samples,
                                        seed + static_cast<std::uint64_t>(n), mode);
        row.p = v.p;
        row.per_valency = row.p > 0 ? std::pow(row.ratio, 1.0 / row.p) : std::numeric_limits<double>::infinity();
        lo = std::min(lo, row.per_valency);
        hi = std::max(hi, row.per_valency);
        out.rows.push_back(row);
    }
    out.spread = hi / lo;
    out.stable = out.spread <= 2.0;
    return out;
}

BernsteinWalshFit bernstein_walsh_fit(std::vector<BernsteinWalshSample> samples) {
    BernsteinWalshFit fit;
    const std::size_t m = samples.size();
    std::vector<double> a(m), b(m), y(m);
    for (std::size_t k = 0; k < m; ++k) {
        const auto& s = samples[k];
        if (!(s.r1 > 0.0) || !(s.r2 > 0.0)) throw std::invalid_argument("bernstein_walsh_fit: radii must be positive");
        a[k] = s.r2 * s.n;
        b[k] = static_cast<double>(s.n) * s.n * std::log(s.r2 / s.r1);
        y[k] = s.log_growth;
    }
    auto feasible = [&](double c1, double c2) {
        if (c1 < 0.0 || c2 < 0.0) return false;
        for (std::size_t k = 0; k < m; ++k)
            if (c1 * a[k] + c2 * b[k] < y[k] - 1e-12 * std::max(1.0, std::abs(y[k]))) return false;
        return true;
    };
    // Minimum norm over a convex polygon in the plane: the origin, a projection
    // onto one edge line, or a vertex where two lines (axes included) meet.
    std::vector<std::pair<double, double>> cand{{0.0, 0.0}};
    for (std::size_t k = 0; k < m; ++k) {
        const double q = a[k] * a[k] + b[k] * b[k];
        if (q > 0.0) cand.emplace_back(y[k] * a[k] / q, y[k] * b[k] / q);
        if (a[k] != 0.0) cand.emplace_back(y[k] / a[k], 0.0);
        if (b[k] != 0.0) cand.emplace_back(0.0, y[k] / b[k]);
        for (std::size_t l = k + 1; l < m; ++l) {
            const double det = a[k] * b[l] - a[l] * b[k];
            if (det == 0.0) continue;
            cand.emplace_back((y[k] * b[l] - y[l] * b[k]) / det, (a[k] * y[l] - a[l] * y[k]) / det);
        }
    }
    double best = std::numeric_limits<double>::infinity();
    for (auto [c1, c2] : cand) {
        c1 = std::max(c1, 0.0);
        c2 = std::max(c2, 0.0);
        if (!feasible(c1, c2)) continue;
        const double norm = c1 * c1 + c2 * c2;
        if (norm < best) {
            best = norm;
            fit.c1 = c1;
            fit.c2 = c2;
        }
    }
    fit.feasible = std::isfinite(best);
    for (std::size_t k = 0; k < m; ++k) fit.slack.push_back(fit.c1 * a[k] + fit.c2 * b[k] - y[k]);
    fit.samples = std::move(samples);
    return fit;
}

CauchyCheck cauchy_derivative_bound_check(const ExpPoly& f, double x, double s) {
    if (!(s > 0.0)) throw std::invalid_argument("cauchy_derivative_bound_check: s must be positive");
    CauchyCheck out;
    const ScaledValue d = tangential_derivative(f, x);
    out.log_lhs = d.log_abs();
    double top = -std::numeric_limits<double>::infinity();
    for (int nodes : {2048, 4096})
        for (const auto& z : EvaluationGrid::circle(x, s, nodes).nodes()) top = std::max(top, evaluate(f, z).log_abs());
    out.log_rhs = top - std::log(s);
    out.lhs = std::exp(out.log_lhs);
    out.rhs = std::exp(out.log_rhs);
    out.pass = d.is_zero() || out.log_lhs <= out.log_rhs + std::log1p(1e-6);
    return out;
}

double joukowski_factor(std::complex<double> z, double a, double b) {
    const double r = 0.5 * (b - a);
    const std::complex<double> u = (z - 0.5 * (a + b)) / r;
    const std::complex<double> root = std::sqrt(u * u - 1.0);
    return std::max(std::abs(u + root), std::abs(u - root));
}

double joukowski_max_on_circle(double x, double s, double a, double b, int nodes) {
    double top = 0.0;
    for (const auto& z : EvaluationGrid::circle(x, s, nodes).nodes()) top = std::max(top, joukowski_factor(z, a, b));
    return top;
}

namespace {

double neighbourhood_max(double s, double a, double b) {
    double top = 0.0;
    for (double x : EvaluationGrid::chebyshev_interval(a, b, 257).real_nodes())
        top = std::max(top, joukowski_max_on_circle(x, s, a, b));
    return top;
}

}  // namespace

double joukowski_constant(double a, double b) {
    if (!(a < b)) throw std::invalid_argument("joukowski_constant: need a < b");
    double c = 0.0;
    for (int k = 1; k <= 10; ++k) {
        const double s = 1.0 / std::pow(static_cast<double>(k), 4);
        c = std::max(c, (neighbourhood_max(s, a, b) - 1.0) / std::sqrt(s));
    }
    return c;
}

StepChoice step_choice_check(const ExpPoly& f) {
    const int n = f.degree();
    if (n < 1 || f.is_zero()) throw std::invalid_argument("step_choice_check: f must be nonconstant");
    const double a = f.curve().interval_a, b = f.curve().interval_b;
    const double phi = static_cast<double>(n) * n;
    StepChoice out;
    out.s = 1.0 / (phi * phi);
    out.bound = neighbourhood_max(out.s, a, b);
    out.constant = joukowski_constant(a, b);
    out.envelope = 1.0 + out.constant * std::sqrt(out.s);
    out.pass = out.bound <= out.envelope * (1 + 1e-12);
    return out;
}

}  // namespace expcurve
