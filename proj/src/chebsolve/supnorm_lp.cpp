#include "expcurve/chebsolve.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace expcurve {

namespace {

constexpr double kRateTol = 1e-12;       // |a_k . d| below this never blocks
constexpr double kMultiplierTol = 1e-10; // multipliers above -tol are dual feasible
constexpr int kMaxIterations = 20000;
constexpr double kArtificialBound = 1e9;

struct Blocking {
    int row = -1;
    int sign = 0;
    double step = std::numeric_limits<double>::infinity();
};

}  // namespace

std::string to_string(LpStatus status) {
    switch (status) {
        case LpStatus::optimal: return "optimal";
        case LpStatus::unbounded: return "unbounded";
        case LpStatus::degenerate_resolved: return "degenerate-resolved";
    }
    return "unknown";
}

double ExtremalSolution::log_value() const {
    if (!(value > 0.0)) return value == 0.0 ? -std::numeric_limits<double>::infinity() : std::nan("");
    return std::log(value) + log_scale;
}

void SupNormProblem::validate() const {
    if (constraint_rows.cols() != objective.size())
        throw std::invalid_argument("SupNormProblem: objective length differs from constraint row length");
    if (!row_scales.empty() && static_cast<Eigen::Index>(row_scales.size()) != constraint_rows.rows())
        throw std::invalid_argument("SupNormProblem: one row scale per constraint row required");
    if (!constraint_rows.allFinite() || !objective.allFinite())
        throw std::invalid_argument("SupNormProblem: non-finite data");
}

SupNormSolver::SupNormSolver(const Eigen::MatrixXd& rows, const std::vector<double>& row_scales) {
    const Eigen::Index m = rows.rows();
    if (!row_scales.empty() && static_cast<Eigen::Index>(row_scales.size()) != m)
        throw std::invalid_argument("SupNormSolver: one row scale per constraint row required");
    a_ = rows;
    bound_.resize(m);
    row_norm_.resize(m);
    std::vector<double> log_bound(m, 0.0);
    double top = -std::numeric_limits<double>::infinity();
    for (Eigen::Index k = 0; k < m; ++k) {
        const double rho = rows.row(k).cwiseAbs().maxCoeff();
        row_norm_[k] = rho;
        if (rho == 0.0) continue;
        a_.row(k) /= rho;
        const double s = row_scales.empty() ? 0.0 : row_scales[k];
        log_bound[k] = -s - std::log(rho);
        top = std::max(top, log_bound[k]);
    }
    log_shift_ = std::isfinite(top) ? top : 0.0;
    for (Eigen::Index k = 0; k < m; ++k) bound_[k] = row_norm_[k] == 0.0 ? 1.0 : std::exp(log_bound[k] - log_shift_);
    const Eigen::Index N = rows.cols();
    aug_.resize(m + N, N);
    aug_ << a_, Eigen::MatrixXd::Identity(N, N);
    aug_bound_.resize(m + N);
    aug_bound_ << bound_, Eigen::VectorXd::Constant(N, kArtificialBound);
}

namespace {

// Working state of one maximization over normalized rows |a_k . y| <= bound_k.
struct Engine {
    const Eigen::MatrixXd& a;
    const Eigen::VectorXd& bound;
    Eigen::VectorXd g;
    int N;
    int m;
    Eigen::VectorXd y;
    Eigen::VectorXd ay;
    std::vector<int> wrow;
    std::vector<int> wsign;
    std::vector<char> in_w;
    Eigen::VectorXd lambda;
    int iterations = 0;

    enum class Outcome { optimal, unbounded, degenerate };

    Engine(const Eigen::MatrixXd& a_, const Eigen::VectorXd& bound_, Eigen::VectorXd g_)
        : a(a_), bound(bound_), g(std::move(g_)), N(static_cast<int>(a_.cols())), m(static_cast<int>(a_.rows())) {
        reset();
    }

    void reset() {
        y = Eigen::VectorXd::Zero(N);
        ay = Eigen::VectorXd::Zero(m);
        wrow.clear();
        wsign.clear();
        in_w.assign(m, 0);
    }

    void tick() {
        if (++iterations > kMaxIterations) throw std::runtime_error("SupNormSolver: iteration limit exceeded");
    }

    Eigen::MatrixXd working_matrix() const {
        Eigen::MatrixXd mt(N, wrow.size());
        for (std::size_t i = 0; i < wrow.size(); ++i) mt.col(i) = wsign[i] * a.row(wrow[i]).transpose();
        return mt;
    }

    void push(int row, int sign) {
        wrow.push_back(row);
        wsign.push_back(sign);
        in_w[row] = 1;
    }

    Blocking ratio_test(const Eigen::VectorXd& ad) const {
        Blocking best;
        for (int k = 0; k < m; ++k) {
            if (in_w[k]) continue;
            const double rate = ad[k];
            double step;
            int sign;
            if (rate > kRateTol) {
                step = (bound[k] - ay[k]) / rate;
                sign = 1;
            } else if (rate < -kRateTol) {
                step = (bound[k] + ay[k]) / -rate;
                sign = -1;
            } else {
                continue;
            }
            step = std::max(step, 0.0);
            if (step < best.step) {
                best.step = step;
                best.row = k;
                best.sign = sign;
            }
        }
        return best;
    }

    // Parametric simplex: the basis is optimal for g0 (nonnegative
    // multipliers, feasible vertex); follow g(tau) = (1 - tau) g0 + tau g to
    // tau = 1, pivoting only where a multiplier crosses zero. A long run of
    // zero-length steps at a degenerate vertex gives up (caller starts cold).
    Outcome parametric(const Eigen::VectorXd& g0, Eigen::VectorXd* ray) {
        double tau = 0.0;
        int stalled = 0;
        for (;;) {
            tick();
            const Eigen::MatrixXd bt = working_matrix();
            Eigen::PartialPivLU<Eigen::MatrixXd> lu_t(bt);
            Eigen::PartialPivLU<Eigen::MatrixXd> lu(bt.transpose());
            const Eigen::VectorXd l0 = lu_t.solve(g0);
            const Eigen::VectorXd l1 = lu_t.solve(g);
            if (!l0.allFinite() || !l1.allFinite()) return Outcome::degenerate;
            int leave = -1;
            double next = 1.0;
            for (int i = 0; i < N; ++i) {
                const double drop = std::max(l0[i], 0.0) - l1[i];
                if (drop <= 0.0 || l1[i] >= -kMultiplierTol) continue;
                const double t = std::max(tau, std::max(l0[i], 0.0) / drop);
                if (t < next || (t == next && leave >= 0 && wrow[i] < wrow[leave])) {
                    next = t;
                    leave = i;
                }
            }
            if (leave < 0) {
                lambda = l1;
                return Outcome::optimal;
            }
            tau = next;
            // Edge that relaxes row `leave` and keeps the others tight.
            Eigen::VectorXd rhs = Eigen::VectorXd::Zero(N);
            rhs[leave] = -1.0;
            Eigen::VectorXd d = lu.solve(rhs);
            d /= d.norm();
            const Eigen::VectorXd ad = a * d;
            in_w[wrow[leave]] = 0;
            const Blocking b = ratio_test(ad);
            if (b.row < 0) {
                if (ray) *ray = d;
                return Outcome::unbounded;
            }
            stalled = b.step > 1e-14 ? 0 : stalled + 1;
            if (stalled > 2 * N) return Outcome::degenerate;
            y += b.step * d;
            ay += b.step * ad;
            wrow[leave] = b.row;
            wsign[leave] = b.sign;
            in_w[b.row] = 1;
        }
    }

    // Basis position minimizing (lambda_i, Binv(i, 0), ..., Binv(i, N-1)) / alpha_i
    // lexicographically over alpha_i > 0; -1 when no entry is positive.
    int lex_ratio(const Eigen::PartialPivLU<Eigen::MatrixXd>& lu_t, const Eigen::VectorXd& alpha) const {
        std::vector<int> cand;
        for (int i = 0; i < N; ++i)
            if (alpha[i] > 1e-12) cand.push_back(i);
        if (cand.empty()) return -1;
        auto narrow = [&](auto&& key) {
            double lo = std::numeric_limits<double>::infinity(), scale = 0.0;
            for (int i : cand) {
                lo = std::min(lo, key(i));
                scale = std::max(scale, std::abs(key(i)));
            }
            const double tol = 1e-12 * std::max(scale, 1e-300);
            std::vector<int> keep;
            for (int i : cand)
                if (key(i) <= lo + tol) keep.push_back(i);
            cand.swap(keep);
        };
        // multipliers at rounding level are ties at zero, resolved by the lexicographic keys
        const double zero = 1e-12 * std::max(1.0, lambda.cwiseAbs().maxCoeff());
        narrow([&](int i) { return lambda[i] <= zero ? 0.0 : lambda[i] / alpha[i]; });
        if (cand.size() > 1) {
            const Eigen::MatrixXd binv = lu_t.inverse();
            for (int j = 0; j < N && cand.size() > 1; ++j) narrow([&](int i) { return binv(i, j) / alpha[i]; });
        }
        int leave = cand.front();
        for (int i : cand)
            if (wrow[i] < wrow[leave]) leave = i;
        return leave;
    }

    // Dual simplex from a full working set whose multipliers are nonnegative:
    // repeatedly bring in the most violated row and drop the basis row chosen
    // by the dual ratio test. Ratio ties are broken lexicographically by the
    // rows of B^{-1} (an infinitesimally perturbed objective), so the method
    // cannot cycle on the heavily degenerate vertices these problems have.
    // Returns false when the start is not usable.
    bool dual() {
        if (static_cast<int>(wrow.size()) != N) return false;
        bool first = true;
        for (;;) {
            tick();
            const Eigen::MatrixXd bt = working_matrix();  // columns sign_i a_i
            Eigen::PartialPivLU<Eigen::MatrixXd> lu_t(bt);
            Eigen::PartialPivLU<Eigen::MatrixXd> lu(bt.transpose());
            if (!(std::abs(lu.determinant()) > 0.0)) return false;
            Eigen::VectorXd rhs(N);
            for (int i = 0; i < N; ++i) rhs[i] = bound[wrow[i]];
            y = lu.solve(rhs);
            lambda = lu_t.solve(g);
            if (!y.allFinite() || !lambda.allFinite()) return false;
            if (first && lambda.minCoeff() < -1e-9) return false;
            first = false;
            ay = a * y;

            int enter = -1;
            double worst = 1.0 + 1e-12;
            for (int k = 0; k < m; ++k) {
                if (in_w[k]) continue;
                const double v = std::abs(ay[k]) / bound[k];
                if (v > worst) {
                    worst = v;
                    enter = k;
                }
            }
            if (enter < 0) return true;
            const int esign = ay[enter] > 0.0 ? 1 : -1;
            const Eigen::VectorXd alpha = lu_t.solve(esign * a.row(enter).transpose());
            const int leave = lex_ratio(lu_t, alpha);
            if (leave < 0) throw std::runtime_error("SupNormSolver: constraint set is infeasible");
            in_w[wrow[leave]] = 0;
            wrow[leave] = enter;
            wsign[leave] = esign;
            in_w[enter] = 1;
        }
    }
};

}  // namespace

ExtremalSolution SupNormSolver::maximize(const Eigen::VectorXd& objective, double objective_log_scale,
                                         const ExtremalSolution* warm) const {
    const int N = dimension();
    const int m = rows();
    if (objective.size() != N) throw std::invalid_argument("SupNormSolver: objective length mismatch");

    ExtremalSolution out;
    out.coefficients = Eigen::VectorXd::Zero(N);
    out.coefficient_log_scale = log_shift_;
    out.log_scale = objective_log_scale + log_shift_;
    const double gamma = objective.cwiseAbs().maxCoeff();
    if (gamma == 0.0) return out;

    Engine e(a_, bound_, objective / gamma);
    bool solved = false;
    Engine::Outcome outcome = Engine::Outcome::optimal;
    Eigen::VectorXd ray;

    // Warm start from a full basis. If its multipliers fit the new objective
    // the dual simplex repairs any infeasibility (refined grids); otherwise a
    // feasible vertex is carried to the new objective parametrically.
    if (warm && static_cast<int>(warm->active_set.size()) == N) {
        bool ok = true;
        Eigen::VectorXd l0(N);
        for (int i = 0; i < N && ok; ++i) {
            const auto& c = warm->active_set[i];
            ok = c.row >= 0 && c.row < m && !e.in_w[c.row] && (c.sign == 1 || c.sign == -1);
            if (!ok) break;
            e.push(c.row, c.sign);
            l0[i] = std::max(0.0, c.multiplier * row_norm_[c.row]);
        }
        if (ok) solved = e.dual();
        if (!solved && ok) {
            // dual() left y at the warm vertex; it must be feasible here.
            Eigen::PartialPivLU<Eigen::MatrixXd> lu(e.working_matrix().transpose());
            Eigen::VectorXd rhs(N);
            for (int i = 0; i < N; ++i) rhs[i] = bound_[e.wrow[i]];
            e.y = lu.solve(rhs);
            e.ay = a_ * e.y;
            for (int k = 0; k < m && ok; ++k) ok = std::abs(e.ay[k]) <= bound_[k] * (1.0 + 1e-9) + 1e-13;
            ok = ok && e.y.allFinite() && l0.maxCoeff() > 0.0;
            if (ok) {
                const Eigen::VectorXd g0 = e.working_matrix() * l0;
                outcome = e.parametric(g0 / g0.cwiseAbs().maxCoeff(), &ray);
                solved = outcome != Engine::Outcome::degenerate;
            }
        }
        if (!solved) {
            e.reset();
            e.iterations = 0;
            outcome = Engine::Outcome::optimal;
        }
    }

    if (!solved) {
        // Cold start: the artificial box |y_i| <= M with signs of g is a
        // dual-feasible basis for any objective.
        Engine boxed(aug_, aug_bound_, objective / gamma);
        for (int i = 0; i < N; ++i) boxed.push(m + i, boxed.g[i] >= 0.0 ? 1 : -1);
        if (!boxed.dual()) throw std::runtime_error("SupNormSolver: artificial basis is singular");
        // Artificial rows left in the basis mean the rows do not span; a positive
        // multiplier on one means the objective grows without bound.
        bool artificial_active = false;
        std::vector<int> keep_row, keep_sign;
        for (int i = 0; i < N; ++i) {
            if (boxed.wrow[i] >= m) {
                if (boxed.lambda[i] > kMultiplierTol) artificial_active = true;
                continue;
            }
            keep_row.push_back(boxed.wrow[i]);
            keep_sign.push_back(boxed.wsign[i]);
        }
        e.iterations = boxed.iterations;
        if (artificial_active) {
            outcome = Engine::Outcome::unbounded;
            ray = boxed.y / boxed.y.norm();
        } else {
            for (std::size_t i = 0; i < keep_row.size(); ++i) e.push(keep_row[i], keep_sign[i]);
            e.y = boxed.y;
            e.ay = a_ * e.y;
            if (static_cast<int>(keep_row.size()) < N) outcome = Engine::Outcome::degenerate;
        }
    }

    if (outcome == Engine::Outcome::unbounded) {
        out.status = LpStatus::unbounded;
        out.value = std::numeric_limits<double>::infinity();
        out.iterations = e.iterations;
        out.coefficients = ray;
        return out;
    }
    if (outcome == Engine::Outcome::degenerate) out.status = LpStatus::degenerate_resolved;

    const int w = static_cast<int>(e.wrow.size());
    if (w > 0) e.lambda = e.working_matrix().completeOrthogonalDecomposition().solve(e.g);
    std::vector<int> order(w);
    for (int i = 0; i < w; ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](int x, int z) { return e.wrow[x] < e.wrow[z]; });
    for (int i : order)
        out.active_set.push_back({e.wrow[i], e.wsign[i], e.lambda[i] * gamma / row_norm_[e.wrow[i]]});

    out.coefficients = e.y;
    out.value = gamma * e.g.dot(e.y);
    out.iterations = e.iterations;
    return out;
}

ExtremalSolution solve_supnorm_lp(const SupNormProblem& problem) {
    problem.validate();
    SupNormSolver solver(problem.constraint_rows, problem.row_scales);
    return solver.maximize(problem.objective, problem.objective_log_scale);
}

}  // namespace expcurve
