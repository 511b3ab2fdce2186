#include "expcurve/siciak.hpp"

#include <boost/math/tools/minima.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace expcurve {

PhiFunction PhiFunction::custom(std::vector<double> table) {
    if (table.empty()) throw std::invalid_argument("PhiFunction: empty table");
    for (std::size_t k = 0; k < table.size(); ++k) {
        if (!(table[k] > 0.0)) throw std::invalid_argument("PhiFunction: values must be positive");
        if (k > 0 && table[k] < table[k - 1]) throw std::invalid_argument("PhiFunction: values must be nondecreasing");
    }
    return PhiFunction(Kind::custom, std::move(table));
}

double PhiFunction::operator()(int n) const {
    if (n < 1) throw std::invalid_argument("PhiFunction: n must be at least 1");
    switch (kind_) {
        case Kind::n_squared: return static_cast<double>(n) * n;
        case Kind::n_linear: return n;
        case Kind::custom:
            if (n > static_cast<int>(table_.size())) throw std::out_of_range("PhiFunction: n beyond the custom table");
            return table_[n - 1];
    }
    return 0.0;
}

std::string PhiFunction::name() const {
    switch (kind_) {
        case Kind::n_squared: return "n^2";
        case Kind::n_linear: return "n";
        case Kind::custom: return "custom";
    }
    return "unknown";
}

namespace {

// |f| <= 1 on K for f in V_n, ready to be maximized at many points.
class SiciakProblem {
public:
    SiciakProblem(const EvaluationGrid& K, int n, const CurveSpec& curve, int faces)
        : basis_(ConditionedBasis::create(curve, n, K.nodes())), solver_(basis_->constraint_rows(K.nodes(), faces)) {}

    ExtremalSolution solve(std::complex<double> z) const {
        const ScaledFunctional q = basis_->values(z);
        if (z.imag() == 0.0) return solver_.maximize(q.values.real(), q.log_scale);
        return solver_.max_abs(q.values, q.log_scale);
    }

private:
    std::shared_ptr<const ConditionedBasis> basis_;
    SupNormSolver solver_;
};

SiciakSample make_sample(std::complex<double> z, int n, const ExtremalSolution& s, const PhiFunction& phi) {
    SiciakSample out;
    out.z = z;
    out.n = n;
    out.status = s.status;
    out.phi_n = phi(n);
    out.raw_log_max = s.status == LpStatus::unbounded ? std::numeric_limits<double>::infinity() : s.log_value();
    out.phi_value = std::exp(out.raw_log_max / out.phi_n);
    return out;
}

// Largest of h over [lo, hi] near a sampled maximum, by Brent's method.
template <class F>
double polish_max(F h, double lo, double hi, double sampled) {
    const auto r = boost::math::tools::brent_find_minima([&](double x) { return -h(x); }, lo, hi, 52);
    return std::max(sampled, -r.second);
}

}  // namespace

SiciakSample siciak_value(const EvaluationGrid& K, std::complex<double> z, int n, const CurveSpec& curve,
                          const PhiFunction& phi, int faces) {
    if (n < 1) throw std::invalid_argument("siciak_value: n must be at least 1");
    const SiciakProblem problem(K, n, curve, faces);
    return make_sample(z, n, problem.solve(z), phi);
}

std::string to_string(Verdict v) {
    switch (v) {
        case Verdict::bounded: return "bounded";
        case Verdict::unbounded_trend: return "unbounded-trend";
        case Verdict::inconclusive: return "inconclusive";
    }
    return "unknown";
}

Verdict boundedness_verdict(const std::vector<std::vector<double>>& per_probe) {
    bool bounded = true;
    for (const auto& seq : per_probe) {
        if (seq.empty()) continue;
        if (seq.back() >= 1.5 * seq.front()) return Verdict::unbounded_trend;
        if (seq.size() >= 2) {
            const double earlier = *std::max_element(seq.begin(), seq.end() - 1);
            if (!(seq.back() <= 1.1 * earlier)) bounded = false;
        }
    }
    return bounded ? Verdict::bounded : Verdict::inconclusive;
}

namespace {

Verdict sweep_verdict(const BoundednessSweep& s) {
    std::vector<std::vector<double>> per_probe(s.probes.size());
    for (const auto& row : s.samples)
        for (std::size_t p = 0; p < row.size(); ++p) per_probe[p].push_back(row[p].phi_value);
    return boundedness_verdict(per_probe);
}

}  // namespace

BoundednessSweep BoundednessSweep::with_phi(const PhiFunction& other) const {
    BoundednessSweep out = *this;
    out.phi = other;
    for (auto& row : out.samples)
        for (auto& s : row) {
            s.phi_n = other(s.n);
            s.phi_value = std::exp(s.raw_log_max / s.phi_n);
        }
    out.verdict = sweep_verdict(out);
    return out;
}

BoundednessSweep boundedness_sweep(const EvaluationGrid& K, const std::vector<std::complex<double>>& probes, int n_min,
                                   int n_max, const CurveSpec& curve, const PhiFunction& phi, Execution mode,
                                   int faces) {
    if (n_min < 1 || n_max < n_min) throw std::invalid_argument("boundedness_sweep: need 1 <= n_min <= n_max");
    if (probes.empty()) throw std::invalid_argument("boundedness_sweep: no probes");
    BoundednessSweep out;
    out.probes = probes;
    out.n_min = n_min;
    out.n_max = n_max;
    out.phi = phi;
    for (int n = n_min; n <= n_max; ++n) {
        const SiciakProblem problem(K, n, curve, faces);
        std::vector<SiciakSample> row(probes.size());
        const int count = static_cast<int>(probes.size());
        if (mode == Execution::parallel) {
#pragma omp parallel for schedule(dynamic, 1)
            for (int p = 0; p < count; ++p) row[p] = make_sample(probes[p], n, problem.solve(probes[p]), phi);
        } else {
            for (int p = 0; p < count; ++p) row[p] = make_sample(probes[p], n, problem.solve(probes[p]), phi);
        }
        out.samples.push_back(std::move(row));
    }
    out.verdict = sweep_verdict(out);
    return out;
}

// ---------------------------------------------------------------------------

double EllipseSpec::rho() const {
    const double q = major() / r();
    return q + std::sqrt(q * q - 1.0);
}

void EllipseSpec::validate() const {
    if (!(a < b)) throw std::invalid_argument("EllipseSpec: need a < b");
    if (!(c > 0.0)) throw std::invalid_argument("EllipseSpec: need c > 0");
}

bool EllipseSpec::contains(std::complex<double> z, double rel_tol) const {
    const double focal = std::abs(z - a) + std::abs(z - b);
    return focal <= 2.0 * major() + rel_tol * std::max({1.0, major(), std::abs(a), std::abs(b)});
}

std::vector<std::complex<double>> EllipseSpec::level_curve(double level, int m) const {
    if (!(level >= 1.0) || level > rho() * (1.0 + 1e-15)) throw std::invalid_argument("level_curve: need 1 <= level <= rho");
    std::vector<std::complex<double>> out;
    out.reserve(m);
    for (int k = 0; k < m; ++k) {
        const std::complex<double> e = std::polar(1.0, 2.0 * std::numbers::pi * k / m);
        out.push_back(center() + r() * 0.5 * (level * e + std::conj(e) / level));
    }
    return out;
}

double relative_extremal(std::complex<double> z, const EllipseSpec& ellipse) {
    ellipse.validate();
    if (!ellipse.contains(z)) throw std::domain_error("relative_extremal: point outside the ellipse");
    double u = std::log(joukowski_factor(z, ellipse.a, ellipse.b)) / std::log(ellipse.rho());
    if (u < 0.0 && u >= -1e-12) u = 0.0;
    if (u > 1.0 && u <= 1.0 + 1e-12) u = 1.0;
    return u;
}

std::vector<std::complex<double>> filled_ellipse_nodes(const EllipseSpec& ellipse, int levels, int angles) {
    ellipse.validate();
    if (levels < 1 || angles < 2) throw std::invalid_argument("filled_ellipse_nodes: need levels >= 1, angles >= 2");
    std::vector<std::complex<double>> out = EvaluationGrid::chebyshev_interval(ellipse.a, ellipse.b, angles / 2 + 1).nodes();
    const double rho = ellipse.rho();
    for (int k = 1; k <= levels; ++k) {
        const auto ring = ellipse.level_curve(std::pow(rho, static_cast<double>(k) / (levels + 1)), angles);
        out.insert(out.end(), ring.begin(), ring.end());
    }
    return out;
}

CompetitorCheck competitor_inequality_check(const ExpPoly& f, const EllipseSpec& ellipse, const EvaluationGrid& e_grid,
                                            const EvaluationGrid& omega_grid,
                                            const std::vector<std::complex<double>>& nodes) {
    ellipse.validate();
    if (omega_grid.kind() != GridKind::ellipse_boundary)
        throw std::invalid_argument("competitor_inequality_check: omega_grid must be an ellipse boundary grid");
    auto log_abs = [&](std::complex<double> z) { return evaluate(f, z).log_abs(); };

    // ||f||_E: best sampled node, then Brent between its neighbours.
    std::vector<double> xs;
    for (const auto& z : e_grid.nodes()) {
        if (z.imag() != 0.0 || z.real() < ellipse.a || z.real() > ellipse.b)
            throw std::invalid_argument("competitor_inequality_check: e_grid must lie on [a, b]");
        xs.push_back(z.real());
    }
    std::sort(xs.begin(), xs.end());
    std::size_t best = 0;
    std::vector<double> le(xs.size());
    for (std::size_t k = 0; k < xs.size(); ++k) {
        le[k] = log_abs(xs[k]);
        if (le[k] > le[best]) best = k;
    }
    const double lo = xs[best > 0 ? best - 1 : 0], hi = xs[std::min(best + 1, xs.size() - 1)];
    const double log_e = lo < hi ? polish_max([&](double x) { return log_abs(x); }, lo, hi, le[best]) : le[best];

    // ||f||_Omega on the boundary, parameterized by the Joukowski angle.
    const int m = static_cast<int>(omega_grid.nodes().size());
    const double rho = ellipse.rho();
    auto boundary = [&](double theta) {
        const std::complex<double> e = std::polar(1.0, theta);
        return ellipse.center() + ellipse.r() * 0.5 * (rho * e + std::conj(e) / rho);
    };
    int kb = 0;
    double lb = -std::numeric_limits<double>::infinity();
    for (int k = 0; k < m; ++k) {
        const double v = log_abs(omega_grid.nodes()[k]);
        if (v > lb) {
            lb = v;
            kb = k;
        }
    }
    const double step = 2.0 * std::numbers::pi / m;
    const double log_omega = polish_max([&](double t) { return log_abs(boundary(t)); }, (kb - 1) * step, (kb + 1) * step, lb);

    CompetitorCheck out;
    out.norm_e = std::exp(log_e);
    out.norm_omega = std::exp(log_omega);
    const double span = log_omega - log_e;
    if (!(span > 1e-9)) {
        out.skipped = true;
        out.pass = true;
        return out;
    }
    out.max_violation = -std::numeric_limits<double>::infinity();
    for (const auto& z : nodes) {
        const double g = (log_abs(z) - log_e) / span;
        const double v = g - relative_extremal(z, ellipse);
        if (v > out.max_violation) {
            out.max_violation = v;
            out.worst = z;
        }
    }
    out.pass = out.max_violation <= 1e-9;
    return out;
}

// ---------------------------------------------------------------------------

double cartan_exponent() { return 2.0 + std::log(24.0 * std::numbers::e); }

namespace {

template <class F>
double log_max_circle(F log_abs, double x0, double radius, int nodes) {
    double top = -std::numeric_limits<double>::infinity();
    for (const auto& z : EvaluationGrid::circle(x0, radius, nodes).nodes()) top = std::max(top, log_abs(z));
    return top;
}

template <class F>
double log_max_interval(F log_abs, double lo, double hi, int nodes) {
    const auto grid = EvaluationGrid::chebyshev_interval(lo, hi, nodes);
    std::vector<double> xs;
    for (const auto& z : grid.nodes()) xs.push_back(z.real());
    std::size_t best = 0;
    double top = -std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < xs.size(); ++k) {
        const double v = log_abs(std::complex<double>(xs[k], 0.0));
        if (v > top) {
            top = v;
            best = k;
        }
    }
    if (xs.size() < 2) return top;
    const double a = xs[best > 0 ? best - 1 : 0], b = xs[std::min(best + 1, xs.size() - 1)];
    return polish_max([&](double x) { return log_abs(std::complex<double>(x, 0.0)); }, a, b, top);
}

}  // namespace

RealComplexComparison real_complex_comparison(int n_min, int n_max, const CurveSpec& curve, double x0, double r1,
                                              const PhiFunction& phi, int nodes, Execution mode) {
    if (!(r1 > 0.0)) throw std::invalid_argument("real_complex_comparison: R1 must be positive");
    if (n_min < 1 || n_max < n_min) throw std::invalid_argument("real_complex_comparison: need 1 <= n_min <= n_max");
    RealComplexComparison out;
    out.x0 = x0;
    out.r1 = r1;
    out.pass = true;
    const auto inner = EvaluationGrid::chebyshev_interval(x0 - r1, x0 + r1, 257);
    const auto outer = EvaluationGrid::circle(x0, r1, nodes);
    const double r2 = (4.0 * std::numbers::e + 1.0) * r1;
    for (int n = n_min; n <= n_max; ++n) {
        const DoublingResult d = doubling_ratio(curve, n, inner, outer, mode);
        if (!d.extremal) throw std::runtime_error("real_complex_comparison: doubling LP unbounded");
        const SpaceFunction& f = *d.extremal;
        auto log_abs = [&](std::complex<double> z) { return f.evaluate(z).log_abs(); };
        const double m1 = log_max_circle(log_abs, x0, r1, 4 * nodes);
        const double m2 = log_max_circle(log_abs, x0, r2, 4 * nodes);
        const double mi = log_max_interval(log_abs, x0 - r1, x0 + r1, 1025);
        ComparisonRow row;
        row.n = n;
        row.rho = std::exp(m1 - mi);
        row.growth = std::exp(m2 - m1);
        row.log_bound = cartan_exponent() * (m2 - m1);
        row.rho_per_phi = std::exp((m1 - mi) / phi(n));
        row.pass = m1 - mi <= row.log_bound + std::log1p(1e-6);
        out.pass = out.pass && row.pass;
        out.rows.push_back(row);
    }
    return out;
}

double interval_disk_ratio(const EntireFunction& f, double x0, double r1, int nodes) {
    if (!(r1 > 0.0)) throw std::invalid_argument("interval_disk_ratio: R1 must be positive");
    auto log_abs = [&](std::complex<double> z) { return f.value(z).log_abs(); };
    return std::exp(log_max_circle(log_abs, x0, r1, nodes) - log_max_interval(log_abs, x0 - r1, x0 + r1, nodes + 1));
}

}  // namespace expcurve
