#include "expcurve/valency.hpp"

#include "expcurve/random.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <mutex>
#include <numbers>
#include <stdexcept>

namespace expcurve {

std::string to_string(CountStatus status) {
    switch (status) {
        case CountStatus::accepted: return "accepted";
        case CountStatus::rejected_near_zero: return "rejected-near-zero";
        case CountStatus::identically_zero: return "identically-zero";
        case CountStatus::unresolved: return "unresolved";
    }
    return "unknown";
}

EntireFunction EntireFunction::of(const ExpPoly& f) {
    return {[f](std::complex<double> z) { return evaluate(f, z); },
            [f](std::complex<double> z) { return expcurve::derivative(f, z); }};
}

EntireFunction EntireFunction::of(const SpaceFunction& f) {
    return {[f](std::complex<double> z) { return f.evaluate(z); },
            [f](std::complex<double> z) { return f.derivative(z); }};
}

EntireFunction EntireFunction::minus(std::complex<double> c) const {
    const ScaledValue sc = ScaledValue::from_complex(c);
    return {[v = value, sc](std::complex<double> z) { return v(z) - sc; }, derivative};
}

namespace {

// One contour node: f'/f there and ln|f|; `ok` false when the integrand is undefined.
struct Sample {
    std::complex<double> log_derivative;
    double log_abs;
    bool ok = true;
};

// Called with the node and its place k / total on the circle of retry `attempt`.
using Sampler = std::function<Sample(std::complex<double>, int attempt, int k, int total)>;

Sample make_sample(const ScaledValue& v, const ScaledValue& dv) {
    if (v.is_zero()) return Sample{0.0, -std::numeric_limits<double>::infinity(), true};
    return Sample{ratio(dv, v), v.log_abs(), true};
}

// f and f' on the unperturbed contour, filled lazily and shared by every c:
// f - c only shifts the value.
class NodeCache {
public:
    NodeCache(const EntireFunction& f, int size)
        : f_(f), size_(size), flags_(new std::once_flag[size]), value_(size), derivative_(size) {}

    std::pair<const ScaledValue&, const ScaledValue&> at(std::complex<double> z, int k, int total) {
        const int slot = k * (size_ / total);
        std::call_once(flags_[slot], [&] {
            value_[slot] = f_.value(z);
            derivative_[slot] = f_.derivative(z);
        });
        return {value_[slot], derivative_[slot]};
    }

    bool covers(int attempt, int total) const { return attempt == 0 && total <= size_ && size_ % total == 0; }

private:
    const EntireFunction& f_;
    int size_;
    std::unique_ptr<std::once_flag[]> flags_;
    std::vector<ScaledValue> value_, derivative_;
};

ZeroCount count_generic(const Sampler& sample, const Contour& contour, const CountControls& controls) {
    if (!(contour.radius > 0.0)) throw std::invalid_argument("count_zeros: radius must be positive");
    if (contour.node_count < 256 || (contour.node_count & (contour.node_count - 1)) != 0)
        throw std::invalid_argument("count_zeros: node_count must be a power of two >= 256");
    ZeroCount out;
    for (int attempt = 0; attempt <= controls.max_retries; ++attempt) {
        Contour c = contour;
        c.radius = contour.radius * std::pow(controls.retry_growth, attempt);
        out = ZeroCount{};
        out.contour = c;
        out.retries = attempt;

        double lo = std::numeric_limits<double>::infinity(), hi = -lo;
        bool undefined = false;
        double steep = 0.0;
        std::complex<double> sum = 0.0;
        auto add = [&](int k, int total) {
            const std::complex<double> u = std::polar(1.0, 2.0 * std::numbers::pi * k / total);
            const Sample s = sample(c.center + c.radius * u, attempt, k, total);
            if (!s.ok) {
                undefined = true;
                return;
            }
            lo = std::min(lo, s.log_abs);
            hi = std::max(hi, s.log_abs);
            if (std::isfinite(s.log_abs)) {
                sum += s.log_derivative * c.radius * u;
                steep = std::max(steep, std::abs(s.log_derivative) * c.radius);
            } else {
                steep = std::numeric_limits<double>::infinity();  // a node hit a zero
            }
        };

        int m = c.node_count;
        for (int k = 0; k < m; ++k) add(k, m);
        std::complex<double> prev{std::nan(""), 0.0};
        bool rejected = false;
        for (;;) {
            out.nodes = m;
            out.min_modulus = std::isfinite(lo) ? ScaledValue::from_parts(1.0, lo) : ScaledValue{};
            out.max_modulus = std::isfinite(hi) ? ScaledValue::from_parts(1.0, hi) : ScaledValue{};
            if (!std::isfinite(hi) && !undefined) {
                out.status = CountStatus::identically_zero;
                return out;
            }
            if (undefined || steep * controls.near_zero > 1.0) {
                rejected = true;
                break;
            }
            const std::complex<double> integral = sum / static_cast<double>(m);
            const double nearest = std::round(integral.real());
            out.winding = static_cast<int>(nearest);
            out.integral_residual = std::abs(integral - nearest);
            if (out.integral_residual <= controls.residual_tol && std::abs(integral - prev) <= controls.residual_tol) {
                out.status = CountStatus::accepted;
                return out;
            }
            if (2 * m > controls.max_nodes) {
                out.status = CountStatus::unresolved;
                return out;
            }
            prev = integral;
            for (int k = 1; k < 2 * m; k += 2) add(k, 2 * m);
            m *= 2;
        }
        if (!rejected) break;
        out.status = CountStatus::rejected_near_zero;
    }
    return out;
}

}  // namespace

ZeroCount count_zeros(const EntireFunction& f, const Contour& contour, const CountControls& controls) {
    return count_generic(
        [&](std::complex<double> z, int, int, int) { return make_sample(f.value(z), f.derivative(z)); }, contour,
        controls);
}

ValencyResult valency(const EntireFunction& f, const Contour& disk, int c_samples, std::uint64_t seed, Execution mode) {
    if (c_samples < 1) throw std::invalid_argument("valency: c_samples must be at least 1");
    ValencyResult out;
    out.disk = disk;
    SplitMix64 rng(seed);

    double re_lo = std::numeric_limits<double>::infinity(), re_hi = -re_lo, im_lo = re_lo, im_hi = -re_lo;
    for (int k = 0; k < 256; ++k) {
        const std::complex<double> v = f.value(disk.center + disk.radius * std::polar(1.0, 2.0 * std::numbers::pi * k / 256))
                                           .to_complex();
        re_lo = std::min(re_lo, v.real());
        re_hi = std::max(re_hi, v.real());
        im_lo = std::min(im_lo, v.imag());
        im_hi = std::max(im_hi, v.imag());
    }
    out.c_values.push_back(0.0);
    for (int k = 1; k < c_samples; ++k) {
        if (k % 2 == 1) {
            out.c_values.push_back(f.value(rng.in_disk(disk.center, disk.radius)).to_complex());
        } else {
            const double re = rng.uniform(re_lo, re_hi);
            const double im = rng.uniform(im_lo, im_hi);
            out.c_values.push_back({re, im});
        }
    }

    const CountControls controls;
    NodeCache cache(f, controls.max_nodes);
    auto count_one = [&](int k) {
        const ScaledValue c = ScaledValue::from_complex(out.c_values[k]);
        return count_generic(
            [&](std::complex<double> z, int attempt, int j, int total) {
                if (!cache.covers(attempt, total)) return make_sample(f.value(z) - c, f.derivative(z));
                const auto [v, dv] = cache.at(z, j, total);
                return make_sample(v - c, dv);
            },
            disk, controls);
    };
    const int count = static_cast<int>(out.c_values.size());
    out.counts.resize(count);
    if (mode == Execution::parallel) {
#pragma omp parallel for schedule(dynamic, 1)
        for (int k = 0; k < count; ++k) out.counts[k] = count_one(k);
    } else {
        for (int k = 0; k < count; ++k) out.counts[k] = count_one(k);
    }
    for (const auto& z : out.counts) {
        if (z.status == CountStatus::accepted) out.p = std::max(out.p, z.winding);
        else out.dropped += 1;
    }
    return out;
}

TijdemanCheck tijdeman_bound_check(const ExpPoly& P, std::complex<double> z0, double R, double R0, int c_samples,
                                   std::uint64_t seed, Execution mode) {
    const CurveSpec& curve = P.curve();
    TijdemanCheck out;
    out.d = curve.degree();
    out.n = P.degree();
    if (out.d < 1) throw std::invalid_argument("tijdeman_bound_check: deg t must be at least 1");
    if (out.n < 1) throw std::invalid_argument("tijdeman_bound_check: n must be at least 1");
    if (!(R0 > 0.0) || R < R0) throw std::invalid_argument("tijdeman_bound_check: need R >= R0 > 0");
    double tmax = 0.0;
    for (const auto& z : EvaluationGrid::circle(z0, R0, 4096).nodes()) tmax = std::max(tmax, std::abs(curve.t(z)));
    out.r1 = std::pow(R / R0, out.d) * tmax;
    out.bound = 4.0 * (out.d * out.n * out.n + out.d * out.n * out.r1);
    out.valency = valency(EntireFunction::of(P), Contour{z0, R, 256}, c_samples, seed, mode);
    out.p_measured = out.valency.p;
    out.pass = out.p_measured <= out.bound;
    return out;
}

// ---------------------------------------------------------------------------

std::vector<std::complex<double>> roots_of_t_minus_w(const CurveSpec& curve, std::complex<double> w) {
    const int d = curve.degree();
    if (d < 1) throw std::invalid_argument("roots_of_t_minus_w: t must be nonconstant");
    std::vector<std::complex<double>> c(d + 1);
    for (int k = 0; k <= d; ++k) c[k] = curve.t_coeffs[k];
    c[0] -= w;
    if (d == 1) return {-c[0] / c[1]};
    for (auto& x : c) x /= c[d];

    auto eval = [&](std::complex<double> z, std::complex<double>& dp) {
        std::complex<double> p = c[d];
        dp = 0.0;
        for (int k = d - 1; k >= 0; --k) {
            dp = dp * z + p;
            p = p * z + c[k];
        }
        return p;
    };
    double rho = 0.0;
    for (int k = 0; k < d; ++k) rho = std::max(rho, std::abs(c[k]));
    rho += 1.0;
    std::vector<std::complex<double>> z(d);
    for (int k = 0; k < d; ++k) z[k] = std::polar(rho, 2.0 * std::numbers::pi * k / d + 0.4);

    bool converged = false;
    for (int it = 0; it < 200 && !converged; ++it) {
        converged = true;
        for (int k = 0; k < d; ++k) {
            std::complex<double> dp;
            const std::complex<double> p = eval(z[k], dp);
            if (p == 0.0) continue;
            const std::complex<double> r = p / dp;
            std::complex<double> s = 0.0;
            for (int j = 0; j < d; ++j)
                if (j != k) s += 1.0 / (z[k] - z[j]);
            const std::complex<double> step = r / (1.0 - r * s);
            if (!std::isfinite(step.real()) || !std::isfinite(step.imag())) continue;
            z[k] -= step;
            if (std::abs(step) > 1e-13 * std::max(1.0, std::abs(z[k]))) converged = false;
        }
    }
    const double tol = 1e-10 * (1.0 + std::abs(w));
    for (const auto& r : z)
        if (!(std::abs(curve.t(r) - w) <= tol))
            throw std::runtime_error("roots_of_t_minus_w: Aberth iteration did not converge");
    return z;
}

namespace {

// a_j(z) = sum_i alpha_ij z^i and its z-derivative for every j.
void blocks(const ExpPoly& P, std::complex<double> z, std::vector<std::complex<double>>& a,
            std::vector<std::complex<double>>& da) {
    const int n = P.degree();
    a.assign(n + 1, 0.0);
    da.assign(n + 1, 0.0);
    for (int j = 0; j <= n; ++j) {
        for (int i = n - j; i >= 0; --i) {
            da[j] = da[j] * z + a[j];
            a[j] = a[j] * z + P.coeff(i, j);
        }
    }
}

}  // namespace

std::complex<double> reduced_value(const ExpPoly& P, std::complex<double> c, std::complex<double> w) {
    std::complex<double> prod = 1.0;
    std::vector<std::complex<double>> a, da;
    const std::complex<double> ew = std::exp(w);
    for (const auto& z : roots_of_t_minus_w(P.curve(), w)) {
        blocks(P, z, a, da);
        std::complex<double> v = 0.0;
        for (int j = static_cast<int>(a.size()) - 1; j >= 0; --j) v = v * ew + a[j];
        prod *= v - c;
    }
    return prod;
}

std::vector<std::complex<double>> reduction_grid(int n, int d, double radius) {
    const int unknowns = (n * d + 1) * (n + 1);
    const int angles = 32;
    const int rings = std::max(4, (2 * unknowns + angles - 1) / angles);
    return EvaluationGrid::filled_disk(0.0, radius, rings, angles).nodes();
}

SymmetricReduction symmetric_reduction_check(const ExpPoly& P, std::complex<double> c,
                                             const std::vector<std::complex<double>>& w_grid) {
    const int n = P.degree();
    const int d = P.curve().degree();
    if (d < 1) throw std::invalid_argument("symmetric_reduction_check: t must be nonconstant");
    const int K = n * d;
    const int unknowns = (K + 1) * (n + 1);
    if (static_cast<int>(w_grid.size()) < 2 * unknowns)
        throw std::invalid_argument("symmetric_reduction_check: w_grid needs at least 2 (nd+1)(n+1) points");

    SymmetricReduction out;
    std::vector<std::complex<double>> grid = w_grid;
    for (int attempt = 0; attempt < 2; ++attempt) {
        const int rows = static_cast<int>(grid.size());
        Eigen::MatrixXcd A(rows, unknowns);
        Eigen::VectorXcd y(rows);
        for (int r = 0; r < rows; ++r) {
            const std::complex<double> w = grid[r];
            y[r] = reduced_value(P, c, w);
            for (int k = 0; k <= K; ++k) {
                const std::complex<double> e = std::exp(static_cast<double>(k) * w);
                std::complex<double> p = 1.0;
                for (int l = 0; l <= n; ++l) {
                    A(r, k * (n + 1) + l) = p * e;
                    p *= w;
                }
            }
        }
        Eigen::VectorXd norms = A.colwise().norm();
        for (int j = 0; j < unknowns; ++j) A.col(j) /= norms[j];
        Eigen::BDCSVD<Eigen::MatrixXcd> svd(A, Eigen::ComputeThinU | Eigen::ComputeThinV);
        const auto& sv = svd.singularValues();
        out.condition = sv[sv.size() - 1] > 0.0 ? sv[0] / sv[sv.size() - 1] : std::numeric_limits<double>::infinity();
        if (out.condition > 1e12 && attempt == 0) {
            for (auto& w : grid) w *= 0.5;
            out.regridded = true;
            continue;
        }
        const Eigen::VectorXcd x = svd.solve(y);
        const double ynorm = y.norm();
        out.residual = ynorm > 0.0 ? (A * x - y).norm() / ynorm : (A * x).norm();
        out.beta.assign(K + 1, std::vector<std::complex<double>>(n + 1));
        double top = 0.0;
        for (int j = 0; j < unknowns; ++j) top = std::max(top, std::abs(x[j]));
        out.degrees.assign(K + 1, -1);
        for (int k = 0; k <= K; ++k)
            for (int l = 0; l <= n; ++l) {
                const int j = k * (n + 1) + l;
                out.beta[k][l] = x[j] / norms[j];
                if (std::abs(x[j]) > 1e-8 * top) out.degrees[k] = l;
            }
        break;
    }
    out.w_grid = std::move(grid);
    return out;
}

ZeroCount count_reduced_zeros(const ExpPoly& P, std::complex<double> c, double radius, const CountControls& controls) {
    const CurveSpec& curve = P.curve();
    if (curve.degree() < 1) throw std::invalid_argument("count_reduced_zeros: t must be nonconstant");
    return count_generic(
        [&](std::complex<double> w, int, int, int) {
            Sample s{0.0, 0.0, true};
            std::vector<std::complex<double>> a, da;
            const std::complex<double> ew = std::exp(w);
            std::vector<std::complex<double>> roots;
            try {
                roots = roots_of_t_minus_w(curve, w);
            } catch (const std::runtime_error&) {
                s.ok = false;
                return s;
            }
            for (const auto& z : roots) {
                const std::complex<double> tp = curve.t_prime(z);
                if (std::abs(tp) < 1e-8 * (1.0 + std::abs(z))) {
                    s.ok = false;  // branch point: roots coalesce on the contour
                    return s;
                }
                blocks(P, z, a, da);
                std::complex<double> v = 0.0, vz = 0.0, vy = 0.0;
                for (int j = static_cast<int>(a.size()) - 1; j >= 0; --j) {
                    v = v * ew + a[j];
                    vz = vz * ew + da[j];
                    vy = vy * ew + static_cast<double>(j) * a[j];
                }
                const std::complex<double> pc = v - c;
                if (pc == 0.0) {
                    s.log_abs = -std::numeric_limits<double>::infinity();
                    return s;
                }
                s.log_derivative += (vz / tp + vy) / pc;
                s.log_abs += std::log(std::abs(pc));
            }
            return s;
        },
        Contour{0.0, radius, 256}, controls);
}

}  // namespace expcurve
