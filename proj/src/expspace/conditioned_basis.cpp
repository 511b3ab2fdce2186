#include "expcurve/conditioned_basis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace expcurve {

struct ConditionedBasis::MpVector {
    std::vector<mp::Real> re;
    std::vector<mp::Real> im;
    bool real = true;
};

namespace {

constexpr long kMaxBits = 4096;
constexpr long kGuardBits = 96;

long exponent_of(const mp::Real& x) {
    return x.is_zero() ? std::numeric_limits<long>::min() : static_cast<long>(mpfr_get_exp(x.get()));
}

double scaled_double(const mp::Real& x, long shift) {
    if (x.is_zero()) return 0.0;
    mp::Real t(x);
    mpfr_mul_2si(t.get(), t.get(), -shift, MPFR_RNDN);
    return t.to_double();
}

// value = (re + i im) as a ScaledValue without passing through double range.
ScaledValue to_scaled(const mp::Real& re, const mp::Real& im) {
    const long e = std::max(exponent_of(re), exponent_of(im));
    if (e == std::numeric_limits<long>::min()) return {};
    return ScaledValue::from_binary({scaled_double(re, e), scaled_double(im, e)}, e);
}

double log2_abs(const mp::Real& x) {
    const auto [m, e] = x.split();
    return std::log2(std::abs(m)) + static_cast<double>(e);
}

}  // namespace

ConditionedBasis::ConditionedBasis(CurveSpec curve, int n)
    : curve_(std::move(curve)), n_(n), terms_(space_terms(n, curve_)) {}

std::shared_ptr<const ConditionedBasis> ConditionedBasis::create(const CurveSpec& curve, int n,
                                                               const std::vector<std::complex<double>>& anchors) {
    if (n < 0) throw std::invalid_argument("ConditionedBasis: n must be nonnegative");
    std::shared_ptr<ConditionedBasis> basis(new ConditionedBasis(curve, n));
    const int N = basis->size();

    int real_rows = 0;
    for (const auto& z : anchors) {
        if (z.imag() == 0.0) real_rows += 1;
        else if (z.imag() > 0.0) real_rows += 2;
    }
    long bits = 128 + 6L * N;
    if (real_rows < N) {
        basis->bits_ = bits;
        basis->rank_deficient_ = true;
        return basis;
    }
    for (;;) {
        basis->factor(anchors, bits);
        if (basis->log2_cond_ >= -static_cast<double>(bits - kGuardBits)) break;
        if (bits >= kMaxBits) {
            basis->rank_deficient_ = true;
            basis->perm_.clear();
            basis->r_.clear();
            break;
        }
        bits = std::min(kMaxBits, 2 * bits);
    }
    return basis;
}

ConditionedBasis::MpVector ConditionedBasis::raw_values(std::complex<double> z, bool derivative) const {
    const long bits = bits_;
    const int N = size();
    MpVector out;
    out.real = z.imag() == 0.0;
    mp::Real tmp(bits);

    const mp::Complex Z(z, bits);
    mp::Complex T(bits), E(bits), Tp(bits);
    mp::horner(T, curve_.t_coeffs.data(), static_cast<int>(curve_.t_coeffs.size()), Z, tmp);
    mp::exp(E, T, tmp);
    std::vector<double> dcoef;
    for (std::size_t k = 1; k < curve_.t_coeffs.size(); ++k) dcoef.push_back(static_cast<double>(k) * curve_.t_coeffs[k]);
    if (dcoef.empty()) dcoef.push_back(0.0);
    mp::horner(Tp, dcoef.data(), static_cast<int>(dcoef.size()), Z, tmp);

    std::vector<mp::Complex> zp, ep;
    zp.reserve(n_ + 1);
    ep.reserve(n_ + 1);
    zp.emplace_back(std::complex<double>(1.0, 0.0), bits);
    ep.emplace_back(std::complex<double>(1.0, 0.0), bits);
    for (int k = 1; k <= n_; ++k) {
        zp.emplace_back(bits);
        mp::mul(zp[k], zp[k - 1], Z, tmp);
        ep.emplace_back(bits);
        mp::mul(ep[k], ep[k - 1], E, tmp);
    }

    out.re.reserve(N);
    out.im.reserve(N);
    mp::Complex v(bits), d(bits), w(bits);
    for (const auto& [i, j] : terms_) {
        if (!derivative) {
            mp::mul(v, zp[i], ep[j], tmp);
        } else {
            // (i z^{i-1} + j t'(z) z^i) e^{j t(z)}
            d.re.set_zero();
            d.im.set_zero();
            if (i > 0) {
                mp::mul_si(d.re, zp[i - 1].re, i);
                mp::mul_si(d.im, zp[i - 1].im, i);
            }
            if (j > 0) {
                mp::mul(w, Tp, zp[i], tmp);
                mp::mul_si(w.re, w.re, j);
                mp::mul_si(w.im, w.im, j);
                mp::add(d.re, d.re, w.re);
                mp::add(d.im, d.im, w.im);
            }
            mp::mul(v, d, ep[j], tmp);
        }
        out.re.push_back(v.re);
        out.im.push_back(out.real ? mp::Real(bits) : v.im);
    }
    return out;
}

void ConditionedBasis::factor(const std::vector<std::complex<double>>& anchors, long bits) {
    bits_ = bits;
    const int N = size();

    // Anchor rows, each divided by a power of two so its largest entry is O(1).
    std::vector<std::vector<mp::Real>> cols(N);
    int m = 0;
    for (const auto& z : anchors) {
        if (z.imag() < 0.0) continue;
        MpVector phi = raw_values(z, false);
        long e = std::numeric_limits<long>::min();
        for (int b = 0; b < N; ++b) e = std::max({e, exponent_of(phi.re[b]), exponent_of(phi.im[b])});
        if (e == std::numeric_limits<long>::min()) e = 0;
        for (int b = 0; b < N; ++b) {
            mpfr_mul_2si(phi.re[b].get(), phi.re[b].get(), -e, MPFR_RNDN);
            cols[b].push_back(std::move(phi.re[b]));
        }
        ++m;
        if (!phi.real) {
            for (int b = 0; b < N; ++b) {
                mpfr_mul_2si(phi.im[b].get(), phi.im[b].get(), -e, MPFR_RNDN);
                cols[b].push_back(std::move(phi.im[b]));
            }
            ++m;
        }
    }

    perm_.resize(N);
    for (int k = 0; k < N; ++k) perm_[k] = k;
    r_.assign(static_cast<std::size_t>(N) * N, mp::Real(bits));

    mp::Real norm(64), sq(64), s(bits), alpha(bits), beta(bits), dot(bits), tmp(bits);
    double min_diag = std::numeric_limits<double>::infinity();
    double max_diag = -std::numeric_limits<double>::infinity();
    for (int k = 0; k < N; ++k) {
        // pivot: largest remaining column norm
        int best = k;
        mp::Real best_norm(64);
        for (int c = k; c < N; ++c) {
            norm.set_zero();
            for (int r = k; r < m; ++r) {
                mpfr_sqr(sq.get(), cols[c][r].get(), MPFR_RNDN);
                mp::add(norm, norm, sq);
            }
            if (c == k || mpfr_cmp(norm.get(), best_norm.get()) > 0) {
                best = c;
                best_norm = norm;
            }
        }
        if (best != k) {
            std::swap(cols[k], cols[best]);
            std::swap(perm_[k], perm_[best]);
            for (int r = 0; r < k; ++r) std::swap(r_[r * N + k], r_[r * N + best]);
        }

        // Householder reflector for cols[k][k..m)
        auto& x = cols[k];
        s.set_zero();
        for (int r = k; r < m; ++r) mp::fma_acc(s, x[r], x[r]);
        mp::sqrt(alpha, s);
        if (x[k].sign() > 0) mp::neg(alpha, alpha);
        if (alpha.is_zero()) {
            min_diag = -std::numeric_limits<double>::infinity();
            r_[k * N + k].set_zero();
            continue;
        }
        // v = x - alpha e_k stored in x; beta = 1 / (alpha (alpha - x_k)) = 2 / v.v
        mp::sub(tmp, alpha, x[k]);
        mp::mul(beta, alpha, tmp);
        mpfr_ui_div(beta.get(), 1, beta.get(), MPFR_RNDN);
        mp::sub(x[k], x[k], alpha);

        for (int c = k + 1; c < N; ++c) {
            auto& col = cols[c];
            dot.set_zero();
            for (int r = k; r < m; ++r) mp::fma_acc(dot, x[r], col[r]);
            mp::mul(dot, dot, beta);
            for (int r = k; r < m; ++r) mp::fms_acc(col[r], dot, x[r]);
            r_[k * N + c] = col[k];
        }
        r_[k * N + k] = alpha;
        const double l2 = log2_abs(alpha);
        min_diag = std::min(min_diag, l2);
        max_diag = std::max(max_diag, l2);
    }
    log2_cond_ = min_diag - max_diag;
    rank_deficient_ = false;
}

ScaledFunctional ConditionedBasis::transform(MpVector&& phi) const {
    const int N = size();
    const long bits = bits_;
    std::vector<mp::Real> ure, uim;
    if (rank_deficient_) {
        ure = std::move(phi.re);
        uim = std::move(phi.im);
    } else {
        ure.reserve(N);
        uim.reserve(N);
        for (int k = 0; k < N; ++k) {
            ure.push_back(std::move(phi.re[perm_[k]]));
            uim.push_back(std::move(phi.im[perm_[k]]));
        }
        // R^T u = P^T phi, forward substitution
        for (int k = 0; k < N; ++k) {
            for (int l = 0; l < k; ++l) {
                const mp::Real& rlk = r_[l * N + k];
                mp::fms_acc(ure[k], rlk, ure[l]);
                if (!phi.real) mp::fms_acc(uim[k], rlk, uim[l]);
            }
            mp::div(ure[k], ure[k], r_[k * N + k]);
            if (!phi.real) mp::div(uim[k], uim[k], r_[k * N + k]);
        }
    }
    long e = std::numeric_limits<long>::min();
    for (int k = 0; k < N; ++k) e = std::max({e, exponent_of(ure[k]), exponent_of(uim[k])});
    if (e == std::numeric_limits<long>::min()) e = 0;
    ScaledFunctional out;
    out.values.resize(N);
    for (int k = 0; k < N; ++k) out.values[k] = {scaled_double(ure[k], e), scaled_double(uim[k], e)};
    out.log_scale = static_cast<double>(e) * std::numbers::ln2;
    (void)bits;
    return out;
}

ScaledFunctional ConditionedBasis::values(std::complex<double> z) const {
    return transform(raw_values(z, false));
}

ScaledFunctional ConditionedBasis::derivative_values(std::complex<double> z) const {
    return transform(raw_values(z, true));
}

ScaledRows ConditionedBasis::constraint_rows(const std::vector<std::complex<double>>& nodes, int faces) const {
    if (faces < 4 || faces % 2 != 0) throw std::invalid_argument("constraint_rows: faces must be even and >= 4");
    const int half = faces / 2;
    const double inscribed = std::cos(std::numbers::pi / faces);
    std::vector<std::size_t> offset(nodes.size() + 1, 0);
    for (std::size_t k = 0; k < nodes.size(); ++k) {
        const double im = nodes[k].imag();
        offset[k + 1] = offset[k] + (im == 0.0 ? 1 : im > 0.0 ? half : 0);
    }
    ScaledRows out;
    out.rows.resize(static_cast<Eigen::Index>(offset.back()), size());
    out.log_scale.assign(offset.back(), 0.0);

#pragma omp parallel for schedule(dynamic, 16)
    for (std::size_t k = 0; k < nodes.size(); ++k) {
        if (offset[k + 1] == offset[k]) continue;
        const ScaledFunctional q = values(nodes[k]);
        const auto base = static_cast<Eigen::Index>(offset[k]);
        if (nodes[k].imag() == 0.0) {
            out.rows.row(base) = q.values.real().transpose();
            out.log_scale[base] = q.log_scale;
            continue;
        }
        for (int l = 0; l < half; ++l) {
            const std::complex<double> rot = std::polar(1.0 / inscribed, -(2 * l + 1) * std::numbers::pi / faces);
            out.rows.row(base + l) = (rot * q.values).real().transpose();
            out.log_scale[base + l] = q.log_scale;
        }
    }
    return out;
}

ScaledRows ConditionedBasis::derivative_rows(const std::vector<double>& nodes) const {
    ScaledRows out;
    out.rows.resize(static_cast<Eigen::Index>(nodes.size()), size());
    out.log_scale.assign(nodes.size(), 0.0);
#pragma omp parallel for schedule(dynamic, 16)
    for (std::size_t k = 0; k < nodes.size(); ++k) {
        const ScaledFunctional q = derivative_values({nodes[k], 0.0});
        out.rows.row(static_cast<Eigen::Index>(k)) = q.values.real().transpose();
        out.log_scale[k] = q.log_scale;
    }
    return out;
}

SpaceFunction ConditionedBasis::function(const Eigen::VectorXd& y, double log_scale) const {
    const int N = size();
    if (y.size() != N) throw std::invalid_argument("ConditionedBasis::function: coordinate length mismatch");
    SpaceFunction f;
    f.basis_ = shared_from_this();
    std::vector<mp::Real> u;
    u.reserve(N);
    for (int k = 0; k < N; ++k) u.emplace_back(y[k], bits_);
    mp::Real scale(log_scale, bits_);
    mp::exp(scale, scale);
    f.coeffs_.assign(N, mp::Real(bits_));
    if (rank_deficient_) {
        for (int k = 0; k < N; ++k) mp::mul(f.coeffs_[k], u[k], scale);
        return f;
    }
    // R u = y, back substitution
    for (int k = N - 1; k >= 0; --k) {
        for (int l = k + 1; l < N; ++l) mp::fms_acc(u[k], r_[k * N + l], u[l]);
        mp::div(u[k], u[k], r_[k * N + k]);
    }
    for (int k = 0; k < N; ++k) mp::mul(f.coeffs_[perm_[k]], u[k], scale);
    return f;
}

// ---------------------------------------------------------------------------

int SpaceFunction::degree() const { return basis_->degree(); }
const CurveSpec& SpaceFunction::curve() const { return basis_->curve(); }

namespace {

ScaledValue combine(const std::vector<mp::Real>& c, const std::vector<mp::Real>& re, const std::vector<mp::Real>& im,
                    bool real, long bits) {
    mp::Real sre(bits), sim(bits);
    for (std::size_t k = 0; k < c.size(); ++k) {
        mp::fma_acc(sre, c[k], re[k]);
        if (!real) mp::fma_acc(sim, c[k], im[k]);
    }
    return to_scaled(sre, sim);
}

}  // namespace

ScaledValue SpaceFunction::evaluate(std::complex<double> z) const {
    auto phi = basis_->raw_values(z, false);
    return combine(coeffs_, phi.re, phi.im, phi.real, basis_->precision());
}

ScaledValue SpaceFunction::derivative(std::complex<double> z) const {
    auto phi = basis_->raw_values(z, true);
    return combine(coeffs_, phi.re, phi.im, phi.real, basis_->precision());
}

std::vector<double> SpaceFunction::coefficients() const {
    std::vector<double> out;
    out.reserve(coeffs_.size());
    for (const auto& c : coeffs_) out.push_back(c.to_double());
    return out;
}

std::vector<std::string> SpaceFunction::coefficient_strings(int digits) const {
    std::vector<std::string> out;
    out.reserve(coeffs_.size());
    for (const auto& c : coeffs_) out.push_back(c.to_string(digits));
    return out;
}

ExpPoly SpaceFunction::to_exppoly() const {
    const auto c = coefficients();
    return ExpPoly::from_space(curve(), degree(), c);
}

}  // namespace expcurve
