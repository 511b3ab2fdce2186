#include "expcurve/expspace.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace expcurve {

CurveSpec::CurveSpec(std::vector<double> t, double a, double b)
    : t_coeffs(std::move(t)), interval_a(a), interval_b(b) {
    if (t_coeffs.empty()) t_coeffs.push_back(0.0);
    validate();
}

int CurveSpec::degree() const {
    for (int k = static_cast<int>(t_coeffs.size()) - 1; k > 0; --k) {
        if (t_coeffs[k] != 0.0) return k;
    }
    return 0;
}

std::complex<double> CurveSpec::t(std::complex<double> z) const {
    std::complex<double> acc{0.0, 0.0};
    for (int k = static_cast<int>(t_coeffs.size()) - 1; k >= 0; --k) acc = acc * z + t_coeffs[k];
    return acc;
}

std::complex<double> CurveSpec::t_prime(std::complex<double> z) const {
    std::complex<double> acc{0.0, 0.0};
    for (int k = static_cast<int>(t_coeffs.size()) - 1; k >= 1; --k) acc = acc * z + static_cast<double>(k) * t_coeffs[k];
    return acc;
}

void CurveSpec::validate() const {
    if (t_coeffs.empty()) throw std::invalid_argument("curve.t: at least one coefficient required");
    for (double c : t_coeffs) {
        if (!std::isfinite(c)) throw std::invalid_argument("curve.t: coefficients must be finite");
    }
    if (!std::isfinite(interval_a) || !std::isfinite(interval_b))
        throw std::invalid_argument("curve.interval: endpoints must be finite");
    if (!(interval_a < interval_b))
        throw std::invalid_argument("curve.interval: interval_a must be less than interval_b");
}

CurveSpec exponential_curve(double a, double b) { return CurveSpec({0.0, 1.0}, a, b); }
CurveSpec polynomial_curve(double a, double b) { return CurveSpec({0.0}, a, b); }

int full_term_count(int n) { return (n + 1) * (n + 2) / 2; }

int term_index(int i, int j, int n) {
    // block j starts after blocks 0..j-1 of sizes n+1, n, ..., n-j+2
    return j * (n + 1) - j * (j - 1) / 2 + i;
}

std::vector<BasisTerm> full_terms(int n) {
    std::vector<BasisTerm> out;
    out.reserve(full_term_count(n));
    for (int j = 0; j <= n; ++j)
        for (int i = 0; i + j <= n; ++i) out.push_back({i, j});
    return out;
}

std::vector<BasisTerm> space_terms(int n, const CurveSpec& curve) {
    if (!curve.is_constant()) return full_terms(n);
    std::vector<BasisTerm> out;
    for (int i = 0; i <= n; ++i) out.push_back({i, 0});
    return out;
}

int dimension(int n, const CurveSpec& curve) {
    if (n < 0) throw std::invalid_argument("dimension: n must be nonnegative");
    return curve.is_constant() ? n + 1 : full_term_count(n);
}

ExpPoly::ExpPoly(CurveSpec curve, int n) : curve_(std::move(curve)), n_(n) {
    if (n < 0) throw std::invalid_argument("ExpPoly: degree must be nonnegative");
    coeffs_.assign(full_term_count(n), 0.0);
}

ExpPoly::ExpPoly(CurveSpec curve, int n, std::vector<double> coeffs)
    : curve_(std::move(curve)), n_(n), coeffs_(std::move(coeffs)) {
    if (n < 0) throw std::invalid_argument("ExpPoly: degree must be nonnegative");
    if (static_cast<int>(coeffs_.size()) != full_term_count(n))
        throw std::invalid_argument("ExpPoly: coefficient table must have (n+1)(n+2)/2 entries");
}

ExpPoly ExpPoly::from_space(const CurveSpec& curve, int n, std::span<const double> coords) {
    const auto terms = space_terms(n, curve);
    if (coords.size() != terms.size())
        throw std::invalid_argument("ExpPoly::from_space: coordinate count does not match dim V_n");
    ExpPoly f(curve, n);
    for (std::size_t b = 0; b < terms.size(); ++b) f.set_coeff(terms[b].i, terms[b].j, coords[b]);
    return f;
}

double ExpPoly::coeff(int i, int j) const {
    if (i < 0 || j < 0 || i + j > n_) throw std::out_of_range("ExpPoly: index outside i + j <= n");
    return coeffs_[term_index(i, j, n_)];
}

void ExpPoly::set_coeff(int i, int j, double value) {
    if (i < 0 || j < 0 || i + j > n_) throw std::out_of_range("ExpPoly: index outside i + j <= n");
    coeffs_[term_index(i, j, n_)] = value;
}

bool ExpPoly::is_zero() const {
    for (double c : coeffs_)
        if (c != 0.0) return false;
    return true;
}

ExpPoly ExpPoly::operator+(const ExpPoly& other) const {
    const int n = std::max(n_, other.n_);
    ExpPoly out(curve_, n);
    for (const auto& [i, j] : full_terms(n_)) out.set_coeff(i, j, coeff(i, j));
    for (const auto& [i, j] : full_terms(other.n_)) out.set_coeff(i, j, out.coeff(i, j) + other.coeff(i, j));
    return out;
}

ExpPoly ExpPoly::operator*(double s) const {
    ExpPoly out = *this;
    for (double& c : out.coeffs_) c *= s;
    return out;
}

namespace {

// a_j(z) = sum_i alpha_ij z^i, and its derivative, for one exponential block.
struct BlockValue {
    ScaledValue value;
    ScaledValue slope;
};

BlockValue horner_block(const ExpPoly& f, int j, std::complex<double> z, bool with_slope) {
    const int n = f.degree();
    const int top = n - j;
    const double* c = f.coeffs().data() + term_index(0, j, n);
    const double mag = std::abs(z);
    const bool safe = top == 0 || mag == 0.0 || top * std::log(mag) < 600.0;
    BlockValue out;
    if (safe) {
        std::complex<double> v{0.0, 0.0};
        std::complex<double> d{0.0, 0.0};
        for (int i = top; i >= 0; --i) {
            if (with_slope) d = d * z + v;
            v = v * z + c[i];
        }
        out.value = ScaledValue::from_complex(v);
        out.slope = ScaledValue::from_complex(d);
        return out;
    }
    const ScaledValue zs = ScaledValue::from_complex(z);
    ScaledValue v;
    ScaledValue d;
    for (int i = top; i >= 0; --i) {
        if (with_slope) d = d * zs + v;
        v = v * zs + ScaledValue::from_complex(c[i]);
    }
    out.value = v;
    out.slope = d;
    return out;
}

}  // namespace

ScaledValue evaluate(const ExpPoly& f, std::complex<double> z) {
    const std::complex<double> tz = f.curve().t(z);
    ScaledValue total;
    for (int j = 0; j <= f.degree(); ++j) {
        const BlockValue block = horner_block(f, j, z, false);
        if (block.value.is_zero()) continue;
        total = total + block.value * ScaledValue::from_log_polar(j * tz.real(), j * tz.imag());
    }
    return total;
}

ScaledValue derivative(const ExpPoly& f, std::complex<double> z) {
    const std::complex<double> tz = f.curve().t(z);
    const ScaledValue tp = ScaledValue::from_complex(f.curve().t_prime(z));
    ScaledValue total;
    for (int j = 0; j <= f.degree(); ++j) {
        const BlockValue block = horner_block(f, j, z, true);
        ScaledValue term = block.slope;
        if (j > 0) term = term + ScaledValue::from_complex(static_cast<double>(j)) * tp * block.value;
        if (term.is_zero()) continue;
        total = total + term * ScaledValue::from_log_polar(j * tz.real(), j * tz.imag());
    }
    return total;
}

ScaledValue tangential_derivative(const ExpPoly& f, double x) {
    return derivative(f, {x, 0.0});
}

}  // namespace expcurve
