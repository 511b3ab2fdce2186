#include "expcurve/scaled_value.hpp"

#include <cmath>
#include <limits>
#include <numbers>

namespace expcurve {

namespace {

constexpr int kAlignLimit = 80;

// Largest binary exponent of |m| (frexp convention shifted so |m| in [1,2)).
int magnitude_exponent(std::complex<double> m) {
    const double mag = std::max(std::abs(m.real()), std::abs(m.imag()));
    int e = 0;
    std::frexp(mag, &e);
    return e - 1;
}

}  // namespace

ScaledValue ScaledValue::from_binary(std::complex<double> m, std::int64_t e) {
    ScaledValue out;
    if (m == std::complex<double>(0.0, 0.0)) return out;
    if (!std::isfinite(m.real()) || !std::isfinite(m.imag())) {
        out.mantissa_ = m;
        out.exponent_ = e;
        return out;
    }
    // Normalize on the modulus; two passes absorb the rounding of hypot.
    for (int pass = 0; pass < 2; ++pass) {
        int k = 0;
        std::frexp(std::abs(m), &k);
        k -= 1;
        m = {std::ldexp(m.real(), -k), std::ldexp(m.imag(), -k)};
        e += k;
    }
    const double mod = std::abs(m);
    if (mod >= 2.0) {
        m *= 0.5;
        e += 1;
    } else if (mod < 1.0) {
        m *= 2.0;
        e -= 1;
    }
    out.mantissa_ = m;
    out.exponent_ = e;
    return out;
}

ScaledValue ScaledValue::from_complex(std::complex<double> v) {
    if (v == std::complex<double>(0.0, 0.0)) return {};
    const int e = magnitude_exponent(v);
    return from_binary({std::ldexp(v.real(), -e), std::ldexp(v.imag(), -e)}, e);
}

ScaledValue ScaledValue::from_parts(std::complex<double> v, double log_scale) {
    if (v == std::complex<double>(0.0, 0.0)) return {};
    const double l2 = log_scale / std::numbers::ln2;
    const double whole = std::floor(l2);
    const double frac = (l2 - whole) * std::numbers::ln2;
    ScaledValue out = from_complex(v * std::exp(frac));
    return from_binary(out.mantissa_, out.exponent_ + static_cast<std::int64_t>(whole));
}

ScaledValue ScaledValue::from_log_polar(double log_abs, double phase) {
    if (log_abs == -std::numeric_limits<double>::infinity()) return {};
    return from_parts(std::polar(1.0, phase), log_abs);
}

double ScaledValue::log_scale() const {
    return static_cast<double>(exponent_) * std::numbers::ln2;
}

double ScaledValue::log_abs() const {
    if (is_zero()) return -std::numeric_limits<double>::infinity();
    return std::log(std::abs(mantissa_)) + log_scale();
}

std::complex<double> ScaledValue::to_complex() const {
    return to_complex_shifted(0);
}

std::complex<double> ScaledValue::to_complex_shifted(std::int64_t shift) const {
    if (is_zero()) return {0.0, 0.0};
    std::int64_t e = exponent_ - shift;
    if (e > 4096) e = 4096;
    if (e < -4096) e = -4096;
    return {std::ldexp(mantissa_.real(), static_cast<int>(e)),
            std::ldexp(mantissa_.imag(), static_cast<int>(e))};
}

ScaledValue ScaledValue::conj() const {
    ScaledValue out = *this;
    out.mantissa_ = std::conj(mantissa_);
    return out;
}

ScaledValue ScaledValue::operator-() const {
    ScaledValue out = *this;
    out.mantissa_ = -mantissa_;
    return out;
}

ScaledValue operator+(const ScaledValue& a, const ScaledValue& b) {
    if (a.is_zero()) return b;
    if (b.is_zero()) return a;
    const ScaledValue& hi = a.exponent_ >= b.exponent_ ? a : b;
    const ScaledValue& lo = a.exponent_ >= b.exponent_ ? b : a;
    const std::int64_t gap = hi.exponent_ - lo.exponent_;
    if (gap > kAlignLimit) return hi;
    const std::complex<double> lo_m{std::ldexp(lo.mantissa_.real(), static_cast<int>(-gap)),
                                    std::ldexp(lo.mantissa_.imag(), static_cast<int>(-gap))};
    const std::complex<double> sum = hi.mantissa_ + lo_m;
    if (sum == std::complex<double>(0.0, 0.0)) {
        ScaledValue zero;
        zero.underflow_ = true;
        return zero;
    }
    return ScaledValue::from_binary(sum, hi.exponent_);
}

ScaledValue operator*(const ScaledValue& a, const ScaledValue& b) {
    if (a.is_zero() || b.is_zero()) return {};
    return ScaledValue::from_binary(a.mantissa_ * b.mantissa_, a.exponent_ + b.exponent_);
}

ScaledValue operator/(const ScaledValue& a, const ScaledValue& b) {
    if (b.is_zero()) {
        ScaledValue out;
        out.mantissa_ = {std::numeric_limits<double>::infinity(), 0.0};
        return out;
    }
    if (a.is_zero()) return {};
    return ScaledValue::from_binary(a.mantissa_ / b.mantissa_, a.exponent_ - b.exponent_);
}

std::complex<double> ratio(const ScaledValue& a, const ScaledValue& b) {
    return (a / b).to_complex();
}

}  // namespace expcurve
