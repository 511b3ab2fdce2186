#pragma once

#include <complex>
#include <cstdint>

namespace expcurve {

/// A complex number stored as mantissa * 2^exponent, with |mantissa| in [1, 2)
/// (or exactly zero). The binary exponent makes the representation unique;
/// log_scale() reports it in natural-log units.
class ScaledValue {
public:
    ScaledValue() = default;

    static ScaledValue from_complex(std::complex<double> v);
    /// v * e^{log_scale} for arbitrary (finite) v and real log_scale.
    static ScaledValue from_parts(std::complex<double> v, double log_scale);
    /// e^{log_abs} * e^{i phase}
    static ScaledValue from_log_polar(double log_abs, double phase);
    /// m * 2^e, normalizing m.
    static ScaledValue from_binary(std::complex<double> m, std::int64_t e);

    std::complex<double> mantissa() const { return mantissa_; }
    std::int64_t exponent2() const { return exponent_; }
    double log_scale() const;
    bool is_zero() const { return mantissa_ == std::complex<double>(0.0, 0.0); }
    /// Set when a sum of nonzero terms cancelled to exactly zero.
    bool underflow() const { return underflow_; }

    /// ln|value|; -infinity for zero.
    double log_abs() const;
    double phase() const { return std::arg(mantissa_); }
    /// Plain complex value; overflows to infinity outside double range.
    std::complex<double> to_complex() const;
    /// value * 2^-shift as a plain complex (used to compare values sharing a scale).
    std::complex<double> to_complex_shifted(std::int64_t shift) const;

    ScaledValue conj() const;
    ScaledValue operator-() const;

    friend ScaledValue operator+(const ScaledValue& a, const ScaledValue& b);
    friend ScaledValue operator-(const ScaledValue& a, const ScaledValue& b) { return a + (-b); }
    friend ScaledValue operator*(const ScaledValue& a, const ScaledValue& b);
    friend ScaledValue operator/(const ScaledValue& a, const ScaledValue& b);

    /// a / b as a plain complex number (finite whenever the true ratio is).
    friend std::complex<double> ratio(const ScaledValue& a, const ScaledValue& b);

private:
    std::complex<double> mantissa_{0.0, 0.0};
    std::int64_t exponent_ = 0;
    bool underflow_ = false;
};

}  // namespace expcurve
