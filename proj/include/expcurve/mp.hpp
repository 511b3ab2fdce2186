#pragma once

// Thin RAII layer over MPFR. Every value carries its own precision; there is
// no global default, so objects can be used freely from several threads.

#include <mpfr.h>

#include <complex>
#include <cstdint>
#include <string>
#include <utility>

namespace expcurve::mp {

class Real {
public:
    explicit Real(mpfr_prec_t bits = 128) {
        mpfr_init2(v_, bits);
        mpfr_set_zero(v_, 1);
    }
    Real(double x, mpfr_prec_t bits) {
        mpfr_init2(v_, bits);
        mpfr_set_d(v_, x, MPFR_RNDN);
    }
    Real(const Real& o) {
        mpfr_init2(v_, mpfr_get_prec(o.v_));
        mpfr_set(v_, o.v_, MPFR_RNDN);
    }
    Real(Real&& o) noexcept {
        mpfr_init2(v_, mpfr_get_prec(o.v_));
        mpfr_swap(v_, o.v_);
    }
    Real& operator=(const Real& o) {
        if (this != &o) {
            if (mpfr_get_prec(v_) != mpfr_get_prec(o.v_)) mpfr_set_prec(v_, mpfr_get_prec(o.v_));
            mpfr_set(v_, o.v_, MPFR_RNDN);
        }
        return *this;
    }
    Real& operator=(Real&& o) noexcept {
        mpfr_swap(v_, o.v_);
        return *this;
    }
    ~Real() { mpfr_clear(v_); }

    mpfr_ptr get() { return v_; }
    mpfr_srcptr get() const { return v_; }
    mpfr_prec_t precision() const { return mpfr_get_prec(v_); }

    void set(double x) { mpfr_set_d(v_, x, MPFR_RNDN); }
    void set_zero() { mpfr_set_zero(v_, 1); }
    bool is_zero() const { return mpfr_zero_p(v_) != 0; }
    int sign() const { return mpfr_sgn(v_); }
    double to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }

    // value = mantissa * 2^exponent with |mantissa| in [0.5, 1).
    std::pair<double, long> split() const {
        long e = 0;
        double m = mpfr_get_d_2exp(&e, v_, MPFR_RNDN);
        return {m, e};
    }

    std::string to_string(int digits = 20) const;

private:
    mpfr_t v_;
};

inline void add(Real& r, const Real& a, const Real& b) { mpfr_add(r.get(), a.get(), b.get(), MPFR_RNDN); }
inline void sub(Real& r, const Real& a, const Real& b) { mpfr_sub(r.get(), a.get(), b.get(), MPFR_RNDN); }
inline void mul(Real& r, const Real& a, const Real& b) { mpfr_mul(r.get(), a.get(), b.get(), MPFR_RNDN); }
inline void div(Real& r, const Real& a, const Real& b) { mpfr_div(r.get(), a.get(), b.get(), MPFR_RNDN); }
inline void mul_d(Real& r, const Real& a, double b) { mpfr_mul_d(r.get(), a.get(), b, MPFR_RNDN); }
inline void add_d(Real& r, const Real& a, double b) { mpfr_add_d(r.get(), a.get(), b, MPFR_RNDN); }
inline void mul_si(Real& r, const Real& a, long b) { mpfr_mul_si(r.get(), a.get(), b, MPFR_RNDN); }
// r += a * b
inline void fma_acc(Real& r, const Real& a, const Real& b) { mpfr_fma(r.get(), a.get(), b.get(), r.get(), MPFR_RNDN); }
// r -= a * b
inline void fms_acc(Real& r, const Real& a, const Real& b) {
    mpfr_fms(r.get(), a.get(), b.get(), r.get(), MPFR_RNDN);
    mpfr_neg(r.get(), r.get(), MPFR_RNDN);
}
inline void neg(Real& r, const Real& a) { mpfr_neg(r.get(), a.get(), MPFR_RNDN); }
inline void abs(Real& r, const Real& a) { mpfr_abs(r.get(), a.get(), MPFR_RNDN); }
inline void sqrt(Real& r, const Real& a) { mpfr_sqrt(r.get(), a.get(), MPFR_RNDN); }
inline void exp(Real& r, const Real& a) { mpfr_exp(r.get(), a.get(), MPFR_RNDN); }
inline void sin_cos(Real& s, Real& c, const Real& a) { mpfr_sin_cos(s.get(), c.get(), a.get(), MPFR_RNDN); }
inline int cmp_abs(const Real& a, const Real& b) { return mpfr_cmpabs(a.get(), b.get()); }

struct Complex {
    Real re;
    Real im;

    explicit Complex(mpfr_prec_t bits) : re(bits), im(bits) {}
    Complex(std::complex<double> z, mpfr_prec_t bits) : re(z.real(), bits), im(z.imag(), bits) {}

    std::complex<double> to_complex() const { return {re.to_double(), im.to_double()}; }
};

// Scratch-aware complex helpers; `tmp` must have the working precision.
void mul(Complex& r, const Complex& a, const Complex& b, Real& tmp);
void exp(Complex& r, const Complex& a, Real& tmp);

// Real polynomial (ascending double coefficients) evaluated at a complex point.
void horner(Complex& r, const double* coeffs, int count, const Complex& z, Real& tmp);

}  // namespace expcurve::mp
