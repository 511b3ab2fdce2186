#include "expcurve/mp.hpp"

#include <vector>

namespace expcurve::mp {

std::string Real::to_string(int digits) const {
    char* raw = nullptr;
    mpfr_asprintf(&raw, "%.*Rg", digits, v_);
    std::string out(raw);
    mpfr_free_str(raw);
    return out;
}

void mul(Complex& r, const Complex& a, const Complex& b, Real& tmp) {
    // (ar + i ai)(br + i bi); r may alias neither a nor b.
    mul(r.re, a.re, b.re);
    fms_acc(r.re, a.im, b.im);
    mul(tmp, a.re, b.im);
    mul(r.im, a.im, b.re);
    add(r.im, r.im, tmp);
}

void exp(Complex& r, const Complex& a, Real& tmp) {
    Real mag(tmp.precision());
    mp::exp(mag, a.re);
    sin_cos(r.im, r.re, a.im);
    mp::mul(r.re, r.re, mag);
    mp::mul(r.im, r.im, mag);
}

void horner(Complex& r, const double* coeffs, int count, const Complex& z, Real& tmp) {
    r.re.set_zero();
    r.im.set_zero();
    Complex prod(tmp.precision());
    for (int k = count - 1; k >= 0; --k) {
        mul(prod, r, z, tmp);
        add_d(r.re, prod.re, coeffs[k]);
        r.im = prod.im;
    }
}

}  // namespace expcurve::mp
