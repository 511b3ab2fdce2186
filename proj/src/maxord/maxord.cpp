#include "expcurve/maxord.hpp"

#include "expcurve/mp.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace expcurve {

Integer derivative_entry(int s, int i, int j) {
    if (s < i) return 0;
    // C(s, i) i! = s! / (s - i)!
    Integer v = 1;
    for (int k = s - i + 1; k <= s; ++k) v *= k;
    Integer p = 1;
    for (int k = 0; k < s - i; ++k) p *= j;
    return v * p;
}

DerivativeMatrix derivative_matrix(int n) {
    if (n < 0) throw std::invalid_argument("derivative_matrix: n must be nonnegative");
    DerivativeMatrix m;
    m.n = n;
    m.terms = full_terms(n);
    const int N = m.size();
    m.entries.assign(N, std::vector<Integer>(N));
    for (int s = 0; s < N; ++s)
        for (int k = 0; k < N; ++k) m.entries[s][k] = derivative_entry(s, m.terms[k].i, m.terms[k].j);
    return m;
}

Integer bareiss_determinant(std::vector<std::vector<Integer>> m) {
    const int N = static_cast<int>(m.size());
    if (N == 0) return 1;
    for (const auto& row : m)
        if (static_cast<int>(row.size()) != N) throw std::invalid_argument("bareiss_determinant: matrix must be square");
    int sign = 1;
    Integer prev = 1;
    for (int k = 0; k < N - 1; ++k) {
        if (m[k][k] == 0) {
            int p = k + 1;
            while (p < N && m[p][k] == 0) ++p;
            if (p == N) return 0;
            std::swap(m[k], m[p]);
            sign = -sign;
        }
        for (int i = k + 1; i < N; ++i) {
            for (int j = k + 1; j < N; ++j) m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) / prev;
            m[i][k] = 0;
        }
        prev = m[k][k];
    }
    return sign * m[N - 1][N - 1];
}

Integer wronskian_determinant(int n) { return bareiss_determinant(derivative_matrix(n).entries); }

std::vector<std::string> VanishingCertificate::alpha_strings() const {
    std::vector<std::string> out;
    for (const auto& a : alpha) out.push_back(a.str());
    return out;
}

ExpPoly VanishingCertificate::to_exppoly() const {
    ExpPoly f(exponential_curve(0, 1), n);
    for (std::size_t k = 0; k < terms.size(); ++k) f.set_coeff(terms[k].i, terms[k].j, alpha[k].convert_to<double>());
    return f;
}

VanishingCertificate max_vanishing_function(int n) {
    if (n < 0 || n > 8) throw std::invalid_argument("max_vanishing_function: need 0 <= n <= 8");
    const DerivativeMatrix dm = derivative_matrix(n);
    const int N = dm.size();
    VanishingCertificate cert;
    cert.n = n;
    cert.dimension = N;
    cert.terms = dm.terms;
    cert.determinant = bareiss_determinant(dm.entries);
    cert.wronskian_nonzero = cert.determinant != 0;
    if (!cert.wronskian_nonzero) throw std::logic_error("max_vanishing_function: singular derivative matrix");

    // Gauss-Jordan over the rationals on [M | e_{N-1}].
    std::vector<std::vector<Rational>> a(N, std::vector<Rational>(N + 1));
    for (int s = 0; s < N; ++s) {
        for (int k = 0; k < N; ++k) a[s][k] = Rational(dm.entries[s][k]);
        a[s][N] = s == N - 1 ? 1 : 0;
    }
    for (int k = 0; k < N; ++k) {
        int p = k;
        while (a[p][k] == 0) ++p;
        std::swap(a[k], a[p]);
        const Rational pivot = a[k][k];
        for (int j = k; j <= N; ++j) a[k][j] /= pivot;
        for (int i = 0; i < N; ++i) {
            if (i == k || a[i][k] == 0) continue;
            const Rational factor = a[i][k];
            for (int j = k; j <= N; ++j) a[i][j] -= factor * a[k][j];
        }
    }
    cert.alpha.resize(N);
    for (int k = 0; k < N; ++k) cert.alpha[k] = a[k][N];

    // Exact re-substitution: f^(s)(0) = sum_k alpha_k M[s][k].
    cert.verified_order = 0;
    for (int s = 0; s < N; ++s) {
        Rational v = 0;
        for (int k = 0; k < N; ++k) v += cert.alpha[k] * dm.entries[s][k];
        const Rational expected = s == N - 1 ? 1 : 0;
        if (v != expected) throw std::logic_error("max_vanishing_function: substitution check failed");
        if (v == 0) cert.verified_order = s + 1;
    }
    return cert;
}

namespace {

// sum alpha_ij x^i e^{jx} at a real x in MPFR.
class MpEvaluator {
public:
    MpEvaluator(const std::vector<BasisTerm>& terms, const std::vector<Rational>& alpha, long bits)
        : terms_(terms), bits_(bits) {
        for (const auto& q : alpha) {
            mp::Real v(bits);
            mpfr_set_q(v.get(), q.backend().data(), MPFR_RNDN);
            alpha_.push_back(std::move(v));
        }
        for (const auto& t : terms) max_i_ = std::max(max_i_, t.i), max_j_ = std::max(max_j_, t.j);
    }

    // |f(x)|
    mp::Real abs_value(double x) const {
        mp::Real X(x, bits_), tmp(bits_), sum(bits_);
        std::vector<mp::Real> xp(max_i_ + 1, mp::Real(bits_)), ej(max_j_ + 1, mp::Real(bits_));
        xp[0].set(1.0);
        for (int i = 1; i <= max_i_; ++i) mp::mul(xp[i], xp[i - 1], X);
        mp::exp(tmp, X);
        ej[0].set(1.0);
        for (int j = 1; j <= max_j_; ++j) mp::mul(ej[j], ej[j - 1], tmp);
        for (std::size_t k = 0; k < terms_.size(); ++k) {
            mp::mul(tmp, xp[terms_[k].i], ej[terms_[k].j]);
            mp::fma_acc(sum, alpha_[k], tmp);
        }
        mp::abs(sum, sum);
        return sum;
    }

    mp::Real max_abs(double lo, double hi, int nodes) const {
        mp::Real best(bits_);
        for (const auto& z : EvaluationGrid::chebyshev_interval(lo, hi, nodes).nodes()) {
            mp::Real v = abs_value(z.real());
            if (mpfr_cmp(v.get(), best.get()) > 0) best = std::move(v);
        }
        return best;
    }

    double ratio(double r, int nodes) const {
        const mp::Real outer = max_abs(0.0, 2.0 * r, nodes), inner = max_abs(0.0, r, nodes);
        mp::Real q(bits_);
        mp::div(q, outer, inner);
        return q.to_double();
    }

private:
    std::vector<BasisTerm> terms_;
    std::vector<mp::Real> alpha_;
    long bits_;
    int max_i_ = 0, max_j_ = 0;
};

std::vector<Rational> rationals_of(const ExpPoly& f, std::vector<BasisTerm>& terms) {
    terms = full_terms(f.degree());
    std::vector<Rational> out;
    for (const auto& t : terms) out.emplace_back(f.coeff(t.i, t.j));  // exact binary value of the double
    return out;
}

double log2_abs(const Rational& q) {
    if (q == 0) return -1e9;
    return static_cast<double>(boost::multiprecision::msb(abs(numerator(q)))) -
           static_cast<double>(boost::multiprecision::msb(denominator(q)));
}

}  // namespace

DoublingLimit doubling_limit_experiment(int n, const std::vector<double>& r_sequence, int nodes, long max_bits) {
    if (r_sequence.empty()) throw std::invalid_argument("doubling_limit_experiment: empty r sequence");
    for (std::size_t k = 0; k < r_sequence.size(); ++k) {
        if (!(r_sequence[k] > 0.0)) throw std::invalid_argument("doubling_limit_experiment: r must be positive");
        if (k > 0 && !(r_sequence[k] < r_sequence[k - 1]))
            throw std::invalid_argument("doubling_limit_experiment: r sequence must be decreasing");
    }
    const VanishingCertificate cert = max_vanishing_function(n);
    DoublingLimit out;
    out.n = n;
    out.dimension = cert.dimension;
    out.target = std::ldexp(1.0, cert.dimension - 1);
    double log2_alpha = 0.0;
    for (const auto& a : cert.alpha) log2_alpha = std::max(log2_alpha, log2_abs(a) + 1.0);
    double log2_factorial = 0.0;
    for (int k = 2; k < cert.dimension; ++k) log2_factorial += std::log2(k);

    for (double r : r_sequence) {
        // Terms of size |alpha| e^{2nr} cancel down to about r^{N-1} / (N-1)!.
        const double lost = log2_alpha + std::log2(cert.dimension) + 2.0 * n * r / std::log(2.0) +
                            (cert.dimension - 1) * std::log2(1.0 / r) + log2_factorial;
        DoublingLimitRow row;
        row.r = r;
        row.bits = static_cast<long>(std::ceil(std::max(0.0, lost))) + 67 + 64;
        if (row.bits > max_bits) {
            row.precision_ok = false;
            if (!out.exhausted_at) out.exhausted_at = r;
            out.rows.push_back(row);
            continue;
        }
        row.ratio = MpEvaluator(cert.terms, cert.alpha, row.bits).ratio(r, nodes);
        const double check = MpEvaluator(cert.terms, cert.alpha, row.bits + 64).ratio(r, nodes);
        row.precision_ok = std::abs(check - row.ratio) <= 1e-15 * std::abs(check);
        if (!row.precision_ok && !out.exhausted_at) out.exhausted_at = r;
        out.rows.push_back(row);
    }
    const auto& last = out.rows.back();
    out.within_tolerance = last.precision_ok && std::abs(last.ratio - out.target) <= 0.05 * out.target;
    if (out.rows.size() >= 3) {
        const std::size_t m = out.rows.size();
        out.monotone_tail = true;
        for (std::size_t k = m - 2; k < m; ++k)
            if (std::abs(out.rows[k].ratio - out.target) > std::abs(out.rows[k - 1].ratio - out.target))
                out.monotone_tail = false;
    }
    return out;
}

double doubling_ratio_at(const ExpPoly& f, double r, int nodes, long bits) {
    if (f.curve().t_coeffs != std::vector<double>{0.0, 1.0})
        throw std::invalid_argument("doubling_ratio_at: t(z) must be z");
    std::vector<BasisTerm> terms;
    const auto alpha = rationals_of(f, terms);
    return MpEvaluator(terms, alpha, bits).ratio(r, nodes);
}

double taylor_domination(const VanishingCertificate& cert, double x_max, int samples) {
    const long bits = 256 + 8L * cert.dimension * static_cast<long>(std::ceil(std::log2(1.0 / x_max)) + 1);
    const MpEvaluator f(cert.terms, cert.alpha, bits);
    mp::Real lead(1.0, bits), tmp(bits), q(bits);
    for (int k = 2; k < cert.dimension; ++k) mp::mul_si(lead, lead, k);  // (N-1)!
    double worst = 0.0;
    for (int s = 1; s <= samples; ++s) {
        for (double sign : {-1.0, 1.0}) {
            const double x = sign * x_max * s / samples;
            mp::Real v = f.abs_value(x);
            mp::Real p(1.0, bits);
            mp::Real ax(std::abs(x), bits);
            for (int k = 0; k < cert.dimension - 1; ++k) mp::mul(p, p, ax);
            mp::mul(tmp, v, lead);
            mp::div(q, tmp, p);
            worst = std::max(worst, q.to_double());
        }
    }
    return worst;
}

namespace {

// Taylor coefficients 0..K of z^i e^{j t(z)} at 0.
std::vector<double> term_series(const CurveSpec& curve, int i, int j, int K) {
    std::vector<double> h(K + 1, 0.0), g(K + 1, 0.0);
    for (std::size_t k = 1; k < curve.t_coeffs.size() && static_cast<int>(k) <= K; ++k) h[k] = j * curve.t_coeffs[k];
    g[0] = std::exp(j * curve.t_coeffs[0]);
    for (int k = 1; k <= K; ++k) {
        double acc = 0.0;
        for (int m = 1; m <= k; ++m) acc += m * h[m] * g[k - m];
        g[k] = acc / k;
    }
    std::vector<double> out(K + 1, 0.0);
    for (int k = i; k <= K; ++k) out[k] = g[k - i];
    return out;
}

}  // namespace

int heuristic_order(const ExpPoly& f, int max_order) {
    std::vector<double> a(max_order + 1, 0.0);
    for (const auto& t : full_terms(f.degree())) {
        const double c = f.coeff(t.i, t.j);
        if (c == 0.0) continue;
        const auto s = term_series(f.curve(), t.i, t.j, max_order);
        for (int k = 0; k <= max_order; ++k) a[k] += c * s[k];
    }
    double top = 0.0;
    for (double v : a) top = std::max(top, std::abs(v));
    if (top == 0.0) return -1;
    for (int k = 0; k <= max_order; ++k)
        if (std::abs(a[k]) > 1e-10 * top) return k;
    return -1;
}

int heuristic_maxord(const CurveSpec& curve, int n) {
    const auto terms = space_terms(n, curve);
    const int N = static_cast<int>(terms.size());
    const int K = 2 * N + 10;
    Eigen::MatrixXd T(K + 1, N);
    for (int c = 0; c < N; ++c) {
        const auto s = term_series(curve, terms[c].i, terms[c].j, K);
        for (int k = 0; k <= K; ++k) T(k, c) = s[k];
    }
    // Columns scaled to unit norm so the rank threshold is relative.
    for (int c = 0; c < N; ++c) T.col(c) /= T.col(c).norm();
    int rank = 0, last = -1;
    for (int s = 0; s <= K; ++s) {
        Eigen::JacobiSVD<Eigen::MatrixXd> svd(T.topRows(s + 1));
        svd.setThreshold(1e-10);
        const int r = static_cast<int>(svd.rank());
        if (r > rank) {
            rank = r;
            last = s;
        }
        if (rank == N) break;
    }
    return last;
}

}  // namespace expcurve
