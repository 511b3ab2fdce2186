#include "expcurve/expspace.hpp"

#include <omp.h>

#include <limits>
#include <stdexcept>

namespace expcurve {

namespace {

// Basis entries z^i e^{j t(z)} (or their z-derivatives) for one node.
std::vector<ScaledValue> basis_row(std::complex<double> z, const std::vector<BasisTerm>& terms, int n,
                                   const CurveSpec& curve, bool derivative) {
    const std::complex<double> tz = curve.t(z);
    const ScaledValue tp = ScaledValue::from_complex(curve.t_prime(z));
    const ScaledValue zs = ScaledValue::from_complex(z);

    std::vector<ScaledValue> zpow(n + 1);
    zpow[0] = ScaledValue::from_complex(1.0);
    for (int i = 1; i <= n; ++i) zpow[i] = zpow[i - 1] * zs;

    std::vector<ScaledValue> row;
    row.reserve(terms.size());
    for (const auto& [i, j] : terms) {
        const ScaledValue ex = ScaledValue::from_log_polar(j * tz.real(), j * tz.imag());
        if (!derivative) {
            row.push_back(zpow[i] * ex);
            continue;
        }
        ScaledValue d;
        if (i > 0) d = ScaledValue::from_complex(static_cast<double>(i)) * zpow[i - 1];
        if (j > 0) d = d + ScaledValue::from_complex(static_cast<double>(j)) * tp * zpow[i];
        row.push_back(d * ex);
    }
    return row;
}

}  // namespace

ScaledMatrix evaluation_matrix(const EvaluationGrid& grid, int n, const CurveSpec& curve, bool derivative) {
    if (derivative && !grid.is_real())
        throw std::invalid_argument("evaluation_matrix: tangential derivative rows need a real grid");
    ScaledMatrix out;
    out.terms = space_terms(n, curve);
    const auto& nodes = grid.nodes();
    const int rows = static_cast<int>(nodes.size());
    const int cols = static_cast<int>(out.terms.size());
    out.values.resize(rows, cols);
    out.row_log_scale.assign(rows, 0.0);

#pragma omp parallel for schedule(static)
    for (int k = 0; k < rows; ++k) {
        const auto row = basis_row(nodes[k], out.terms, n, curve, derivative);
        std::int64_t top = std::numeric_limits<std::int64_t>::min();
        for (const auto& v : row)
            if (!v.is_zero()) top = std::max(top, v.exponent2());
        if (top == std::numeric_limits<std::int64_t>::min()) top = 0;
        out.row_log_scale[k] = ScaledValue::from_binary(1.0, top).log_scale();
        for (int b = 0; b < cols; ++b) out.values(k, b) = row[b].to_complex_shifted(top);
    }
    return out;
}

}  // namespace expcurve
