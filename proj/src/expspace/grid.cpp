#include "expcurve/expspace.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace expcurve {

std::string to_string(GridKind kind) {
    switch (kind) {
        case GridKind::chebyshev_interval: return "chebyshev-interval";
        case GridKind::uniform_interval: return "uniform-interval";
        case GridKind::circle: return "circle";
        case GridKind::filled_disk: return "filled-disk";
        case GridKind::ellipse_boundary: return "ellipse-boundary";
    }
    return "unknown";
}

EvaluationGrid::EvaluationGrid(GridKind kind, GridGeometry geometry, std::vector<std::complex<double>> nodes)
    : kind_(kind), geometry_(geometry), nodes_(std::move(nodes)) {
    if (nodes_.empty()) throw std::invalid_argument("EvaluationGrid: no nodes");
    for (const auto& z : nodes_) {
        if (!contains(z)) throw std::logic_error("EvaluationGrid: node outside the declared set");
    }
}

EvaluationGrid EvaluationGrid::chebyshev_interval(double a, double b, int m) {
    if (!(a < b)) throw std::invalid_argument("chebyshev_interval: a must be less than b");
    if (m < 1) throw std::invalid_argument("chebyshev_interval: need at least one node");
    std::vector<std::complex<double>> nodes;
    nodes.reserve(m);
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    if (m == 1) {
        nodes.emplace_back(mid, 0.0);
    } else {
        const int q = m - 1;
        for (int k = 0; k < m; ++k) {
            // -cos(k pi / q) written as a sine so the grid is exactly symmetric
            const double s = std::sin(std::numbers::pi * (2 * k - q) / (2.0 * q));
            nodes.emplace_back(mid + half * s, 0.0);
        }
        nodes.front() = {a, 0.0};
        nodes.back() = {b, 0.0};
    }
    GridGeometry g;
    g.a = a;
    g.b = b;
    return EvaluationGrid(GridKind::chebyshev_interval, g, std::move(nodes));
}

EvaluationGrid EvaluationGrid::uniform_interval(double a, double b, int m) {
    if (!(a < b)) throw std::invalid_argument("uniform_interval: a must be less than b");
    if (m < 2) throw std::invalid_argument("uniform_interval: need at least two nodes");
    std::vector<std::complex<double>> nodes;
    nodes.reserve(m);
    for (int k = 0; k < m; ++k) nodes.emplace_back(a + (b - a) * k / (m - 1.0), 0.0);
    nodes.back() = {b, 0.0};
    GridGeometry g;
    g.a = a;
    g.b = b;
    return EvaluationGrid(GridKind::uniform_interval, g, std::move(nodes));
}

namespace {

// e^{2 pi i k / m}, exact at the quarter turns so nodes on the real axis stay real.
std::complex<double> root_of_unity(int k, int m) {
    if ((4 * static_cast<long>(k)) % m == 0) {
        static const std::complex<double> quarter[4] = {{1.0, 0.0}, {0.0, 1.0}, {-1.0, 0.0}, {0.0, -1.0}};
        return quarter[(4 * static_cast<long>(k) / m) % 4];
    }
    return std::polar(1.0, 2.0 * std::numbers::pi * k / m);
}

}  // namespace

EvaluationGrid EvaluationGrid::circle(std::complex<double> center, double radius, int m) {
    if (!(radius > 0.0)) throw std::invalid_argument("circle: radius must be positive");
    if (m < 1) throw std::invalid_argument("circle: need at least one node");
    std::vector<std::complex<double>> nodes;
    nodes.reserve(m);
    for (int k = 0; k < m; ++k) nodes.push_back(center + radius * root_of_unity(k, m));
    GridGeometry g;
    g.center = center;
    g.radius = radius;
    return EvaluationGrid(GridKind::circle, g, std::move(nodes));
}

EvaluationGrid EvaluationGrid::filled_disk(std::complex<double> center, double radius, int rings, int angles) {
    if (!(radius > 0.0)) throw std::invalid_argument("filled_disk: radius must be positive");
    if (rings < 1 || angles < 1) throw std::invalid_argument("filled_disk: need rings >= 1 and angles >= 1");
    std::vector<std::complex<double>> nodes;
    nodes.reserve(1 + rings * angles);
    nodes.push_back(center);
    for (int k = 1; k <= rings; ++k) {
        const double rho = k == rings ? radius : radius * std::sin(std::numbers::pi * k / (2.0 * rings));
        for (int l = 0; l < angles; ++l) nodes.push_back(center + rho * root_of_unity(l, angles));
    }
    GridGeometry g;
    g.center = center;
    g.radius = radius;
    return EvaluationGrid(GridKind::filled_disk, g, std::move(nodes));
}

EvaluationGrid EvaluationGrid::ellipse_boundary(double a, double b, double c, int m) {
    if (!(a < b)) throw std::invalid_argument("ellipse_boundary: a must be less than b");
    if (!(c > 0.0)) throw std::invalid_argument("ellipse_boundary: c must be positive");
    if (m < 1) throw std::invalid_argument("ellipse_boundary: need at least one node");
    const double mid = 0.5 * (a + b);
    const double r = 0.5 * (b - a);
    const double ratio = (r + c) / r;
    const double rho = ratio + std::sqrt(ratio * ratio - 1.0);
    std::vector<std::complex<double>> nodes;
    nodes.reserve(m);
    for (int k = 0; k < m; ++k) {
        const std::complex<double> e = root_of_unity(k, m);
        nodes.push_back(mid + r * 0.5 * (rho * e + std::conj(e) / rho));
    }
    GridGeometry g;
    g.a = a;
    g.b = b;
    g.c = c;
    return EvaluationGrid(GridKind::ellipse_boundary, g, std::move(nodes));
}

bool EvaluationGrid::is_real() const {
    for (const auto& z : nodes_)
        if (z.imag() != 0.0) return false;
    return true;
}

bool EvaluationGrid::contains(std::complex<double> z, double rel_tol) const {
    switch (kind_) {
        case GridKind::chebyshev_interval:
        case GridKind::uniform_interval: {
            const double scale = std::max({1.0, std::abs(geometry_.a), std::abs(geometry_.b)});
            const double tol = rel_tol * scale;
            return std::abs(z.imag()) <= tol && z.real() >= geometry_.a - tol && z.real() <= geometry_.b + tol;
        }
        case GridKind::circle:
        case GridKind::filled_disk:
            // rounding in center + radius e^{i theta} is relative to the larger of the two
            return std::abs(z - geometry_.center) <=
                   geometry_.radius + rel_tol * std::max({1.0, geometry_.radius, std::abs(geometry_.center)});
        case GridKind::ellipse_boundary: {
            const double major = 0.5 * (geometry_.b - geometry_.a) + geometry_.c;
            const double focal = std::abs(z - geometry_.a) + std::abs(z - geometry_.b);
            return focal <= 2.0 * major + rel_tol * std::max({1.0, major, std::abs(geometry_.a), std::abs(geometry_.b)});
        }
    }
    return false;
}

std::vector<double> EvaluationGrid::real_nodes() const {
    std::vector<double> out;
    out.reserve(nodes_.size());
    for (const auto& z : nodes_) out.push_back(z.real());
    return out;
}

}  // namespace expcurve
