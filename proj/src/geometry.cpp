#include "symplab/geometry.hpp"

#include <algorithm>

namespace symplab {

namespace {

// Singular values of a 2x2 matrix from the closed form of M^T M.
std::array<double, 2> singular_values(const Mat2& m) {
    const double p = m.a * m.a + m.b * m.b + m.c * m.c + m.d * m.d;
    const double q = std::abs(m.det());
    const double disc = std::sqrt(std::max(0.0, p * p - 4.0 * q * q));
    const double smax = std::sqrt(0.5 * (p + disc));
    const double smin = smax > 0.0 ? q / smax : 0.0;
    return {smax, smin};
}

}  // namespace

double spectral_norm(const Mat2& m) { return singular_values(m)[0]; }

double min_singular_value(const Mat2& m) { return singular_values(m)[1]; }

std::string_view to_string(TopologyKind kind) {
    switch (kind) {
    case TopologyKind::Torus2: return "torus2";
    case TopologyKind::Cylinder: return "cylinder";
    case TopologyKind::SphereChart: return "sphere_chart";
    case TopologyKind::Plane: return "plane";
    }
    return "unknown";
}

Topology Topology::torus(double period_x, double period_y) {
    if (!(period_x > 0.0) || !(period_y > 0.0)) throw std::invalid_argument("torus periods must be positive");
    return Topology(TopologyKind::Torus2, period_x, period_y);
}

Topology Topology::cylinder(double period_x) {
    if (!(period_x > 0.0)) throw std::invalid_argument("cylinder period must be positive");
    return Topology(TopologyKind::Cylinder, period_x, 0.0);
}

Topology Topology::sphere_chart() { return Topology(TopologyKind::SphereChart, kTwoPi, 0.0); }

Topology Topology::plane() { return Topology(TopologyKind::Plane, 0.0, 0.0); }

bool Topology::contains(Point p) const {
    if (!std::isfinite(p.x) || !std::isfinite(p.y)) return false;
    if (kind_ == TopologyKind::SphereChart && !(std::abs(p.y) < 1.0)) return false;
    return true;
}

void Topology::validate(Point p) const {
    if (contains(p)) return;
    if (kind_ == TopologyKind::SphereChart && std::isfinite(p.y))
        throw DomainError("point leaves the sphere chart: |z| = " + std::to_string(std::abs(p.y)) + " >= 1");
    throw DomainError("non-finite phase point");
}

Point Topology::wrap(Point p) const {
    if (periodic_x()) p.x = wrap_periodic(p.x, period_x_);
    if (periodic_y()) p.y = wrap_periodic(p.y, period_y_);
    return p;
}

Point Topology::delta(Point a, Point b) const {
    Point d = a - b;
    if (periodic_x()) d.x = reduce_periodic(d.x, period_x_);
    if (periodic_y()) d.y = reduce_periodic(d.y, period_y_);
    return d;
}

double Topology::distance(Point a, Point b) const {
    const Point d = delta(a, b);
    return std::max(std::abs(d.x), std::abs(d.y));
}

}  // namespace symplab
