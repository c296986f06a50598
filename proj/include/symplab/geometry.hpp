#pragma once

#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>
#include <string_view>

namespace symplab {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Raised when a point lies outside the chart a map or topology is defined on.
class DomainError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A point of a two-dimensional phase space. `x` is the first (often angular)
/// coordinate and `y` the second (momentum, height, or unstable coordinate).
struct Point {
    double x = 0.0;
    double y = 0.0;

    friend bool operator==(const Point&, const Point&) = default;
};

inline Point operator+(Point a, Point b) { return {a.x + b.x, a.y + b.y}; }
inline Point operator-(Point a, Point b) { return {a.x - b.x, a.y - b.y}; }
inline Point operator*(double s, Point a) { return {s * a.x, s * a.y}; }

/// Row-major 2x2 matrix.
struct Mat2 {
    double a = 1.0, b = 0.0;
    double c = 0.0, d = 1.0;

    static constexpr Mat2 identity() { return {1.0, 0.0, 0.0, 1.0}; }

    double det() const { return a * d - b * c; }
    double trace() const { return a + d; }
    double max_abs() const {
        return std::max(std::max(std::abs(a), std::abs(b)), std::max(std::abs(c), std::abs(d)));
    }
    Mat2 inverse() const {
        const double k = det();
        return {d / k, -b / k, -c / k, a / k};
    }

    friend bool operator==(const Mat2&, const Mat2&) = default;
};

inline Mat2 operator*(const Mat2& m, const Mat2& n) {
    return {m.a * n.a + m.b * n.c, m.a * n.b + m.b * n.d,
            m.c * n.a + m.d * n.c, m.c * n.b + m.d * n.d};
}
inline Point operator*(const Mat2& m, Point v) { return {m.a * v.x + m.b * v.y, m.c * v.x + m.d * v.y}; }
inline Mat2 operator*(double s, const Mat2& m) { return {s * m.a, s * m.b, s * m.c, s * m.d}; }
inline Mat2 operator-(const Mat2& m, const Mat2& n) { return {m.a - n.a, m.b - n.b, m.c - n.c, m.d - n.d}; }
inline Mat2 operator+(const Mat2& m, const Mat2& n) { return {m.a + n.a, m.b + n.b, m.c + n.c, m.d + n.d}; }

inline double norm(Point v) { return std::hypot(v.x, v.y); }

/// Spectral (operator 2-) norm of a 2x2 matrix.
double spectral_norm(const Mat2& m);
/// Smallest singular value.
double min_singular_value(const Mat2& m);

enum class TopologyKind {
    Torus2,      ///< both coordinates periodic
    Cylinder,    ///< x periodic, y on the real line
    SphereChart, ///< x mod 2π, y = height strictly inside (-1, 1)
    Plane,       ///< no identifications (local model charts)
};

std::string_view to_string(TopologyKind kind);

/// Phase-space geometry: identifications, fundamental domain and metric.
///
/// The metric is the max norm of the coordinate difference after reducing
/// each periodic coordinate to its nearest representative.
class Topology {
public:
    static Topology torus(double period_x, double period_y);
    static Topology cylinder(double period_x);
    static Topology sphere_chart();
    static Topology plane();

    TopologyKind kind() const { return kind_; }
    double period_x() const { return period_x_; }
    double period_y() const { return period_y_; }
    bool periodic_x() const { return period_x_ > 0.0; }
    bool periodic_y() const { return period_y_ > 0.0; }

    /// Throws DomainError when the point is not admissible (non-finite, or
    /// |y| >= 1 on the sphere chart).
    void validate(Point p) const;
    bool contains(Point p) const;

    /// Reduces periodic coordinates into [0, period).
    Point wrap(Point p) const;

    /// Difference a - b with periodic components reduced to (-period/2, period/2].
    Point delta(Point a, Point b) const;

    double distance(Point a, Point b) const;

    friend bool operator==(const Topology&, const Topology&) = default;

private:
    Topology(TopologyKind kind, double px, double py) : kind_(kind), period_x_(px), period_y_(py) {}

    TopologyKind kind_;
    double period_x_;
    double period_y_;
};

/// Reduces `v` modulo `period` into [0, period).
inline double wrap_periodic(double v, double period) {
    double r = std::fmod(v, period);
    if (r < 0.0) r += period;
    if (r >= period) r -= period;
    return r;
}

/// Nearest representative of `v` modulo `period`, in [-period/2, period/2).
inline double reduce_periodic(double v, double period) {
    return v - period * std::floor(v / period + 0.5);
}

}  // namespace symplab
