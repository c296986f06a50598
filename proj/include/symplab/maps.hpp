#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "symplab/geometry.hpp"

namespace symplab {

struct Parameter {
    std::string key;
    double value = 0.0;
};

/// Axis-aligned region used for seeding searches and sampling.
struct Box {
    double x_lo = 0.0, x_hi = 1.0;
    double y_lo = 0.0, y_hi = 1.0;

    double width() const { return x_hi - x_lo; }
    double height() const { return y_hi - y_lo; }
    Point at(double u, double v) const { return {x_lo + u * width(), y_lo + v * height()}; }
};

/// A differentiable map of a two-dimensional phase space with an analytic
/// Jacobian.
///
/// `lift` is the map on the universal cover (periodic coordinates are not
/// reduced), which keeps Newton iterations continuous across the seam of the
/// fundamental domain. `evaluate` is the map on the phase space itself.
class PlanarMap {
public:
    using Forward = std::function<Point(Point)>;
    using Jacobian = std::function<Mat2(Point)>;
    using ForwardWithJacobian = std::function<std::pair<Point, Mat2>(Point)>;

    PlanarMap(std::string name, Topology topology, std::vector<Parameter> parameters, Forward forward,
              Jacobian jacobian, Box domain, ForwardWithJacobian combined = {});

    const std::string& name() const { return name_; }
    const Topology& topology() const { return topology_; }
    const std::vector<Parameter>& parameters() const { return parameters_; }
    std::optional<double> parameter(std::string_view key) const;
    /// Region searched for periodic orbits and sampled for entropy estimates.
    const Box& domain() const { return domain_; }

    /// Canonical spec string, e.g. "standard:k=1".
    std::string spec() const;

    Point lift(Point x) const;
    Point evaluate(Point x) const;
    Mat2 jacobian(Point x) const;
    /// Unwrapped image and Jacobian in one pass.
    std::pair<Point, Mat2> lift_with_jacobian(Point x) const;

private:
    std::string name_;
    Topology topology_;
    std::vector<Parameter> parameters_;
    Forward forward_;
    Jacobian jacobian_;
    Box domain_;
    ForwardWithJacobian combined_;
};

/// A finite orbit piece x, f(x), ..., f^n(x) (wrapped).
struct OrbitSegment {
    std::vector<Point> points;
    std::string map_name;
    Topology topology = Topology::plane();
};

/// Derivative Df^n(x) = exp(log_scale) * matrix. The scale is split off when
/// entries grow past a threshold so long products do not overflow.
struct Cocycle {
    Mat2 matrix = Mat2::identity();
    double log_scale = 0.0;

    /// The product with the scale folded back in (may overflow for large n).
    Mat2 value() const { return std::exp(log_scale) * matrix; }
};

Point evaluate(const PlanarMap& map, Point x);
Mat2 jacobian(const PlanarMap& map, Point x);
OrbitSegment orbit(const PlanarMap& map, Point x, int n);
Cocycle cocycle(const PlanarMap& map, Point x, int n);

/// Maximum of |det Df - 1| over `samples` points drawn from the map's domain.
double check_symplectic(const PlanarMap& map, int samples, std::uint64_t seed);

/// Central finite-difference Jacobian. Test oracle only.
Mat2 finite_difference_jacobian(const PlanarMap& map, Point x, double step = 1e-6);

// Elementary maps. Each declares its own fundamental domain.
PlanarMap make_cat_map();                      // [[2,1],[1,1]] on [0,1)^2
PlanarMap make_identity_map();                 // on [0,1)^2
PlanarMap make_standard_map(double k);         // on [0,2π)^2
PlanarMap make_shear_map();                    // (x+y, y) on [0,2π)^2
PlanarMap make_rotation_map(double alpha);     // (x+α, y) on the cylinder
PlanarMap make_linear_saddle(double lambda);   // diag(λ, 1/λ) on the plane
/// (x, y/2) on the cylinder: not area preserving, used to exercise the checker.
PlanarMap make_squeeze_map();

/// Deterministic 64-bit generator stream with a portable unit-interval draw.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}
    std::uint64_t next();
    double uniform();  ///< in [0, 1)

private:
    std::uint64_t state_;
};

}  // namespace symplab
