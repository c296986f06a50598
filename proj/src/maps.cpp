#include "symplab/maps.hpp"

#include <algorithm>
#include <charconv>

namespace symplab {

namespace {

constexpr double kScaleThreshold = 1e64;

std::string format_shortest(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

}  // namespace

PlanarMap::PlanarMap(std::string name, Topology topology, std::vector<Parameter> parameters, Forward forward,
                     Jacobian jacobian, Box domain, ForwardWithJacobian combined)
    : name_(std::move(name)),
      topology_(topology),
      parameters_(std::move(parameters)),
      forward_(std::move(forward)),
      jacobian_(std::move(jacobian)),
      domain_(domain),
      combined_(std::move(combined)) {}

std::optional<double> PlanarMap::parameter(std::string_view key) const {
    for (const auto& p : parameters_)
        if (p.key == key) return p.value;
    return std::nullopt;
}

std::string PlanarMap::spec() const {
    std::string s = name_;
    for (std::size_t i = 0; i < parameters_.size(); ++i) {
        s += i == 0 ? ':' : ',';
        s += parameters_[i].key + "=" + format_shortest(parameters_[i].value);
    }
    return s;
}

Point PlanarMap::lift(Point x) const {
    topology_.validate(x);
    const Point y = forward_(x);
    topology_.validate(y);
    return y;
}

Point PlanarMap::evaluate(Point x) const { return topology_.wrap(lift(x)); }

Mat2 PlanarMap::jacobian(Point x) const {
    topology_.validate(x);
    return jacobian_(x);
}

std::pair<Point, Mat2> PlanarMap::lift_with_jacobian(Point x) const {
    topology_.validate(x);
    auto r = combined_ ? combined_(x) : std::pair<Point, Mat2>{forward_(x), jacobian_(x)};
    topology_.validate(r.first);
    return r;
}

Point evaluate(const PlanarMap& map, Point x) { return map.evaluate(x); }

Mat2 jacobian(const PlanarMap& map, Point x) { return map.jacobian(x); }

OrbitSegment orbit(const PlanarMap& map, Point x, int n) {
    if (n < 1) throw std::invalid_argument("orbit length must be at least 1");
    OrbitSegment seg{{}, map.name(), map.topology()};
    seg.points.reserve(static_cast<std::size_t>(n) + 1);
    Point p = map.topology().wrap(x);
    map.topology().validate(p);
    seg.points.push_back(p);
    for (int i = 0; i < n; ++i) {
        p = map.evaluate(p);
        seg.points.push_back(p);
    }
    return seg;
}

Cocycle cocycle(const PlanarMap& map, Point x, int n) {
    if (n < 1) throw std::invalid_argument("cocycle length must be at least 1");
    Cocycle out;
    Point p = x;
    for (int i = 0; i < n; ++i) {
        auto [next, jac] = map.lift_with_jacobian(p);
        out.matrix = jac * out.matrix;
        const double m = out.matrix.max_abs();
        if (m > kScaleThreshold) {
            out.matrix = (1.0 / m) * out.matrix;
            out.log_scale += std::log(m);
        }
        p = map.topology().wrap(next);
    }
    return out;
}

double check_symplectic(const PlanarMap& map, int samples, std::uint64_t seed) {
    if (samples < 1) throw std::invalid_argument("samples must be at least 1");
    SplitMix64 rng(seed);
    const Box& box = map.domain();
    double worst = 0.0;
    for (int i = 0; i < samples; ++i) {
        const double u = rng.uniform();
        const double v = rng.uniform();
        const Point p = box.at(u, v);
        worst = std::max(worst, std::abs(map.jacobian(p).det() - 1.0));
    }
    return worst;
}

Mat2 finite_difference_jacobian(const PlanarMap& map, Point x, double step) {
    const Point fxp = map.lift({x.x + step, x.y});
    const Point fxm = map.lift({x.x - step, x.y});
    const Point fyp = map.lift({x.x, x.y + step});
    const Point fym = map.lift({x.x, x.y - step});
    const double h2 = 2.0 * step;
    return {(fxp.x - fxm.x) / h2, (fyp.x - fym.x) / h2, (fxp.y - fxm.y) / h2, (fyp.y - fym.y) / h2};
}

PlanarMap make_cat_map() {
    const Mat2 a{2.0, 1.0, 1.0, 1.0};
    return PlanarMap(
        "cat", Topology::torus(1.0, 1.0), {}, [a](Point p) { return a * p; }, [a](Point) { return a; },
        Box{0.0, 1.0, 0.0, 1.0});
}

PlanarMap make_identity_map() {
    return PlanarMap(
        "identity", Topology::torus(1.0, 1.0), {}, [](Point p) { return p; },
        [](Point) { return Mat2::identity(); }, Box{0.0, 1.0, 0.0, 1.0});
}

PlanarMap make_standard_map(double k) {
    return PlanarMap(
        "standard", Topology::torus(kTwoPi, kTwoPi), {{"k", k}},
        [k](Point p) {
            const double kick = k * std::sin(p.x);
            return Point{p.x + p.y + kick, p.y + kick};
        },
        [k](Point p) {
            const double kc = k * std::cos(p.x);
            return Mat2{1.0 + kc, 1.0, kc, 1.0};
        },
        Box{0.0, kTwoPi, 0.0, kTwoPi});
}

PlanarMap make_shear_map() {
    return PlanarMap(
        "shear", Topology::torus(kTwoPi, kTwoPi), {}, [](Point p) { return Point{p.x + p.y, p.y}; },
        [](Point) { return Mat2{1.0, 1.0, 0.0, 1.0}; }, Box{0.0, kTwoPi, 0.0, kTwoPi});
}

PlanarMap make_rotation_map(double alpha) {
    return PlanarMap(
        "rotation", Topology::cylinder(kTwoPi), {{"alpha", alpha}},
        [alpha](Point p) { return Point{p.x + alpha, p.y}; }, [](Point) { return Mat2::identity(); },
        Box{0.0, kTwoPi, -1.0, 1.0});
}

PlanarMap make_linear_saddle(double lambda) {
    if (!(lambda > 0.0)) throw std::invalid_argument("linear_saddle: lambda must be positive");
    const Mat2 m{lambda, 0.0, 0.0, 1.0 / lambda};
    return PlanarMap(
        "linear_saddle", Topology::plane(), {{"lambda", lambda}}, [m](Point p) { return m * p; },
        [m](Point) { return m; }, Box{-1.0, 1.0, -1.0, 1.0});
}

PlanarMap make_squeeze_map() {
    return PlanarMap(
        "squeeze", Topology::cylinder(kTwoPi), {}, [](Point p) { return Point{p.x, 0.5 * p.y}; },
        [](Point) { return Mat2{1.0, 0.0, 0.0, 0.5}; }, Box{0.0, kTwoPi, -1.0, 1.0});
}

std::uint64_t SplitMix64::next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

double SplitMix64::uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

}  // namespace symplab
