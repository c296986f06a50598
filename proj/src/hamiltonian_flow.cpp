#include "symplab/hamiltonian_flow.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace symplab::flow {

namespace {

constexpr double kInner = 0.5;
constexpr double kOuter = 2.0 / 3.0;

// Triple-jump weights: γ₁ = 1/(2 − 2^{1/3}), γ₂ = 1 − 2γ₁.
const double kGamma1 = 1.0 / (2.0 - std::cbrt(2.0));
const double kGamma2 = 1.0 - 2.0 * kGamma1;

struct Partials {
    double h_t = 0.0;   // ∂H/∂θ
    double h_z = 0.0;   // ∂H/∂z
    double h_tt = 0.0;
    double h_tz = 0.0;
    double h_zz = 0.0;
};

Partials partials(Point p, bool second) {
    const double theta = p.x;
    const double z = p.y;
    const double az = std::abs(z);
    Partials d;
    if (az >= kOuter) {
        d.h_z = 1.0;
        return d;
    }
    const double s = std::sin(theta);
    const double c = std::cos(theta);
    if (az <= kInner) {
        d.h_t = s;
        d.h_z = z;
        if (second) {
            d.h_tt = c;
            d.h_zz = 1.0;
        }
        return d;
    }
    // H = β (H₂ − H₁) + H₁ with H₂ − H₁ = z²/2 − cos θ − z.
    const Jet b = bump_jet(az);
    const double sgn = z < 0.0 ? -1.0 : 1.0;
    const double b1 = b.d1 * sgn;
    const double diff = 0.5 * z * z - c - z;
    d.h_t = b.value * s;
    d.h_z = b1 * diff + b.value * (z - 1.0) + 1.0;
    if (second) {
        d.h_tt = b.value * c;
        d.h_tz = b1 * s;
        d.h_zz = b.d2 * diff + 2.0 * b1 * (z - 1.0) + b.value;
    }
    return d;
}

void check_chart(Point p) {
    if (!(std::abs(p.y) < 1.0) || !std::isfinite(p.x))
        throw DomainError("trajectory left the sphere chart at z = " + std::to_string(p.y));
}

Mat2 jacobian_from(const Partials& d) { return {d.h_tz, d.h_zz, -d.h_tt, -d.h_tz}; }

// Carried between substeps: the field at the last midpoint seeds the explicit
// predictor, and `rate` estimates the Newton contraction θ/(1 − θ).
struct Carry {
    Point slope;
    double rate = 1.0;
};

// One implicit midpoint step y = x + h X((x + y)/2), Newton on the defect.
// Stops once the estimated remaining error rate·|Δy| (or |Δy| itself) is
// within tolerance, the usual rule for implicit Runge-Kutta solvers.
Point midpoint_step(Point x, double h, const IntegratorOptions& opts, Mat2* dmap, Carry& carry) {
    Point y = x + h * carry.slope;
    Partials d;
    carry.rate = std::sqrt(std::max(carry.rate, 1e-16));  // relax toward 1 so a stale estimate cannot stick
    double last = 0.0;
    for (int it = 0;; ++it) {
        const Point mid = 0.5 * (x + y);
        check_chart(mid);
        d = partials(mid, true);
        const Point defect{y.x - x.x - h * d.h_z, y.y - x.y + h * d.h_t};
        const Mat2 jac = Mat2::identity() - (0.5 * h) * jacobian_from(d);
        const Point dy = jac.inverse() * defect;
        y = y - dy;
        const double size = std::max(std::abs(dy.x), std::abs(dy.y));
        if (it > 0 && last > 0.0) {
            const double theta = size / last;
            if (theta < 1.0) carry.rate = theta / (1.0 - theta);
        }
        if (size <= opts.newton_tol) break;
        if (carry.rate * size <= opts.newton_tol && (it > 0 || carry.rate < 1.0)) break;
        last = size;
        if (it + 1 >= opts.max_newton) throw std::runtime_error("implicit midpoint: Newton did not converge");
    }
    check_chart(y);
    carry.slope = {d.h_z, -d.h_t};
    if (dmap) {
        // The last Newton update is below tolerance, so the midpoint partials are current.
        const Mat2 am = jacobian_from(d);
        const Mat2 lhs = Mat2::identity() - (0.5 * h) * am;
        const Mat2 rhs = Mat2::identity() + (0.5 * h) * am;
        *dmap = lhs.inverse() * rhs;
    }
    return y;
}

Point scheme_step(Point x, double h, const IntegratorOptions& opts, Mat2* dmap, Carry& carry) {
    if (opts.scheme == Scheme::ImplicitMidpoint) return midpoint_step(x, h, opts, dmap, carry);
    Mat2 m1, m2, m3;
    const bool want = dmap != nullptr;
    Point y = midpoint_step(x, kGamma1 * h, opts, want ? &m1 : nullptr, carry);
    y = midpoint_step(y, kGamma2 * h, opts, want ? &m2 : nullptr, carry);
    y = midpoint_step(y, kGamma1 * h, opts, want ? &m3 : nullptr, carry);
    if (want) *dmap = m3 * m2 * m1;
    return y;
}

Point integrate(Point p, double t, const IntegratorOptions& opts, Mat2* dmap) {
    if (!(opts.step > 0.0)) throw std::invalid_argument("integrator step must be positive");
    check_chart(p);
    if (dmap) *dmap = Mat2::identity();
    if (t == 0.0) return p;
    // |z| >= 2/3 is invariant and the field there is (1, 0). The midpoint rule
    // is exact for a constant field, so the steps reduce to one translation.
    if (std::abs(p.y) >= kOuter) return {p.x + t, p.y};
    const long steps = std::max(1L, std::lround(std::abs(t) / opts.step));
    const double h = t / static_cast<double>(steps);
    Mat2 step_jac;
    const Partials d0 = partials(p, false);
    Carry carry{{d0.h_z, -d0.h_t}};
    for (long i = 0; i < steps; ++i) {
        p = scheme_step(p, h, opts, dmap ? &step_jac : nullptr, carry);
        if (dmap) *dmap = step_jac * *dmap;
    }
    return p;
}

}  // namespace

Jet smooth_step(double s) {
    if (s <= 0.0) return {0.0, 0.0, 0.0};
    if (s >= 1.0) return {1.0, 0.0, 0.0};
    const double u = 1.0 - s;
    const double g = 1.0 / s - 1.0 / u;
    const double sv = 1.0 / (1.0 + std::exp(g));
    if (sv == 0.0 || sv == 1.0) return {sv, 0.0, 0.0};
    const double w = 1.0 / (s * s) + 1.0 / (u * u);
    const double dw = -2.0 / (s * s * s) + 2.0 / (u * u * u);
    const double q = sv * (1.0 - sv);
    const double d1 = q * w;
    const double d2 = d1 * (1.0 - 2.0 * sv) * w + q * dw;
    return {sv, d1, d2};
}

Jet bump_jet(double x) {
    if (x < 0.0) throw std::invalid_argument("bump: argument must be nonnegative");
    constexpr double scale = 1.0 / (kOuter - kInner);
    const Jet s = smooth_step((kOuter - x) * scale);
    return {s.value, -scale * s.d1, scale * scale * s.d2};
}

double bump(double x) { return bump_jet(x).value; }

double hamiltonian(Point p) {
    check_chart(p);
    const double z = p.y;
    const double b = bump(std::abs(z));
    const double h2 = 0.5 * z * z - std::cos(p.x);
    return b * h2 + (1.0 - b) * z;
}

Point gradient(Point p) {
    check_chart(p);
    const Partials d = partials(p, false);
    return {d.h_t, d.h_z};
}

Point field(Point p) {
    check_chart(p);
    const Partials d = partials(p, false);
    return {d.h_z, -d.h_t};
}

Mat2 field_jacobian(Point p) {
    check_chart(p);
    return jacobian_from(partials(p, true));
}

Point flow(Point p, double t, const IntegratorOptions& opts) { return integrate(p, t, opts, nullptr); }

std::pair<Point, Mat2> flow_with_jacobian(Point p, double t, const IntegratorOptions& opts) {
    Mat2 m;
    const Point q = integrate(p, t, opts, &m);
    return {q, m};
}

PlanarMap time_t_map(double t, double step, Scheme scheme) {
    if (!(t > 0.0)) throw std::invalid_argument("sphere_pendulum: t must be positive");
    if (!(step > 0.0) || step > t) throw std::invalid_argument("sphere_pendulum: need 0 < step <= t");
    IntegratorOptions opts;
    opts.step = step;
    opts.scheme = scheme;
    return PlanarMap(
        "sphere_pendulum", Topology::sphere_chart(),
        {{"t", t}, {"step", step}, {"order", scheme == Scheme::ImplicitMidpoint ? 2.0 : 4.0}},
        [t, opts](Point p) { return flow(p, t, opts); },
        [t, opts](Point p) { return flow_with_jacobian(p, t, opts).second; },
        Box{0.0, kTwoPi, -0.999999, 0.999999},
        [t, opts](Point p) { return flow_with_jacobian(p, t, opts); });
}

}  // namespace symplab::flow
