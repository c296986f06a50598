#pragma once

#include <utility>

#include "symplab/geometry.hpp"
#include "symplab/maps.hpp"

/// Pendulum flow carried to the sphere.
///
/// In cylindrical coordinates (θ, z) with area form dθ∧dz the Hamiltonian is
///
///     H(θ, z) = β(|z|) H₂(θ, z) + (1 − β(|z|)) H₁(θ, z),
///     H₁ = z,  H₂ = z²/2 − cos θ,
///
/// so the flow is the pendulum on |z| < 1/2 (with a saddle at (π, 0)) and the
/// rigid rotation (θ + t, z) on |z| > 2/3. Points are (x = θ, y = z).
namespace symplab::flow {

/// Value and first two derivatives of a scalar function.
struct Jet {
    double value = 0.0;
    double d1 = 0.0;
    double d2 = 0.0;
};

/// Smooth step S(s) = e(s) / (e(s) + e(1 − s)), e(s) = exp(−1/s) for s > 0.
/// S = 0 for s ≤ 0, S = 1 for s ≥ 1, and S(s) + S(1 − s) = 1.
Jet smooth_step(double s);

/// β(x) = S((2/3 − x) / (2/3 − 1/2)): 1 on [0, 1/2], 0 on [2/3, ∞).
double bump(double x);
Jet bump_jet(double x);

double hamiltonian(Point p);
/// (∂H/∂θ, ∂H/∂z).
Point gradient(Point p);
/// X_H = (∂H/∂z, −∂H/∂θ), the field with ω(X_H, ·) = dH for ω = dθ∧dz.
Point field(Point p);
/// Derivative of the field, DX_H(p).
Mat2 field_jacobian(Point p);

enum class Scheme {
    ImplicitMidpoint,  ///< order 2
    TripleJump,        ///< order 4: symmetric composition of three midpoint substeps
};

struct IntegratorOptions {
    double step = 1e-3;
    Scheme scheme = Scheme::TripleJump;
    double newton_tol = 1e-12;
    int max_newton = 50;
};

/// Flow φ_t(p) (t may be negative). Throws DomainError if |z| reaches 1.
Point flow(Point p, double t, const IntegratorOptions& opts = {});
/// φ_t(p) together with Dφ_t(p) from the discrete variational equation.
std::pair<Point, Mat2> flow_with_jacobian(Point p, double t, const IntegratorOptions& opts = {});

/// The time-t map as a PlanarMap on the sphere chart ("sphere_pendulum").
PlanarMap time_t_map(double t, double step = 1e-3, Scheme scheme = Scheme::TripleJump);

}  // namespace symplab::flow
