#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "symplab/maps.hpp"

namespace symplab {

enum class Stability { Hyperbolic, Elliptic, Parabolic };

std::string_view to_string(Stability s);

/// Thrown when an exponent is requested for an orbit that has none.
class UndefinedExponentError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Thrown when `classify` is handed points that do not close up.
class NotPeriodicError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

struct PeriodicOrbit {
    std::vector<Point> points;  ///< f^i(p), i < period; points[0] is the lexicographic minimum
    int period = 0;             ///< minimal period τ
    std::array<std::complex<double>, 2> multipliers{};  ///< eigenvalues of Df^τ(p), |first| ≥ |second|
    double trace = 0.0;
    double det = 1.0;
    /// log of the largest multiplier modulus, exact even when Df^τ overflows.
    double log_max_multiplier = 0.0;
    Stability stability = Stability::Elliptic;
};

struct SearchOptions {
    int max_period = 1;
    int grid = 64;              ///< seeds per axis, per period
    double tol = 1e-11;         ///< Newton residual accepted as converged
    double dedupe_radius = 1e-6;
    double minimal_period_tol = 1e-8;
    int max_newton = 60;
    int workers = 1;
};

struct SearchDiagnostics {
    long seeds = 0;
    long converged = 0;
    long newton_failures = 0;
    long singular = 0;
    long duplicates = 0;
};

/// Deduplicated periodic orbits of period ≤ max_period found from a seed grid.
/// A lower approximation: orbits missed by every seed are absent.
struct PeriodicCatalog {
    std::string map_spec;
    Topology topology = Topology::plane();
    int max_period = 0;
    std::vector<PeriodicOrbit> orbits;
    SearchDiagnostics diagnostics;

    std::size_t point_count() const;
    /// Points whose minimal period divides n.
    std::size_t points_with_period_dividing(int n) const;
};

PeriodicCatalog find_periodic(const PlanarMap& map, const SearchOptions& options);

/// Builds the orbit record from one point of a periodic orbit of the given
/// minimal period. Throws NotPeriodicError if f^period(p) misses p by more than tol.
PeriodicOrbit classify(const PlanarMap& map, Point p, int period, double tol = 1e-8);
PeriodicOrbit classify(const PlanarMap& map, std::span<const Point> points, double tol = 1e-8);

/// χ(p, f) = (1/τ) log λ, λ the expanding multiplier modulus.
double chi(const PeriodicOrbit& orbit);

/// Sum of the positive exponents (the single expanding exponent in dimension two).
double sum_positive_exponents(const PeriodicOrbit& orbit);

/// max χ over hyperbolic orbits of period ≤ n (all orbits when n is omitted);
/// nullopt when there is none.
std::optional<double> s_n(const PeriodicCatalog& catalog, std::optional<int> n = std::nullopt);

/// CSV with columns period,theta_0,z_0,trace,multiplier_max,chi,stability.
std::string to_csv(const PeriodicCatalog& catalog);

/// printf("%.12g") formatting used by every CSV writer.
std::string format12(double v);

}  // namespace symplab
