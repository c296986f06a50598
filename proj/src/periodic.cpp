#include "symplab/periodic.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "symplab/parallel.hpp"
#include "symplab/point_grid.hpp"

namespace symplab {

namespace {

// Lexicographic order on wrapped coordinates.
bool lex_less(Point a, Point b) { return a.x < b.x || (a.x == b.x && a.y < b.y); }

enum class SeedOutcome { Converged, Failed, Singular };

struct SeedResult {
    SeedOutcome outcome = SeedOutcome::Failed;
    Point root;
};

// f^m on the universal cover together with Df^m.
std::pair<Point, Mat2> lift_power(const PlanarMap& map, Point x, int m) {
    Mat2 jac = Mat2::identity();
    Point p = x;
    for (int i = 0; i < m; ++i) {
        auto [next, j] = map.lift_with_jacobian(p);
        jac = j * jac;
        p = next;
    }
    return {p, jac};
}

bool outside_search_region(const PlanarMap& map, Point p) {
    const Topology& t = map.topology();
    const Box& b = map.domain();
    if (!t.periodic_x() && (p.x < b.x_lo - b.width() || p.x > b.x_hi + b.width())) return true;
    if (!t.periodic_y() && (p.y < b.y_lo - b.height() || p.y > b.y_hi + b.height())) return true;
    return false;
}

SeedResult newton_from_seed(const PlanarMap& map, Point seed, int m, const SearchOptions& opt) {
    const Topology& topo = map.topology();
    Point x = seed;
    try {
        for (int it = 0; it < opt.max_newton; ++it) {
            auto [fx, jac] = lift_power(map, x, m);
            const Point g = topo.delta(fx, x);
            if (std::max(std::abs(g.x), std::abs(g.y)) < opt.tol) return {SeedOutcome::Converged, topo.wrap(x)};
            const Mat2 a = jac - Mat2::identity();
            const double det = a.det();
            if (!std::isfinite(det) || std::abs(det) < 1e-13 * std::max(1.0, a.max_abs() * a.max_abs()))
                return {SeedOutcome::Singular, x};
            x = topo.wrap(x - a.inverse() * g);
            if (outside_search_region(map, x)) return {SeedOutcome::Failed, x};
        }
    } catch (const DomainError&) {
        return {SeedOutcome::Failed, x};
    }
    return {SeedOutcome::Failed, x};
}

// Smallest d dividing m with f^d(p) within tol of p.
int minimal_period(const PlanarMap& map, Point p, int m, double tol) {
    Point q = p;
    for (int d = 1; d < m; ++d) {
        q = map.evaluate(q);
        if (m % d == 0 && map.topology().distance(q, p) < tol) return d;
    }
    return m;
}

std::array<std::complex<double>, 2> eigenvalues(double tr, double det) {
    const double disc = tr * tr - 4.0 * det;
    if (disc >= 0.0) {
        const double r = std::sqrt(disc);
        const double big = 0.5 * (tr + (tr >= 0.0 ? r : -r));
        const double small = big != 0.0 ? det / big : 0.0;
        return {std::complex<double>(big, 0.0), std::complex<double>(small, 0.0)};
    }
    const double im = 0.5 * std::sqrt(-disc);
    return {std::complex<double>(0.5 * tr, im), std::complex<double>(0.5 * tr, -im)};
}

}  // namespace

std::string_view to_string(Stability s) {
    switch (s) {
    case Stability::Hyperbolic: return "hyperbolic";
    case Stability::Elliptic: return "elliptic";
    case Stability::Parabolic: return "parabolic";
    }
    return "unknown";
}

std::size_t PeriodicCatalog::point_count() const {
    std::size_t n = 0;
    for (const auto& o : orbits) n += o.points.size();
    return n;
}

std::size_t PeriodicCatalog::points_with_period_dividing(int n) const {
    std::size_t total = 0;
    for (const auto& o : orbits)
        if (n % o.period == 0) total += o.points.size();
    return total;
}

PeriodicOrbit classify(const PlanarMap& map, Point p, int period, double tol) {
    if (period < 1) throw std::invalid_argument("classify: period must be positive");
    std::vector<Point> pts;
    pts.reserve(static_cast<std::size_t>(period));
    Point q = map.topology().wrap(p);
    for (int i = 0; i < period; ++i) {
        pts.push_back(q);
        q = map.evaluate(q);
    }
    const double miss = map.topology().distance(q, pts.front());
    if (!(miss <= tol))
        throw NotPeriodicError("classify: point does not return after " + std::to_string(period) +
                               " iterates (miss " + format12(miss) + ")");
    return classify(map, pts, tol);
}

PeriodicOrbit classify(const PlanarMap& map, std::span<const Point> points, double tol) {
    if (points.empty()) throw NotPeriodicError("classify: empty orbit");
    const int period = static_cast<int>(points.size());
    const Topology& topo = map.topology();
    for (int i = 0; i < period; ++i) {
        const Point next = map.evaluate(points[static_cast<std::size_t>(i)]);
        const Point expected = points[static_cast<std::size_t>((i + 1) % period)];
        if (!(topo.distance(next, expected) <= tol))
            throw NotPeriodicError("classify: points are not consecutive orbit points");
    }

    const auto start = std::min_element(points.begin(), points.end(), [](Point a, Point b) { return lex_less(a, b); });
    PeriodicOrbit orbit;
    orbit.period = period;
    orbit.points.assign(start, points.end());
    orbit.points.insert(orbit.points.end(), points.begin(), start);

    const Cocycle cyc = cocycle(map, orbit.points.front(), period);
    const double scale = std::exp(cyc.log_scale);
    orbit.trace = scale * cyc.matrix.trace();
    orbit.det = std::exp(2.0 * cyc.log_scale) * cyc.matrix.det();
    const auto normalized = eigenvalues(cyc.matrix.trace(), cyc.matrix.det());
    orbit.log_max_multiplier = std::log(std::abs(normalized[0])) + cyc.log_scale;
    orbit.multipliers = eigenvalues(orbit.trace, orbit.det);

    const double gap = std::abs(orbit.trace) - 2.0;
    if (cyc.log_scale > 0.0 || gap >= 1e-9)
        orbit.stability = Stability::Hyperbolic;
    else if (gap > -1e-9)
        orbit.stability = Stability::Parabolic;
    else
        orbit.stability = Stability::Elliptic;
    return orbit;
}

double chi(const PeriodicOrbit& orbit) {
    if (orbit.stability != Stability::Hyperbolic)
        throw UndefinedExponentError("chi is defined only for hyperbolic orbits (got " +
                                     std::string(to_string(orbit.stability)) + ")");
    return orbit.log_max_multiplier / orbit.period;
}

double sum_positive_exponents(const PeriodicOrbit& orbit) {
    // One expanding direction in dimension two.
    return chi(orbit);
}

std::optional<double> s_n(const PeriodicCatalog& catalog, std::optional<int> n) {
    std::optional<double> best;
    for (const auto& o : catalog.orbits) {
        if (o.stability != Stability::Hyperbolic) continue;
        if (n && o.period > *n) continue;
        const double c = chi(o);
        if (!best || c > *best) best = c;
    }
    return best;
}

PeriodicCatalog find_periodic(const PlanarMap& map, const SearchOptions& opt) {
    if (opt.max_period < 1) throw std::invalid_argument("find_periodic: max_period must be at least 1");
    if (opt.grid < 2) throw std::invalid_argument("find_periodic: grid must be at least 2");

    PeriodicCatalog cat;
    cat.map_spec = map.spec();
    cat.topology = map.topology();
    cat.max_period = opt.max_period;

    const Box& box = map.domain();
    const std::size_t per_period = static_cast<std::size_t>(opt.grid) * static_cast<std::size_t>(opt.grid);
    PointGrid index(map.topology(), std::max(opt.dedupe_radius, 1e-3));

    for (int m = 1; m <= opt.max_period; ++m) {
        std::vector<SeedResult> results(per_period);
        parallel_for(per_period, opt.workers, [&](std::size_t k) {
            const double u = (static_cast<double>(k % opt.grid) + 0.5) / opt.grid;
            const double v = (static_cast<double>(k / opt.grid) + 0.5) / opt.grid;
            results[k] = newton_from_seed(map, box.at(u, v), m, opt);
        });
        cat.diagnostics.seeds += static_cast<long>(per_period);

        for (const auto& r : results) {
            if (r.outcome == SeedOutcome::Singular) {
                ++cat.diagnostics.singular;
                continue;
            }
            if (r.outcome == SeedOutcome::Failed) {
                ++cat.diagnostics.newton_failures;
                continue;
            }
            ++cat.diagnostics.converged;
            if (index.find_near(r.root, opt.dedupe_radius) >= 0) {
                ++cat.diagnostics.duplicates;
                continue;
            }
            const int tau = minimal_period(map, r.root, m, opt.minimal_period_tol);
            PeriodicOrbit orbit;
            try {
                orbit = classify(map, r.root, tau, opt.minimal_period_tol);
            } catch (const NotPeriodicError&) {
                ++cat.diagnostics.newton_failures;
                continue;
            }
            // A different point of an already cataloged orbit may land here first.
            bool known = false;
            for (const Point& q : orbit.points) known = known || index.find_near(q, opt.dedupe_radius) >= 0;
            if (known) {
                ++cat.diagnostics.duplicates;
                continue;
            }
            for (const Point& q : orbit.points) index.insert(q, cat.orbits.size());
            cat.orbits.push_back(std::move(orbit));
        }
    }

    std::sort(cat.orbits.begin(), cat.orbits.end(), [](const PeriodicOrbit& a, const PeriodicOrbit& b) {
        if (a.period != b.period) return a.period < b.period;
        return lex_less(a.points.front(), b.points.front());
    });
    return cat;
}

std::string format12(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

std::string to_csv(const PeriodicCatalog& catalog) {
    std::string out = "period,theta_0,z_0,trace,multiplier_max,chi,stability\n";
    for (const auto& o : catalog.orbits) {
        out += std::to_string(o.period) + ',' + format12(o.points.front().x) + ',' + format12(o.points.front().y) +
               ',' + format12(o.trace) + ',' + format12(std::abs(o.multipliers[0])) + ',';
        if (o.stability == Stability::Hyperbolic) out += format12(chi(o));
        out += ',';
        out += to_string(o.stability);
        out += '\n';
    }
    return out;
}

}  // namespace symplab
