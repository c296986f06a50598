#include <cmath>
#include <numbers>

#include "doctest.h"
#include "json.hpp"
#include "symplab/entropy.hpp"
#include "symplab/maps.hpp"
#include "symplab/measures.hpp"
#include "symplab/periodic.hpp"

using namespace symplab;

namespace {

const Topology kTorus = Topology::torus(1.0, 1.0);

AtomicMeasure dirac(Point p) { return AtomicMeasure(kTorus, {p}, {1.0}); }

PeriodicOrbit cat_orbit(int period) {
    SearchOptions o;
    o.max_period = period;
    o.grid = 32;
    for (const PeriodicOrbit& orb : find_periodic(make_cat_map(), o).orbits)
        if (orb.period == period) return orb;
    throw std::runtime_error("no orbit");
}

}  // namespace

TEST_CASE("periodic measures") {
    const PeriodicOrbit fixed = cat_orbit(1);
    const AtomicMeasure d = periodic_measure(fixed, kTorus);
    REQUIRE(d.size() == 1);
    CHECK(d.weights()[0] == 1.0);

    const AtomicMeasure two = periodic_measure(cat_orbit(2), kTorus);
    REQUIRE(two.size() == 2);
    CHECK(two.weights()[0] == 0.5);
    CHECK(two.weights()[1] == 0.5);

    const AtomicMeasure three = periodic_measure(cat_orbit(3), kTorus);
    REQUIRE(three.size() == 3);
    for (double w : three.weights()) CHECK(w == doctest::Approx(1.0 / 3));
    const auto family = TestFunctionFamily::for_topology(kTorus);
    CHECK(weak_star_distance(pushforward(make_cat_map(), three), three, family) < 1e-12);
}

TEST_CASE("weights are validated and atoms merged") {
    CHECK_THROWS(AtomicMeasure(kTorus, {{0, 0}, {0.5, 0}}, {0.5, 0.4}));
    CHECK_THROWS(AtomicMeasure(kTorus, {{0, 0}, {0.5, 0}}, {1.5, -0.5}));
    const AtomicMeasure merged(kTorus, {{0.2, 0.2}, {0.2, 0.2}, {0.7, 0.1}}, {0.25, 0.25, 0.5});
    CHECK(merged.size() == 2);
    CHECK(merged.weights()[0] == 0.5);
}

TEST_CASE("empirical measures") {
    OrbitSegment constant;
    constant.topology = kTorus;
    constant.points.assign(7, Point{0.3, 0.4});
    CHECK(empirical_measure(constant).size() == 1);

    const PeriodicOrbit three = cat_orbit(3);
    const OrbitSegment seg = orbit(make_cat_map(), three.points[0], 5);  // six points, two laps
    const auto family = TestFunctionFamily::for_topology(kTorus);
    CHECK(weak_star_distance(empirical_measure(seg), periodic_measure(three, kTorus), family) < 1e-12);

    const AtomicMeasure generic = empirical_measure(orbit(make_cat_map(), {0.1234, 0.5678}, 999));
    CHECK(generic.integrate([](Point p) { return p.x; }) == doctest::Approx(0.5).epsilon(0.1));
}

TEST_CASE("empirical measures approach the periodic measure like 1/length") {
    const PlanarMap cat = make_cat_map();
    const auto family = TestFunctionFamily::for_topology(kTorus);
    for (int tau : {1, 2, 3}) {
        const PeriodicOrbit orb = cat_orbit(tau);
        const AtomicMeasure target = periodic_measure(orb, kTorus);
        double c = 0.0;
        for (int n = 2; n <= 40; ++n) {
            const double rho = weak_star_distance(empirical_measure(orbit(cat, orb.points[0], n - 1)), target, family);
            c = std::max(c, rho * n);
        }
        CAPTURE(tau);
        CHECK(c < double(tau));
    }
}

TEST_CASE("distance between two diracs against a direct sum") {
    const auto family = TestFunctionFamily::for_topology(kTorus, 8);
    CHECK(family.size() == 81);
    const double rho = weak_star_distance(dirac({0, 0}), dirac({0.5, 0}), family);
    CHECK(rho > 0.0);
    // e_j at x = 0 is 1 for cos and 0 for sin; at x = 0.5 it is cos(π j1) = ±1.
    double direct = 0.0;
    for (std::size_t k = 0; k < family.size(); ++k) {
        const auto& t = family.term(k);
        if (t.sine) continue;
        direct += std::ldexp(1.0, -int(k) - 1) * std::abs(1.0 - std::cos(std::numbers::pi * t.freq_x));
    }
    CHECK(rho == doctest::Approx(direct).epsilon(1e-14));
    CHECK(weak_star_distance(dirac({0.3, 0.6}), dirac({0.3, 0.6}), family) == 0.0);
}

TEST_CASE("family terms are bounded by one") {
    for (const Topology& t : {kTorus, Topology::cylinder(kTwoPi), Topology::sphere_chart(), Topology::plane()}) {
        const auto family = TestFunctionFamily::for_topology(t, 6);
        SplitMix64 rng(4);
        for (int i = 0; i < 200; ++i) {
            const Point p{6 * rng.uniform() - 3, 1.8 * rng.uniform() - 0.9};
            for (std::size_t k = 0; k < family.size(); ++k) CHECK(std::abs(family.value(k, p)) <= 1.0 + 1e-15);
        }
    }
}

TEST_CASE("weak distance is symmetric and satisfies the triangle inequality") {
    const auto family = TestFunctionFamily::for_topology(kTorus);
    SplitMix64 rng(8);
    auto random_measure = [&] {
        const double w = 0.1 + 0.8 * rng.uniform();
        return AtomicMeasure(kTorus, {{rng.uniform(), rng.uniform()}, {rng.uniform(), rng.uniform()}}, {w, 1 - w});
    };
    for (int i = 0; i < 100; ++i) {
        const AtomicMeasure a = random_measure(), b = random_measure(), c = random_measure();
        CHECK(weak_star_distance(a, b, family) == weak_star_distance(b, a, family));
        CHECK(weak_star_distance(a, c, family) <= weak_star_distance(a, b, family) + weak_star_distance(b, c, family));
    }
}

TEST_CASE("mixed topologies are refused") {
    const AtomicMeasure cyl(Topology::cylinder(kTwoPi), {{0, 0}}, {1.0});
    CHECK_THROWS_AS(weak_star_distance(cyl, dirac({0, 0}), TestFunctionFamily::for_topology(kTorus)), DomainError);
}

TEST_CASE("shift measure entropy") {
    CHECK(shift_metric_entropy(ShiftMeasure::uniform(4), 1) == doctest::Approx(std::log(4.0)).epsilon(1e-15));
    CHECK(shift_metric_entropy(ShiftMeasure::bernoulli({1, 0, 0, 0}), 1) == 0.0);
    CHECK(shift_metric_entropy(ShiftMeasure::uniform(4), 12) == doctest::Approx(shift_entropy(4, 12)).epsilon(1e-15));
    CHECK_THROWS(ShiftMeasure::bernoulli({0.5, 0.4}));
}

TEST_CASE("markov shift measure is stationary") {
    const ShiftMeasure m = ShiftMeasure::markov({{0.9, 0.1}, {0.5, 0.5}});
    const auto& pi = m.stationary();
    CHECK(pi[0] * 0.9 + pi[1] * 0.5 == doctest::Approx(pi[0]).epsilon(1e-12));
    CHECK(pi[0] == doctest::Approx(5.0 / 6).epsilon(1e-12));
    const double h = -(pi[0] * (0.9 * std::log(0.9) + 0.1 * std::log(0.1)) + pi[1] * std::log(0.5));
    CHECK(shift_metric_entropy(m, 2) == doctest::Approx(h / 2).epsilon(1e-12));
    const ShiftMeasure full = ShiftMeasure::markov({{0.5, 0.5}, {0.5, 0.5}});
    CHECK(shift_metric_entropy(full, 3) == doctest::Approx(shift_entropy(2, 3)).epsilon(1e-14));
}

TEST_CASE("measure json") {
    const auto j = nlohmann::json::parse(to_json(dirac({0.25, 0.5})));
    CHECK(j["atoms"][0][0] == 0.25);
    CHECK(j["weights"][0] == 1.0);
    CHECK(j["topology"] == "torus2");
}
