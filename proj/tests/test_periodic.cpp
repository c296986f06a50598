#include <cmath>
#include <numbers>

#include "doctest.h"
#include "symplab/hamiltonian_flow.hpp"
#include "symplab/maps.hpp"
#include "symplab/periodic.hpp"

using namespace symplab;
using std::numbers::pi;

namespace {

const double kGolden = std::log((3 + std::sqrt(5.0)) / 2);

PeriodicCatalog search(const PlanarMap& m, int period, int grid = 64) {
    SearchOptions o;
    o.max_period = period;
    o.grid = grid;
    return find_periodic(m, o);
}

// Points of minimal period exactly n for the cat map, from |det(A^k − I)| = |2 − tr A^k|.
long cat_points_exact(int n) {
    auto fixed = [](int k) {
        double a = 2, b = 1, c = 1, d = 1, pa = 1, pb = 0, pc = 0, pd = 1;
        for (int i = 0; i < k; ++i) {
            const double na = pa * a + pb * c, nb = pa * b + pb * d, nc = pc * a + pd * c, nd = pc * b + pd * d;
            pa = na, pb = nb, pc = nc, pd = nd;
        }
        return static_cast<long>(std::llround(std::abs(2 - (pa + pd))));
    };
    long count = fixed(n);
    for (int d = 1; d < n; ++d)
        if (n % d == 0) count -= cat_points_exact(d);
    return count;
}

}  // namespace

TEST_CASE("cat map fixed point") {
    const PeriodicCatalog cat = search(make_cat_map(), 1);
    REQUIRE(cat.orbits.size() == 1);
    const PeriodicOrbit& o = cat.orbits[0];
    CHECK(o.points[0].x == doctest::Approx(0.0));
    CHECK(o.points[0].y == doctest::Approx(0.0));
    CHECK(o.stability == Stability::Hyperbolic);
    CHECK(std::abs(o.multipliers[0]) == doctest::Approx((3 + std::sqrt(5.0)) / 2).epsilon(1e-12));
    CHECK(std::abs(o.multipliers[1]) == doctest::Approx((3 - std::sqrt(5.0)) / 2).epsilon(1e-12));
    CHECK(chi(o) == doctest::Approx(0.9624236501).epsilon(1e-10));
    CHECK(sum_positive_exponents(o) == doctest::Approx(0.9624236501).epsilon(1e-10));
}

TEST_CASE("cat map period two") {
    const PeriodicCatalog cat = search(make_cat_map(), 2);
    CHECK(cat.points_with_period_dividing(2) == 5);
    CHECK(cat.points_with_period_dividing(1) == 1);
    int twos = 0;
    for (const PeriodicOrbit& o : cat.orbits) twos += o.period == 2;
    CHECK(twos == 2);
}

TEST_CASE("cat map counts and exponents up to period four") {
    const PeriodicCatalog cat = search(make_cat_map(), 4);
    for (int n = 1; n <= 4; ++n) {
        long count = 0;
        for (const PeriodicOrbit& o : cat.orbits)
            if (o.period == n) count += o.period;
        CAPTURE(n);
        CHECK(count == cat_points_exact(n));
    }
    for (const PeriodicOrbit& o : cat.orbits) CHECK(std::abs(chi(o) - kGolden) < 1e-9);
    for (int n = 1; n <= 4; ++n) CHECK(s_n(cat, n).value() == doctest::Approx(kGolden).epsilon(1e-12));
}

TEST_CASE("standard map fixed points") {
    const PlanarMap m = make_standard_map(1.0);
    const PeriodicCatalog cat = search(m, 1);
    REQUIRE(cat.orbits.size() == 2);
    CHECK(cat.orbits[0].points[0].x == doctest::Approx(0.0));
    CHECK(cat.orbits[0].trace == doctest::Approx(3.0));
    CHECK(cat.orbits[0].stability == Stability::Hyperbolic);
    CHECK(cat.orbits[1].points[0].x == doctest::Approx(pi));
    CHECK(cat.orbits[1].trace == doctest::Approx(1.0));
    CHECK(cat.orbits[1].stability == Stability::Elliptic);
    CHECK(s_n(cat, 1).value() == doctest::Approx(kGolden).epsilon(1e-12));
}

TEST_CASE("classify single points") {
    CHECK(classify(make_standard_map(1.0), Point{pi, 0.0}, 1).stability == Stability::Elliptic);
    CHECK(classify(make_shear_map(), Point{0.0, 0.0}, 1).stability == Stability::Parabolic);
    CHECK(chi(classify(make_linear_saddle(2.0), Point{0.0, 0.0}, 1)) == doctest::Approx(std::log(2.0)));
    CHECK(sum_positive_exponents(classify(make_linear_saddle(3.0), Point{0.0, 0.0}, 1)) ==
          doctest::Approx(std::log(3.0)));
    CHECK_THROWS_AS(classify(make_cat_map(), Point{0.1, 0.2}, 1), NotPeriodicError);
}

TEST_CASE("elliptic orbits have no exponent") {
    const PeriodicOrbit ell = classify(make_standard_map(1.0), Point{pi, 0.0}, 1);
    CHECK_THROWS_AS(chi(ell), UndefinedExponentError);
    CHECK_THROWS_AS(sum_positive_exponents(ell), UndefinedExponentError);
    PeriodicCatalog only;
    only.orbits.push_back(ell);
    CHECK_FALSE(s_n(only).has_value());
}

TEST_CASE("pendulum saddle exponent") {
    const PlanarMap m = flow::time_t_map(1.0, 1e-3);
    const PeriodicOrbit o = classify(m, Point{pi, 0.0}, 1);
    CHECK(o.stability == Stability::Hyperbolic);
    CHECK(std::abs(chi(o) - 1.0) < 1e-3);
}

TEST_CASE("catalog invariants on the standard map") {
    const PeriodicCatalog cat = search(make_standard_map(1.5), 4, 48);
    const Topology& top = cat.topology;
    for (std::size_t i = 0; i < cat.orbits.size(); ++i) {
        const PeriodicOrbit& o = cat.orbits[i];
        CHECK(std::abs(o.det - 1.0) < 1e-8);
        if (o.stability == Stability::Hyperbolic) CHECK(chi(o) > 0.0);
        CHECK((o.stability == Stability::Hyperbolic) == (std::abs(o.trace) > 2 + 1e-9));
        for (std::size_t j = i + 1; j < cat.orbits.size(); ++j)
            for (const Point& p : o.points)
                for (const Point& q : cat.orbits[j].points) CHECK(top.distance(p, q) > 1e-6);
    }
    double prev = 0.0;
    for (int n = 1; n <= 4; ++n) {
        const double s = s_n(cat, n).value_or(0.0);
        CHECK(s >= prev);
        prev = s;
    }
}

TEST_CASE("search is deterministic across workers") {
    SearchOptions one, four;
    one.max_period = four.max_period = 3;
    one.grid = four.grid = 32;
    four.workers = 4;
    const PlanarMap m = make_standard_map(2.0);
    CHECK(to_csv(find_periodic(m, one)) == to_csv(find_periodic(m, four)));
}

TEST_CASE("csv layout") {
    const std::string csv = to_csv(search(make_cat_map(), 1));
    CHECK(csv.rfind("period,theta_0,z_0,trace,multiplier_max,chi,stability\n", 0) == 0);
    CHECK(csv.find('\r') == std::string::npos);
    CHECK(format12(1.0 / 3.0) == "0.333333333333");
}
