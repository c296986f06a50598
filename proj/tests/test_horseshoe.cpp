#include <cmath>
#include <numbers>

#include "doctest.h"
#include "json.hpp"
#include "symplab/entropy.hpp"
#include "symplab/horseshoe.hpp"

using namespace symplab;
using std::numbers::pi;

namespace {

const double kInf = std::numeric_limits<double>::infinity();

SnakeModel snake(int legs) { return build_snake(2.0, 0.1, 0.05, legs); }

}  // namespace

TEST_CASE("amplitude from the leg count") {
    CHECK(snake(5).amplitude == doctest::Approx(0.002 / pi).epsilon(1e-15));
    CHECK(snake(5).amplitude == doctest::Approx(6.366e-4).epsilon(1e-4));
    for (int n : {2, 3, 8, 33}) CHECK(snake(2 * n).amplitude == doctest::Approx(snake(n).amplitude / 2).epsilon(1e-15));
}

TEST_CASE("snake stays inside its C1 budget") {
    for (int n : {2, 4, 16, 64}) {
        const SnakeModel m = snake(n);
        const double budget = pi * n * m.amplitude / (2 * m.a);
        CHECK(budget == doctest::Approx(m.delta).epsilon(1e-14));
        CHECK(snake_c1_size(m, 2 * m.a) <= m.delta * (1 + 1e-12));
        CHECK(snake_c1_size(m, 2 * m.a) >= m.delta * (1 - 1e-5));
    }
}

TEST_CASE("constructor rejects bad parameters") {
    CHECK_THROWS_AS(build_snake(1.0, 0.1, 0.05, 4), ConstructionError);
    CHECK_THROWS_AS(build_snake(2.0, 0.0, 0.05, 4), ConstructionError);
    CHECK_THROWS_AS(build_snake(2.0, 0.1, 0.2, 4), ConstructionError);
    CHECK_THROWS_AS(build_snake(2.0, 0.1, 0.05, 1), ConstructionError);
}

TEST_CASE("flattening a graph") {
    const FlatteningChart sq = flatten_graph([](double x) { return x * x; }, [](double x) { return 2 * x; });
    const Point p = sq.apply({0.2, 0.04});
    CHECK(p.x == 0.2);
    CHECK(std::abs(p.y) < 1e-17);
    const FlatteningChart flat = flatten_graph([](double) { return 0.0; }, [](double) { return 0.0; });
    CHECK(flat.apply({0.3, -0.7}) == Point{0.3, -0.7});
    for (int i = 0; i < 100; ++i) CHECK(sq.jacobian({-1.0 + 0.02 * i, 0.5}).det() == 1.0);
    CHECK(sq.inverse(sq.apply({0.4, 0.9})).y == doctest::Approx(0.9));
    CHECK_THROWS_AS(flatten_graph([](double x) { return 1 + x; }, [](double) { return 1.0; }), std::invalid_argument);
    CHECK_THROWS_AS(flatten_graph([](double x) { return x; }, [](double) { return 1.0; }), std::invalid_argument);
}

TEST_CASE("legs are counted on the tangency window") {
    CHECK(count_legs(snake(4)) == 4);
    CHECK(count_legs(snake(2)) == 2);
    for (int n = 2; n <= 64; ++n) CHECK(count_legs(snake(n)) == n);
    CHECK_THROWS_AS(count_legs(snake_with_amplitude(2.0, 0.1, 0.0, 4)), DegeneracyError);
}

TEST_CASE("every piece of the model preserves area") {
    const SnakeModel m = snake(6);
    const Box f = m.frame();
    SplitMix64 rng(2);
    for (int i = 0; i < 2000; ++i) {
        const Point p = f.at(rng.uniform(), rng.uniform());
        CHECK(std::abs(m.jacobian(p).det() - 1.0) < 1e-12);
        CHECK(m.snake_jacobian(p).det() == 1.0);
    }
    CHECK(check_symplectic(m.as_map(), 1000, 3) < 1e-12);
}

TEST_CASE("return time at amplitude 2^-10") {
    const ReturnTime r = return_time(snake_with_amplitude(2.0, 0.1, std::ldexp(1.0, -10), 4));
    CHECK(r.t >= 5);
    CHECK(r.t <= 15);
    CHECK(r.t == r.linear_steps + 2);
    CHECK(r.k1 == doctest::Approx(std::ldexp(1.0, -10) * std::pow(2.0, r.t)));
}

TEST_CASE("doubling the legs adds one step") {
    int prev = return_time(snake(4)).t;
    for (int n : {8, 16, 32, 64, 128}) {
        const int t = return_time(snake(n)).t;
        CHECK(t == prev + 1);
        prev = t;
    }
}

TEST_CASE("fitted K1 stays in a factor-two band") {
    double lo = kInf, hi = 0.0;
    for (int n : {4, 8, 16, 32, 64}) {
        const double k1 = return_time(snake(n)).k1;
        lo = std::min(lo, k1);
        hi = std::max(hi, k1);
    }
    CHECK(hi / lo < 2.0);
}

TEST_CASE("two-leg horseshoe is the full two-shift") {
    const HorseshoeCoding h = code_horseshoe(snake(2));
    REQUIRE(h.certified);
    CHECK(h.transition == std::vector<std::vector<int>>{{1, 1}, {1, 1}});
    CHECK(h.spectral_radius == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(h.entropy == shift_entropy(2, h.t));
}

TEST_CASE("certified codings have the closed-form entropy") {
    double prev = 0.0;
    for (int n : {4, 8, 16, 32, 64, 128}) {
        const HorseshoeCoding h = code_horseshoe(snake(n));
        CAPTURE(n);
        REQUIRE(h.certified);
        CHECK(h.valid_legs == n);
        CHECK(h.entropy == shift_entropy(n, h.t));
        CHECK(h.entropy > prev);
        CHECK(h.entropy < std::log(2.0));
        prev = h.entropy;
    }
}

TEST_CASE("a short return time fails certification") {
    const SnakeModel m = snake(8);
    const HorseshoeCoding h = code_horseshoe(m, return_time(m).linear_steps - 3);
    CHECK_FALSE(h.certified);
    CHECK_FALSE(h.failures.empty());
    CHECK(h.entropy < shift_entropy(8, h.t) + 1e-15);
}

TEST_CASE("leg window") {
    const LegWindow w = leg_window(4);
    CHECK(w.lo == -1.125);
    CHECK(w.hi == 0.875);
}

TEST_CASE("angles") {
    CHECK(angle({1, 0}, {1, 0}) == 0.0);
    CHECK(angle_to_subspace((1 / std::sqrt(2.0)) * Point{1, 1}, {1, 0}) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(angle_to_subspace({1, 0}, {0, 1}) == kInf);
    CHECK(angle({1, 0}, {0, 1}) == kInf);
    CHECK(angle({1, 1}, {1, 0}) == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("expansion along the unstable direction is tight") {
    const SnakeModel m = snake(4);
    const ExpansionReport r = verify_expansion(m, 6, {0, 1}, {0, 0});
    CHECK(r.hypothesis_holds);
    CHECK(r.holds);
    CHECK(r.max_norm_lhs == doctest::Approx(64.0).epsilon(1e-15));
    CHECK(r.max_norm_lhs == doctest::Approx(r.max_norm_rhs).epsilon(1e-15));
}

TEST_CASE("expansion of a diagonal vector") {
    const ExpansionReport r = verify_expansion(snake(4), 5, (1 / std::sqrt(2.0)) * Point{1, 1}, {0, 0});
    CHECK(r.hypothesis_holds);
    CHECK(r.holds);
    CHECK(r.margin > 0.0);
    CHECK(r.rhs == doctest::Approx(32.0 * norm_equivalence_constant()).epsilon(1e-14));
}

TEST_CASE("a stable vector fails the angle hypothesis") {
    const ExpansionReport r = verify_expansion(snake(4), 3, {1, 0}, {0, 0});
    CHECK_FALSE(r.hypothesis_holds);
    CHECK_FALSE(r.holds);
    CHECK_FALSE(r.note.empty());
}

TEST_CASE("expansion needs the orbit to stay in the box") {
    const SnakeModel m = snake(4);
    CHECK_THROWS_AS(verify_expansion(m, 40, {0, 1}, {0, m.half_height / 2}), DomainError);
}

TEST_CASE("transit constant is positive") { CHECK(transit_constant(snake(4)) > 0.0); }

TEST_CASE("coded periodic orbits at four legs") {
    const SnakeModel m = snake(4);
    const HorseshoeCoding h = code_horseshoe(m);
    REQUIRE(h.certified);
    const ExponentFloorReport r = periodic_exponent_floor(h, m, 10);
    CHECK(r.chi_p == doctest::Approx(std::log(2.0)));
    CHECK(r.floor == doctest::Approx(std::log(2.0) - 0.1));
    REQUIRE_FALSE(r.orbits.empty());
    // Four fixed legs, six two-letter words, twenty three-letter and sixty four-letter necklaces.
    CHECK(r.orbits.size() == 4 + 6 + 20 + 60);
    for (const CodedOrbit& q : r.orbits) {
        CHECK(q.closure < 1e-9);
        if (q.word.size() == 2) CHECK(q.chi > std::log(2.0) - 0.1);
    }
    const CodedOrbit& fixed = r.orbits.front();
    REQUIRE(fixed.word.size() == 1);
    REQUIRE(fixed.word[0] == 0);

    // Independent oracle: the fixed point s = u of the normalized return map on
    // the first leg, by bisection, and its multiplier from the trace.
    auto excess = [&](double u) { return h.return_map({u, u}).y - u; };
    double lo = (-3 - 0.5) / 4, hi = (-3 + 0.5) / 4;  // leg q = -3 of four
    REQUIRE(excess(lo) * excess(hi) < 0);
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        (excess(lo) * excess(mid) <= 0 ? hi : lo) = mid;
    }
    const double u = 0.5 * (lo + hi), du = 1e-7;
    const double trace = (h.return_map({u, u + du}).y - h.return_map({u, u - du}).y) / (2 * du);
    const double mult = std::abs(trace) / 2 + std::sqrt(trace * trace / 4 - 1);
    CHECK(std::abs(fixed.chi - std::log(mult) / h.t) < 1.0 / 10);
    CHECK(std::abs(fixed.chi - std::log(mult) / h.t) < 1e-6);
}

TEST_CASE("visit frequency") {
    OrbitSegment seg;
    seg.points.assign(10, Point{0.0, 0.0});
    CHECK(visit_frequency(seg, {0, 0}, 0.1) == 1.0);
    CHECK(visit_frequency(seg, {5, 5}, 0.1) == 0.0);
    seg.points[0] = {3, 3};
    CHECK(visit_frequency(seg, {0, 0}, 0.1) == doctest::Approx(0.9));
}

TEST_CASE("coded orbits linger near the saddle as legs grow") {
    double prev = 0.0;
    for (int n : {4, 64, 1024, 16384}) {
        const SnakeModel m = snake(n);
        const HorseshoeCoding h = code_horseshoe(m);
        const ExponentFloorReport r = periodic_exponent_floor(h, m, 10, 1);
        OrbitSegment seg;
        seg.topology = Topology::plane();
        seg.points = r.orbits.front().points;
        const double f = visit_frequency(seg, {0, 0}, 0.1);
        CHECK(f > prev);
        prev = f;
    }
    CHECK(prev > 0.75);
}

TEST_CASE("sweep row and serialization") {
    const SweepRow row = sweep_row(snake(8), 10);
    CHECK(row.certified);
    CHECK(row.coded_entropy == shift_entropy(8, row.t));
    SweepReport rep;
    rep.lambda = 2;
    rep.a = 0.1;
    rep.delta = 0.05;
    rep.n = 10;
    rep.rows = {row};
    rep.n1 = 9;
    CHECK(to_csv(rep).rfind("N,A,t,coded_entropy,chi_p,min_chi_q,rho_to_mu_p,K1_fit\n", 0) == 0);
    const auto j = nlohmann::json::parse(to_json(rep));
    CHECK(j["N1"] == 9);
    CHECK(j["N2"].is_null());
}
