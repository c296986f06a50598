#include <cmath>

#include "doctest.h"
#include "json.hpp"
#include "symplab/entropy.hpp"
#include "symplab/maps.hpp"
#include "symplab/periodic.hpp"

using namespace symplab;

namespace {

EntropySchedule small(long samples = 4000) {
    EntropySchedule s;
    s.n_min = 2;
    s.n_max = 8;
    s.samples = samples;
    s.seed = 3;
    return s;
}

}  // namespace

TEST_CASE("identity orbits do not separate with time") {
    const PlanarMap id = make_identity_map();
    const long first = count_separated(id, 1, 0.3, 2000, 1);
    CHECK(first > 1);
    for (int n : {2, 5, 12}) CHECK(count_separated(id, n, 0.3, 2000, 1) == first);
    CHECK(estimate_entropy(id, small()).value == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("rotation is an isometry") {
    const EntropyEstimate e = estimate_entropy(make_rotation_map(1.0), small());
    for (const SlopeFit& f : e.slopes) CHECK(std::abs(f.slope) < 1e-12);
}

TEST_CASE("cat map short schedule grows near the eigenvalue") {
    EntropySchedule s = small(20000);
    s.n_min = 3;
    s.n_max = 7;
    s.eps = {0.1, 0.05};
    const EntropyEstimate e = estimate_entropy(make_cat_map(), s);
    CHECK(e.value == doctest::Approx(0.9624).epsilon(0.15));
}

TEST_CASE("tables are monotone in n and in eps") {
    for (const PlanarMap& m : {make_cat_map(), make_standard_map(2.0), make_rotation_map(0.5)}) {
        const SeparatedCountTable t = separated_count_table(m, small());
        CHECK_NOTHROW(assert_monotone(t));
        for (const CountEntry& c : t.entries) {
            if (c.n > 2) CHECK(t.at(c.n - 1, c.eps) <= c.count);
        }
    }
}

TEST_CASE("planted non-monotone table is caught") {
    SeparatedCountTable t = separated_count_table(make_cat_map(), small());
    t.entries[2].count = 0;
    CHECK_THROWS_AS(assert_monotone(t), std::logic_error);
}

TEST_CASE("counts are deterministic across runs and workers") {
    EntropySchedule one = small(), many = small();
    many.workers = 4;
    const PlanarMap m = make_standard_map(1.0);
    const std::string base = to_csv(separated_count_table(m, one));
    CHECK(to_csv(separated_count_table(m, one)) == base);
    CHECK(to_csv(separated_count_table(m, one)) == base);
    CHECK(to_csv(separated_count_table(m, many)) == base);
    CHECK(to_json(estimate_entropy(m, one)) == to_json(estimate_entropy(m, many)));
}

TEST_CASE("sample points are seeded") {
    const PlanarMap m = make_cat_map();
    CHECK(sample_points(m, 50, 1) == sample_points(m, 50, 1));
    CHECK(sample_points(m, 50, 1) != sample_points(m, 50, 2));
}

TEST_CASE("schedule validation") {
    EntropySchedule s = small();
    s.n_max = s.n_min + 2;
    CHECK_THROWS_AS(estimate_entropy(make_cat_map(), s), std::invalid_argument);
    s = small();
    s.eps = {0.05, 0.1};
    CHECK_THROWS_AS(estimate_entropy(make_cat_map(), s), std::invalid_argument);
}

TEST_CASE("saturation is reported") {
    EntropySchedule s = small(30);
    s.strict_saturation = true;
    CHECK_THROWS_AS(estimate_entropy(make_cat_map(), s), SaturationError);
    s.strict_saturation = false;
    s.n_min = 6;
    s.n_max = 12;
    CHECK_THROWS_AS(estimate_entropy(make_cat_map(), s), SaturationError);
}

TEST_CASE("shift entropy closed form") {
    CHECK(shift_entropy(2, 1) == std::log(2.0));
    CHECK(shift_entropy(4, 12) == doctest::Approx(0.11552453).epsilon(1e-8));
    CHECK(shift_entropy(2, 2) == std::log(2.0) / 2);
    for (int n : {2, 3, 7, 1000})
        for (int t : {1, 5, 23}) CHECK(std::abs(shift_entropy(n, t) * t - std::log(double(n))) <= 1e-15 * t);
    CHECK_THROWS_AS(shift_entropy(1, 3), std::invalid_argument);
    CHECK_THROWS_AS(shift_entropy(3, 0), std::invalid_argument);
}

TEST_CASE("bound report skips an empty hyperbolic catalog") {
    const EntropyEstimate e = estimate_entropy(make_identity_map(), small());
    SearchOptions o;
    o.max_period = 1;
    o.grid = 8;
    const EntropyBoundReport r = check_entropy_bound(e, find_periodic(make_rotation_map(1.0), o));
    CHECK_FALSE(r.bound.has_value());
    CHECK_FALSE(r.violated);
    CHECK_FALSE(r.note.empty());
}

TEST_CASE("bound report flags a planted violation") {
    EntropyEstimate e;
    e.value = 2.0;
    SearchOptions o;
    o.max_period = 1;
    const EntropyBoundReport r = check_entropy_bound(e, find_periodic(make_cat_map(), o), 0.1);
    REQUIRE(r.bound.has_value());
    CHECK(r.violated);
    CHECK(r.equality_gap.value() == doctest::Approx(2.0 - 0.9624236501));
    e.value = 1.0;
    CHECK_FALSE(check_entropy_bound(e, find_periodic(make_cat_map(), o), 0.1).violated);
}

TEST_CASE("serialized forms") {
    const SeparatedCountTable t = separated_count_table(make_cat_map(), small());
    CHECK(to_csv(t).rfind("n,eps,count,samples\n", 0) == 0);
    const auto j = nlohmann::json::parse(to_json(estimate_entropy(make_cat_map(), small())));
    CHECK(j.contains("value"));
    CHECK(j["slopes"].is_array());
    CHECK(j["slopes"][0].contains("residual"));
    CHECK(j["warnings"].is_array());
}
