#include <cmath>
#include <numbers>

#include "doctest.h"
#include "symplab/zoo.hpp"

using namespace symplab;

TEST_CASE("map spec grammar") {
    const MapSpec s = parse_map_spec("standard:K=1.5");
    CHECK(s.name == "standard");
    REQUIRE(s.parameters.size() == 1);
    CHECK(s.parameters[0].key == "k");
    CHECK(s.parameters[0].value == 1.5);
    CHECK(parse_map_spec("cat").parameters.empty());
    const MapSpec many = parse_map_spec("snake:lambda=2,a=0.1,delta=0.05,legs=8");
    CHECK(many.parameters.size() == 4);
}

TEST_CASE("malformed specs are config errors") {
    for (const char* bad : {"", ":k=1", "standard:", "standard:k", "standard:k=x", "standard:k=1,k=2", "standard:=1"}) {
        CAPTURE(bad);
        CHECK_THROWS_AS(make_map(bad), ConfigError);
    }
    CHECK_THROWS_AS(make_map("tent"), ConfigError);
    CHECK_THROWS_AS(make_map("standard:q=1"), ConfigError);
    CHECK_THROWS_AS(make_map("snake:legs=2.5"), ConfigError);
    CHECK_THROWS_AS(make_map("snake:delta=0.5"), ConfigError);
    CHECK_THROWS_AS(make_map("sphere_pendulum:order=3"), ConfigError);
}

TEST_CASE("defaults fill missing keys") {
    const PlanarMap m = make_map("standard");
    CHECK(m.parameter("k").value() == 1.0);
    CHECK(make_map("rotation").parameter("alpha").value() == doctest::Approx(std::numbers::pi / 2));
    CHECK(make_map("standard:k=3").parameter("k").value() == 3.0);
}

TEST_CASE("registered maps build from their defaults and round-trip") {
    for (const ZooEntry& e : zoo_entries()) {
        CAPTURE(e.name);
        const PlanarMap m = make_map(e.defaults);
        CHECK(m.name() == e.name);
        CHECK(make_map(m.spec()).spec() == m.spec());
    }
    for (const std::string& spec : zoo_suite()) CHECK_NOTHROW(make_map(spec));
}
