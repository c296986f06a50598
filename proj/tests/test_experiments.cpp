#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "doctest.h"
#include "json.hpp"
#include "symplab/experiments.hpp"

using namespace symplab;
namespace fs = std::filesystem;

namespace {

Config quick_cat() {
    return parse_config(R"(experiment = catmap_equality
seed = 1
samples = 20000   # small, for speed
n_min = 3
n_max = 7
eps = 0.1,0.05
max_period = 4
grid = 32
equality_n = 4
)");
}

std::string report_of(const ExperimentReport& r) {
    for (const Artifact& a : r.artifacts)
        if (a.filename == "report.json") return a.content;
    return {};
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

}  // namespace

TEST_CASE("registry") {
    const auto& all = list_experiments();
    REQUIRE(all.size() == 5);
    const std::vector<std::string> names = {"catmap_equality", "standard_scan", "sphere_pendulum_gap", "snake_sweep",
                                            "anosov_bound"};
    for (std::size_t i = 0; i < names.size(); ++i) CHECK(all[i].name == names[i]);
    CHECK(&list_experiments() == &all);
    CHECK(list_experiments().size() == 5);
    CHECK_FALSE(find_experiment("nope").has_value());
    CHECK(find_experiment("snake_sweep").has_value());
}

TEST_CASE("config text and overrides") {
    Config c = parse_config("a = 1\n\n# comment\nb=2 # trailing\n a = 3\n");
    CHECK(c.at("a") == "3");
    CHECK(c.at("b") == "2");
    apply_override(c, "b=7");
    CHECK(c.at("b") == "7");
    CHECK_THROWS_AS(parse_config("novalue\n"), ConfigError);
    CHECK_THROWS_AS(apply_override(c, "=4"), ConfigError);
    CHECK_THROWS_AS(read_config("/nonexistent/path.cfg"), ConfigError);
}

TEST_CASE("configs are validated before running") {
    CHECK_THROWS_AS(run_experiment({}), UsageError);
    CHECK_THROWS_AS(run_experiment({{"experiment", "nope"}, {"seed", "1"}}), UsageError);
    CHECK_THROWS_AS(run_experiment({{"experiment", "catmap_equality"}}), ConfigError);
    Config c = quick_cat();
    c["colour"] = "blue";
    CHECK_THROWS_AS(run_experiment(c), ConfigError);
    c = quick_cat();
    c["map"] = "standard:k=oops";
    CHECK_THROWS_AS(run_experiment(c), ConfigError);
    c = quick_cat();
    c["samples"] = "many";
    CHECK_THROWS_AS(run_experiment(c), ConfigError);
}

TEST_CASE("quick cat run passes and echoes its config") {
    const ExperimentReport r = run_experiment(quick_cat());
    CHECK(r.all_passed());
    const auto j = nlohmann::json::parse(report_of(r));
    CHECK(j["experiment"] == "catmap_equality");
    CHECK(j["config"]["samples"] == "20000");
    CHECK(j["config"]["equality_tol"] == "0.15");
    CHECK(j["passed"] == true);
    CHECK_FALSE(j.contains("seconds"));
    for (const auto& c : j["checks"]) {
        CHECK(c.contains("value"));
        CHECK(c.contains("limit"));
        CHECK(c.contains("rule"));
    }
    std::set<std::string> files;
    for (const Artifact& a : r.artifacts) files.insert(a.filename);
    CHECK(files.count("entropy_table.csv"));
    CHECK(files.count("periodic_catalog.csv"));
}

TEST_CASE("planted failure reports a failed check") {
    Config c = quick_cat();
    c["map"] = "identity";
    const ExperimentReport r = run_experiment(c);
    CHECK_FALSE(r.all_passed());
    CHECK(nlohmann::json::parse(report_of(r))["passed"] == false);
}

TEST_CASE("reports are byte-identical across runs and worker counts") {
    const std::string first = report_of(run_experiment(quick_cat()));
    CHECK(report_of(run_experiment(quick_cat())) == first);
    CHECK(report_of(run_experiment(quick_cat())) == first);
    Config c = quick_cat();
    c["workers"] = "3";
    CHECK(report_of(run_experiment(c)) == first);
}

TEST_CASE("artifacts on disk") {
    const fs::path out = fs::temp_directory_path() / "symplab_test_artifacts";
    fs::remove_all(out);
    const ExperimentReport r = run_experiment(quick_cat());
    write_report(r, out);
    CHECK(slurp(out / "report.json") == report_of(r));
    CHECK(fs::exists(out / "timing.txt"));
    const std::string csv = slurp(out / "entropy_table.csv");
    CHECK(csv.find('\r') == std::string::npos);
    CHECK(csv.rfind("n,eps,count,samples\n", 0) == 0);
    fs::remove_all(out);
}
