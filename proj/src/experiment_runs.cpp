#include <cmath>
#include <numbers>
#include <sstream>

#include "experiments_internal.hpp"
#include "symplab/hamiltonian_flow.hpp"
#include "symplab/horseshoe.hpp"
#include "symplab/measures.hpp"
#include "symplab/periodic.hpp"

namespace symplab::detail {

namespace {

using Json = nlohmann::ordered_json;

SearchOptions search_options(const Settings& s) {
    SearchOptions o;
    o.max_period = static_cast<int>(s.integer("max_period"));
    o.grid = static_cast<int>(s.integer("grid"));
    o.workers = static_cast<int>(s.integer("workers"));
    if (o.max_period < 1 || o.grid < 1) throw ConfigError("config: max_period and grid must be positive");
    return o;
}

Check passed_note(std::string name, std::string detail) {
    Check c;
    c.name = std::move(name);
    c.passed = true;
    c.rule = "skipped";
    c.detail = std::move(detail);
    return c;
}

Check monotone_check(const std::string& name, const SeparatedCountTable& table) {
    try {
        assert_monotone(table);
        return make_check(name, 1.0, 1.0, "value == limit", "counts nondecreasing in n and in 1/eps");
    } catch (const std::logic_error& e) {
        return make_check(name, 0.0, 1.0, "value == limit", e.what());
    }
}

Check bound_check(const std::string& name, const EntropyBoundReport& b) {
    if (!b.bound) return passed_note(name, b.note);
    return make_check(name, b.h_est, *b.bound + b.tolerance, "value <= limit", "h_est <= max sum of positive exponents + tol");
}

Json bound_json(const EntropyBoundReport& b) {
    Json j;
    j["h_est"] = b.h_est;
    j["bound"] = b.bound ? Json(*b.bound) : Json();
    j["tolerance"] = b.tolerance;
    j["violated"] = b.violated;
    j["note"] = b.note;
    return j;
}

// Entropy estimate plus catalog, shared by the equality experiments.
struct Study {
    EntropyEstimate estimate;
    PeriodicCatalog catalog;
    Json json;
};

Study study(const PlanarMap& map, const Settings& s) {
    Study st{estimate_entropy(map, s.schedule()), find_periodic(map, search_options(s)), Json()};
    st.json["map"] = map.spec();
    st.json["entropy"] = Json::parse(to_json(st.estimate));
    st.json["catalog"] = {{"orbits", st.catalog.orbits.size()},
                          {"points", st.catalog.point_count()},
                          {"max_period", st.catalog.max_period}};
    return st;
}

void equality_checks(const std::string& tag, const Study& st, const Settings& s, ExperimentReport& report,
                     Json& results) {
    const int n = static_cast<int>(s.integer("equality_n"));
    const double tol = s.num("equality_tol");
    const auto sn = s_n(st.catalog, n);
    const double h = st.estimate.value;
    results["s_n"] = sn ? Json(*sn) : Json();
    results["equality_n"] = n;
    if (sn)
        report.checks.push_back(make_check(tag + "equality", std::abs(h - *sn), tol * *sn, "value <= limit",
                                           "|h_est - s_n| <= tol * s_n"));
    else
        report.checks.push_back(make_check(tag + "equality", 1.0, 0.0, "value <= limit", "no hyperbolic orbit of period <= n"));
    const EntropyBoundReport b = check_entropy_bound(st.estimate, st.catalog, s.num("bound_tol"));
    results["bound"] = bound_json(b);
    report.checks.push_back(bound_check(tag + "entropy_bound", b));
    report.checks.push_back(monotone_check(tag + "table_monotone", st.estimate.table));
}

// exp(M) by scaling and squaring of the Taylor series.
Mat2 expm(const Mat2& m) {
    int squarings = 0;
    double size = m.max_abs();
    while (size > 0.25) {
        size *= 0.5;
        ++squarings;
    }
    const Mat2 a = std::ldexp(1.0, -squarings) * m;
    Mat2 sum = Mat2::identity(), term = Mat2::identity();
    for (int k = 1; k <= 20; ++k) {
        term = (1.0 / k) * (term * a);
        sum = sum + term;
    }
    for (int i = 0; i < squarings; ++i) sum = sum * sum;
    return sum;
}

// Real eigenvalues sorted by modulus, largest first (the saddle case).
std::pair<double, double> real_eigenvalues(const Mat2& m) {
    const double tr = m.trace(), disc = tr * tr - 4.0 * m.det();
    if (disc < 0.0) throw std::runtime_error("expected real eigenvalues");
    const double big = 0.5 * (tr + std::copysign(std::sqrt(disc), tr));
    return {big, m.det() / big};
}

}  // namespace

void run_catmap_equality(const Settings& s, ExperimentReport& report) {
    const PlanarMap map = make_map(s.str("map"));
    const Study st = study(map, s);
    Json results = st.json;
    equality_checks("", st, s, report, results);

    if (map.name() == "cat") {
        const double golden = std::log((3.0 + std::sqrt(5.0)) / 2.0);
        results["reference_entropy"] = golden;
        report.checks.push_back(make_check("entropy_vs_eigenvalue", std::abs(st.estimate.value - golden) / golden,
                                           s.num("entropy_tol"), "value <= limit",
                                           "relative error against log((3+sqrt 5)/2)"));
        // |det(A^n − I)| = |2 − tr A^n| fixed points of A^n on the torus.
        const Mat2 a{2.0, 1.0, 1.0, 1.0};
        Mat2 power = Mat2::identity();
        const int top = static_cast<int>(std::min<long>(s.integer("count_check_period"), st.catalog.max_period));
        for (int n = 1; n <= top; ++n) {
            power = power * a;
            const double expected = std::abs(2.0 - power.trace());
            report.checks.push_back(make_check("periodic_points_n" + std::to_string(n),
                                               static_cast<double>(st.catalog.points_with_period_dividing(n)),
                                               expected, "value == limit", "points of period dividing n"));
        }
        double worst = 0.0;
        for (const PeriodicOrbit& o : st.catalog.orbits) worst = std::max(worst, std::abs(chi(o) - golden));
        report.checks.push_back(make_check("chi_equals_log_eigenvalue", worst, s.num("chi_tol"), "value <= limit",
                                           "max |chi - log((3+sqrt 5)/2)| over the catalog"));
    }
    report.artifacts.push_back({"entropy_table.csv", to_csv(st.estimate.table)});
    report.artifacts.push_back({"periodic_catalog.csv", to_csv(st.catalog)});
    report.artifacts.push_back({"report.json", report_json(report, results)});
}

void run_standard_scan(const Settings& s, ExperimentReport& report) {
    std::vector<std::pair<std::string, PlanarMap>> maps;
    for (const std::string& k : s.list("k_values", ','))
        maps.emplace_back(k, make_map("standard:k=" + k));
    if (maps.empty()) throw ConfigError("config: k_values is empty");
    Json results = Json::array();
    for (const auto& [k, map] : maps) {
        const Study st = study(map, s);
        Json r = st.json;
        equality_checks("k=" + k + ":", st, s, report, r);
        results.push_back(r);
        report.artifacts.push_back({"standard_k" + k + "_entropy_table.csv", to_csv(st.estimate.table)});
        report.artifacts.push_back({"standard_k" + k + "_periodic_catalog.csv", to_csv(st.catalog)});
    }
    report.artifacts.push_back({"report.json", report_json(report, results)});
}

void run_sphere_pendulum_gap(const Settings& s, ExperimentReport& report) {
    const PlanarMap map = make_map(s.str("map"));
    if (map.name() != "sphere_pendulum") throw ConfigError("config: sphere_pendulum_gap needs a sphere_pendulum map");
    const double t = *map.parameter("t");
    const double tol = s.num("multiplier_tol");

    // Saddle at (π, 0) against the exponential of the linearized field.
    const Point saddle{std::numbers::pi, 0.0};
    const PeriodicOrbit fixed = classify(map, saddle, 1);
    const auto [oracle_big, oracle_small] = real_eigenvalues(expm(t * flow::field_jacobian(saddle)));
    const double big = fixed.multipliers[0].real(), small = fixed.multipliers[1].real();

    const Study st = study(map, s);
    const auto s1 = s_n(st.catalog, 1);
    const double h = st.estimate.value;
    Json results = st.json;
    results["saddle"] = {{"multipliers", {big, small}},
                         {"oracle", {oracle_big, oracle_small}},
                         {"stability", std::string(to_string(fixed.stability))}};
    results["s_1"] = s1 ? Json(*s1) : Json();

    report.checks.push_back(make_check("zero_entropy", h, s.num("zero_entropy_tol"), "value < limit", "h_est"));
    report.checks.push_back(make_check("saddle_multiplier_expanding", std::abs(big - oracle_big), tol, "value <= limit",
                                       "|mu - exp(t L)| for the expanding multiplier"));
    report.checks.push_back(make_check("saddle_multiplier_contracting", std::abs(small - oracle_small), tol,
                                       "value <= limit", "|mu - exp(t L)| for the contracting multiplier"));
    const double s1v = s1 ? *s1 : 0.0;
    report.checks.push_back(make_check("s1_lower", s1v, s.num("s1_lo"), "value >= limit", "s_1 from the catalog"));
    report.checks.push_back(make_check("s1_upper", s1v, s.num("s1_hi"), "value <= limit", "s_1 from the catalog"));
    report.checks.push_back(make_check("gap_flagged", s1v - h, s.num("gap_min"), "value >= limit", "s_1 - h_est"));
    report.checks.push_back(monotone_check("table_monotone", st.estimate.table));

    report.artifacts.push_back({"entropy_table.csv", to_csv(st.estimate.table)});
    report.artifacts.push_back({"periodic_catalog.csv", to_csv(st.catalog)});
    report.artifacts.push_back({"report.json", report_json(report, results)});
}

void run_snake_sweep(const Settings& s, ExperimentReport& report) {
    const double lambda = s.num("lambda"), a = s.num("a"), delta = s.num("delta");
    const int n = static_cast<int>(s.integer("n"));
    build_snake(lambda, a, delta, 2);  // fail fast on bad parameters
    const SweepReport sweep = snake_sweep(lambda, a, delta, n, static_cast<int>(s.integer("max_legs")));
    const double floor = std::log(lambda) - 1.0 / n;
    Json results = Json::parse(to_json(sweep));

    if (sweep.n1) {
        const SnakeModel model = build_snake(lambda, a, delta, *sweep.n1);
        const HorseshoeCoding c = code_horseshoe(model);
        const double closed = std::log(static_cast<double>(*sweep.n1)) / c.t;
        report.checks.push_back(make_check("n1_certified", c.certified ? 1.0 : 0.0, 1.0, "value == limit",
                                           "full N-shift certified at N1"));
        report.checks.push_back(make_check("n1_entropy_exact", std::abs(c.entropy - closed), 0.0, "value <= limit",
                                           "|coded entropy - (log N1)/t|"));
        report.checks.push_back(make_check("n1_entropy_floor", c.entropy, floor, "value > limit", "(log N1)/t > log(lambda) - 1/n"));
    } else {
        report.checks.push_back(make_check("n1_certified", 0.0, 1.0, "value == limit", "no N1 below max_legs"));
    }

    double k1_lo = INFINITY, k1_hi = 0.0;
    for (double legs : s.numbers("k1_legs")) {
        const SnakeModel model = build_snake(lambda, a, delta, static_cast<int>(legs));
        const double k1 = return_time(model).k1;
        k1_lo = std::min(k1_lo, k1);
        k1_hi = std::max(k1_hi, k1);
        report.checks.push_back(make_check("legs_counted_N" + std::to_string(model.legs), count_legs(model), model.legs,
                                           "value == limit", "transverse crossings on [-a, a)"));
    }
    report.checks.push_back(make_check("k1_constancy", k1_hi / k1_lo, s.num("k1_band"), "value < limit",
                                       "max/min of A*lambda^t over k1_legs"));

    if (sweep.accepted) {
        const SnakeModel model = build_snake(lambda, a, delta, *sweep.accepted);
        const HorseshoeCoding c = code_horseshoe(model);
        const ExponentFloorReport f = periodic_exponent_floor(c, model, n);
        results["accepted"] = {{"N", model.legs},
                               {"t", c.t},
                               {"orbits", f.orbits.size()},
                               {"min_chi_q", f.min_chi},
                               {"max_rho", f.max_rho},
                               {"a_priori_exponent", f.a_priori},
                               {"metric_entropy_uniform", shift_metric_entropy(ShiftMeasure::uniform(model.legs), c.t)}};
        report.checks.push_back(make_check("exponent_floor", f.min_chi, floor, "value > limit",
                                           "min chi(q) over coded orbits > chi(p) - 1/n"));
        report.checks.push_back(make_check("measure_floor", f.max_rho, 1.0 / n, "value < limit",
                                           "max rho(mu_q, mu_p) over coded orbits < 1/n"));
        report.checks.push_back(make_check("metric_entropy_floor",
                                           shift_metric_entropy(ShiftMeasure::uniform(model.legs), c.t), floor,
                                           "value > limit", "uniform Bernoulli measure on the coded shift"));
    } else {
        report.checks.push_back(make_check("accepted_N", 0.0, 1.0, "value == limit", "N1, N2 or N3 missing"));
    }

    report.artifacts.push_back({"snake_sweep.csv", to_csv(sweep)});
    report.artifacts.push_back({"snake_sweep.json", to_json(sweep)});
    report.artifacts.push_back({"report.json", report_json(report, results)});
}

void run_anosov_bound(const Settings& s, ExperimentReport& report) {
    std::vector<std::string> specs = s.list("maps", ';');
    if (specs.empty()) specs = zoo_suite();
    std::vector<PlanarMap> maps;
    for (const std::string& spec : specs) maps.push_back(make_map(spec));
    std::vector<std::uint64_t> seeds;
    for (const std::string& v : s.list("seeds", ',')) {
        try {
            seeds.push_back(std::stoull(v));
        } catch (const std::exception&) {
            throw ConfigError("config: bad seed '" + v + "'");
        }
    }
    if (seeds.empty()) {
        const auto base = static_cast<std::uint64_t>(s.integer("seed"));
        seeds = {base, base + 1, base + 2};
    }

    std::ostringstream csv;
    csv << "map,seed,h_est,bound,status\n";
    Json results = Json::array();
    for (const PlanarMap& map : maps) {
        const PeriodicCatalog catalog = find_periodic(map, search_options(s));
        for (std::uint64_t seed : seeds) {
            EntropySchedule sched = s.schedule();
            sched.seed = seed;
            const EntropyEstimate est = estimate_entropy(map, sched);
            const EntropyBoundReport b = check_entropy_bound(est, catalog, s.num("bound_tol"));
            const std::string tag = map.spec() + ":seed=" + std::to_string(seed);
            report.checks.push_back(bound_check("bound[" + tag + "]", b));
            report.checks.push_back(monotone_check("monotone[" + tag + "]", est.table));
            Json r = bound_json(b);
            r["map"] = map.spec();
            r["seed"] = seed;
            results.push_back(r);
            csv << '"' << map.spec() << "\"," << seed << ',' << format12(b.h_est) << ','
                << (b.bound ? format12(*b.bound) : std::string()) << ','
                << (!b.bound ? "skipped" : b.violated ? "violated" : "ok") << '\n';
        }
    }
    report.artifacts.push_back({"anosov_bound.csv", csv.str()});
    report.artifacts.push_back({"report.json", report_json(report, results)});
}

}  // namespace symplab::detail
