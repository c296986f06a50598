#include "symplab/experiments.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <chrono>
#include <fstream>
#include <sstream>

#include "experiments_internal.hpp"
#include "json.hpp"
#include "symplab/periodic.hpp"

namespace symplab {

namespace {

std::string trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return std::string(s);
}

std::pair<std::string, std::string> split_assignment(std::string_view line) {
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw ConfigError("config: expected key=value, got '" + std::string(line) + "'");
    std::string key = trim(line.substr(0, eq));
    if (key.empty()) throw ConfigError("config: empty key in '" + std::string(line) + "'");
    return {key, trim(line.substr(eq + 1))};
}

const std::vector<std::pair<std::string, std::string>> kEntropyKeys = {
    {"n_min", "6"},
    {"n_max", "14"},
    {"eps", "0.1,0.05,0.025"},
    {"samples", "200000"},
    {"finite_sample_correction", "true"},
    {"strict_saturation", "false"},
};

std::vector<std::pair<std::string, std::string>> keys_with(
    std::vector<std::pair<std::string, std::string>> own, bool entropy) {
    std::vector<std::pair<std::string, std::string>> all = {{"experiment", ""}, {"seed", ""}, {"workers", "1"}};
    if (entropy) all.insert(all.end(), kEntropyKeys.begin(), kEntropyKeys.end());
    for (auto& [key, value] : own) {
        auto it = std::find_if(all.begin(), all.end(), [&](const auto& kv) { return kv.first == key; });
        if (it != all.end())
            it->second = value;  // an experiment may retune a shared default
        else
            all.emplace_back(key, value);
    }
    return all;
}

}  // namespace

Config parse_config(std::string_view text) {
    Config config;
    std::istringstream in{std::string(text)};
    std::string line;
    while (std::getline(in, line)) {
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        if (trim(line).empty()) continue;
        auto [key, value] = split_assignment(line);
        config[key] = value;
    }
    return config;
}

Config read_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config: cannot read '" + path.string() + "'");
    std::ostringstream text;
    text << in.rdbuf();
    return parse_config(text.str());
}

void apply_override(Config& config, std::string_view assignment) {
    auto [key, value] = split_assignment(assignment);
    config[key] = value;
}

const std::vector<ExperimentInfo>& list_experiments() {
    static const std::vector<ExperimentInfo> registry = {
        {"catmap_equality", "cat map: entropy estimate against the eigenvalue and the periodic-orbit functional",
         keys_with({{"map", "cat"},
                    {"max_period", "6"},
                    {"grid", "64"},
                    {"equality_n", "6"},
                    {"equality_tol", "0.15"},
                    {"entropy_tol", "0.1"},
                    {"bound_tol", "0.1"},
                    {"count_check_period", "4"},
                    {"chi_tol", "1e-9"}},
                   true)},
        {"standard_scan", "standard map: entropy estimate against s_n for each k",
         // eps is scaled to the 2π period; k = 6 saturates 2e5 samples past n = 6.
         keys_with({{"n_min", "1"},
                    {"n_max", "6"},
                    {"eps", "0.6,0.3,0.15"},
                    {"k_values", "6"},
                    {"max_period", "6"},
                    {"grid", "64"},
                    {"equality_n", "6"},
                    {"equality_tol", "0.15"},
                    {"bound_tol", "0.1"}},
                   true)},
        {"sphere_pendulum_gap", "pendulum-on-sphere time-1 map: zero entropy with a hyperbolic saddle",
         keys_with({{"map", "sphere_pendulum:t=1,step=0.001,order=2"},
                    {"max_period", "1"},
                    {"grid", "32"},
                    {"zero_entropy_tol", "0.05"},
                    {"s1_lo", "0.95"},
                    {"s1_hi", "1.05"},
                    {"multiplier_tol", "1e-3"},
                    {"gap_min", "0.5"}},
                   true)},
        {"snake_sweep", "snake horseshoe: N sweep for the entropy, exponent and measure floors",
         keys_with({{"lambda", "2"},
                    {"a", "0.1"},
                    {"delta", "0.05"},
                    {"n", "10"},
                    {"max_legs", "67108864"},
                    {"k1_legs", "4,8,16,32,64"},
                    {"k1_band", "2"}},
                   false)},
        {"anosov_bound", "entropy upper bound by the periodic-orbit functional across the map zoo",
         keys_with({{"maps", ""},
                    {"seeds", ""},
                    {"n_min", "2"},
                    {"n_max", "10"},
                    {"eps", "0.1,0.05,0.025"},
                    {"samples", "200000"},
                    {"finite_sample_correction", "true"},
                    {"strict_saturation", "false"},
                    {"max_period", "4"},
                    {"grid", "32"},
                    {"bound_tol", "0.1"}},
                   false)},
    };
    return registry;
}

std::optional<ExperimentInfo> find_experiment(std::string_view name) {
    for (const ExperimentInfo& e : list_experiments())
        if (e.name == name) return e;
    return std::nullopt;
}

bool ExperimentReport::all_passed() const {
    return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.passed; });
}

namespace detail {

Settings::Settings(const ExperimentInfo& info, const Config& config) {
    for (const auto& [key, value] : info.keys) values_[key] = value;
    // "maps" and "seeds" may stay empty: they fall back to the zoo suite and seed..seed+2.
    for (const auto& [key, value] : config) {
        if (!values_.count(key)) throw ConfigError("config: unknown key '" + key + "' for " + info.name);
        values_[key] = value;
    }
    for (const auto& [key, value] : info.keys)
        if (value.empty() && values_[key].empty() && key != "maps" && key != "seeds")
            throw ConfigError("config: missing required key '" + key + "'");
}

const std::string& Settings::str(const std::string& key) const {
    const auto it = values_.find(key);
    if (it == values_.end()) throw ConfigError("config: no key '" + key + "'");
    return it->second;
}

double Settings::num(const std::string& key) const {
    const std::string& s = str(key);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size()) throw ConfigError("config: '" + key + "' is not a number");
    return v;
}

long Settings::integer(const std::string& key) const {
    const std::string& s = str(key);
    long v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size()) throw ConfigError("config: '" + key + "' is not an integer");
    return v;
}

bool Settings::flag(const std::string& key) const {
    const std::string& s = str(key);
    if (s == "true" || s == "1") return true;
    if (s == "false" || s == "0") return false;
    throw ConfigError("config: '" + key + "' must be true or false");
}

std::vector<std::string> Settings::list(const std::string& key, char sep) const {
    std::vector<std::string> out;
    std::string_view rest(str(key));
    while (!rest.empty()) {
        const auto cut = rest.find(sep);
        const std::string item = trim(rest.substr(0, cut));
        if (!item.empty()) out.push_back(item);
        if (cut == std::string_view::npos) break;
        rest.remove_prefix(cut + 1);
    }
    return out;
}

std::vector<double> Settings::numbers(const std::string& key) const {
    std::vector<double> out;
    for (const std::string& item : list(key, ',')) {
        double v = 0.0;
        const auto [ptr, ec] = std::from_chars(item.data(), item.data() + item.size(), v);
        if (ec != std::errc() || ptr != item.data() + item.size())
            throw ConfigError("config: '" + key + "' has a bad entry '" + item + "'");
        out.push_back(v);
    }
    return out;
}

EntropySchedule Settings::schedule() const {
    EntropySchedule s;
    s.n_min = static_cast<int>(integer("n_min"));
    s.n_max = static_cast<int>(integer("n_max"));
    s.eps = numbers("eps");
    s.samples = integer("samples");
    s.seed = static_cast<std::uint64_t>(integer("seed"));
    s.workers = static_cast<int>(integer("workers"));
    s.strict_saturation = flag("strict_saturation");
    s.finite_sample_correction = flag("finite_sample_correction");
    if (s.n_min < 1 || s.n_max < s.n_min) throw ConfigError("config: need 1 <= n_min <= n_max");
    if (s.eps.empty()) throw ConfigError("config: eps list is empty");
    if (s.samples < 1) throw ConfigError("config: samples must be positive");
    if (s.workers < 1) throw ConfigError("config: workers must be positive");
    return s;
}

Check make_check(std::string name, double value, double limit, std::string rule, std::string detail) {
    Check c;
    c.name = std::move(name);
    c.value = value;
    c.limit = limit;
    c.detail = std::move(detail);
    if (rule == "value <= limit")
        c.passed = value <= limit;
    else if (rule == "value < limit")
        c.passed = value < limit;
    else if (rule == "value >= limit")
        c.passed = value >= limit;
    else if (rule == "value > limit")
        c.passed = value > limit;
    else if (rule == "value == limit")
        c.passed = value == limit;
    else
        throw std::logic_error("make_check: unknown rule " + rule);
    c.rule = std::move(rule);
    return c;
}

std::string report_json(const ExperimentReport& report, const nlohmann::ordered_json& results) {
    nlohmann::ordered_json j;
    j["tool"] = "symplab";
    j["version"] = std::string(kToolVersion);
    j["experiment"] = report.experiment;
    j["config"] = nlohmann::ordered_json::object();
    // workers changes the schedule, never the numbers; it goes to timing.txt.
    for (const auto& [key, value] : report.resolved)
        if (key != "workers") j["config"][key] = value;
    j["results"] = results;
    j["checks"] = nlohmann::ordered_json::array();
    for (const Check& c : report.checks)
        j["checks"].push_back({{"name", c.name},
                               {"passed", c.passed},
                               {"value", c.value},
                               {"limit", c.limit},
                               {"rule", c.rule},
                               {"detail", c.detail}});
    j["passed"] = report.all_passed();
    return j.dump(2) + "\n";
}

}  // namespace detail

ExperimentReport run_experiment(const Config& config) {
    const auto name = config.find("experiment");
    if (name == config.end() || name->second.empty()) throw UsageError("no experiment named (set experiment=...)");
    const auto info = find_experiment(name->second);
    if (!info) throw UsageError("unknown experiment '" + name->second + "'");
    const detail::Settings settings(*info, config);

    const auto start = std::chrono::steady_clock::now();
    ExperimentReport report;
    report.experiment = info->name;
    report.resolved = settings.values();
    if (info->name == "catmap_equality")
        detail::run_catmap_equality(settings, report);
    else if (info->name == "standard_scan")
        detail::run_standard_scan(settings, report);
    else if (info->name == "sphere_pendulum_gap")
        detail::run_sphere_pendulum_gap(settings, report);
    else if (info->name == "snake_sweep")
        detail::run_snake_sweep(settings, report);
    else
        detail::run_anosov_bound(settings, report);
    report.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return report;
}

void write_report(const ExperimentReport& report, const std::filesystem::path& out) {
    std::filesystem::create_directories(out);
    for (const Artifact& a : report.artifacts) {
        std::ofstream f(out / a.filename, std::ios::binary);
        if (!f) throw std::runtime_error("cannot write " + (out / a.filename).string());
        f << a.content;
    }
    std::ofstream t(out / "timing.txt", std::ios::binary);
    t << "seconds=" << format12(report.seconds) << "\n";
    const auto workers = report.resolved.find("workers");
    if (workers != report.resolved.end()) t << "workers=" << workers->second << "\n";
}

}  // namespace symplab
