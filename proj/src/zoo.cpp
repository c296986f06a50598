#include "symplab/zoo.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <map>

#include "symplab/hamiltonian_flow.hpp"
#include "symplab/horseshoe.hpp"

namespace symplab {

namespace {

std::string trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return std::string(s);
}

double parse_number(const std::string& text, const std::string& key) {
    double v = 0.0;
    const char* end = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(text.data(), end, v);
    if (ec != std::errc() || ptr != end) throw ConfigError("map spec: bad value for '" + key + "': '" + text + "'");
    return v;
}

// Resolves parameters against the defaults of one entry.
std::map<std::string, double> resolve(const MapSpec& spec, const std::string& defaults) {
    std::map<std::string, double> values;
    for (const Parameter& p : parse_map_spec(defaults).parameters) values[p.key] = p.value;
    for (const Parameter& p : spec.parameters) {
        if (!values.count(p.key)) throw ConfigError("map spec: '" + spec.name + "' has no parameter '" + p.key + "'");
        values[p.key] = p.value;
    }
    return values;
}

int as_int(double v, const char* what) {
    if (v != std::floor(v)) throw ConfigError(std::string("map spec: ") + what + " must be an integer");
    return static_cast<int>(v);
}

}  // namespace

MapSpec parse_map_spec(std::string_view text) {
    MapSpec spec;
    const std::string s = trim(text);
    const auto colon = s.find(':');
    spec.name = trim(s.substr(0, colon));
    if (spec.name.empty()) throw ConfigError("map spec: missing name in '" + s + "'");
    if (colon == std::string::npos) return spec;
    std::string_view rest(s);
    rest.remove_prefix(colon + 1);
    if (trim(rest).empty()) throw ConfigError("map spec: empty parameter list in '" + s + "'");
    while (true) {
        const auto comma = rest.find(',');
        const std::string item = trim(rest.substr(0, comma));
        const auto eq = item.find('=');
        if (eq == std::string::npos) throw ConfigError("map spec: expected key=value, got '" + item + "'");
        std::string key = trim(item.substr(0, eq));
        if (key.empty()) throw ConfigError("map spec: empty key in '" + s + "'");
        std::transform(key.begin(), key.end(), key.begin(), [](unsigned char c) { return std::tolower(c); });
        for (const Parameter& p : spec.parameters)
            if (p.key == key) throw ConfigError("map spec: repeated key '" + key + "'");
        spec.parameters.push_back({key, parse_number(trim(item.substr(eq + 1)), key)});
        if (comma == std::string_view::npos) break;
        rest.remove_prefix(comma + 1);
    }
    return spec;
}

const std::vector<ZooEntry>& zoo_entries() {
    static const std::vector<ZooEntry> entries = {
        {"cat", "cat", "[[2,1],[1,1]] on the unit torus"},
        {"identity", "identity", "identity on the unit torus"},
        {"standard", "standard:k=1", "Chirikov standard map on [0,2pi)^2"},
        {"shear", "shear", "(x+y, y) on [0,2pi)^2"},
        {"rotation", "rotation:alpha=1.5707963267948966", "(x+alpha, y) on the cylinder"},
        {"linear_saddle", "linear_saddle:lambda=2", "diag(lambda, 1/lambda) on the plane"},
        {"sphere_pendulum", "sphere_pendulum:t=1,step=0.001,order=4",
         "time-t map of the pendulum-on-sphere flow; order 2 or 4"},
        {"snake", "snake:lambda=2,a=0.1,delta=0.05,legs=4", "saddle with a snaked homoclinic tangency"},
    };
    return entries;
}

PlanarMap make_map(std::string_view text) {
    const MapSpec spec = parse_map_spec(text);
    const auto& entries = zoo_entries();
    const auto it = std::find_if(entries.begin(), entries.end(), [&](const ZooEntry& e) { return e.name == spec.name; });
    if (it == entries.end()) throw ConfigError("map spec: unknown map '" + spec.name + "'");
    const auto v = resolve(spec, it->defaults);
    try {
        if (spec.name == "cat") return make_cat_map();
        if (spec.name == "identity") return make_identity_map();
        if (spec.name == "standard") return make_standard_map(v.at("k"));
        if (spec.name == "shear") return make_shear_map();
        if (spec.name == "rotation") return make_rotation_map(v.at("alpha"));
        if (spec.name == "linear_saddle") return make_linear_saddle(v.at("lambda"));
        if (spec.name == "sphere_pendulum") {
            const int order = as_int(v.at("order"), "order");
            if (order != 2 && order != 4) throw ConfigError("map spec: sphere_pendulum order must be 2 or 4");
            return flow::time_t_map(v.at("t"), v.at("step"),
                                    order == 2 ? flow::Scheme::ImplicitMidpoint : flow::Scheme::TripleJump);
        }
        return build_snake(v.at("lambda"), v.at("a"), v.at("delta"), as_int(v.at("legs"), "legs")).as_map();
    } catch (const ConfigError&) {
        throw;
    } catch (const std::exception& e) {
        throw ConfigError(std::string("map spec: ") + e.what());
    }
}

std::vector<std::string> zoo_suite() {
    return {"cat",
            "identity",
            "standard:k=0.5",
            "standard:k=1",
            "standard:k=6",
            "shear",
            "rotation:alpha=1",
            "linear_saddle:lambda=2",
            "sphere_pendulum:t=1,step=0.01,order=2",
            "snake:lambda=2,a=0.1,delta=0.05,legs=4"};
}

}  // namespace symplab
