#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "symplab/zoo.hpp"

namespace symplab {

/// Flat key=value configuration. Later assignments win.
using Config = std::map<std::string, std::string>;

/// Reads `key = value` lines; '#' starts a comment, blank lines are skipped.
Config read_config(const std::filesystem::path& path);
Config parse_config(std::string_view text);
/// Applies one "key=value" override.
void apply_override(Config& config, std::string_view assignment);

/// An experiment name that is not registered.
class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct ExperimentInfo {
    std::string name;
    std::string summary;
    /// Accepted keys with their defaults; an empty default means required.
    std::vector<std::pair<std::string, std::string>> keys;
};

/// The registered experiments in a stable order.
const std::vector<ExperimentInfo>& list_experiments();
std::optional<ExperimentInfo> find_experiment(std::string_view name);

/// One acceptance check, with the numbers needed to audit it.
struct Check {
    std::string name;
    bool passed = false;
    double value = 0.0;
    double limit = 0.0;
    std::string rule;    ///< e.g. "value <= limit"
    std::string detail;
};

struct Artifact {
    std::string filename;
    std::string content;
};

struct ExperimentReport {
    std::string experiment;
    Config resolved;              ///< config echo with defaults filled in
    std::vector<Check> checks;
    std::vector<Artifact> artifacts;  ///< CSV and JSON files, report.json last
    double seconds = 0.0;         ///< wall clock, kept out of report.json

    bool all_passed() const;
};

inline constexpr std::string_view kToolVersion = "1.0.0";

/// Resolves the config (the key `experiment` names the experiment; `seed` is
/// required), validates every map spec, then runs. Throws UsageError for an
/// unknown experiment and ConfigError for a bad or incomplete config.
ExperimentReport run_experiment(const Config& config);

/// Writes the artifacts into `out` (created if needed) plus timing.txt.
void write_report(const ExperimentReport& report, const std::filesystem::path& out);

}  // namespace symplab
