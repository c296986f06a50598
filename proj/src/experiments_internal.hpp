#pragma once

#include <map>
#include <string>
#include <vector>

#include "json.hpp"
#include "symplab/entropy.hpp"
#include "symplab/experiments.hpp"

namespace symplab::detail {

/// Config resolved against one experiment's key list.
class Settings {
public:
    Settings(const ExperimentInfo& info, const Config& config);

    const Config& values() const { return values_; }
    const std::string& str(const std::string& key) const;
    double num(const std::string& key) const;
    long integer(const std::string& key) const;
    bool flag(const std::string& key) const;
    std::vector<std::string> list(const std::string& key, char sep) const;
    std::vector<double> numbers(const std::string& key) const;
    EntropySchedule schedule() const;

private:
    Config values_;
};

Check make_check(std::string name, double value, double limit, std::string rule, std::string detail = {});
std::string report_json(const ExperimentReport& report, const nlohmann::ordered_json& results);

void run_catmap_equality(const Settings& s, ExperimentReport& report);
void run_standard_scan(const Settings& s, ExperimentReport& report);
void run_sphere_pendulum_gap(const Settings& s, ExperimentReport& report);
void run_snake_sweep(const Settings& s, ExperimentReport& report);
void run_anosov_bound(const Settings& s, ExperimentReport& report);

}  // namespace symplab::detail
