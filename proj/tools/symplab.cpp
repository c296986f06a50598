// Experiment runner: `symplab list`, `symplab run [NAME] --config PATH --out DIR --set key=value ...`.
// Exit codes: 0 every check passed, 2 some check failed, 1 usage, config or execution error.
#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "symplab/experiments.hpp"
#include "symplab/periodic.hpp"

namespace {

int list_command() {
    for (const symplab::ExperimentInfo& e : symplab::list_experiments()) {
        std::cout << e.name << "\t" << e.summary << "\n";
        for (const auto& [key, value] : e.keys)
            std::cout << "    " << key << " = " << (value.empty() ? "<required>" : value) << "\n";
    }
    return 0;
}

int run_command(const std::string& name, const std::string& config_path, const std::vector<std::string>& sets,
                std::string out_dir) {
    symplab::Config config;
    if (!config_path.empty()) config = symplab::read_config(config_path);
    if (!name.empty()) config["experiment"] = name;
    for (const std::string& s : sets) symplab::apply_override(config, s);

    const symplab::ExperimentReport report = symplab::run_experiment(config);
    if (out_dir.empty()) out_dir = "out/" + report.experiment;
    symplab::write_report(report, out_dir);

    for (const symplab::Check& c : report.checks)
        std::cout << (c.passed ? "PASS " : "FAIL ") << c.name << "  value=" << symplab::format12(c.value)
                  << " limit=" << symplab::format12(c.limit) << " (" << c.rule << ")\n";
    std::cout << report.experiment << ": " << (report.all_passed() ? "all checks passed" : "some checks failed")
              << ", artifacts in " << out_dir << "\n";
    return report.all_passed() ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"symplab: entropy and periodic-orbit experiments for area-preserving maps"};
    app.require_subcommand(1);

    CLI::App* list = app.add_subcommand("list", "list experiments and their config keys");
    CLI::App* run = app.add_subcommand("run", "run one experiment");
    std::string name, config_path, out_dir;
    std::vector<std::string> sets;
    run->add_option("experiment", name, "experiment name (or set experiment=... in the config)");
    run->add_option("--config", config_path, "flat key=value config file");
    run->add_option("--out", out_dir, "output directory (default out/<experiment>)");
    run->add_option("--set", sets, "override key=value, may repeat; later wins")->take_all();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }

    try {
        if (*list) return list_command();
        return run_command(name, config_path, sets, out_dir);
    } catch (const symplab::UsageError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
    } catch (const symplab::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
    }
    return 1;
}
