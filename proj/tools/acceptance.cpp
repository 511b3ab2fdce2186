// Runs the verify-all suite twice and prints one line per acceptance criterion.
//
//     acceptance [config] [work_dir]

#include "expcurve/parallel.hpp"
#include "expcurve/runner.hpp"

#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>

using namespace expcurve;

namespace {

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

ExperimentOutput run_into(ExperimentConfig config, const std::filesystem::path& dir) {
    config.out_dir = dir.string();
    const std::string started = utc_timestamp();
    const auto start = std::chrono::steady_clock::now();
    ExperimentOutput out = run_experiment(config);
    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    write_outputs(config, out, RunHeader{started, wall, config.jobs});
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    const std::filesystem::path config_path = argc > 1 ? argv[1] : EXPCURVE_DEFAULT_CONFIG;
    const std::filesystem::path work = argc > 2 ? argv[2] : "acceptance_out";

    ExperimentConfig config;
    try {
        config = load_config(config_path);
        config.validate();
        if (config.experiment != "verify-all") throw ConfigError("experiment", "acceptance needs a verify-all config");
    } catch (const ConfigError& e) {
        std::cerr << "acceptance: " << e.what() << "\n";
        return 2;
    }
    set_thread_count(config.jobs);

    std::vector<Assertion> lines;
    try {
        const auto first = run_into(config, work / "run1");
        run_into(config, work / "run2");
        lines = first.assertions;
        const std::string a = slurp(work / "run1" / "payload.json");
        const std::string b = slurp(work / "run2" / "payload.json");
        const bool same = !a.empty() && a == b;
        lines.push_back({"reproducibility", same,
                         same ? "payload.json byte-identical across two runs (" + std::to_string(a.size()) + " bytes)"
                              : "payload.json differs between runs"});
    } catch (const std::exception& e) {
        std::cerr << "acceptance: " << e.what() << "\n";
        return 3;
    }

    bool all = true;
    for (const auto& l : lines) {
        std::cout << (l.pass ? "PASS " : "FAIL ") << l.name << ": " << l.detail << "\n";
        all = all && l.pass;
    }
    std::cout << (all ? "all criteria pass" : "some criteria fail") << "\n";
    return all ? 0 : 1;
}
