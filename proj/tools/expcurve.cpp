#include "expcurve/parallel.hpp"
#include "expcurve/runner.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <iostream>
#include <sstream>

using namespace expcurve;

namespace {

std::vector<double> parse_list(const std::string& text) {
    std::vector<double> out;
    std::stringstream in(text);
    std::string item;
    while (std::getline(in, item, ',')) {
        try {
            std::size_t used = 0;
            out.push_back(std::stod(item, &used));
            while (used < item.size() && std::isspace(static_cast<unsigned char>(item[used]))) ++used;
            if (used != item.size()) throw std::invalid_argument(item);
        } catch (const std::exception&) {
            throw ConfigError("--t", "cannot read coefficient '" + item + "'");
        }
    }
    if (out.empty()) throw ConfigError("--t", "expected c0,c1,...");
    return out;
}

int fail(const std::string& dir, int code, const std::string& kind, const std::string& field, const std::string& what) {
    std::cerr << "expcurve: " << what << "\n";
    try {
        write_error(dir, code, kind, field, what);
    } catch (const std::exception& e) {
        std::cerr << "expcurve: could not write error.json: " << e.what() << "\n";
    }
    return code;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Numerical experiments on exponential curves y = e^{t(x)}"};
    std::string verb, config_path, out_dir, t_text;
    std::uint64_t seed = 0;
    int jobs = 1, nmax = 0;
    std::vector<double> interval;
    app.add_option("verb", verb, "markov | doubling | siciak | valency | maxord | verify-all")
        ->required()
        ->check(CLI::IsMember({"markov", "doubling", "siciak", "valency", "maxord", "verify-all"}));
    auto* config_opt = app.add_option("--config", config_path, "JSON experiment configuration");
    auto* out_opt = app.add_option("--out", out_dir, "output directory");
    auto* seed_opt = app.add_option("--seed", seed, "seed for the random batteries");
    auto* jobs_opt = app.add_option("--jobs", jobs, "OpenMP threads");
    auto* t_opt = app.add_option("--t", t_text, "ascending coefficients of t, \"c0,c1,...\"");
    auto* interval_opt = app.add_option("--interval", interval, "interval a b")->expected(2);
    auto* nmax_opt = app.add_option("--nmax", nmax, "largest degree");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);
        return fail(out_dir.empty() ? "out" : out_dir, 2, "usage", "", e.what());
    }

    ExperimentConfig config;
    try {
        if (*config_opt) config = load_config(config_path);
        if (config.experiment.empty())
            config.experiment = verb;
        else if (config.experiment != verb)
            throw ConfigError("experiment", "config is for '" + config.experiment + "' but the verb is '" + verb + "'");
        if (*out_opt) config.out_dir = out_dir;
        if (*seed_opt) config.seed = seed;
        if (*jobs_opt) config.jobs = jobs;
        if (*t_opt) config.t = parse_list(t_text);
        if (*interval_opt) {
            config.interval_a = interval[0];
            config.interval_b = interval[1];
        }
        if (*nmax_opt) config.n_max = nmax;
        config.validate();
    } catch (const ConfigError& e) {
        return fail(*out_opt ? out_dir : config.out_dir, 2, "config", e.field(), e.what());
    }

    set_thread_count(config.jobs);
    const auto start = std::chrono::steady_clock::now();
    RunHeader header{utc_timestamp(), 0.0, config.jobs};
    ExperimentOutput output;
    try {
        output = run_experiment(config);
    } catch (const ConfigError& e) {
        return fail(config.out_dir, 2, "config", e.field(), e.what());
    } catch (const std::invalid_argument& e) {
        return fail(config.out_dir, 2, "config", "", e.what());
    } catch (const std::exception& e) {
        return fail(config.out_dir, 3, "numerical", "", e.what());
    }
    header.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

    try {
        write_outputs(config, output, header);
    } catch (const std::exception& e) {
        return fail(config.out_dir, 3, "io", "output.dir", e.what());
    }
    for (const auto& a : output.assertions)
        std::cout << (a.pass ? "PASS " : "FAIL ") << a.name << ": " << a.detail << "\n";
    std::cout << "report: " << (std::filesystem::path(config.out_dir) / "report.json").string() << "\n";
    return output.pass() ? 0 : 1;
}
