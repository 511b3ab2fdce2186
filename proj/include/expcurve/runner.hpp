#pragma once

// Experiment configuration, orchestration and report files for the command
// line tool and the acceptance binary.

#include "expcurve/markovlab.hpp"
#include "expcurve/siciak.hpp"

#include <json.hpp>

#include <complex>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace expcurve {

using Json = nlohmann::ordered_json;

inline constexpr const char* kArtifactVersion = "0.1.0";

/// Bad or inconsistent configuration; `field` is the dotted path of the culprit.
class ConfigError : public std::runtime_error {
public:
    ConfigError(std::string field, const std::string& message)
        : std::runtime_error(field + ": " + message), field_(std::move(field)) {}
    const std::string& field() const { return field_; }

private:
    std::string field_;
};

struct BatteryControls {
    int instances = 50;
    int c_samples = 32;
    int t_degree_max = 2;
    double radius_max = 2.0;
};

struct ExperimentConfig {
    std::string experiment;  // markov | doubling | siciak | valency | maxord | verify-all
    std::optional<std::uint64_t> seed;
    std::vector<double> t{0.0, 1.0};
    double interval_a = 0.0;
    double interval_b = 1.0;
    int n_min = 1;
    int n_max = 8;
    GridControls grid;
    std::string phi = "n_squared";
    /// Empty: a - 1, b + 1 and the midpoint + i.
    std::vector<std::complex<double>> probes;
    /// Absent: the curve interval with c = 1.
    std::optional<EllipseSpec> ellipse;
    BatteryControls battery;
    int cauchy_draws = 0;
    std::vector<double> r_sequence{1e-1, 1e-2, 1e-3, 1e-4};
    std::vector<int> limit_degrees{1, 2};
    /// Expected verdicts keyed by phi name.
    std::map<std::string, std::string> expect_verdicts;
    std::string out_dir = "out";
    int jobs = 1;

    CurveSpec curve() const { return CurveSpec(t, interval_a, interval_b); }
    EllipseSpec ellipse_or_default() const;
    bool randomized() const;
    /// Throws ConfigError.
    void validate() const;
    /// Every field, defaults included, in the config file layout.
    Json to_json() const;
};

/// Unknown fields and type mismatches throw ConfigError.
ExperimentConfig parse_config(const Json& j);
ExperimentConfig load_config(const std::filesystem::path& path);

using Cell = std::variant<long long, double>;

struct Table {
    std::string name;
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;
};

struct Assertion {
    std::string name;
    bool pass = false;
    std::string detail;
};

struct ExperimentOutput {
    Json payload;
    std::vector<Table> tables;
    std::vector<Assertion> assertions;

    bool pass() const;
};

ExperimentOutput run_markov(const ExperimentConfig& config);
ExperimentOutput run_doubling(const ExperimentConfig& config);
ExperimentOutput run_siciak(const ExperimentConfig& config);
ExperimentOutput run_valency(const ExperimentConfig& config);
ExperimentOutput run_maxord(const ExperimentConfig& config);
/// The fixed acceptance suite; assertions are the per-criterion verdicts.
ExperimentOutput run_verify_all(const ExperimentConfig& config);
ExperimentOutput run_experiment(const ExperimentConfig& config);

// ---------------------------------------------------------------------------
// Serialization

/// Non-finite values become null.
Json number(double x);
Json complex_json(std::complex<double> z);
/// %.17g
std::string format_double(double x);
std::string to_csv(const Table& table);
/// Whitespace separated with a '#' header line, for gnuplot.
std::string to_dat(const Table& table);
/// Two-space indented dump with a trailing newline.
std::string dump(const Json& j);

/// Current UTC time as 2026-01-31T12:00:00Z.
std::string utc_timestamp();

struct RunHeader {
    std::string started_at;  // UTC, ISO 8601
    double wall_time_s = 0.0;
    int jobs = 1;
};

/// report.json is the envelope { header, config, payload, summary }.
Json report_envelope(const ExperimentConfig& config, const ExperimentOutput& output, const RunHeader& header);

/// Writes report.json, payload.json, <table>.csv and <table>.dat into config.out_dir.
void write_outputs(const ExperimentConfig& config, const ExperimentOutput& output, const RunHeader& header);

/// error.json: { exit_code, kind, field, message }.
void write_error(const std::filesystem::path& dir, int exit_code, const std::string& kind, const std::string& field,
                 const std::string& message);

}  // namespace expcurve
