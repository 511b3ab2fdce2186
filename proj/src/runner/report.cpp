#include "expcurve/runner.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>

namespace expcurve {

namespace {

std::string cell_text(const Cell& c) {
    if (const auto* i = std::get_if<long long>(&c)) return std::to_string(*i);
    return format_double(std::get<double>(c));
}

void write_file(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << text;
}

}  // namespace

bool ExperimentOutput::pass() const {
    for (const auto& a : assertions)
        if (!a.pass) return false;
    return true;
}

Json number(double x) { return std::isfinite(x) ? Json(x) : Json(nullptr); }

Json complex_json(std::complex<double> z) { return Json::array({number(z.real()), number(z.imag())}); }

std::string format_double(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

std::string to_csv(const Table& table) {
    std::string out;
    for (std::size_t k = 0; k < table.columns.size(); ++k) out += (k ? "," : "") + table.columns[k];
    out += '\n';
    for (const auto& row : table.rows) {
        for (std::size_t k = 0; k < row.size(); ++k) out += (k ? "," : "") + cell_text(row[k]);
        out += '\n';
    }
    return out;
}

std::string to_dat(const Table& table) {
    std::string out = "#";
    for (const auto& c : table.columns) out += " " + c;
    out += '\n';
    for (const auto& row : table.rows) {
        for (std::size_t k = 0; k < row.size(); ++k) out += (k ? " " : "") + cell_text(row[k]);
        out += '\n';
    }
    return out;
}

std::string utc_timestamp() {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

Json report_envelope(const ExperimentConfig& config, const ExperimentOutput& output, const RunHeader& header) {
    Json assertions = Json::array();
    for (const auto& a : output.assertions)
        assertions.push_back({{"name", a.name}, {"pass", a.pass}, {"detail", a.detail}});
    Json tables = Json::array();
    for (const auto& t : output.tables) tables.push_back(t.name);

    Json j;
    j["header"] = {{"artifact_version", kArtifactVersion},
                   {"started_at", header.started_at},
                   {"wall_time_s", number(header.wall_time_s)},
                   {"jobs", header.jobs}};
    j["config"] = config.to_json();
    j["payload"] = output.payload;
    j["summary"] = {{"pass", output.pass()}, {"assertions", assertions}, {"tables", tables}};
    return j;
}

void write_outputs(const ExperimentConfig& config, const ExperimentOutput& output, const RunHeader& header) {
    const std::filesystem::path dir(config.out_dir);
    std::filesystem::create_directories(dir);
    write_file(dir / "report.json", dump(report_envelope(config, output, header)));
    write_file(dir / "payload.json", dump(output.payload));
    for (const auto& t : output.tables) {
        write_file(dir / (t.name + ".csv"), to_csv(t));
        write_file(dir / (t.name + ".dat"), to_dat(t));
    }
}

void write_error(const std::filesystem::path& dir, int exit_code, const std::string& kind, const std::string& field,
                 const std::string& message) {
    std::filesystem::create_directories(dir);
    Json j;
    j["exit_code"] = exit_code;
    j["kind"] = kind;
    j["field"] = field.empty() ? Json(nullptr) : Json(field);
    j["message"] = message;
    write_file(dir / "error.json", dump(j));
}

}  // namespace expcurve
