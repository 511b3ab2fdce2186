#include "expcurve/runner.hpp"

#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <limits>

using namespace expcurve;

namespace {

std::string config_error_field(const Json& j) {
    try {
        parse_config(j).validate();
    } catch (const ConfigError& e) {
        return e.field();
    }
    return "";
}

}  // namespace

TEST_CASE("defaults parse and validate") {
    const auto c = parse_config(Json::parse(R"({"experiment": "markov"})"));
    CHECK(c.t == std::vector<double>{0.0, 1.0});
    CHECK(c.n_min == 1);
    CHECK(c.n_max == 8);
    CHECK_FALSE(c.seed);
    CHECK_NOTHROW(c.validate());
}

TEST_CASE("config errors name the field") {
    CHECK(config_error_field(Json::parse(R"({"experiment": "markov", "curve": {"interval": [1, 0]}})")) ==
          "curve.interval");
    CHECK(config_error_field(Json::parse(R"({"experiment": "markov", "curve": {"interval": [1, 1]}})")) ==
          "curve.interval");
    CHECK(config_error_field(Json::parse(R"({"experiment": "markov", "colour": 3})")) == "colour");
    CHECK(config_error_field(Json::parse(R"({"experiment": "markov", "grid": {"size": 3}})")) == "grid.size");
    CHECK(config_error_field(Json::parse(R"({"experiment": "valency"})")) == "seed");
    CHECK(config_error_field(Json::parse(R"({"experiment": "verify-all"})")) == "seed");
    CHECK(config_error_field(Json::parse(R"({"experiment": "markov", "markov": {"cauchy_draws": 5}})")) == "seed");
    CHECK(config_error_field(Json::parse(R"({"experiment": "walk"})")) == "experiment");
    CHECK(config_error_field(Json::parse(R"({"experiment": "markov", "seed": -4})")) == "seed");
    CHECK(config_error_field(Json::parse(R"({"experiment": "markov", "degrees": {"min": 1.5}})")) == "degrees.min");
    CHECK(config_error_field(Json::parse(R"({"experiment": "markov", "degrees": {"min": 4, "max": 3}})")) ==
          "degrees.max");
    CHECK(config_error_field(Json::parse(R"({"experiment": "maxord", "degrees": {"max": 9}})")) == "degrees.max");
    CHECK(config_error_field(Json::parse(R"({"experiment": "maxord", "maxord": {"r_sequence": [0.1, 0.2]}})")) ==
          "maxord.r_sequence");
    CHECK(config_error_field(Json::parse(R"({"experiment": "siciak", "seed": 1, "phi": "n_cubed"})")) == "phi");
    CHECK(config_error_field(Json::parse(
              R"({"experiment": "siciak", "seed": 1, "siciak": {"expect": {"n_squared": "fine"}}})")) ==
          "siciak.expect.n_squared");
    CHECK(config_error_field(Json::parse(R"({"experiment": "markov", "curve": {"t": [0, "x"]}})")) == "curve.t[1]");
    CHECK(config_error_field(Json::parse(R"([1, 2])")) == "<root>");
}

TEST_CASE("to_json parses back to the same config") {
    const auto c = parse_config(Json::parse(R"({
        "experiment": "siciak", "seed": 18446744073709551615,
        "curve": {"t": [0, 0.5, 1], "interval": [-1, 2]},
        "degrees": {"min": 2, "max": 5},
        "grid": {"initial_size": 129, "rel_tol": 1e-4, "max_doublings": 2},
        "phi": "n_linear",
        "geometry": {"probes": [3, [0.5, 1]], "ellipse": {"a": -1, "b": 2, "c": 0.5}},
        "battery": {"instances": 7, "c_samples": 4, "t_degree_max": 3, "radius_max": 1.5},
        "maxord": {"r_sequence": [0.5, 0.25], "limit_degrees": [3]},
        "siciak": {"expect": {"n_linear": "inconclusive"}},
        "output": {"dir": "x"}, "jobs": 2})"));
    CHECK_NOTHROW(c.validate());
    CHECK(*c.seed == std::numeric_limits<std::uint64_t>::max());
    CHECK(c.probes[0] == std::complex<double>(3.0, 0.0));
    CHECK(c.probes[1] == std::complex<double>(0.5, 1.0));
    const Json once = c.to_json();
    CHECK(parse_config(once).to_json() == once);
}

TEST_CASE("doubles are written with 17 significant digits") {
    CHECK(format_double(0.1) == "0.10000000000000001");
    CHECK(format_double(1.0) == "1");
    CHECK(format_double(std::numeric_limits<double>::infinity()) == "inf");
    for (double x : {M_PI, 1e-300, -2.5e17, 4.9406564584124654e-324})
        CHECK(std::strtod(format_double(x).c_str(), nullptr) == x);
    CHECK(number(std::nan("")).is_null());
    CHECK(number(-std::numeric_limits<double>::infinity()).is_null());
    CHECK(complex_json({1.0, INFINITY}) == Json::parse("[1.0, null]"));
}

TEST_CASE("CSV and gnuplot tables") {
    const Table t{"x", {"n", "value"}, {{Cell{1LL}, Cell{0.5}}, {Cell{2LL}, Cell{1.0 / 3.0}}}};
    CHECK(to_csv(t) == "n,value\n1,0.5\n2,0.33333333333333331\n");
    CHECK(to_dat(t) == "# n value\n1 0.5\n2 0.33333333333333331\n");
}

TEST_CASE("markov payload round-trips byte for byte") {
    ExperimentConfig c;
    c.experiment = "markov";
    c.t = {0.0};
    c.interval_a = -1;
    c.interval_b = 1;
    c.n_min = 2;
    c.n_max = 4;
    const auto out = run_experiment(c);
    CHECK(out.pass());
    const std::string text = dump(out.payload);
    CHECK(dump(Json::parse(text)) == text);
    // same inputs, same bytes
    CHECK(dump(run_experiment(c).payload) == text);
    REQUIRE(out.tables.size() == 2);
    CHECK(out.tables[0].columns == std::vector<std::string>{"n", "N", "lambda", "grid_size", "doublings"});
    for (const auto& row : out.payload["rows"]) {
        const int n = row["n"].get<int>();
        CHECK(row["lambda"].get<double>() == doctest::Approx(n * n).epsilon(5e-3));
    }
}

TEST_CASE("envelope carries the header and summary") {
    ExperimentConfig c;
    c.experiment = "doubling";
    c.t = {0.0};
    c.n_min = 1;
    c.n_max = 3;
    const auto out = run_experiment(c);
    const Json env = report_envelope(c, out, RunHeader{"2026-01-01T00:00:00Z", 1.5, 1});
    CHECK(env["header"]["artifact_version"] == kArtifactVersion);
    CHECK(env["payload"] == out.payload);
    CHECK(env["summary"]["pass"] == true);
    CHECK(env["summary"]["assertions"].size() == 2);
    // T_3(3) = 99
    CHECK(out.payload["rows"][2]["ratio"].get<double>() == doctest::Approx(99.0).epsilon(5e-3));
}

TEST_CASE("a doubling limit far from its radius fails the run") {
    ExperimentConfig c;
    c.experiment = "maxord";
    c.n_min = 0;
    c.n_max = 2;
    c.limit_degrees = {1};
    c.r_sequence = {1e-1, 1e-2, 1e-3};
    const auto ok = run_experiment(c);
    CHECK(ok.pass());
    CHECK(ok.payload["certificates"][1]["alpha"] == Json::parse(R"(["-1", "-1", "1"])"));
    CHECK(ok.payload["certificates"][2]["determinant"] == "16");

    c.limit_degrees = {2};
    c.r_sequence = {0.5};  // too far from the limit to be within 5%
    const auto bad = run_experiment(c);
    CHECK_FALSE(bad.pass());
}
