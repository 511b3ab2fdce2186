#include "expcurve/runner.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>

namespace expcurve {

namespace {

const std::set<std::string> kExperiments{"markov", "doubling", "siciak", "valency", "maxord", "verify-all"};
const std::set<std::string> kPhis{"n_squared", "n_linear"};
const std::set<std::string> kVerdicts{"bounded", "unbounded-trend", "inconclusive"};

// Walks one JSON object, remembering which keys were read so that leftovers
// can be reported as unknown fields.
class Section {
public:
    Section(const Json& j, std::string path) : j_(j), path_(std::move(path)) {
        if (!j_.is_object()) throw ConfigError(path_.empty() ? "<root>" : path_, "expected an object");
    }

    std::string field(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

    const Json* find(const std::string& key) {
        seen_.insert(key);
        const auto it = j_.find(key);
        return it == j_.end() ? nullptr : &*it;
    }

    double real(const std::string& key, double fallback) {
        const Json* v = find(key);
        if (!v) return fallback;
        return as_real(*v, field(key));
    }

    int integer(const std::string& key, int fallback) {
        const Json* v = find(key);
        if (!v) return fallback;
        if (!v->is_number_integer()) throw ConfigError(field(key), "expected an integer");
        return v->get<int>();
    }

    std::string text(const std::string& key, const std::string& fallback) {
        const Json* v = find(key);
        if (!v) return fallback;
        if (!v->is_string()) throw ConfigError(field(key), "expected a string");
        return v->get<std::string>();
    }

    std::optional<Section> sub(const std::string& key) {
        const Json* v = find(key);
        if (!v) return std::nullopt;
        return Section(*v, field(key));
    }

    void finish() const {
        for (const auto& [key, value] : j_.items())
            if (!seen_.count(key)) throw ConfigError(field(key), "unknown field");
    }

    static double as_real(const Json& v, const std::string& where) {
        if (!v.is_number()) throw ConfigError(where, "expected a number");
        return v.get<double>();
    }

    static std::vector<double> reals(const Json& v, const std::string& where) {
        if (!v.is_array()) throw ConfigError(where, "expected an array of numbers");
        std::vector<double> out;
        for (std::size_t k = 0; k < v.size(); ++k) out.push_back(as_real(v[k], where + "[" + std::to_string(k) + "]"));
        return out;
    }

    static std::complex<double> point(const Json& v, const std::string& where) {
        if (v.is_number()) return v.get<double>();
        const auto xy = reals(v, where);
        if (xy.size() != 2) throw ConfigError(where, "expected [re, im]");
        return {xy[0], xy[1]};
    }

private:
    const Json& j_;
    std::string path_;
    std::set<std::string> seen_;
};

}  // namespace

EllipseSpec ExperimentConfig::ellipse_or_default() const {
    return ellipse.value_or(EllipseSpec{interval_a, interval_b, 1.0});
}

bool ExperimentConfig::randomized() const {
    return experiment == "siciak" || experiment == "valency" || experiment == "verify-all" ||
           (experiment == "markov" && cauchy_draws > 0);
}

void ExperimentConfig::validate() const {
    if (!kExperiments.count(experiment)) throw ConfigError("experiment", "unknown experiment '" + experiment + "'");
    if (randomized() && !seed) throw ConfigError("seed", "required for randomized experiments");
    if (t.empty()) throw ConfigError("curve.t", "needs at least one coefficient");
    if (std::any_of(t.begin(), t.end(), [](double c) { return !std::isfinite(c); }))
        throw ConfigError("curve.t", "coefficients must be finite");
    if (!std::isfinite(interval_a) || !std::isfinite(interval_b) || !(interval_a < interval_b))
        throw ConfigError("curve.interval", "requires interval_a < interval_b");
    const bool from_zero = experiment == "maxord";
    if (n_min < (from_zero ? 0 : 1)) throw ConfigError("degrees.min", from_zero ? "must be >= 0" : "must be >= 1");
    if (n_max < n_min) throw ConfigError("degrees.max", "must be >= degrees.min");
    if (n_max > (from_zero ? 8 : 16)) throw ConfigError("degrees.max", from_zero ? "must be <= 8" : "must be <= 16");
    if (grid.initial_size < 9) throw ConfigError("grid.initial_size", "must be >= 9");
    if (!(grid.rel_tol > 0.0)) throw ConfigError("grid.rel_tol", "must be positive");
    if (grid.max_doublings < 0 || grid.max_doublings > 8) throw ConfigError("grid.max_doublings", "must be in 0..8");
    if (!kPhis.count(phi)) throw ConfigError("phi", "expected n_squared or n_linear");
    if (ellipse) {
        if (!(ellipse->a < ellipse->b)) throw ConfigError("geometry.ellipse", "requires a < b");
        if (!(ellipse->c > 0.0)) throw ConfigError("geometry.ellipse.c", "must be positive");
    }
    if (battery.instances < 1) throw ConfigError("battery.instances", "must be >= 1");
    if (battery.c_samples < 0) throw ConfigError("battery.c_samples", "must be >= 0");
    if (battery.t_degree_max < 1 || battery.t_degree_max > 3)
        throw ConfigError("battery.t_degree_max", "must be in 1..3");
    if (!(battery.radius_max >= 0.5)) throw ConfigError("battery.radius_max", "must be >= 0.5");
    if (cauchy_draws < 0) throw ConfigError("markov.cauchy_draws", "must be >= 0");
    if (r_sequence.empty()) throw ConfigError("maxord.r_sequence", "must not be empty");
    for (std::size_t k = 0; k < r_sequence.size(); ++k) {
        if (!(r_sequence[k] > 0.0)) throw ConfigError("maxord.r_sequence", "radii must be positive");
        if (k > 0 && !(r_sequence[k] < r_sequence[k - 1]))
            throw ConfigError("maxord.r_sequence", "radii must decrease strictly");
    }
    for (int n : limit_degrees)
        if (n < 1 || n > 3) throw ConfigError("maxord.limit_degrees", "degrees must be in 1..3");
    for (const auto& [key, value] : expect_verdicts) {
        if (!kPhis.count(key)) throw ConfigError("siciak.expect." + key, "unknown phi");
        if (!kVerdicts.count(value)) throw ConfigError("siciak.expect." + key, "unknown verdict '" + value + "'");
    }
    if (out_dir.empty()) throw ConfigError("output.dir", "must not be empty");
    if (jobs < 1) throw ConfigError("jobs", "must be >= 1");
}

Json ExperimentConfig::to_json() const {
    Json j;
    j["experiment"] = experiment;
    j["seed"] = seed ? Json(*seed) : Json(nullptr);
    j["curve"] = {{"t", t}, {"interval", {interval_a, interval_b}}};
    j["degrees"] = {{"min", n_min}, {"max", n_max}};
    j["grid"] = {{"initial_size", grid.initial_size}, {"rel_tol", grid.rel_tol}, {"max_doublings", grid.max_doublings}};
    j["phi"] = phi;
    Json geometry = Json::object();
    Json probe_list = Json::array();
    for (auto z : probes) probe_list.push_back(complex_json(z));
    geometry["probes"] = probe_list;
    const EllipseSpec e = ellipse_or_default();
    geometry["ellipse"] = {{"a", e.a}, {"b", e.b}, {"c", e.c}};
    j["geometry"] = geometry;
    j["battery"] = {{"instances", battery.instances},
                    {"c_samples", battery.c_samples},
                    {"t_degree_max", battery.t_degree_max},
                    {"radius_max", battery.radius_max}};
    j["markov"] = {{"cauchy_draws", cauchy_draws}};
    j["maxord"] = {{"r_sequence", r_sequence}, {"limit_degrees", limit_degrees}};
    Json expect = Json::object();
    for (const auto& [key, value] : expect_verdicts) expect[key] = value;
    j["siciak"] = {{"expect", expect}};
    j["output"] = {{"dir", out_dir}};
    j["jobs"] = jobs;
    return j;
}

ExperimentConfig parse_config(const Json& j) {
    ExperimentConfig c;
    Section root(j, "");
    c.experiment = root.text("experiment", "");
    if (const Json* s = root.find("seed")) {
        if (!s->is_null()) {
            if (!s->is_number_unsigned()) throw ConfigError("seed", "expected an unsigned 64-bit integer");
            c.seed = s->get<std::uint64_t>();
        }
    }
    if (auto curve = root.sub("curve")) {
        if (const Json* t = curve->find("t")) c.t = Section::reals(*t, "curve.t");
        if (const Json* iv = curve->find("interval")) {
            const auto ab = Section::reals(*iv, "curve.interval");
            if (ab.size() != 2) throw ConfigError("curve.interval", "expected [a, b]");
            c.interval_a = ab[0];
            c.interval_b = ab[1];
        }
        curve->finish();
    }
    if (auto deg = root.sub("degrees")) {
        c.n_min = deg->integer("min", c.n_min);
        c.n_max = deg->integer("max", c.n_max);
        deg->finish();
    }
    if (auto grid = root.sub("grid")) {
        c.grid.initial_size = grid->integer("initial_size", c.grid.initial_size);
        c.grid.rel_tol = grid->real("rel_tol", c.grid.rel_tol);
        c.grid.max_doublings = grid->integer("max_doublings", c.grid.max_doublings);
        grid->finish();
    }
    c.phi = root.text("phi", c.phi);
    if (auto geo = root.sub("geometry")) {
        if (const Json* p = geo->find("probes")) {
            if (!p->is_array()) throw ConfigError("geometry.probes", "expected an array");
            for (std::size_t k = 0; k < p->size(); ++k)
                c.probes.push_back(Section::point((*p)[k], "geometry.probes[" + std::to_string(k) + "]"));
        }
        if (auto e = geo->sub("ellipse")) {
            EllipseSpec spec;
            spec.a = e->real("a", spec.a);
            spec.b = e->real("b", spec.b);
            spec.c = e->real("c", spec.c);
            e->finish();
            c.ellipse = spec;
        }
        geo->finish();
    }
    if (auto b = root.sub("battery")) {
        c.battery.instances = b->integer("instances", c.battery.instances);
        c.battery.c_samples = b->integer("c_samples", c.battery.c_samples);
        c.battery.t_degree_max = b->integer("t_degree_max", c.battery.t_degree_max);
        c.battery.radius_max = b->real("radius_max", c.battery.radius_max);
        b->finish();
    }
    if (auto m = root.sub("markov")) {
        c.cauchy_draws = m->integer("cauchy_draws", c.cauchy_draws);
        m->finish();
    }
    if (auto m = root.sub("maxord")) {
        if (const Json* r = m->find("r_sequence")) c.r_sequence = Section::reals(*r, "maxord.r_sequence");
        if (const Json* d = m->find("limit_degrees")) {
            if (!d->is_array()) throw ConfigError("maxord.limit_degrees", "expected an array of integers");
            c.limit_degrees.clear();
            for (const auto& x : *d) {
                if (!x.is_number_integer()) throw ConfigError("maxord.limit_degrees", "expected an array of integers");
                c.limit_degrees.push_back(x.get<int>());
            }
        }
        m->finish();
    }
    if (auto s = root.sub("siciak")) {
        if (auto e = s->sub("expect")) {
            for (const auto& phi : kPhis) {
                const std::string v = e->text(phi, "");
                if (!v.empty()) c.expect_verdicts[phi] = v;
            }
            e->finish();
        }
        s->finish();
    }
    if (auto o = root.sub("output")) {
        c.out_dir = o->text("dir", c.out_dir);
        o->finish();
    }
    c.jobs = root.integer("jobs", c.jobs);
    root.finish();
    return c;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("--config", "cannot open " + path.string());
    Json j;
    try {
        j = Json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError("--config", std::string("malformed JSON: ") + e.what());
    }
    return parse_config(j);
}

}  // namespace expcurve
