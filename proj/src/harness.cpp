#include "magchain/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "magchain/constants.hpp"
#include "magchain/continuum.hpp"
#include "magchain/discrete.hpp"
#include "magchain/errors.hpp"
#include "magchain/ring.hpp"

namespace magchain {

using json = nlohmann::ordered_json;

std::string to_string(ExperimentKind kind) {
    switch (kind) {
        case ExperimentKind::Sweep: return "sweep";
        case ExperimentKind::CompareField: return "compare-field";
        case ExperimentKind::Align: return "align";
        case ExperimentKind::Modes: return "modes";
        case ExperimentKind::RingEnergy: return "ring-energy";
    }
    return "unknown";
}

ExperimentKind parse_experiment_kind(const std::string& name) {
    for (ExperimentKind k : {ExperimentKind::Sweep, ExperimentKind::CompareField, ExperimentKind::Align,
                             ExperimentKind::Modes, ExperimentKind::RingEnergy})
        if (to_string(k) == name) return k;
    throw InvalidParameter("unknown experiment '" + name + "'");
}

std::string to_string(OutputFormat format) { return format == OutputFormat::Csv ? "csv" : "json"; }

OutputFormat parse_output_format(const std::string& name) {
    if (name == "csv") return OutputFormat::Csv;
    if (name == "json") return OutputFormat::Json;
    throw InvalidParameter("unknown output format '" + name + "'");
}

std::string to_string(CheckRule rule) { return rule == CheckRule::AbsLe ? "abs_le" : "lt"; }

std::vector<int> n_grid(int n_min, int n_max) {
    if (n_min < 1 || n_max < n_min) throw InvalidParameter("n range must satisfy 1 <= n_min <= n_max");
    std::vector<int> out;
    for (double base = n_min;; base *= 2.0) {
        for (double f : {1.0, 1.5}) {
            const int v = static_cast<int>(std::lround(base * f));
            if (v > n_max) return out;
            if (out.empty() || v > out.back()) out.push_back(v);
        }
    }
}

namespace {

std::vector<int> default_n(ExperimentKind kind) {
    switch (kind) {
        case ExperimentKind::Sweep: return {8, 12, 16, 24, 32, 48, 64};
        case ExperimentKind::CompareField: return {64};
        case ExperimentKind::Align: return {24, 48};
        case ExperimentKind::Modes: return {40};
        case ExperimentKind::RingEnergy: return {10};
    }
    return {};
}

}  // namespace

std::vector<int> ExperimentConfig::resolved_n_values() const {
    if (!n_values.empty()) return n_values;
    if (n_min || n_max) {
        const std::vector<int> d = default_n(kind);
        return n_grid(n_min.value_or(d.front()), n_max.value_or(std::max(n_min.value_or(1), d.back())));
    }
    return default_n(kind);
}

void ExperimentConfig::validate() const {
    const std::vector<int> ns = resolved_n_values();
    if (ns.empty()) throw InvalidParameter("n range is empty");
    const int min_n = kind == ExperimentKind::Modes ? 16 : 3;
    for (int n : ns)
        if (n < min_n) throw InvalidParameter(to_string(kind) + " needs n >= " + std::to_string(min_n));
    if (seeds < 1) throw InvalidParameter("seeds must be >= 1");
    if (samples < 1) throw InvalidParameter("samples must be >= 1");
    if (kind == ExperimentKind::Modes && k_values.empty()) throw InvalidParameter("k list is empty");
    for (int k : k_values)
        if (k < 1) throw InvalidParameter("mode numbers must be >= 1");
    if (!(epsilon >= 0.0) || !(tilt >= 0.0) || !(optimizer_tol > 0.0) || !(fit_epsilon > 0.0))
        throw InvalidParameter("epsilon, tilt >= 0 and optimizer_tol, fit_epsilon > 0 required");
    for (double t : {tol.slope, tol.asymptote, tol.gap_coefficient, tol.regularized_field, tol.full_field, tol.angle, tol.mode})
        if (!(t > 0.0)) throw InvalidParameter("tolerances must be positive");
    spec.validate();
}

namespace {

template <class T>
void read(const json& j, const char* key, T& target) {
    if (j.contains(key)) target = j.at(key).get<T>();
}

}  // namespace

ExperimentConfig config_from_json(const std::string& text, ExperimentConfig cfg) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw InvalidParameter(std::string("config is not valid JSON: ") + e.what());
    }
    if (!j.is_object()) throw InvalidParameter("config must be a JSON object");
    static const std::vector<std::string> known{"experiment", "n", "n_min", "n_max", "seed", "seeds", "spec", "k",
                                                "epsilon", "tilt", "optimizer_tol", "fit_epsilon", "samples",
                                                "tolerances", "out", "format"};
    for (const auto& [key, value] : j.items())
        if (std::find(known.begin(), known.end(), key) == known.end())
            throw InvalidParameter("unknown config key '" + key + "'");
    try {
        if (j.contains("experiment")) cfg.kind = parse_experiment_kind(j.at("experiment").get<std::string>());
        if (j.contains("n")) {
            cfg.n_values = j.at("n").is_array() ? j.at("n").get<std::vector<int>>() : std::vector<int>{j.at("n").get<int>()};
        }
        if (j.contains("n_min")) cfg.n_min = j.at("n_min").get<int>();
        if (j.contains("n_max")) cfg.n_max = j.at("n_max").get<int>();
        read(j, "seed", cfg.seed);
        read(j, "seeds", cfg.seeds);
        if (j.contains("k")) cfg.k_values = j.at("k").get<std::vector<int>>();
        read(j, "epsilon", cfg.epsilon);
        read(j, "tilt", cfg.tilt);
        read(j, "optimizer_tol", cfg.optimizer_tol);
        read(j, "fit_epsilon", cfg.fit_epsilon);
        read(j, "samples", cfg.samples);
        read(j, "out", cfg.out);
        if (j.contains("format")) cfg.format = parse_output_format(j.at("format").get<std::string>());
        if (j.contains("spec")) {
            const json& s = j.at("spec");
            read(s, "a", cfg.spec.a);
            read(s, "B", cfg.spec.B);
            read(s, "rho", cfg.spec.rho);
            read(s, "mu0", cfg.spec.mu0);
        }
        if (j.contains("tolerances")) {
            const json& t = j.at("tolerances");
            read(t, "slope_target", cfg.tol.slope_target);
            read(t, "slope", cfg.tol.slope);
            read(t, "asymptote", cfg.tol.asymptote);
            read(t, "gap_coefficient", cfg.tol.gap_coefficient);
            read(t, "regularized_field", cfg.tol.regularized_field);
            read(t, "full_field", cfg.tol.full_field);
            read(t, "angle", cfg.tol.angle);
            read(t, "mode", cfg.tol.mode);
        }
    } catch (const json::exception& e) {
        throw InvalidParameter(std::string("config has a value of the wrong type: ") + e.what());
    }
    return cfg;
}

ExperimentConfig load_config(const std::string& path, ExperimentConfig base) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open config", path);
    std::stringstream ss;
    ss << in.rdbuf();
    return config_from_json(ss.str(), std::move(base));
}

std::string config_to_json(const ExperimentConfig& cfg) {
    json j;
    j["experiment"] = to_string(cfg.kind);
    j["n"] = cfg.resolved_n_values();
    j["seed"] = cfg.seed;
    j["seeds"] = cfg.seeds;
    j["spec"] = {{"a", cfg.spec.a}, {"B", cfg.spec.B}, {"rho", cfg.spec.rho}, {"mu0", cfg.spec.mu0}};
    j["k"] = cfg.k_values;
    j["epsilon"] = cfg.epsilon;
    j["tilt"] = cfg.tilt;
    j["optimizer_tol"] = cfg.optimizer_tol;
    j["fit_epsilon"] = cfg.fit_epsilon;
    j["samples"] = cfg.samples;
    j["tolerances"] = {{"slope_target", cfg.tol.slope_target}, {"slope", cfg.tol.slope},
                       {"asymptote", cfg.tol.asymptote}, {"gap_coefficient", cfg.tol.gap_coefficient},
                       {"regularized_field", cfg.tol.regularized_field}, {"full_field", cfg.tol.full_field},
                       {"angle", cfg.tol.angle}, {"mode", cfg.tol.mode}};
    j["format"] = to_string(cfg.format);
    if (!cfg.out.empty()) j["out"] = cfg.out;
    return j.dump(2) + "\n";
}

bool ResultRecord::recompute_pass() const {
    if (!std::isfinite(metric_value)) return false;
    return rule == CheckRule::AbsLe ? std::fabs(metric_value) <= tolerance : metric_value < tolerance;
}

std::optional<double> ResultRecord::get(const std::string& name) const {
    for (const auto& [k, v] : fields)
        if (k == name) return v;
    return std::nullopt;
}

ResultRecord make_record(ExperimentKind kind, std::string label, std::vector<std::pair<std::string, double>> fields,
                         std::string metric, double value, double tolerance, CheckRule rule) {
    ResultRecord r;
    r.experiment = kind;
    r.label = std::move(label);
    r.fields = std::move(fields);
    r.metric = std::move(metric);
    r.metric_value = value;
    r.tolerance = tolerance;
    r.rule = rule;
    r.pass = r.recompute_pass();
    return r;
}

std::vector<std::string> declared_columns(ExperimentKind kind) {
    switch (kind) {
        case ExperimentKind::Sweep:
            return {"n", "discrete_energy", "closed_form_energy", "per_magnet_discrete", "per_magnet_closed_form",
                    "per_magnet_error", "slope"};
        case ExperimentKind::CompareField:
            return {"n", "s", "discrete_bx", "discrete_by", "discrete_bz", "continuum_bx", "continuum_by",
                    "continuum_bz", "relative_error"};
        case ExperimentKind::Align: return {"n", "seed", "epsilon", "energy", "iterations", "max_angle"};
        case ExperimentKind::Modes:
            return {"n", "k", "omega_closed_form", "omega_discrete", "stiffness", "predicted_stiffness", "fit_residual",
                    "relative_error"};
        case ExperimentKind::RingEnergy:
            return {"n", "ground", "local", "nonlocal", "continuum_total", "closed_form_energy", "discrete_energy", "gap"};
    }
    return {};
}

double ols_slope(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2) throw InvalidParameter("slope fit needs at least two points");
    const double m = static_cast<double>(x.size());
    double sx = 0.0;
    double sy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
    }
    const double mx = sx / m;
    const double my = sy / m;
    double sxy = 0.0;
    double sxx = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
    }
    if (sxx == 0.0) throw InvalidParameter("slope fit needs distinct x values");
    return sxy / sxx;
}

namespace {

using Fields = std::vector<std::pair<std::string, double>>;

void run_sweep(const ExperimentConfig& cfg, std::vector<ResultRecord>& out) {
    std::vector<int> ns = cfg.resolved_n_values();
    std::sort(ns.begin(), ns.end());
    std::vector<double> lx;
    std::vector<double> ly;
    double last_per_magnet = 0.0;
    for (int n : ns) {
        const double discrete = total_energy(build_circular_ring(n));
        const double closed = ring_energy_closed_form(n);
        const double pm_d = discrete / n;
        const double pm_c = closed / n;
        const double err = std::fabs(pm_d - pm_c);
        if (n >= 8 && err > 0.0) {
            lx.push_back(std::log(static_cast<double>(n)));
            ly.push_back(std::log(err));
        }
        last_per_magnet = pm_d;
        out.push_back(make_record(ExperimentKind::Sweep, "point",
                                  {{"n", n}, {"discrete_energy", discrete}, {"closed_form_energy", closed},
                                   {"per_magnet_discrete", pm_d}, {"per_magnet_closed_form", pm_c}, {"per_magnet_error", err}},
                                  "gap", discrete - closed, cfg.tol.gap_coefficient / (static_cast<double>(n) * n * n)));
    }
    if (lx.size() >= 2) {
        const double slope = ols_slope(lx, ly);
        out.push_back(make_record(ExperimentKind::Sweep, "slope", {{"slope", slope}}, "slope_error",
                                  slope - cfg.tol.slope_target, cfg.tol.slope));
    }
    if (ns.back() >= 64) {
        out.push_back(make_record(ExperimentKind::Sweep, "asymptote",
                                  {{"n", ns.back()}, {"per_magnet_discrete", last_per_magnet}}, "asymptote_error",
                                  last_per_magnet + 2.0 * kZeta3, cfg.tol.asymptote));
    }
}

void run_ring_energy(const ExperimentConfig& cfg, std::vector<ResultRecord>& out) {
    for (int n : cfg.resolved_n_values()) {
        CurveParams p;
        p.n = n;
        p.radius = CircleRadius::Arclength;
        const EnergyBreakdown e = continuum_total_energy(make_curve(CurveFamily::Circle, p), n);
        const double closed = ring_energy_closed_form(n);
        const double discrete = total_energy(build_circular_ring(n));
        out.push_back(make_record(ExperimentKind::RingEnergy, "breakdown",
                                  {{"n", n}, {"ground", e.ground}, {"local", e.local}, {"nonlocal", e.nonlocal},
                                   {"continuum_total", e.total}, {"closed_form_energy", closed},
                                   {"discrete_energy", discrete}, {"gap", discrete - closed}},
                                  "gap", discrete - closed, cfg.tol.gap_coefficient / (static_cast<double>(n) * n * n)));
    }
}

Fields field_fields(int n, double s, const Vec3& d, const Vec3& c, double rel) {
    return {{"n", n}, {"s", s}, {"discrete_bx", d.x}, {"discrete_by", d.y}, {"discrete_bz", d.z},
            {"continuum_bx", c.x}, {"continuum_by", c.y}, {"continuum_bz", c.z}, {"relative_error", rel}};
}

void run_compare_field(const ExperimentConfig& cfg, std::vector<ResultRecord>& out) {
    for (int n : cfg.resolved_n_values()) {
        const ChainConfig ring = build_circular_ring(n);
        CurveParams p;
        p.n = n;
        const ContinuumCurve curve = make_curve(CurveFamily::Circle, p);
        const int count = std::min(cfg.samples, n);
        for (int q = 0; q < count; ++q) {
            const int i = static_cast<int>(static_cast<long long>(q) * n / count);
            const double s = static_cast<double>(i) / n;
            const Vec3 d = regularized_field_at(ring, static_cast<std::size_t>(i));
            const Vec3 c = continuum_field(curve, s, n, FieldMode::Regularized);
            const double rel = norm(c - d) / norm(d);
            out.push_back(make_record(ExperimentKind::CompareField, "regularized", field_fields(n, s, d, c, rel),
                                      "relative_error", rel, cfg.tol.regularized_field));
        }
        for (int q = 0; q < count; ++q) {
            const int i = static_cast<int>(static_cast<long long>(q) * n / count);
            const double s = (i + 0.5) / n;
            const Vec3 d = total_field_at(ring, curve.position(s));
            const Vec3 c = continuum_field(curve, s, n, FieldMode::Full);
            const double rel = norm(c - d) / norm(d);
            out.push_back(make_record(ExperimentKind::CompareField, "full", field_fields(n, s, d, c, rel),
                                      "relative_error", rel, cfg.tol.full_field));
        }
    }
}

void run_align(const ExperimentConfig& cfg, std::vector<ResultRecord>& out) {
    std::vector<int> ns = cfg.resolved_n_values();
    std::sort(ns.begin(), ns.end());
    struct Shape {
        std::string name;
        double epsilon;
    };
    std::vector<Shape> shapes{{"circle", 0.0}};
    if (cfg.epsilon > 0.0) shapes.push_back({"perturbed", cfg.epsilon});
    OptimizeOptions opt;
    opt.tol = cfg.optimizer_tol;
    for (const Shape& shape : shapes) {
        std::vector<double> worst;
        for (int n : ns) {
            const ChainConfig base = shape.epsilon == 0.0 ? build_circular_ring(n)
                                                          : build_perturbed_ring(n, RingPerturbation::mode(2, shape.epsilon));
            double w = 0.0;
            for (int q = 0; q < cfg.seeds; ++q) {
                const std::uint64_t seed = cfg.seed + static_cast<std::uint64_t>(q);
                const OptimizeResult r = optimize_orientations(tilt_moments(base, cfg.tilt, seed), opt);
                const double angle = max_line_angle(r.config.moments, base.moments);
                w = std::max(w, angle);
                out.push_back(make_record(ExperimentKind::Align, shape.name,
                                          {{"n", n}, {"seed", static_cast<double>(seed)}, {"epsilon", shape.epsilon},
                                           {"energy", r.energy}, {"iterations", r.iterations}, {"max_angle", angle}},
                                          "max_angle", angle, cfg.tol.angle));
            }
            worst.push_back(w);
        }
        if (shape.epsilon == 0.0) continue;
        for (std::size_t i = 0; i + 1 < ns.size(); ++i) {
            if (ns[i + 1] != 2 * ns[i]) continue;
            out.push_back(make_record(ExperimentKind::Align, shape.name + "-doubling",
                                      {{"n", ns[i + 1]}, {"epsilon", shape.epsilon}, {"max_angle", worst[i + 1]}},
                                      "angle_change", worst[i + 1] - worst[i], 0.0, CheckRule::Lt));
        }
    }
}

void run_modes(const ExperimentConfig& cfg, std::vector<ResultRecord>& out) {
    ModeFitOptions fit_opt;
    fit_opt.epsilon = cfg.fit_epsilon;
    for (int n : cfg.resolved_n_values()) {
        const int kmax = std::max(2, *std::max_element(cfg.k_values.begin(), cfg.k_values.end()));
        const ModeSpectrum spectrum = mode_frequencies(cfg.spec, n, kmax);
        double w2 = 0.0;
        double w3 = 0.0;
        for (int k : cfg.k_values) {
            const ModeFit fit = discrete_mode_fit(n, k, cfg.spec, fit_opt);
            const double closed = spectrum.at(k);
            const double rel = closed > 0.0 ? fit.omega / closed - 1.0 : fit.omega;
            if (k == 2) w2 = fit.omega;
            if (k == 3) w3 = fit.omega;
            out.push_back(make_record(ExperimentKind::Modes, "mode",
                                      {{"n", n}, {"k", k}, {"omega_closed_form", closed}, {"omega_discrete", fit.omega},
                                       {"stiffness", fit.stiffness}, {"predicted_stiffness", fit.predicted_stiffness},
                                       {"fit_residual", fit.fit_residual}, {"relative_error", rel}},
                                      "relative_error", rel, cfg.tol.mode));
        }
        if (w2 > 0.0 && w3 > 0.0) {
            const double rel = (w3 / w2) / std::sqrt(8.0) - 1.0;
            out.push_back(make_record(ExperimentKind::Modes, "ratio-3-2", {{"n", n}, {"relative_error", rel}},
                                      "relative_error", rel, cfg.tol.mode));
        }
    }
}

}  // namespace

void run_experiment(const ExperimentConfig& cfg, std::vector<ResultRecord>& out) {
    cfg.validate();
    try {
        switch (cfg.kind) {
            case ExperimentKind::Sweep: run_sweep(cfg, out); break;
            case ExperimentKind::CompareField: run_compare_field(cfg, out); break;
            case ExperimentKind::Align: run_align(cfg, out); break;
            case ExperimentKind::Modes: run_modes(cfg, out); break;
            case ExperimentKind::RingEnergy: run_ring_energy(cfg, out); break;
        }
    } catch (const Error& e) {
        throw Error(e.kind(), to_string(cfg.kind) + " experiment: " + e.detail());
    }
}

std::vector<ResultRecord> run_experiment(const ExperimentConfig& cfg) {
    std::vector<ResultRecord> out;
    run_experiment(cfg, out);
    return out;
}

bool all_pass(const std::vector<ResultRecord>& records) {
    return std::all_of(records.begin(), records.end(), [](const ResultRecord& r) { return r.pass; });
}

namespace {

std::string fmt17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::vector<std::string> columns_for(const std::vector<ResultRecord>& records) {
    std::vector<std::string> cols;
    if (records.empty()) return cols;
    const ExperimentKind kind = records.front().experiment;
    const bool uniform = std::all_of(records.begin(), records.end(), [kind](const ResultRecord& r) { return r.experiment == kind; });
    if (uniform) cols = declared_columns(kind);
    for (const ResultRecord& r : records)
        for (const auto& [k, v] : r.fields)
            if (std::find(cols.begin(), cols.end(), k) == cols.end()) cols.push_back(k);
    return cols;
}

}  // namespace

void write_records(const std::vector<ResultRecord>& records, std::ostream& out, OutputFormat format) {
    if (format == OutputFormat::Json) {
        json arr = json::array();
        for (const ResultRecord& r : records) {
            json j;
            j["experiment"] = to_string(r.experiment);
            j["label"] = r.label;
            for (const auto& [k, v] : r.fields) j[k] = v;
            j["metric"] = r.metric;
            j["metric_value"] = r.metric_value;
            j["tolerance"] = r.tolerance;
            j["rule"] = to_string(r.rule);
            j["pass"] = r.pass;
            arr.push_back(std::move(j));
        }
        out << arr.dump(2) << '\n';
        return;
    }
    const std::vector<std::string> cols = columns_for(records);
    out << "experiment,label";
    for (const std::string& c : cols) out << ',' << c;
    out << ",metric,metric_value,tolerance,rule,pass\n";
    for (const ResultRecord& r : records) {
        out << to_string(r.experiment) << ',' << r.label;
        for (const std::string& c : cols) {
            out << ',';
            if (const auto v = r.get(c)) out << fmt17(*v);
        }
        out << ',' << r.metric << ',' << fmt17(r.metric_value) << ',' << fmt17(r.tolerance) << ',' << to_string(r.rule)
            << ',' << (r.pass ? "true" : "false") << '\n';
    }
}

std::string format_records(const std::vector<ResultRecord>& records, OutputFormat format) {
    std::ostringstream os;
    write_records(records, os, format);
    return os.str();
}

void write_records(const std::vector<ResultRecord>& records, const std::string& path, OutputFormat format) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open output file", path);
    write_records(records, out, format);
    out.flush();
    if (!out) throw IoError("failed writing output file", path);
}

}  // namespace magchain
