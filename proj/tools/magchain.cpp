#include <cstdio>
#include <exception>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "magchain/errors.hpp"
#include "magchain/harness.hpp"

namespace {

using magchain::ErrorKind;
using magchain::ExperimentKind;

constexpr int kExitOk = 0;
constexpr int kExitValidation = 1;
constexpr int kExitUsage = 2;
constexpr int kExitNumerical = 3;

int exit_code_for(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::InvalidParameter:
        case ErrorKind::BoundaryLayerDomain:
        case ErrorKind::DivergentFunctional:
        case ErrorKind::Io: return kExitUsage;
        default: return kExitNumerical;
    }
}

std::string column_help() {
    std::string text =
        "Every CSV row starts with experiment,label and ends with metric,metric_value,tolerance,rule,pass.\n"
        "rule abs_le passes when |metric_value| <= tolerance, rule lt when metric_value < tolerance.\n"
        "Columns in between, per experiment:\n";
    for (ExperimentKind k : {ExperimentKind::Sweep, ExperimentKind::CompareField, ExperimentKind::Align,
                             ExperimentKind::Modes, ExperimentKind::RingEnergy}) {
        text += "  " + magchain::to_string(k) + ":";
        for (const std::string& c : magchain::declared_columns(k)) text += " " + c;
        text += "\n";
    }
    text +=
        "Exit codes: 0 success, 1 a tolerance was missed, 2 usage error, 3 numerical failure.\n"
        "Config files are JSON objects with keys experiment, n, n_min, n_max, seed, seeds, spec{a,B,rho,mu0}, k,\n"
        "epsilon, tilt, optimizer_tol, fit_epsilon, samples, tolerances{...}, out, format. Flags override the file.";
    return text;
}

struct Flags {
    std::string config;
    std::vector<int> n;
    int n_min = 0;
    int n_max = 0;
    std::string out;
    std::string format;
    std::uint64_t seed = 0;
    int seeds = 0;
    std::vector<int> k;
    double epsilon = 0.0;
    double tilt = 0.0;
    int samples = 0;
    double a = 0.0;
    double B = 0.0;
    double rho = 0.0;
};

void add_flags(CLI::App* sub, Flags& f) {
    sub->add_option("--config", f.config, "JSON config file")->check(CLI::ExistingFile);
    sub->add_option("--n", f.n, "explicit n values")->expected(1, -1);
    sub->add_option("--n-min", f.n_min, "smallest n of a geometric grid");
    sub->add_option("--n-max", f.n_max, "largest n of a geometric grid");
    sub->add_option("--out", f.out, "output file (stdout when omitted)");
    sub->add_option("--format", f.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    sub->add_option("--seed", f.seed, "base random seed (default 0)");
    sub->add_option("--seeds", f.seeds, "number of seeded starts (align)");
    sub->add_option("--k", f.k, "mode numbers (modes)")->expected(1, -1);
    sub->add_option("--epsilon", f.epsilon, "perturbation amplitude (align)");
    sub->add_option("--tilt", f.tilt, "initial tilt in radians (align)");
    sub->add_option("--samples", f.samples, "sample points per ring (compare-field)");
    sub->add_option("--a", f.a, "sphere radius in metres");
    sub->add_option("--B", f.B, "field strength in tesla");
    sub->add_option("--rho", f.rho, "density in kg/m^3");
}

magchain::ExperimentConfig resolve(ExperimentKind kind, CLI::App* sub, const Flags& f) {
    magchain::ExperimentConfig base;
    base.kind = kind;
    magchain::ExperimentConfig cfg = f.config.empty() ? base : magchain::load_config(f.config, base);
    if (!f.config.empty() && cfg.kind != kind)
        throw magchain::InvalidParameter("config experiment '" + magchain::to_string(cfg.kind) +
                                         "' does not match subcommand '" + magchain::to_string(kind) + "'");
    auto given = [sub](const char* name) { return sub->count(name) > 0; };
    if (given("--n")) {
        cfg.n_values = f.n;
        cfg.n_min.reset();
        cfg.n_max.reset();
    }
    if (given("--n-min") || given("--n-max")) cfg.n_values.clear();
    if (given("--n-min")) cfg.n_min = f.n_min;
    if (given("--n-max")) cfg.n_max = f.n_max;
    if (given("--out")) cfg.out = f.out;
    if (given("--format")) cfg.format = magchain::parse_output_format(f.format);
    if (given("--seed")) cfg.seed = f.seed;
    if (given("--seeds")) cfg.seeds = f.seeds;
    if (given("--k")) cfg.k_values = f.k;
    if (given("--epsilon")) cfg.epsilon = f.epsilon;
    if (given("--tilt")) cfg.tilt = f.tilt;
    if (given("--samples")) cfg.samples = f.samples;
    if (given("--a")) cfg.spec.a = f.a;
    if (given("--B")) cfg.spec.B = f.B;
    if (given("--rho")) cfg.spec.rho = f.rho;
    return cfg;
}

void emit(const std::vector<magchain::ResultRecord>& records, const magchain::ExperimentConfig& cfg) {
    if (cfg.out.empty()) {
        magchain::write_records(records, std::cout, cfg.format);
        std::cout.flush();
    } else {
        magchain::write_records(records, cfg.out, cfg.format);
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Discrete and continuum models of magnetic dipole chains and rings"};
    app.footer(column_help());
    app.require_subcommand(1, 1);

    Flags flags;
    std::vector<std::pair<CLI::App*, ExperimentKind>> subs;
    const std::vector<std::pair<ExperimentKind, std::string>> descriptions{
        {ExperimentKind::Sweep, "ring energy per magnet vs closed form over n, with log-log slope"},
        {ExperimentKind::CompareField, "discrete vs continuum field around a ring"},
        {ExperimentKind::Align, "orientation optimizer from seeded tilted starts"},
        {ExperimentKind::Modes, "discrete ring vibration frequencies vs closed form"},
        {ExperimentKind::RingEnergy, "continuum energy breakdown and discrete energy of a ring"},
    };
    for (const auto& [kind, text] : descriptions) {
        CLI::App* sub = app.add_subcommand(magchain::to_string(kind), text);
        add_flags(sub, flags);
        subs.emplace_back(sub, kind);
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kExitOk : kExitUsage;
    }

    CLI::App* sub = nullptr;
    ExperimentKind kind = ExperimentKind::Sweep;
    for (const auto& [s, k] : subs)
        if (s->parsed()) {
            sub = s;
            kind = k;
        }

    magchain::ExperimentConfig cfg;
    try {
        cfg = resolve(kind, sub, flags);
        cfg.validate();
    } catch (const magchain::Error& e) {
        std::cerr << "magchain: " << e.what() << "\n";
        return kExitUsage;
    }

    std::vector<magchain::ResultRecord> records;
    try {
        magchain::run_experiment(cfg, records);
    } catch (const magchain::Error& e) {
        std::cerr << "magchain: " << e.what() << "\n";
        try {
            emit(records, cfg);
        } catch (const magchain::Error& io) {
            std::cerr << "magchain: " << io.what() << "\n";
        }
        return exit_code_for(e.kind());
    } catch (const std::exception& e) {
        std::cerr << "magchain: " << e.what() << "\n";
        return kExitNumerical;
    }

    try {
        emit(records, cfg);
    } catch (const magchain::Error& e) {
        std::cerr << "magchain: " << e.what() << "\n";
        return kExitUsage;
    }
    for (const magchain::ResultRecord& r : records)
        if (!r.pass)
            std::cerr << "magchain: " << r.label << " missed tolerance: " << r.metric << " = " << r.metric_value
                      << " (tolerance " << r.tolerance << ")\n";
    return magchain::all_pass(records) ? kExitOk : kExitValidation;
}
