#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "magchain/geometry.hpp"

namespace magchain {

enum class ExperimentKind { Sweep, CompareField, Align, Modes, RingEnergy };

std::string to_string(ExperimentKind kind);
ExperimentKind parse_experiment_kind(const std::string& name);

enum class OutputFormat { Csv, Json };

std::string to_string(OutputFormat format);
OutputFormat parse_output_format(const std::string& name);

struct Tolerances {
    double slope_target = -4.0;
    double slope = 0.3;
    double asymptote = 5e-3;
    /// Ring total-energy gap must stay below gap_coefficient / n^3.
    double gap_coefficient = 40.0;
    double regularized_field = 1e-3;
    double full_field = 1e-2;
    double angle = 0.02;
    double mode = 0.05;
};

struct ExperimentConfig {
    ExperimentKind kind = ExperimentKind::Sweep;
    /// Explicit n values; when empty, n_min/n_max or the per-experiment default grid is used.
    std::vector<int> n_values;
    std::optional<int> n_min;
    std::optional<int> n_max;
    std::uint64_t seed = 0;
    int seeds = 5;
    MagnetSpec spec;
    std::vector<int> k_values{2, 3};
    /// Amplitude of the w = cos 2 theta perturbation used by the align experiment.
    double epsilon = 0.05;
    double tilt = 0.3;
    double optimizer_tol = 1e-8;
    double fit_epsilon = 1e-3;
    int samples = 8;
    Tolerances tol;
    std::string out;
    OutputFormat format = OutputFormat::Csv;

    void validate() const;
    std::vector<int> resolved_n_values() const;
};

ExperimentConfig config_from_json(const std::string& text, ExperimentConfig base = {});
ExperimentConfig load_config(const std::string& path, ExperimentConfig base = {});
std::string config_to_json(const ExperimentConfig& cfg);

/// Geometric grid m, 1.5 m, 2 m, 3 m, 4 m, ... clipped to [n_min, n_max].
std::vector<int> n_grid(int n_min, int n_max);

enum class CheckRule { AbsLe, Lt };

std::string to_string(CheckRule rule);

struct ResultRecord {
    ExperimentKind experiment = ExperimentKind::Sweep;
    std::string label;
    std::vector<std::pair<std::string, double>> fields;
    std::string metric;
    double metric_value = 0.0;
    double tolerance = 0.0;
    CheckRule rule = CheckRule::AbsLe;
    bool pass = false;

    /// Pass/fail implied by metric_value, tolerance and rule.
    bool recompute_pass() const;
    std::optional<double> get(const std::string& name) const;
};

ResultRecord make_record(ExperimentKind kind, std::string label, std::vector<std::pair<std::string, double>> fields,
                         std::string metric, double value, double tolerance, CheckRule rule = CheckRule::AbsLe);

/// Columns each experiment fills, in output order.
std::vector<std::string> declared_columns(ExperimentKind kind);

/// Runs the experiment, appending records to `out` as they complete so that
/// earlier results survive a later failure.
void run_experiment(const ExperimentConfig& cfg, std::vector<ResultRecord>& out);
std::vector<ResultRecord> run_experiment(const ExperimentConfig& cfg);

bool all_pass(const std::vector<ResultRecord>& records);

std::string format_records(const std::vector<ResultRecord>& records, OutputFormat format);
void write_records(const std::vector<ResultRecord>& records, std::ostream& out, OutputFormat format);
void write_records(const std::vector<ResultRecord>& records, const std::string& path, OutputFormat format);

/// Ordinary least squares slope of y against x.
double ols_slope(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace magchain
