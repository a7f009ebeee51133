#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "gfk/estimator.hpp"
#include "gfk/propagator.hpp"

namespace gfk {

inline constexpr const char* kEngineVersion = "1.0.0";

enum class FitSelection { Linear, Nonlinear, Both };

struct RunConfig {
    AtomSpec atom;
    std::string trial_name;               // family or named parameter set
    std::map<std::string, std::string> trial_params; // family-specific keys
    double lambda0 = 0.0;
    WalkMode mode = WalkMode::GFK;
    int scale = 30;
    std::vector<double> checkpoint_times{8, 16, 24, 32, 40, 48};
    std::uint64_t n_paths = 0;
    std::uint32_t master_seed = 1;
    int workers = 0; // 0 = hardware concurrency
    FitSelection fit = FitSelection::Both;
    bool weighted_fit = true;
    std::string output_dir = "out";

    void validate() const; // throws ConfigError with field-level messages
};

// Flat key = value format, '#' comments; see README for the schema.
RunConfig parse_config(std::istream& in);
RunConfig load_config(const std::string& path);

// Builds the trial function named in the config (shipped parameter sets
// fn3/fn4/fn5/goldman-gs/goldman-trip, or an explicit family).
std::unique_ptr<TrialFunction> make_trial_function(const RunConfig& cfg);

struct RunResult {
    std::vector<CheckpointStat> stats;
    std::optional<FitResult> linear;
    std::optional<FitResult> nonlinear;
};

// Runs the replications (sharded over workers, bit-identical for any
// worker count), aggregates and fits.
RunResult run(const RunConfig& cfg);

// Table columns t zt ln(zt) ln(zt)/t sigma ln(zt)/t(ls fit), six
// decimals, with lambda0/lambda1 footer lines.
void emit_table(std::ostream& out, const std::vector<CheckpointStat>& stats,
                const std::vector<const FitResult*>& fits, double lambda0);

// (t, ln(z_t)/t, sigma, fitted) rows for plotting.
void emit_plot_data(std::ostream& out, const std::vector<CheckpointStat>& stats,
                    const FitResult* fit);

void emit_fit_summary(std::ostream& out, const RunResult& res, const RunConfig& cfg);

// JSON echo of every numerics-affecting config field plus engine version.
void emit_manifest(std::ostream& out, const RunConfig& cfg);

// "-2.1752508(1)" style: value plus parenthesized error in the last digits.
std::string format_with_error(double value, double error, int decimals = 7);

// run() + write table.txt, fit.txt, plot.dat, manifest.json into
// cfg.output_dir.  Returns the run result.
RunResult run_to_files(const RunConfig& cfg);

} // namespace gfk
