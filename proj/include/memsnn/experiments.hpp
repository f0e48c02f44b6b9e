#pragma once

#include "memsnn/config.hpp"

#include "json.hpp"

#include <array>
#include <filesystem>
#include <string_view>
#include <vector>

namespace memsnn {

enum class Experiment {
    hysteresis,
    switch_rate,
    synapse_pd,
    weak_strong_calibration,
    stdp_window,
    stdp_window_vteam,
    pattern_learn,
};

Experiment parse_experiment(std::string_view name);
std::string_view to_string(Experiment experiment);
const std::vector<Experiment>& all_experiments();

// ---------------------------------------------------------------------------
// Building blocks shared by the CLI, the acceptance suite and the bindings.

struct HysteresisSummary {
    double loop_area = 0.0;            ///< |closed integral of i dv| over the run (A*V)
    double max_abs_i_at_zero_v = 0.0;  ///< current interpolated at sign changes of v
    double min_cycle_coverage = 0.0;   ///< min over full cycles of (Rmax - Rmin)/(R_OFF - R_ON)
    double r_min = 0.0;
    double r_max = 0.0;
};

HysteresisSummary summarize_sweep(const std::vector<SweepSample>& samples, double period,
                                  double r_on, double r_off);

struct RatePoint {
    double i = 0.0;
    double dwdt = 0.0;
};

struct SwitchRateResult {
    std::vector<RatePoint> points;
    double slope = 0.0;  ///< least-squares slope of log|dw/dt| vs log|i|
};

SwitchRateResult switch_rate(const MemristorParams& params, const SwitchRateSettings& settings);

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

struct PdSample {
    double t = 0.0;
    std::array<double, 4> m{};
    double psi = 0.0;
};

/// Alternating +/- amplitude programming phases from the rest state.
std::vector<PdSample> potentiation_depression(const SynapseConfig& config,
                                              const SynapsePdSettings& settings, double dt);

struct CalibrationRow {
    double amplitude = 0.0;
    double width = 0.0;
    double psi_before = 0.0;
    double psi_after = 0.0;

    double dpsi() const { return psi_after - psi_before; }
};

struct CalibrationResult {
    std::vector<CalibrationRow> rows;  ///< +strong, +weak, -strong, -weak
    double strong = 0.0;
    double weak = 0.0;
    double ratio = 0.0;  ///< weak / strong
};

/// Single pulses applied to the canonical psi = 0.5 state.
CalibrationResult weak_strong_calibration(const SynapseConfig& config,
                                          const CalibrationSettings& settings, double dt);

// ---------------------------------------------------------------------------

struct ExperimentSpec {
    Experiment name = Experiment::hysteresis;
    std::filesystem::path out_dir;
    bool plots = false;
};

struct ExperimentOutput {
    std::filesystem::path out_dir;
    std::vector<std::filesystem::path> files;  ///< CSVs (plots and manifest excluded)
    nlohmann::json results;
};

/// Run one experiment into a staging directory next to `spec.out_dir`,
/// write its manifest, then move it into place. On failure nothing is left
/// behind.
ExperimentOutput run_experiment(const ExperimentSpec& spec, const Config& config);

} // namespace memsnn
