#pragma once

#include "memsnn/device.hpp"
#include "memsnn/network.hpp"
#include "memsnn/neuron.hpp"
#include "memsnn/plasticity.hpp"
#include "memsnn/synapse.hpp"

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace memsnn {

struct HysteresisSettings {
    double w0 = 5.0e-9;
    double soft_amplitude = 1.0;
    double soft_frequency = 10.0;
    double soft_duration = 0.2;
    double hard_amplitude = 2.0;
    double hard_frequency = 1.0;
    double hard_duration = 3.0;
    double sample_interval = 1.0e-4;
    double vteam_amplitude = 2.5;
    double vteam_frequency = 1000.0;
    double vteam_duration = 3.0e-3;
    double vteam_dt = 1.0e-7;
    double vteam_sample_interval = 1.0e-6;
};

struct SwitchRateSettings {
    double i_min = 1.0e-4;
    double i_max = 3.0e-3;
    int points = 31;
    double x = 0.5;  ///< w / D at which the rate is evaluated
};

struct SynapsePdSettings {
    double amplitude = 4.0;
    double phase_duration = 0.5;
    int phases = 4;
    double sample_interval = 1.0e-3;
};

struct CalibrationSettings {
    double strong = 4.0;
    double weak = 2.0;
    double width = 0.01;
};

struct StdpSettings {
    long min_offset = -6;
    long max_offset = 6;
    double tail_taus = 40.0;
};

struct VteamExperimentSettings {
    double base_freq = 1000.0;
    double r1 = 8.0e3;
    double gain_a = 1.7;
    double trace_tau = 0.02;
    double trace_v_p = 2.0;
    long min_offset = -25;
    long max_offset = 25;
};

struct PatternSettings {
    PatternSetup setup{};
    PatternInit init = PatternInit::zero;
    std::size_t frame_dump_synapse = 0;  ///< 1-based; 0 disables the dump
};

/// Fully resolved configuration for every experiment.
struct Config {
    MemristorParams device{};
    VteamParams vteam{};
    double r1 = 16.0e3;
    double r2 = 16.0e3;
    double gain_a = 1.1;
    LifParams lif{};
    TraceParams trace{};
    double base_freq = 100.0;
    double dt = 10.0e-6;
    std::uint64_t seed = 0;

    HysteresisSettings hysteresis{};
    SwitchRateSettings switch_rate{};
    SynapsePdSettings synapse_pd{};
    CalibrationSettings calibration{};
    StdpSettings stdp{};
    VteamExperimentSettings vteam_stdp{};
    PatternSettings pattern{};

    void validate() const;

    SynapseConfig synapse(Polarity polarity = Polarity::excitatory) const;
    NetworkConfig network() const;
    NetworkConfig vteam_network() const;
};

/// Parse INI-style text (`[section]` headers, `key = value` lines). Keys not
/// present keep their defaults; `overrides` are `section.key=value` strings
/// applied on top. Throws ConfigError on unknown keys, empty values,
/// malformed numbers and violated invariants.
Config parse_config(std::string_view text, const std::vector<std::string>& overrides = {});

Config load_config(const std::filesystem::path& path,
                   const std::vector<std::string>& overrides = {});

/// Every key with its resolved value, in a form parse_config() accepts.
std::string to_ini(const Config& config);

} // namespace memsnn
