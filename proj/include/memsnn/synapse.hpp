#pragma once

#include "memsnn/device.hpp"

#include <array>
#include <string_view>

namespace memsnn {

enum class Polarity { excitatory, inhibitory };

Polarity parse_polarity(std::string_view name);
std::string_view to_string(Polarity polarity);

/// Four-memristor / two-resistor bridge. All four devices share `device`.
struct SynapseConfig {
    Polarity polarity = Polarity::excitatory;
    double r1 = 16.0e3;
    double r2 = 16.0e3;
    double gain_a = 1.1;
    DeviceModel device = MemristorParams{};

    void validate() const;
};

/// Weight of the bridge for explicit memristances M1..M4.
///   excitatory: A ((M2 + R1) / (M1 + M2 + R1) - M4 / (M3 + R2 + M4))
///   inhibitory: A (M2 / (M1 + R1 + M2) - (M4 + R2) / (M3 + M4 + R2))
double bridge_weight(Polarity polarity, double r1, double r2, double gain_a,
                     const std::array<double, 4>& m);

struct SynapseAssembly {
    SynapseConfig config;
    std::array<MemristorState, 4> m{};

    /// Minimum-|weight| state: for the excitatory bridge M1 = M4 = R_OFF and
    /// M2 = M3 = R_ON; the inhibitory bridge is its mirror.
    static SynapseAssembly at_rest(const SynapseConfig& config);

    /// The opposite-polarity assembly whose weight is exactly -weight().
    SynapseAssembly mirrored() const;

    std::array<double, 4> memristances() const;
    double weight() const;

    /// In-place form of apply_differential().
    void apply(double v_ab, double dt);
};

double weight(const SynapseAssembly& assembly);

/// Step all four devices under a differential voltage V_A - V_B held for `dt`.
/// Each branch (M1-M2, M3-M4) is integrated as one coupled RK4 system.
SynapseAssembly apply_differential(SynapseAssembly assembly, double v_ab, double dt);

struct Transmission {
    double v_out = 0.0;
    SynapseAssembly assembly;
};

/// Weighted output psi * v_in, evaluated before the input disturbs the
/// devices. The returned assembly includes that disturbance.
Transmission transmit(const SynapseAssembly& assembly, double v_in, double dt);

struct WeightRange {
    double lo = 0.0;
    double hi = 0.0;
};

WeightRange weight_range(const SynapseConfig& config);

struct ProgramOptions {
    double amplitude = 4.0;
    double dt = 10.0e-6;
    double max_duration = 20.0;
};

struct ProgramResult {
    SynapseAssembly assembly;
    double achieved = 0.0;
    long pulses = 0;
    double duration = 0.0;
    bool converged = false;
};

/// Closed-loop programming with +/- amplitude pulses of at most `opts.dt`.
/// Pulses that would overshoot past the tolerance band are halved and
/// retried. Stops early if the range boundary stalls progress.
/// Throws ConfigError if the target lies outside weight_range().
ProgramResult program_to_weight(SynapseAssembly assembly, double target, double tolerance,
                                const ProgramOptions& opts = {});

/// Canonical |psi| = 0.5 state: the excitatory bridge programmed from rest
/// to 0.5, or the exact mirror of it for the inhibitory bridge.
SynapseAssembly canonical_midpoint(const SynapseConfig& config);

} // namespace memsnn
