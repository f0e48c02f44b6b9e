#pragma once

#include <span>
#include <vector>

namespace memsnn {

/// Inverting leaky integrator + comparator + synchronous two-flip-flop trigger.
struct LifParams {
    std::vector<double> r_in{100.0e3};  ///< one input resistor per afferent
    double r_ref = 900.0e3;
    double c = 1.0e-6;
    double v_th = -0.45;
    double v_cc = 2.0;

    void validate() const;
    double tau() const { return r_ref * c; }
};

struct LifState {
    double v_mp = 0.0;
    bool q1 = false;        ///< trigger loaded
    bool q2 = false;        ///< firing (spike pair on the rails this frame)
    bool enabled = true;    ///< EN port
    bool cmp_prev = false;  ///< last comparator output, for edge detection
};

/// One integrator step of dV/dt = -(sum_j v_j / R_in,j + V / R_ref) / C,
/// exact for inputs held constant over `dt`. While the neuron is firing
/// (q2) the capacitor is shorted and V_MP stays at 0.
LifState integrate(const LifParams& params, LifState state, std::span<const double> inputs,
                   double dt);

/// 1 iff V_MP <= V_th (the threshold is negative).
bool comparator(const LifParams& params, const LifState& state);

struct TriggerResult {
    LifState state;
    bool fired = false;
};

/// Advance the trigger by one base-clock tick. A rising comparator edge
/// loads Q1 (when enabled); at a frame edge Q2 follows Q1, V_MP is reset and
/// Q1 is cleared. Q2 drops again at the next frame edge.
TriggerResult trigger_tick(const LifParams& params, LifState state, bool comparator_out,
                           bool frame_edge);

/// Load the trigger directly, bypassing the integrator (forced stimulus).
/// Ignored when the neuron is disabled.
LifState force_load(LifState state);

} // namespace memsnn
