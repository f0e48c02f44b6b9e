#pragma once

#include <array>
#include <vector>

namespace memsnn {

/// Three-timeslot frame clock. Slot 0 carries spike transmission, slot 1
/// potentiation and slot 2 depression. The fractional-3 clock rises at the
/// start of slot 0.
struct FrameClock {
    double base_freq = 100.0;
    int slot = 0;
    long frame = 0;

    double slot_width() const { return 1.0 / base_freq; }
    double frame_width() const { return 3.0 / base_freq; }
    bool frame_edge() const { return slot == 0; }
    void advance();
};

struct TraceParams {
    double v_p = 2.0;
    double tau = 0.03;  ///< R_p * C_p

    void validate() const;
};

struct TraceState {
    double v_cp = 0.0;
    bool switch_on = false;
};

/// RC trace: held at v_p while the owner's spike rail is up, otherwise
/// decaying with time constant tau.
TraceState trace_step(const TraceParams& params, TraceState state, bool owner_spiking, double dt);

/// PWM pulse width for a trace sampled at the start of slot 1.
double pwm_encode(const TraceParams& params, double sampled_v_cp, double slot_width,
                  bool owner_spiking_this_frame);

/// Left-aligned pulse of `level` lasting `active_width` within one slot.
struct SlotWaveform {
    double level = 0.0;
    double active_width = 0.0;
};

using PortFrame = std::array<SlotWaveform, 3>;

/// Port A (Pre side): +Vcc spike, +Vcc PWM pulse, -Vcc spike.
PortFrame compose_pre_port(bool pre_fired_this_frame, double pre_pwm_width, double v_cc,
                           double slot_width);

/// Port B (Post side): grounded, -Vcc spike, +Vcc PWM pulse.
PortFrame compose_post_port(bool post_fired_this_frame, double post_pwm_width, double v_cc,
                            double slot_width);

/// Piece of v_ab = V_A - V_B, contiguous from the slot start.
struct Segment {
    double level = 0.0;
    double start = 0.0;
    double end = 0.0;

    double width() const { return end - start; }
};

/// Nonzero pieces of v_ab within one slot; v_ab is 0 everywhere else.
using SlotProfile = std::vector<Segment>;

std::array<SlotProfile, 3> differential_frame(const PortFrame& port_a, const PortFrame& port_b);

/// Total width of the slot during which |v_ab| exceeds `v_cc`
/// (i.e. the 2 * Vcc programming overlap).
double strong_width(const SlotProfile& profile, double v_cc);

} // namespace memsnn
