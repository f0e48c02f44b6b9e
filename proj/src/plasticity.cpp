#include "memsnn/plasticity.hpp"

#include "memsnn/errors.hpp"

#include <algorithm>
#include <cmath>

namespace memsnn {

void FrameClock::advance()
{
    if (++slot == 3) {
        slot = 0;
        ++frame;
    }
}

void TraceParams::validate() const
{
    if (!(v_p > 0.0)) throw ConfigError("trace: v_p > 0");
    if (!(tau > 0.0)) throw ConfigError("trace: tau > 0");
}

TraceState trace_step(const TraceParams& params, TraceState state, bool owner_spiking, double dt)
{
    if (!std::isfinite(dt) || dt <= 0.0) {
        throw SimulationFault("trace: dt must be finite and > 0");
    }
    state.switch_on = owner_spiking;
    if (owner_spiking) {
        state.v_cp = params.v_p;
    } else {
        state.v_cp *= std::exp(-dt / params.tau);
    }
    return state;
}

double pwm_encode(const TraceParams& params, double sampled_v_cp, double slot_width,
                  bool owner_spiking_this_frame)
{
    if (owner_spiking_this_frame) {
        return slot_width;
    }
    return std::clamp(sampled_v_cp / params.v_p, 0.0, 1.0) * slot_width;
}

PortFrame compose_pre_port(bool pre_fired_this_frame, double pre_pwm_width, double v_cc,
                           double slot_width)
{
    PortFrame out{};
    if (pre_fired_this_frame) {
        out[0] = {v_cc, slot_width};
        out[2] = {-v_cc, slot_width};
    }
    if (pre_pwm_width > 0.0) {
        out[1] = {v_cc, std::min(pre_pwm_width, slot_width)};
    }
    return out;
}

PortFrame compose_post_port(bool post_fired_this_frame, double post_pwm_width, double v_cc,
                            double slot_width)
{
    PortFrame out{};
    if (post_fired_this_frame) {
        out[1] = {-v_cc, slot_width};
    }
    if (post_pwm_width > 0.0) {
        out[2] = {v_cc, std::min(post_pwm_width, slot_width)};
    }
    return out;
}

std::array<SlotProfile, 3> differential_frame(const PortFrame& port_a, const PortFrame& port_b)
{
    std::array<SlotProfile, 3> out;
    for (std::size_t s = 0; s < 3; ++s) {
        const SlotWaveform& a = port_a[s];
        const SlotWaveform& b = port_b[s];
        const double wa = a.level != 0.0 ? a.active_width : 0.0;
        const double wb = b.level != 0.0 ? b.active_width : 0.0;
        const double overlap = std::min(wa, wb);
        const double reach = std::max(wa, wb);
        if (overlap > 0.0 && a.level - b.level != 0.0) {
            out[s].push_back({a.level - b.level, 0.0, overlap});
        }
        if (reach > overlap) {
            const double level = wa > wb ? a.level : -b.level;
            out[s].push_back({level, overlap, reach});
        }
    }
    return out;
}

double strong_width(const SlotProfile& profile, double v_cc)
{
    double total = 0.0;
    for (const Segment& seg : profile) {
        if (std::abs(seg.level) > v_cc) {
            total += seg.width();
        }
    }
    return total;
}

} // namespace memsnn
