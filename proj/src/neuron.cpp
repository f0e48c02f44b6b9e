#include "memsnn/neuron.hpp"

#include "memsnn/errors.hpp"

#include <cmath>
#include <string>

namespace memsnn {

void LifParams::validate() const
{
    for (double r : r_in) {
        if (!(r > 0.0)) throw ConfigError("lif: r_in > 0 for every input");
    }
    if (!(r_ref > 0.0)) throw ConfigError("lif: r_ref > 0");
    if (!(c > 0.0)) throw ConfigError("lif: c > 0");
    if (!(v_th < 0.0)) throw ConfigError("lif: v_th < 0");
    if (!(v_cc > 0.0)) throw ConfigError("lif: v_cc > 0");
}

LifState integrate(const LifParams& params, LifState state, std::span<const double> inputs,
                   double dt)
{
    if (inputs.size() != params.r_in.size()) {
        throw SimulationFault("lif: got " + std::to_string(inputs.size()) + " inputs for "
                              + std::to_string(params.r_in.size()) + " input resistors");
    }
    if (!std::isfinite(dt) || dt <= 0.0) {
        throw SimulationFault("lif: dt must be finite and > 0");
    }
    double current = 0.0;
    for (std::size_t j = 0; j < inputs.size(); ++j) {
        if (!std::isfinite(inputs[j])) {
            throw SimulationFault("lif: non-finite input voltage");
        }
        current += inputs[j] / params.r_in[j];
    }
    if (state.q2) {
        state.v_mp = 0.0;
        return state;
    }
    // Steady state of the leaky integrator for this input is -R_ref * I.
    const double target = -params.r_ref * current;
    const double decay = std::exp(-dt / params.tau());
    state.v_mp = target + (state.v_mp - target) * decay;
    return state;
}

bool comparator(const LifParams& params, const LifState& state)
{
    return state.v_mp <= params.v_th;
}

TriggerResult trigger_tick(const LifParams& /*params*/, LifState state, bool comparator_out,
                           bool frame_edge)
{
    TriggerResult out{state, false};
    LifState& s = out.state;
    if (comparator_out && !s.cmp_prev && s.enabled) {
        s.q1 = true;
    }
    s.cmp_prev = comparator_out;
    if (!frame_edge) {
        return out;
    }
    s.q2 = false;
    if (s.q1 && s.enabled) {
        s.q2 = true;
        s.q1 = false;
        s.v_mp = 0.0;
        s.cmp_prev = false;
        out.fired = true;
    }
    return out;
}

LifState force_load(LifState state)
{
    if (state.enabled) {
        state.q1 = true;
    }
    return state;
}

} // namespace memsnn
