#include "memsnn/synapse.hpp"

#include "memsnn/errors.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>

namespace memsnn {

namespace {

// Logical orientation of M1..M4: +1 means a positive A->B current drives the
// device toward R_ON.
constexpr std::array<int, 4> kExcitatoryOrientation{+1, -1, -1, +1};

int polarity_sign(Polarity polarity) { return polarity == Polarity::excitatory ? 1 : -1; }

void step_branch(const DeviceModel& model, MemristorState& a, MemristorState& b, double r_series,
                 double v, double dt)
{
    const double lo = device_w_min(model);
    const double hi = device_w_max(model);
    const auto clamp = [lo, hi](double w) { return std::clamp(w, lo, hi); };
    const auto rates = [&](double wa, double wb) {
        const MemristorState sa{wa, a.orientation};
        const MemristorState sb{wb, b.orientation};
        const double i = v / ((resistance(model, sa) + resistance(model, sb)) + r_series);
        return std::array<double, 2>{drift_rate(model, sa, i), drift_rate(model, sb, i)};
    };

    const auto k1 = rates(a.w, b.w);
    if (k1[0] == 0.0 && k1[1] == 0.0) {
        // Nothing moves at the start of the step (zero drive or a VTEAM dead zone).
        return;
    }
    const auto k2 = rates(clamp(a.w + 0.5 * dt * k1[0]), clamp(b.w + 0.5 * dt * k1[1]));
    const auto k3 = rates(clamp(a.w + 0.5 * dt * k2[0]), clamp(b.w + 0.5 * dt * k2[1]));
    const auto k4 = rates(clamp(a.w + dt * k3[0]), clamp(b.w + dt * k3[1]));
    a.w = clamp(a.w + dt / 6.0 * (k1[0] + 2.0 * k2[0] + 2.0 * k3[0] + k4[0]));
    b.w = clamp(b.w + dt / 6.0 * (k1[1] + 2.0 * k2[1] + 2.0 * k3[1] + k4[1]));
}

} // namespace

Polarity parse_polarity(std::string_view name)
{
    if (name == "excitatory") return Polarity::excitatory;
    if (name == "inhibitory") return Polarity::inhibitory;
    throw ConfigError("unknown synapse polarity '" + std::string(name)
                      + "' (expected excitatory or inhibitory)");
}

std::string_view to_string(Polarity polarity)
{
    return polarity == Polarity::excitatory ? "excitatory" : "inhibitory";
}

void SynapseConfig::validate() const
{
    std::visit([](const auto& p) { p.validate(); }, device);
    if (!(r1 > 0.0 && r2 > 0.0)) {
        throw ConfigError("synapse: r1 > 0 and r2 > 0");
    }
    if (r1 != r2) {
        throw ConfigError("synapse: r1 = r2");
    }
    if (!(gain_a > 0.0)) {
        throw ConfigError("synapse: gain_a > 0");
    }
}

double bridge_weight(Polarity polarity, double r1, double r2, double gain_a,
                     const std::array<double, 4>& m)
{
    const double s1 = (m[0] + m[1]) + r1;
    const double s2 = (m[2] + m[3]) + r2;
    if (polarity == Polarity::excitatory) {
        return gain_a * ((m[1] + r1) / s1 - m[3] / s2);
    }
    return gain_a * (m[1] / s1 - (m[3] + r2) / s2);
}

SynapseAssembly SynapseAssembly::at_rest(const SynapseConfig& config)
{
    const int sign = polarity_sign(config.polarity);
    const int native = toward_on_orientation(config.device);
    SynapseAssembly out{config, {}};
    for (std::size_t k = 0; k < 4; ++k) {
        const int orientation = sign * native * kExcitatoryOrientation[k];
        // M1/M4 start at R_OFF in the excitatory bridge, M2/M3 at R_ON.
        const bool at_off = (k == 0 || k == 3) == (config.polarity == Polarity::excitatory);
        out.m[k] = at_off ? off_bound_state(config.device, orientation)
                          : on_bound_state(config.device, orientation);
    }
    return out;
}

SynapseAssembly SynapseAssembly::mirrored() const
{
    SynapseAssembly out = *this;
    out.config.polarity =
        config.polarity == Polarity::excitatory ? Polarity::inhibitory : Polarity::excitatory;
    out.m = {m[1], m[0], m[3], m[2]};
    return out;
}

std::array<double, 4> SynapseAssembly::memristances() const
{
    return {resistance(config.device, m[0]), resistance(config.device, m[1]),
            resistance(config.device, m[2]), resistance(config.device, m[3])};
}

double SynapseAssembly::weight() const
{
    return bridge_weight(config.polarity, config.r1, config.r2, config.gain_a, memristances());
}

void SynapseAssembly::apply(double v_ab, double dt)
{
    if (!std::isfinite(v_ab) || !std::isfinite(dt) || dt <= 0.0) {
        throw SimulationFault("synapse: non-finite drive or dt <= 0");
    }
    if (v_ab == 0.0) {
        return;
    }
    step_branch(config.device, m[0], m[1], config.r1, v_ab, dt);
    step_branch(config.device, m[2], m[3], config.r2, v_ab, dt);
}

double weight(const SynapseAssembly& assembly) { return assembly.weight(); }

SynapseAssembly apply_differential(SynapseAssembly assembly, double v_ab, double dt)
{
    assembly.apply(v_ab, dt);
    return assembly;
}

Transmission transmit(const SynapseAssembly& assembly, double v_in, double dt)
{
    Transmission out{assembly.weight() * v_in, assembly};
    out.assembly.apply(v_in, dt);
    return out;
}

WeightRange weight_range(const SynapseConfig& config)
{
    const SynapseAssembly rest = SynapseAssembly::at_rest(config);
    SynapseAssembly far = rest;
    for (std::size_t k = 0; k < 4; ++k) {
        const int orientation = rest.m[k].orientation;
        const bool rest_at_off = rest.m[k].w == off_bound_state(config.device, orientation).w;
        far.m[k] = rest_at_off ? on_bound_state(config.device, orientation)
                               : off_bound_state(config.device, orientation);
    }
    const double a = rest.weight();
    const double b = far.weight();
    return {std::min(a, b), std::max(a, b)};
}

ProgramResult program_to_weight(SynapseAssembly assembly, double target, double tolerance,
                                const ProgramOptions& opts)
{
    if (!(tolerance > 0.0)) {
        throw ConfigError("program_to_weight: tolerance > 0");
    }
    const WeightRange range = weight_range(assembly.config);
    if (!(target >= range.lo && target <= range.hi)) {
        std::ostringstream msg;
        msg << "target weight " << target << " is outside the reachable range [" << range.lo
            << ", " << range.hi << "]";
        throw ConfigError(msg.str());
    }

    const int sign = polarity_sign(assembly.config.polarity);
    ProgramResult out{assembly, assembly.weight(), 0, 0.0, false};
    double pulse = opts.dt;
    while (std::abs(out.achieved - target) > tolerance) {
        if (out.duration >= opts.max_duration || pulse < 1e-15) {
            return out;
        }
        const double error = out.achieved - target;
        const double v = (error < 0.0 ? 1.0 : -1.0) * sign * opts.amplitude;
        SynapseAssembly trial = out.assembly;
        trial.apply(v, pulse);
        const double next = trial.weight();
        const double next_error = next - target;
        if ((next_error > 0.0) != (error > 0.0) && std::abs(next_error) > tolerance) {
            pulse *= 0.5;
            continue;
        }
        const bool stalled = std::abs(next - out.achieved) < 1e-13;
        out.assembly = trial;
        out.achieved = next;
        out.duration += pulse;
        ++out.pulses;
        if (stalled) {
            return out;
        }
    }
    out.converged = true;
    return out;
}

SynapseAssembly canonical_midpoint(const SynapseConfig& config)
{
    SynapseConfig excitatory = config;
    excitatory.polarity = Polarity::excitatory;
    const auto programmed =
        program_to_weight(SynapseAssembly::at_rest(excitatory), 0.5, 1e-9).assembly;
    return config.polarity == Polarity::excitatory ? programmed : programmed.mirrored();
}

} // namespace memsnn
