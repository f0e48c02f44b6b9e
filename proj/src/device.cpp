#include "memsnn/device.hpp"

#include "memsnn/errors.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace memsnn {

namespace {

double ipow(double base, int exponent)
{
    double result = 1.0;
    for (int k = 0; k < exponent; ++k) {
        result *= base;
    }
    return result;
}

// Heaviside step with stp(0) = 1.
double stp(double x) { return x >= 0.0 ? 1.0 : 0.0; }

void check_drive(double v, double dt)
{
    if (!std::isfinite(v)) {
        throw SimulationFault("non-finite device voltage");
    }
    if (!std::isfinite(dt) || dt <= 0.0) {
        throw SimulationFault("device step requires a finite dt > 0, got " + std::to_string(dt));
    }
}

// One explicit step of dw/dt = rate(w) with every stage clamped to [lo, hi].
template <typename Rate>
double integrate_state(double w, double dt, double lo, double hi, Integrator integrator,
                       const Rate& rate)
{
    const auto clamp = [lo, hi](double x) { return std::clamp(x, lo, hi); };
    if (integrator == Integrator::euler) {
        return clamp(w + dt * rate(w));
    }
    const double k1 = rate(w);
    const double k2 = rate(clamp(w + 0.5 * dt * k1));
    const double k3 = rate(clamp(w + 0.5 * dt * k2));
    const double k4 = rate(clamp(w + dt * k3));
    return clamp(w + dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4));
}

} // namespace

WindowKind parse_window_kind(std::string_view name)
{
    if (name == "zha") return WindowKind::zha;
    if (name == "joglekar") return WindowKind::joglekar;
    if (name == "prodromakis") return WindowKind::prodromakis;
    if (name == "biolek") return WindowKind::biolek;
    if (name == "strukov") return WindowKind::strukov;
    if (name == "none") return WindowKind::none;
    throw ConfigError("unknown window kind '" + std::string(name)
                      + "' (expected zha, joglekar, prodromakis, biolek, strukov or none)");
}

std::string_view to_string(WindowKind kind)
{
    switch (kind) {
    case WindowKind::zha: return "zha";
    case WindowKind::joglekar: return "joglekar";
    case WindowKind::prodromakis: return "prodromakis";
    case WindowKind::biolek: return "biolek";
    case WindowKind::strukov: return "strukov";
    case WindowKind::none: return "none";
    }
    return "none";
}

void WindowSpec::validate() const
{
    if (p < 1) {
        throw ConfigError("window: p >= 1");
    }
    if (!(j > 0.0 && j <= 1.0)) {
        throw ConfigError("window: 0 < j <= 1");
    }
}

double window_value(const WindowSpec& spec, double w, double d, double i)
{
    const double x = std::clamp(w / d, 0.0, 1.0);
    const double j = spec.j;
    switch (spec.kind) {
    case WindowKind::zha: {
        const double s = x - stp(-i);
        return j * (1.0 - ipow(0.25 * s * s + 0.75, spec.p));
    }
    case WindowKind::joglekar:
        return j * (1.0 - ipow(2.0 * x - 1.0, 2 * spec.p));
    case WindowKind::prodromakis: {
        const double s = x - 0.5;
        return j * (1.0 - ipow(s * s + 0.75, spec.p));
    }
    case WindowKind::biolek:
        return j * (1.0 - ipow(x - stp(-i), 2 * spec.p));
    case WindowKind::strukov:
        return j * x * (1.0 - x);
    case WindowKind::none:
        return j;
    }
    return 0.0;
}

void MemristorParams::validate() const
{
    if (!(r_on > 0.0 && r_on < r_off)) {
        throw ConfigError("device: 0 < r_on < r_off");
    }
    if (!(d > 0.0)) throw ConfigError("device: d > 0");
    if (!(mu_v > 0.0)) throw ConfigError("device: mu_v > 0");
    if (!(a0 > 0.0)) throw ConfigError("device: a0 > 0");
    if (!(i0 > 0.0)) throw ConfigError("device: i0 > 0");
    if (q < 1) throw ConfigError("device: q >= 1 and integral");
    window.validate();
}

MemristorParams linear_drift_params(MemristorParams base)
{
    base.q = 1;
    base.a0 = base.i0;
    return base;
}

double memristance(const MemristorParams& params, const MemristorState& state)
{
    const double x = state.w / params.d;
    return params.r_on * x + params.r_off * (1.0 - x);
}

double joule_g(const MemristorParams& params, double i)
{
    return params.a0 * ipow(i / params.i0, 2 * params.q - 1);
}

double dwdt(const MemristorParams& params, const MemristorState& state, double i)
{
    const double drive = state.orientation * i;
    return state.orientation * params.mu_v * (params.r_on / params.d) * joule_g(params, i)
           * window_value(params.window, state.w, params.d, drive);
}

StepResult step_voltage(const MemristorParams& params, const MemristorState& state, double v,
                        double dt, Integrator integrator)
{
    check_drive(v, dt);
    StepResult out{state, v / memristance(params, state)};
    if (v == 0.0) {
        return out;
    }
    const auto rate = [&](double w) {
        const MemristorState s{w, state.orientation};
        return dwdt(params, s, v / memristance(params, s));
    };
    out.state.w = integrate_state(state.w, dt, 0.0, params.d, integrator, rate);
    return out;
}

void VteamParams::validate() const
{
    if (!(v_on < 0.0 && 0.0 < v_off)) throw ConfigError("vteam: v_on < 0 < v_off");
    if (!(k_on < 0.0 && 0.0 < k_off)) throw ConfigError("vteam: k_on < 0 < k_off");
    if (!(alpha_on > 0.0 && alpha_off > 0.0)) throw ConfigError("vteam: alpha_on, alpha_off > 0");
    if (!(w_on < w_off)) throw ConfigError("vteam: w_on < w_off");
    if (!(r_on > 0.0 && r_on < r_off)) throw ConfigError("vteam: 0 < r_on < r_off");
    window.validate();
}

double vteam_resistance(const VteamParams& params, const MemristorState& state)
{
    const double x = (state.w - params.w_on) / (params.w_off - params.w_on);
    return params.r_on + (params.r_off - params.r_on) * x;
}

double vteam_dwdt(const VteamParams& params, const MemristorState& state, double v)
{
    const double native = state.orientation * v;
    const double span = params.w_off - params.w_on;
    const double offset = state.w - params.w_on;
    if (native > params.v_off) {
        return params.k_off * std::pow(native / params.v_off - 1.0, params.alpha_off)
               * window_value(params.window, offset, span, 1.0);
    }
    if (native < params.v_on) {
        return params.k_on * std::pow(native / params.v_on - 1.0, params.alpha_on)
               * window_value(params.window, offset, span, -1.0);
    }
    return 0.0;
}

StepResult vteam_step(const VteamParams& params, const MemristorState& state, double v, double dt,
                      Integrator integrator)
{
    check_drive(v, dt);
    StepResult out{state, v / vteam_resistance(params, state)};
    if (vteam_dwdt(params, state, v) == 0.0) {
        // Sub-threshold: the state is left bit-for-bit untouched.
        return out;
    }
    const auto rate = [&](double w) {
        return vteam_dwdt(params, MemristorState{w, state.orientation}, v);
    };
    out.state.w = integrate_state(state.w, dt, params.w_on, params.w_off, integrator, rate);
    return out;
}

double resistance(const DeviceModel& model, const MemristorState& state)
{
    return std::visit(
        [&](const auto& p) {
            if constexpr (std::is_same_v<std::decay_t<decltype(p)>, MemristorParams>) {
                return memristance(p, state);
            } else {
                return vteam_resistance(p, state);
            }
        },
        model);
}

StepResult step(const DeviceModel& model, const MemristorState& state, double v, double dt)
{
    return std::visit(
        [&](const auto& p) {
            if constexpr (std::is_same_v<std::decay_t<decltype(p)>, MemristorParams>) {
                return step_voltage(p, state, v, dt);
            } else {
                return vteam_step(p, state, v, dt);
            }
        },
        model);
}

double drift_rate(const DeviceModel& model, const MemristorState& state, double i)
{
    if (const auto* p = std::get_if<MemristorParams>(&model)) {
        return dwdt(*p, state, i);
    }
    const auto& p = std::get<VteamParams>(model);
    return vteam_dwdt(p, state, i * vteam_resistance(p, state));
}

double device_w_min(const DeviceModel& model)
{
    if (std::holds_alternative<MemristorParams>(model)) {
        return 0.0;
    }
    return std::get<VteamParams>(model).w_on;
}

double device_w_max(const DeviceModel& model)
{
    if (const auto* p = std::get_if<MemristorParams>(&model)) {
        return p->d;
    }
    return std::get<VteamParams>(model).w_off;
}

double device_r_on(const DeviceModel& model)
{
    return std::visit([](const auto& p) { return p.r_on; }, model);
}

double device_r_off(const DeviceModel& model)
{
    return std::visit([](const auto& p) { return p.r_off; }, model);
}

MemristorState on_bound_state(const DeviceModel& model, int orientation)
{
    if (const auto* p = std::get_if<MemristorParams>(&model)) {
        return {p->d, orientation};
    }
    return {std::get<VteamParams>(model).w_on, orientation};
}

MemristorState off_bound_state(const DeviceModel& model, int orientation)
{
    if (std::holds_alternative<MemristorParams>(model)) {
        return {0.0, orientation};
    }
    return {std::get<VteamParams>(model).w_off, orientation};
}

int toward_on_orientation(const DeviceModel& model)
{
    return std::holds_alternative<MemristorParams>(model) ? 1 : -1;
}

double SineDrive::operator()(double t) const
{
    return amplitude * std::sin(2.0 * M_PI * frequency * t + phase);
}

std::vector<SweepSample> hysteresis_sweep(const DeviceModel& model, MemristorState initial,
                                          const SineDrive& drive, double duration, double dt,
                                          double sample_interval)
{
    if (!(dt > 0.0) || !(duration >= 0.0)) {
        throw SimulationFault("hysteresis sweep requires dt > 0 and duration >= 0");
    }
    const double ratio = sample_interval / dt;
    const auto steps_per_sample = static_cast<long>(std::llround(ratio));
    if (steps_per_sample < 1 || std::abs(ratio - steps_per_sample) > 1e-6 * ratio) {
        throw ConfigError("hysteresis sweep: dt must divide the sampling interval");
    }
    const auto n_samples = static_cast<long>(std::llround(duration / sample_interval));

    std::vector<SweepSample> out;
    out.reserve(static_cast<std::size_t>(n_samples) + 1);
    MemristorState state = initial;
    const auto record = [&](long step_index) {
        const double t = step_index * dt;
        const double v = drive(t);
        const double r = resistance(model, state);
        out.push_back({t, v, v / r, state.w, r});
    };

    long step_index = 0;
    record(step_index);
    for (long s = 0; s < n_samples; ++s) {
        for (long k = 0; k < steps_per_sample; ++k, ++step_index) {
            // Voltage held at its mid-step value.
            const double v = drive((step_index + 0.5) * dt);
            state = step(model, state, v, dt).state;
        }
        record(step_index);
    }
    return out;
}

} // namespace memsnn
