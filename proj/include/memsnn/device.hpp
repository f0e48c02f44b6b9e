#pragma once

#include <string_view>
#include <variant>
#include <vector>

namespace memsnn {

enum class WindowKind { zha, joglekar, prodromakis, biolek, strukov, none };

WindowKind parse_window_kind(std::string_view name);
std::string_view to_string(WindowKind kind);

/// Boundary window multiplying the drift rate. `p` is the integer control
/// exponent and `j` the scale, so every window takes values in [0, j].
struct WindowSpec {
    WindowKind kind = WindowKind::zha;
    int p = 10;
    double j = 1.0;

    void validate() const;
};

/// Window value at doping depth `w` of a film of thickness `d`. `i` only
/// matters through its sign: it selects the boundary the state is being
/// driven toward for the current-dependent windows (zha, biolek).
double window_value(const WindowSpec& spec, double w, double d, double i);

enum class Integrator { euler, rk4 };

/// Dopant-drift memristor with the odd power-law Joule function
/// g(i) = a0 (i/i0)^(2q-1). Defaults are the TiO2 device used throughout.
struct MemristorParams {
    double r_on = 100.0;
    double r_off = 16.0e3;
    double d = 10.0e-9;
    double mu_v = 1.0e-14;
    double a0 = 40.0;
    double i0 = 1.0e-3;
    int q = 3;
    WindowSpec window{};

    void validate() const;
};

/// Plain linear dopant drift: g(i) = i, i.e. q = 1 and a0 = i0.
MemristorParams linear_drift_params(MemristorParams base = {});

/// A single device state. `orientation` maps the sign of the terminal
/// current onto the sign of dw/dt.
struct MemristorState {
    double w = 0.0;
    int orientation = 1;
};

double memristance(const MemristorParams& params, const MemristorState& state);
double joule_g(const MemristorParams& params, double i);
double dwdt(const MemristorParams& params, const MemristorState& state, double i);

struct StepResult {
    MemristorState state;
    double current = 0.0;  ///< v / R at the start of the step
};

/// Advance one device by `dt` under a constant terminal voltage `v`.
/// The current is re-derived from R(w) at every integrator stage and w is
/// clamped to [0, d] afterwards.
StepResult step_voltage(const MemristorParams& params, const MemristorState& state,
                        double v, double dt, Integrator integrator = Integrator::rk4);

/// Voltage-controlled threshold memristor (VTEAM) with a linear R(w).
/// Positive voltage drives w toward w_off (the high resistance state).
struct VteamParams {
    double v_on = -0.7;
    double v_off = 0.7;
    double k_on = -1.0e-7;
    double k_off = 1.0e-7;
    double alpha_on = 3.0;
    double alpha_off = 3.0;
    double w_on = 0.0;
    double w_off = 3.0e-9;
    double r_on = 100.0;
    double r_off = 8.0e3;
    WindowSpec window{WindowKind::biolek, 2, 1.0};

    void validate() const;
};

double vteam_resistance(const VteamParams& params, const MemristorState& state);
double vteam_dwdt(const VteamParams& params, const MemristorState& state, double v);
StepResult vteam_step(const VteamParams& params, const MemristorState& state,
                      double v, double dt, Integrator integrator = Integrator::rk4);

using DeviceModel = std::variant<MemristorParams, VteamParams>;

double resistance(const DeviceModel& model, const MemristorState& state);
StepResult step(const DeviceModel& model, const MemristorState& state, double v, double dt);
/// dw/dt of a device carrying terminal current `i` (VTEAM sees i * R).
double drift_rate(const DeviceModel& model, const MemristorState& state, double i);
double device_w_min(const DeviceModel& model);
double device_w_max(const DeviceModel& model);
double device_r_on(const DeviceModel& model);
double device_r_off(const DeviceModel& model);

/// State of a device sitting at its R_ON or R_OFF bound.
MemristorState on_bound_state(const DeviceModel& model, int orientation);
MemristorState off_bound_state(const DeviceModel& model, int orientation);

/// Device-level orientation that makes a positive terminal current drive
/// the device toward R_ON. The two models use opposite native conventions.
int toward_on_orientation(const DeviceModel& model);

// ---------------------------------------------------------------------------
// Sweeps

struct SineDrive {
    double amplitude = 1.0;
    double frequency = 10.0;
    double phase = 0.0;

    double operator()(double t) const;
};

struct SweepSample {
    double t, v, i, w, r;
};

/// Time series of a single device under a sinusoidal drive, sampled every
/// `sample_interval` seconds (which must be a multiple of `dt`).
std::vector<SweepSample> hysteresis_sweep(const DeviceModel& model, MemristorState initial,
                                          const SineDrive& drive, double duration, double dt,
                                          double sample_interval);

} // namespace memsnn
