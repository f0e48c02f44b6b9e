#include "memsnn/device.hpp"
#include "memsnn/errors.hpp"
#include "memsnn/experiments.hpp"

#include "doctest.h"

#include <cmath>
#include <cstring>
#include <random>

using namespace memsnn;

namespace {

const MemristorParams kDevice{};

bool same_bits(const MemristorState& a, const MemristorState& b)
{
    return std::memcmp(&a.w, &b.w, sizeof a.w) == 0 && a.orientation == b.orientation;
}

// Integrate one device under a constant voltage for `duration`.
double run_constant(const MemristorParams& p, double w0, double v, double duration, double dt,
                    Integrator integrator)
{
    MemristorState s{w0, 1};
    const long n = std::lround(duration / dt);
    for (long k = 0; k < n; ++k) s = step_voltage(p, s, v, dt, integrator).state;
    return s.w;
}

} // namespace

TEST_CASE("memristance interpolates between the bounds")
{
    CHECK(memristance(kDevice, {0.0, 1}) == doctest::Approx(16000.0));
    CHECK(memristance(kDevice, {kDevice.d, 1}) == doctest::Approx(100.0));
    CHECK(memristance(kDevice, {0.5 * kDevice.d, 1}) == doctest::Approx(8050.0));
}

TEST_CASE("joule function values and oddness")
{
    CHECK(joule_g(kDevice, 0.0) == 0.0);
    CHECK(joule_g(kDevice, 1.0e-3) == doctest::Approx(40.0));
    CHECK(joule_g(kDevice, -2.0e-3) == doctest::Approx(-1280.0));

    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(-5e-3, 5e-3);
    for (int k = 0; k < 1000; ++k) {
        const double i = u(rng);
        REQUIRE(joule_g(kDevice, -i) == -joule_g(kDevice, i));
    }
}

TEST_CASE("window functions stop motion at the boundary being approached")
{
    const double d = kDevice.d;
    WindowSpec zha{WindowKind::zha, 10, 1.0};
    CHECK(window_value(zha, d, d, 1e-3) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(window_value(zha, 0.0, d, -1e-3) == doctest::Approx(0.0).epsilon(1e-12));
    // Leaving a boundary is not blocked.
    CHECK(window_value(zha, d, d, -1e-3) > 0.9);
    CHECK(window_value(zha, 0.0, d, 1e-3) > 0.9);

    WindowSpec biolek{WindowKind::biolek, 2, 1.0};
    CHECK(window_value(biolek, d, d, 1e-3) == doctest::Approx(0.0));
    CHECK(window_value(biolek, 0.0, d, -1e-3) == doctest::Approx(0.0));

    WindowSpec joglekar{WindowKind::joglekar, 10, 1.0};
    CHECK(window_value(joglekar, 0.5 * d, d, 1e-3) == 1.0);
    CHECK(window_value(joglekar, 0.0, d, 1e-3) == doctest::Approx(0.0));

    WindowSpec strukov{WindowKind::strukov, 1, 1.0};
    CHECK(window_value(strukov, 0.0, d, 1.0) == 0.0);
    CHECK(window_value(strukov, d, d, 1.0) == 0.0);
    CHECK(window_value(strukov, 0.5 * d, d, 1.0) == doctest::Approx(0.25));
}

TEST_CASE("every window stays within [0, j]")
{
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    for (WindowKind kind : {WindowKind::zha, WindowKind::joglekar, WindowKind::prodromakis,
                            WindowKind::biolek, WindowKind::strukov, WindowKind::none}) {
        for (int p : {1, 2, 10}) {
            for (double j : {0.3, 1.0}) {
                const WindowSpec spec{kind, p, j};
                for (int k = 0; k < 200; ++k) {
                    const double f = window_value(spec, u01(rng) * 1e-8, 1e-8, u01(rng) - 0.5);
                    REQUIRE(f >= 0.0);
                    REQUIRE(f <= j + 1e-15);
                }
            }
        }
    }
}

TEST_CASE("drift rate at mid-film matches direct evaluation")
{
    // Zha window at x = 1/2 with forward current: 1 - (0.25 * 0.25 + 0.75)^10.
    const double f = 1.0 - std::pow(0.8125, 10);
    const double expected = 1e-14 * (100.0 / 1e-8) * 40.0 * f;
    CHECK(dwdt(kDevice, {0.5e-8, 1}, 1e-3) == doctest::Approx(expected).epsilon(1e-12));
    CHECK(dwdt(kDevice, {0.5e-8, -1}, 1e-3) == doctest::Approx(-expected).epsilon(1e-12));
    CHECK(dwdt(kDevice, {0.3e-8, 1}, 0.0) == 0.0);
}

TEST_CASE("switching rate follows a power law of exponent 2q - 1")
{
    const MemristorState mid{0.5 * kDevice.d, 1};
    for (int q : {1, 2, 3, 4}) {
        MemristorParams p = kDevice;
        p.q = q;
        double i = 1e-4;
        while (i < 1e-2) {
            const double i2 = i * 1.5;
            const double slope = std::log(dwdt(p, mid, i2) / dwdt(p, mid, i)) / std::log(1.5);
            REQUIRE(slope == doctest::Approx(2 * q - 1).epsilon(0.01));
            i = i2;
        }
    }
}

TEST_CASE("weak signals still move the state")
{
    for (double i : {1e-9, -1e-9, 1e-6, -3e-5}) {
        for (int o : {1, -1}) {
            const double rate = dwdt(kDevice, {0.4e-8, o}, i);
            REQUIRE(rate != 0.0);
            REQUIRE((rate > 0) == (o * i > 0));
        }
    }
}

TEST_CASE("step_voltage edge cases")
{
    const MemristorState s{3e-9, 1};
    const StepResult r = step_voltage(kDevice, s, 0.0, 1e-5);
    CHECK(same_bits(r.state, s));
    CHECK(r.current == 0.0);

    const StepResult r2 = step_voltage(kDevice, s, 1.0, 1e-5);
    CHECK(r2.current == doctest::Approx(1.0 / memristance(kDevice, s)));

    CHECK_THROWS_AS(step_voltage(kDevice, s, std::nan(""), 1e-5), SimulationFault);
    CHECK_THROWS_AS(step_voltage(kDevice, s, INFINITY, 1e-5), SimulationFault);
    CHECK_THROWS_AS(step_voltage(kDevice, s, 1.0, 0.0), SimulationFault);
    CHECK_THROWS_AS(step_voltage(kDevice, s, 1.0, -1e-5), SimulationFault);
}

TEST_CASE("state never leaves [0, D] under random drives")
{
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> volts(-6.0, 6.0);
    std::uniform_real_distribution<double> dts(1e-6, 2e-3);
    for (WindowKind kind : {WindowKind::zha, WindowKind::none, WindowKind::strukov}) {
        MemristorParams p = kDevice;
        p.window.kind = kind;
        for (int run = 0; run < 50; ++run) {
            MemristorState s{std::uniform_real_distribution<double>(0.0, p.d)(rng), run % 2 ? 1 : -1};
            for (int k = 0; k < 200; ++k) {
                s = step_voltage(p, s, volts(rng), dts(rng)).state;
                REQUIRE(s.w >= 0.0);
                REQUIRE(s.w <= p.d);
            }
        }
    }
}

TEST_CASE("integrator error shrinks at the expected order")
{
    const double w0 = 2e-9;
    const double v = 1.0;
    const double duration = 0.05;
    const double ref = run_constant(kDevice, w0, v, duration, 1e-6, Integrator::rk4);
    REQUIRE(std::abs(ref - w0) > 0.05 * kDevice.d);

    const double e1 = std::abs(run_constant(kDevice, w0, v, duration, 1e-3, Integrator::euler) - ref);
    const double e2 = std::abs(run_constant(kDevice, w0, v, duration, 5e-4, Integrator::euler) - ref);
    CHECK(e1 / e2 == doctest::Approx(2.0).epsilon(0.15));

    const double r1 = std::abs(run_constant(kDevice, w0, v, duration, 1e-2, Integrator::rk4) - ref);
    const double r2 = std::abs(run_constant(kDevice, w0, v, duration, 5e-3, Integrator::rk4) - ref);
    CHECK(r1 / r2 == doctest::Approx(16.0).epsilon(0.25));
}

TEST_CASE("parameter validation")
{
    MemristorParams p = kDevice;
    p.r_on = 20000.0;
    CHECK_THROWS_WITH_AS(p.validate(), doctest::Contains("0 < r_on < r_off"), ConfigError);
    p = kDevice;
    p.q = 0;
    CHECK_THROWS_AS(p.validate(), ConfigError);
    p = kDevice;
    p.window.j = 1.5;
    CHECK_THROWS_AS(p.validate(), ConfigError);
    CHECK_THROWS_AS(parse_window_kind("hann"), ConfigError);
    CHECK(parse_window_kind("prodromakis") == WindowKind::prodromakis);
}

TEST_CASE("linear drift model is the q = 1 special case")
{
    const MemristorParams lin = linear_drift_params();
    CHECK(joule_g(lin, 2.5e-3) == doctest::Approx(2.5e-3));
    CHECK(dwdt(lin, {0.5e-8, 1}, 1e-3) / dwdt(lin, {0.5e-8, 1}, 2e-3) == doctest::Approx(0.5));
}

TEST_CASE("vteam dead zone leaves the state bit-for-bit unchanged")
{
    const VteamParams p{};
    const MemristorState s0{1.234e-9, 1};
    MemristorState s = s0;
    for (int k = 0; k < 10000; ++k) {
        s = vteam_step(p, s, (k % 2 ? 0.69 : -0.69), 1e-6).state;
    }
    CHECK(same_bits(s, s0));
    CHECK(vteam_dwdt(p, s0, 0.5 * p.v_off) == 0.0);
}

TEST_CASE("vteam moves toward the off bound above v_off and toward on below v_on")
{
    const VteamParams p{};
    const MemristorState s0{1.5e-9, 1};
    CHECK(vteam_step(p, s0, 2.0 * p.v_off, 1e-6).state.w > s0.w);
    CHECK(vteam_step(p, s0, 2.0 * p.v_on, 1e-6).state.w < s0.w);
    CHECK(vteam_resistance(p, {p.w_on, 1}) == doctest::Approx(p.r_on));
    CHECK(vteam_resistance(p, {p.w_off, 1}) == doctest::Approx(p.r_off));

    VteamParams bad = p;
    bad.k_on = 1e-7;
    CHECK_THROWS_AS(bad.validate(), ConfigError);
}

TEST_CASE("vteam hysteresis loop at 1 kHz encloses area")
{
    const VteamParams p{};
    const auto samples = hysteresis_sweep(p, {1.5e-9, 1}, {2.5, 1000.0, 0.0}, 3e-3, 1e-7, 1e-6);
    const HysteresisSummary s = summarize_sweep(samples, 1e-3, p.r_on, p.r_off);
    CHECK(s.loop_area > 0.0);
    CHECK(s.max_abs_i_at_zero_v < 1e-9);
}

TEST_CASE("hysteresis sweep: zero drive, pinch and determinism")
{
    const auto flat = hysteresis_sweep(kDevice, {5e-9, 1}, {0.0, 10.0, 0.0}, 0.1, 1e-5, 1e-3);
    for (const SweepSample& s : flat) {
        REQUIRE(s.w == 5e-9);
        REQUIRE(s.i == 0.0);
    }

    const SineDrive drive{1.0, 10.0, 0.0};
    const auto a = hysteresis_sweep(kDevice, {5e-9, 1}, drive, 0.2, 1e-5, 1e-4);
    const auto b = hysteresis_sweep(kDevice, {5e-9, 1}, drive, 0.2, 1e-5, 1e-4);
    REQUIRE(a.size() == b.size());
    for (std::size_t k = 0; k < a.size(); ++k) {
        REQUIRE(std::memcmp(&a[k], &b[k], sizeof a[k]) == 0);
    }
    const HysteresisSummary s = summarize_sweep(a, 0.1, kDevice.r_on, kDevice.r_off);
    CHECK(s.max_abs_i_at_zero_v < 1e-6);
    CHECK(s.loop_area > 0.0);

    // The current peak is not tied to the voltage peak.
    std::size_t imax = 0, vmax = 0;
    for (std::size_t k = 0; k < a.size(); ++k) {
        if (std::abs(a[k].i) > std::abs(a[imax].i)) imax = k;
        if (std::abs(a[k].v) > std::abs(a[vmax].v)) vmax = k;
    }
    CHECK(imax != vmax);

    CHECK_THROWS_AS(hysteresis_sweep(kDevice, {5e-9, 1}, drive, 0.2, 3e-5, 1e-4), ConfigError);
}

TEST_CASE("halving dt changes sampled states by under 0.1% of D")
{
    const SineDrive drive{1.0, 10.0, 0.0};
    const auto a = hysteresis_sweep(kDevice, {5e-9, 1}, drive, 0.2, 1e-5, 1e-3);
    const auto b = hysteresis_sweep(kDevice, {5e-9, 1}, drive, 0.2, 5e-6, 1e-3);
    REQUIRE(a.size() == b.size());
    for (std::size_t k = 0; k < a.size(); ++k) {
        REQUIRE(std::abs(a[k].w - b[k].w) < 1e-3 * kDevice.d);
    }
}
