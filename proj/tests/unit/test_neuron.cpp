#include "memsnn/errors.hpp"
#include "memsnn/neuron.hpp"

#include "doctest.h"

#include <cmath>
#include <random>

using namespace memsnn;

namespace {

LifState run(const LifParams& p, LifState s, double v_in, double duration, double dt)
{
    const long n = std::lround(duration / dt);
    const double in[] = {v_in};
    for (long k = 0; k < n; ++k) s = integrate(p, s, in, dt);
    return s;
}

} // namespace

TEST_CASE("integrator matches the closed-form RC response")
{
    const LifParams p{};
    const double tau = p.r_ref * p.c;
    const double v_in = 1.0;
    const double t = 10e-3;
    const double expected = -(p.r_ref / p.r_in[0]) * v_in * (1.0 - std::exp(-t / tau));
    const LifState s = run(p, LifState{}, v_in, t, 1e-5);
    CHECK(s.v_mp == doctest::Approx(expected).epsilon(1e-3));
    // Without the leak it would be -v t / (R_in C) = -0.1 V.
    CHECK(s.v_mp == doctest::Approx(-0.1).epsilon(0.01));
    CHECK(std::abs(s.v_mp) < 0.1);
}

TEST_CASE("leak decays by 1/e per time constant and never changes sign")
{
    const LifParams p{};
    LifState s;
    s.v_mp = -0.3;
    const double in[] = {0.0};
    for (int k = 0; k < 90000; ++k) {
        s = integrate(p, s, in, 1e-5);
        REQUIRE(s.v_mp < 0.0);
    }
    CHECK(s.v_mp == doctest::Approx(-0.3 / std::exp(1.0)).epsilon(1e-6));

    LifState zero;
    CHECK(run(p, zero, 0.0, 1.0, 1e-3).v_mp == 0.0);
}

TEST_CASE("integrator rejects bad inputs")
{
    const LifParams p{};
    const double two[] = {1.0, 1.0};
    CHECK_THROWS_AS(integrate(p, LifState{}, two, 1e-5), SimulationFault);
    const double bad[] = {NAN};
    CHECK_THROWS_AS(integrate(p, LifState{}, bad, 1e-5), SimulationFault);
    const double ok[] = {1.0};
    CHECK_THROWS_AS(integrate(p, LifState{}, ok, 0.0), SimulationFault);
}

TEST_CASE("comparator threshold is inclusive")
{
    const LifParams p{};
    LifState s;
    CHECK_FALSE(comparator(p, s));
    s.v_mp = -0.45;
    CHECK(comparator(p, s));
    s.v_mp = -0.46;
    CHECK(comparator(p, s));
    s.v_mp = -0.4499;
    CHECK_FALSE(comparator(p, s));
}

TEST_CASE("trigger fires synchronously, once per load")
{
    const LifParams p{};
    LifState s;
    s.v_mp = -0.5;

    TriggerResult r = trigger_tick(p, s, true, false);
    CHECK_FALSE(r.fired);
    CHECK(r.state.q1);
    r = trigger_tick(p, r.state, true, false);
    CHECK_FALSE(r.fired);

    r = trigger_tick(p, r.state, true, true);
    CHECK(r.fired);
    CHECK(r.state.q2);
    CHECK_FALSE(r.state.q1);
    CHECK(r.state.v_mp == 0.0);

    // While firing, the membrane is held at zero.
    const double in[] = {2.0};
    CHECK(integrate(p, r.state, in, 1e-3).v_mp == 0.0);

    // Next edge: the spike ends, nothing is loaded, no second fire.
    r = trigger_tick(p, r.state, false, true);
    CHECK_FALSE(r.fired);
    CHECK_FALSE(r.state.q2);
}

TEST_CASE("trigger at an edge without a load does nothing")
{
    const LifParams p{};
    const LifState s;
    const TriggerResult r = trigger_tick(p, s, false, true);
    CHECK_FALSE(r.fired);
    CHECK(r.state.v_mp == s.v_mp);
    CHECK_FALSE(r.state.q1);
    CHECK_FALSE(r.state.q2);
}

TEST_CASE("disabled neurons never fire")
{
    const LifParams p{};
    LifState s;
    s.enabled = false;
    s.v_mp = -5.0;
    s = force_load(s);
    CHECK_FALSE(s.q1);
    for (int k = 0; k < 30; ++k) {
        const TriggerResult r = trigger_tick(p, s, comparator(p, s), k % 3 == 0);
        REQUIRE_FALSE(r.fired);
        REQUIRE_FALSE(r.state.q2);
        s = r.state;
    }
}

TEST_CASE("sub-threshold input never fires")
{
    const LifParams p{};
    LifState s;
    // Steady state -R_ref/R_in * 0.04 = -0.36 V stays above -0.45 V.
    const double in[] = {0.04};
    long fires = 0;
    for (long k = 0; k < 500000; ++k) {
        s = integrate(p, s, in, 1e-4);
        const TriggerResult r = trigger_tick(p, s, comparator(p, s), k % 300 == 0);
        fires += r.fired;
        s = r.state;
    }
    CHECK(fires == 0);
    CHECK(s.v_mp == doctest::Approx(-0.36).epsilon(1e-6));
}

TEST_CASE("fires only on frame edges")
{
    const LifParams p{};
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> u(0.0, 3.0);
    LifState s;
    for (long k = 0; k < 100000; ++k) {
        const double in[] = {u(rng)};
        s = integrate(p, s, in, 1e-4);
        const bool edge = k % 300 == 0;
        const TriggerResult r = trigger_tick(p, s, comparator(p, s), edge);
        if (r.fired) {
            REQUIRE(edge);
            REQUIRE(r.state.v_mp == 0.0);
        }
        s = r.state;
    }
}

TEST_CASE("lif parameter validation")
{
    LifParams p;
    p.v_th = 0.1;
    CHECK_THROWS_AS(p.validate(), ConfigError);
    p = LifParams{};
    p.r_in = {1e5, -1.0};
    CHECK_THROWS_AS(p.validate(), ConfigError);
    p = LifParams{};
    CHECK(p.tau() == doctest::Approx(0.9));
}
