#include "memsnn/config.hpp"
#include "memsnn/errors.hpp"

#include "doctest.h"

#include <filesystem>
#include <fstream>

using namespace memsnn;

TEST_CASE("an empty file yields the defaults")
{
    const Config c = parse_config("");
    const Config d;
    CHECK(c.device.r_on == d.device.r_on);
    CHECK(c.device.r_off == d.device.r_off);
    CHECK(c.device.q == 3);
    CHECK(c.device.window.kind == WindowKind::zha);
    CHECK(c.gain_a == d.gain_a);
    CHECK(c.dt == 10.0e-6);
    CHECK(c.base_freq == 100.0);
    CHECK(c.pattern.setup.n_epochs == 300);
    CHECK(to_ini(c) == to_ini(d));
}

TEST_CASE("sections, comments and overrides")
{
    const Config c = parse_config("# device\n[device]\nq = 2\nwindow = biolek\n\n[lif]\nv_th = -0.5\n",
                                  {"device.q=4", "sim.dt=5e-6"});
    CHECK(c.device.q == 4);
    CHECK(c.device.window.kind == WindowKind::biolek);
    CHECK(c.lif.v_th == -0.5);
    CHECK(c.dt == 5e-6);
    CHECK(c.network().dt == 5e-6);
}

TEST_CASE("to_ini round-trips every value exactly")
{
    const Config c = parse_config("[device]\nmu_v = 1.2345678901234567e-14\n[pattern]\ninit = midpoint\n"
                                  "pattern_pres = 2 5 9\nnoise = 1:3 4:7\npattern_frame = 2\n");
    const Config again = parse_config(to_ini(c));
    CHECK(to_ini(again) == to_ini(c));
    CHECK(again.device.mu_v == c.device.mu_v);
    CHECK(again.pattern.init == PatternInit::midpoint);
}

TEST_CASE("pattern indices are 1-based in the file")
{
    const Config c = parse_config("[pattern]\npattern_pres = 1 9\nnoise = 2:3\npattern_frame = 1\n");
    CHECK(c.pattern.setup.pattern_pres == std::vector<std::size_t>{0, 8});
    REQUIRE(c.pattern.setup.noise.size() == 1);
    CHECK(c.pattern.setup.noise[0] == std::pair<std::size_t, long>{1, 2});
    CHECK(c.pattern.setup.pattern_frame == 0);
    CHECK_THROWS_AS(parse_config("[pattern]\npattern_pres = 0 3\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("[pattern]\npattern_frame = 0\n"), ConfigError);
}

TEST_CASE("config errors name the offending key")
{
    CHECK_THROWS_WITH_AS(parse_config("[device]\nr_on = 20000\n"), doctest::Contains("0 < r_on < r_off"),
                         ConfigError);
    CHECK_THROWS_WITH_AS(parse_config("[device]\nbogus = 1\n"), doctest::Contains("unknown key 'device.bogus'"),
                         ConfigError);
    CHECK_THROWS_WITH_AS(parse_config("[device]\nq =\n"), doctest::Contains("device.q has no value (default 3)"),
                         ConfigError);
    CHECK_THROWS_WITH_AS(parse_config("[device]\nq = 2.5\n"), doctest::Contains("device.q: expected"),
                         ConfigError);
    CHECK_THROWS_WITH_AS(parse_config("[lif]\nv_th = abc\n"), doctest::Contains("lif.v_th"), ConfigError);
    CHECK_THROWS_WITH_AS(parse_config("q = 2\n"), doctest::Contains("[section]"), ConfigError);
    CHECK_THROWS_AS(parse_config("", {"device.window=triangle"}), ConfigError);
    CHECK_THROWS_AS(parse_config("", {"nokey"}), ConfigError);
    CHECK_THROWS_AS(parse_config("", {"sim.dt=3e-5"}), ConfigError);
    CHECK_THROWS_AS(parse_config("", {"sim.dt=-1"}), ConfigError);
}

TEST_CASE("load_config reads files and reports missing ones")
{
    const auto path = std::filesystem::temp_directory_path() / "memsnn_test_config.ini";
    {
        std::ofstream f(path);
        f << "[synapse]\ngain_a = 1.3\n";
    }
    CHECK(load_config(path).gain_a == 1.3);
    CHECK(load_config(path, {"synapse.gain_a=1.2"}).gain_a == 1.2);
    std::filesystem::remove(path);
    CHECK_THROWS_AS(load_config(path), ConfigError);
}
