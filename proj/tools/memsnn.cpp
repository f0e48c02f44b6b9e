#include "memsnn/config.hpp"
#include "memsnn/errors.hpp"
#include "memsnn/experiments.hpp"
#include "memsnn/manifest.hpp"

#include "CLI11.hpp"

#include <iostream>
#include <optional>

namespace {

constexpr int kConfigError = 2;
constexpr int kSimulationFault = 3;

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Memristive spiking neural network simulator"};
    app.set_version_flag("--version", std::string(memsnn::code_version()));

    std::vector<std::string> names;
    for (memsnn::Experiment e : memsnn::all_experiments()) {
        names.emplace_back(memsnn::to_string(e));
    }

    std::string experiment;
    std::string config_path;
    std::string out_dir;
    std::vector<std::string> overrides;
    // Passed through verbatim so the config parser sees the exact text.
    std::optional<std::string> dt;
    std::optional<std::string> seed;
    std::optional<std::string> init;
    std::optional<std::string> epochs;
    bool plots = false;
    bool print_config = false;

    app.add_option("experiment", experiment, "Experiment to run")
        ->required()
        ->check(CLI::IsMember(names));
    app.add_option("--config", config_path, "INI configuration file")->check(CLI::ExistingFile);
    app.add_option("--out", out_dir, "Output directory (default: out/<experiment>)");
    app.add_option("--set", overrides, "Override a config key, e.g. --set device.q=2")
        ->allow_extra_args(false);
    app.add_option("--dt", dt, "Integration step in seconds (sim.dt)");
    app.add_option("--seed", seed, "Seed (sim.seed)");
    app.add_option("--init", init, "Pattern-learning initial weights (pattern.init)")
        ->check(CLI::IsMember({"zero", "midpoint"}));
    app.add_option("--epochs", epochs, "Pattern-learning epochs (pattern.epochs)");
    app.add_flag("--plot", plots, "Also write SVG plots next to the CSVs");
    app.add_flag("--print-config", print_config, "Print the resolved configuration and exit");

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kConfigError;
    }

    if (dt) overrides.push_back("sim.dt=" + *dt);
    if (seed) overrides.push_back("sim.seed=" + *seed);
    if (init) overrides.push_back("pattern.init=" + *init);
    if (epochs) overrides.push_back("pattern.epochs=" + *epochs);

    try {
        const memsnn::Config config = config_path.empty()
                                          ? memsnn::parse_config("", overrides)
                                          : memsnn::load_config(config_path, overrides);
        if (print_config) {
            std::cout << memsnn::to_ini(config);
            return 0;
        }
        memsnn::ExperimentSpec spec;
        spec.name = memsnn::parse_experiment(experiment);
        spec.out_dir = out_dir.empty() ? "out/" + experiment : out_dir;
        spec.plots = plots;

        const memsnn::ExperimentOutput out = memsnn::run_experiment(spec, config);
        for (const auto& f : out.files) {
            std::cout << f.string() << '\n';
        }
        std::cout << out.results.dump() << '\n';
    } catch (const memsnn::ConfigError& e) {
        std::cerr << "memsnn: config error: " << e.what() << '\n';
        return kConfigError;
    } catch (const memsnn::SimulationFault& e) {
        std::cerr << "memsnn: simulation fault: " << e.what() << '\n';
        return kSimulationFault;
    } catch (const std::exception& e) {
        std::cerr << "memsnn: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
