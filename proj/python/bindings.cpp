#include "memsnn/config.hpp"
#include "memsnn/errors.hpp"
#include "memsnn/experiments.hpp"
#include "memsnn/manifest.hpp"
#include "memsnn/network.hpp"

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace memsnn;

namespace {

Config make_config(const std::string& text, const std::vector<std::string>& overrides)
{
    return parse_config(text, overrides);
}

py::dict pattern_dict(const PatternResult& r)
{
    py::dict d;
    d["weights"] = r.sim.weights;
    d["initial_weights"] = r.initial_weights;
    d["first_fire_epoch"] = r.first_fire_epoch < 0 ? py::object(py::none()) : py::int_(r.first_fire_epoch + 1);
    d["epochs_to_stability"] =
        r.epochs_to_stability < 0 ? py::object(py::none()) : py::int_(r.epochs_to_stability);
    std::vector<long> fires;
    for (const PostFire& f : r.sim.post_fires) fires.push_back(f.frame);
    d["post_fire_frames"] = fires;
    d["protocol_ok"] = r.sim.protocol_ok;
    return d;
}

std::vector<std::pair<long, double>> window_pairs(const std::vector<WindowPoint>& w)
{
    std::vector<std::pair<long, double>> out;
    for (const WindowPoint& p : w) out.emplace_back(p.dt_frames, p.dpsi);
    return out;
}

NetworkConfig with_polarity(NetworkConfig c, const std::string& polarity)
{
    const Polarity p = parse_polarity(polarity);
    c.synapse.polarity = p;
    for (Connection& k : c.topology) k.polarity = p;
    return c;
}

} // namespace

PYBIND11_MODULE(_core, m)
{
    m.doc() = "Memristive spiking neural network simulator";
    m.attr("__version__") = std::string(code_version());

    py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
    py::register_exception<SimulationFault>(m, "SimulationFault", PyExc_RuntimeError);

    py::class_<Config>(m, "Config")
        .def(py::init(&make_config), py::arg("text") = "", py::arg("overrides") = std::vector<std::string>{})
        .def_static("load", [](const std::string& path, const std::vector<std::string>& overrides) {
            return load_config(path, overrides);
        }, py::arg("path"), py::arg("overrides") = std::vector<std::string>{})
        .def("to_ini", [](const Config& c) { return to_ini(c); })
        .def_readonly("dt", &Config::dt)
        .def_readonly("base_freq", &Config::base_freq)
        .def_readonly("gain_a", &Config::gain_a)
        .def("__repr__", [](const Config& c) { return "<memsnn.Config dt=" + std::to_string(c.dt) + ">"; });

    m.def("experiments", [] {
        std::vector<std::string> names;
        for (Experiment e : all_experiments()) names.emplace_back(to_string(e));
        return names;
    });

    m.def("run_experiment", [](const std::string& name, const std::string& out_dir, const Config& config, bool plots) {
        ExperimentSpec spec{parse_experiment(name), out_dir, plots};
        ExperimentOutput out;
        {
            py::gil_scoped_release release;
            out = run_experiment(spec, config);
        }
        std::vector<std::string> files;
        for (const auto& f : out.files) files.push_back(f.string());
        return std::make_pair(files, out.results.dump());
    }, py::arg("name"), py::arg("out_dir"), py::arg("config") = Config{}, py::arg("plots") = false);

    m.def("switch_rate", [](const Config& c) {
        const SwitchRateResult r = switch_rate(c.device, c.switch_rate);
        std::vector<std::pair<double, double>> pts;
        for (const RatePoint& p : r.points) pts.emplace_back(p.i, p.dwdt);
        return std::make_pair(pts, r.slope);
    }, py::arg("config") = Config{});

    m.def("calibration", [](const Config& c) {
        const CalibrationResult r = weak_strong_calibration(c.synapse(), c.calibration, c.dt);
        py::dict d;
        d["strong"] = r.strong;
        d["weak"] = r.weak;
        d["ratio"] = r.ratio;
        return d;
    }, py::arg("config") = Config{});

    m.def("bridge_weight", [](const std::string& polarity, double r1, double r2, double gain_a,
                              const std::array<double, 4>& m) {
        return bridge_weight(parse_polarity(polarity), r1, r2, gain_a, m);
    }, py::arg("polarity"), py::arg("r1"), py::arg("r2"), py::arg("gain_a"), py::arg("memristances"));

    m.def("stdp_window", [](const Config& c, long min_offset, long max_offset, const std::string& polarity,
                            bool vteam) {
        const NetworkConfig net = with_polarity(vteam ? c.vteam_network() : c.network(), polarity);
        py::gil_scoped_release release;
        return window_pairs(stdp_window(net, min_offset, max_offset));
    }, py::arg("config") = Config{}, py::arg("min_offset") = -6, py::arg("max_offset") = 6,
       py::arg("polarity") = "excitatory", py::arg("vteam") = false);

    m.def("pattern_learning", [](const Config& c, const std::string& init, long epochs) {
        PatternSetup setup = c.pattern.setup;
        if (epochs > 0) setup.n_epochs = epochs;
        const PatternInit how = parse_pattern_init(init);
        PatternResult r;
        {
            py::gil_scoped_release release;
            r = pattern_learning(c.network(), setup, how);
        }
        return pattern_dict(r);
    }, py::arg("config") = Config{}, py::arg("init") = "zero", py::arg("epochs") = 0);

    m.def("epochs_to_stability", [](const std::vector<std::vector<double>>& w, std::size_t window, double tol) {
        const long e = epochs_to_stability(w, window, tol);
        return e < 0 ? py::object(py::none()) : py::int_(e);
    }, py::arg("weights"), py::arg("window") = 20, py::arg("tolerance") = 0.005);
}
