#include "memsnn/experiments.hpp"

#include "memsnn/csv.hpp"
#include "memsnn/errors.hpp"
#include "memsnn/manifest.hpp"
#include "memsnn/plot.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <unistd.h>

namespace memsnn {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Named {
    Experiment id;
    std::string_view name;
};

constexpr Named kExperiments[] = {
    {Experiment::hysteresis, "hysteresis"},
    {Experiment::switch_rate, "switch-rate"},
    {Experiment::synapse_pd, "synapse-pd"},
    {Experiment::weak_strong_calibration, "weak-strong-calibration"},
    {Experiment::stdp_window, "stdp-window"},
    {Experiment::stdp_window_vteam, "stdp-window-vteam"},
    {Experiment::pattern_learn, "pattern-learn"},
};

long steps_for(double duration, double dt)
{
    return std::lround(duration / dt);
}

/// Collects the CSVs an experiment writes and renders optional plots.
struct Sink {
    fs::path dir;
    bool plots = false;
    std::vector<fs::path> files;

    fs::path csv(const std::string& name)
    {
        files.push_back(dir / name);
        return files.back();
    }

    void plot(const std::string& csv_name, const PlotSpec& spec) const
    {
        if (!plots) return;
        const fs::path src = dir / csv_name;
        fs::path svg = src;
        svg.replace_extension(".svg");
        write_svg_plot(read_csv(src), spec, svg);
    }
};

json sweep_json(const HysteresisSummary& s)
{
    return {{"loop_area", s.loop_area},
            {"max_abs_i_at_zero_v", s.max_abs_i_at_zero_v},
            {"min_cycle_coverage", s.min_cycle_coverage},
            {"r_min", s.r_min},
            {"r_max", s.r_max}};
}

json write_sweep(Sink& sink, const std::string& name, const std::vector<SweepSample>& samples,
                 double period, double r_on, double r_off, const std::string& title)
{
    CsvWriter out(sink.csv(name), {"t", "v", "i", "w", "R"});
    for (const SweepSample& s : samples) {
        out.row({s.t, s.v, s.i, s.w, s.r});
    }
    out.close();
    sink.plot(name, {title, "v", {"i"}, "v (V)", "i (A)"});
    return sweep_json(summarize_sweep(samples, period, r_on, r_off));
}

json run_hysteresis(const Config& c, Sink& sink)
{
    const HysteresisSettings& h = c.hysteresis;
    const MemristorState start{h.w0, 1};
    json results;

    const SineDrive soft{h.soft_amplitude, h.soft_frequency, 0.0};
    results["soft"] = write_sweep(
        sink, "hysteresis_soft.csv",
        hysteresis_sweep(c.device, start, soft, h.soft_duration, c.dt, h.sample_interval),
        1.0 / h.soft_frequency, c.device.r_on, c.device.r_off, "Pinched hysteresis");

    const SineDrive hard{h.hard_amplitude, h.hard_frequency, 0.0};
    results["hard"] = write_sweep(
        sink, "hysteresis_hard.csv",
        hysteresis_sweep(c.device, start, hard, h.hard_duration, c.dt, h.sample_interval),
        1.0 / h.hard_frequency, c.device.r_on, c.device.r_off, "Hard switching");

    const SineDrive vdrive{h.vteam_amplitude, h.vteam_frequency, 0.0};
    const MemristorState vstart{0.5 * (c.vteam.w_on + c.vteam.w_off), 1};
    results["vteam"] = write_sweep(
        sink, "hysteresis_vteam.csv",
        hysteresis_sweep(c.vteam, vstart, vdrive, h.vteam_duration, h.vteam_dt,
                         h.vteam_sample_interval),
        1.0 / h.vteam_frequency, c.vteam.r_on, c.vteam.r_off, "VTEAM hysteresis");
    return results;
}

json run_switch_rate(const Config& c, Sink& sink)
{
    const SwitchRateResult r = switch_rate(c.device, c.switch_rate);
    CsvWriter out(sink.csv("switch_rate.csv"), {"i", "dwdt", "local_slope"});
    const std::size_t n = r.points.size();
    for (std::size_t k = 0; k < n; ++k) {
        const std::size_t a = k == 0 ? 0 : k - 1;
        const std::size_t b = k + 1 == n ? k : k + 1;
        const double slope = std::log(std::abs(r.points[b].dwdt) / std::abs(r.points[a].dwdt))
                             / std::log(r.points[b].i / r.points[a].i);
        out.row({r.points[k].i, r.points[k].dwdt, slope});
    }
    out.close();
    sink.plot("switch_rate.csv",
              {"Switching rate", "i", {"dwdt"}, "i (A)", "dw/dt (m/s)", true, true, true});
    return {{"slope", r.slope}, {"expected_slope", 2 * c.device.q - 1}};
}

json run_synapse_pd(const Config& c, Sink& sink)
{
    const std::vector<PdSample> samples = potentiation_depression(c.synapse(), c.synapse_pd, c.dt);
    CsvWriter out(sink.csv("synapse_pd.csv"), {"t", "M1", "M2", "M3", "M4", "psi"});
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (const PdSample& s : samples) {
        out.row({s.t, s.m[0], s.m[1], s.m[2], s.m[3], s.psi});
        lo = std::min(lo, s.psi);
        hi = std::max(hi, s.psi);
    }
    out.close();
    sink.plot("synapse_pd.csv",
              {"Potentiation and depression", "t", {"M1", "M2", "M3", "M4"}, "t (s)", "R (Ohm)"});
    return {{"psi_min", lo}, {"psi_max", hi}};
}

json run_calibration(const Config& c, Sink& sink)
{
    const CalibrationResult r = weak_strong_calibration(c.synapse(), c.calibration, c.dt);
    CsvWriter out(sink.csv("calibration.csv"),
                  {"amplitude", "width", "psi_before", "psi_after", "dpsi"});
    for (const CalibrationRow& row : r.rows) {
        out.row({row.amplitude, row.width, row.psi_before, row.psi_after, row.dpsi()});
    }
    return {{"dpsi_strong", r.strong}, {"dpsi_weak", r.weak}, {"ratio", r.ratio}};
}

json write_window(Sink& sink, const std::string& name, const std::vector<WindowPoint>& points,
                  const std::string& title)
{
    CsvWriter out(sink.csv(name), {"dt_frames", "dt_seconds", "dpsi"});
    json by_offset;
    for (const WindowPoint& p : points) {
        out.row({static_cast<double>(p.dt_frames), p.dt_seconds, p.dpsi});
        if (std::abs(p.dt_frames) <= 1) {
            by_offset[std::to_string(p.dt_frames)] = p.dpsi;
        }
    }
    out.close();
    PlotSpec spec{title, "dt_seconds", {"dpsi"}, "dt (s)", "dpsi"};
    spec.markers = true;
    sink.plot(name, spec);
    return by_offset;
}

json run_stdp(const NetworkConfig& base, long lo, long hi, double tail_taus, Sink& sink,
              const std::string& prefix, const std::string& title)
{
    StdpOptions opts;
    opts.tail_taus = tail_taus;
    json results;
    for (Polarity pol : {Polarity::excitatory, Polarity::inhibitory}) {
        NetworkConfig nc = base;
        nc.synapse.polarity = pol;
        nc.topology = {Connection{0, 0, pol}};
        const std::string tag(to_string(pol));
        results[tag] = write_window(sink, prefix + "_" + tag + ".csv", stdp_window(nc, lo, hi, opts),
                                    title + " (" + tag + ")");
    }
    return results;
}

json run_pattern(const Config& c, Sink& sink)
{
    const PatternSettings& ps = c.pattern;
    std::ofstream dump_stream;
    FrameDump dump;
    if (ps.frame_dump_synapse > 0) {
        dump_stream.open(sink.csv("frame_dump.csv"), std::ios::binary);
        dump = {&dump_stream, ps.frame_dump_synapse - 1};
    }
    const PatternResult r = pattern_learning(c.network(), ps.setup, ps.init, dump);
    dump_stream.close();

    std::vector<std::string> header{"epoch"};
    for (int k = 1; k <= 9; ++k) header.push_back("psi_" + std::to_string(k));
    {
        CsvWriter out(sink.csv("weights.csv"), header);
        for (std::size_t e = 0; e < r.sim.weights.size(); ++e) {
            std::vector<double> row{static_cast<double>(e + 1)};
            row.insert(row.end(), r.sim.weights[e].begin(), r.sim.weights[e].end());
            out.row(row);
        }
        out.close();
    }
    {
        CsvWriter post(sink.csv("post_log.csv"), {"frame", "t", "fired"});
        CsvWriter membrane(sink.csv("membrane.csv"), {"frame", "t", "v_mp_at_edge"});
        for (const NeuronEvent& ev : r.sim.neuron_events) {
            post.row({static_cast<double>(ev.frame), ev.t, ev.fired ? 1.0 : 0.0});
            membrane.row({static_cast<double>(ev.frame), ev.t, ev.v_mp_at_edge});
        }
    }
    sink.plot("weights.csv", {"Synaptic weights", "epoch",
                              std::vector<std::string>(header.begin() + 1, header.end()), "epoch",
                              "psi"});

    json results;
    results["init"] = ps.init == PatternInit::zero ? "zero" : "midpoint";
    results["initial_weight"] = r.initial_weights.empty() ? 0.0 : r.initial_weights.front();
    results["first_fire_epoch"] = r.first_fire_epoch < 0 ? json(nullptr) : json(r.first_fire_epoch + 1);
    results["epochs_to_stability"] = r.epochs_to_stability < 0 ? json(nullptr) : json(r.epochs_to_stability);
    results["post_fires"] = r.sim.post_fires.size();
    results["protocol_ok"] = r.sim.protocol_ok;
    results["final_weights"] = r.sim.weights.empty() ? std::vector<double>{} : r.sim.weights.back();
    return results;
}

fs::path staging_path(const fs::path& out_dir)
{
    fs::path p = out_dir;
    p += ".partial-" + std::to_string(::getpid());
    return p;
}

} // namespace

Experiment parse_experiment(std::string_view name)
{
    for (const Named& e : kExperiments) {
        if (e.name == name) return e.id;
    }
    std::string known;
    for (const Named& e : kExperiments) {
        known += known.empty() ? "" : ", ";
        known += e.name;
    }
    throw ConfigError("unknown experiment '" + std::string(name) + "' (known: " + known + ")");
}

std::string_view to_string(Experiment experiment)
{
    for (const Named& e : kExperiments) {
        if (e.id == experiment) return e.name;
    }
    return "?";
}

const std::vector<Experiment>& all_experiments()
{
    static const std::vector<Experiment> all = [] {
        std::vector<Experiment> v;
        for (const Named& e : kExperiments) v.push_back(e.id);
        return v;
    }();
    return all;
}

HysteresisSummary summarize_sweep(const std::vector<SweepSample>& samples, double period,
                                  double r_on, double r_off)
{
    HysteresisSummary out;
    if (samples.empty()) return out;

    out.r_min = out.r_max = samples.front().r;
    double lobe = 0.0;
    for (std::size_t k = 0; k + 1 < samples.size(); ++k) {
        const SweepSample& a = samples[k];
        const SweepSample& b = samples[k + 1];
        out.r_min = std::min(out.r_min, b.r);
        out.r_max = std::max(out.r_max, b.r);
        lobe += 0.5 * (a.i + b.i) * (b.v - a.v);
        if (a.v * b.v < 0.0 || (b.v == 0.0 && a.v != 0.0)) {
            const double s = b.v == 0.0 ? 1.0 : a.v / (a.v - b.v);
            const double i0 = a.i + s * (b.i - a.i);
            out.max_abs_i_at_zero_v = std::max(out.max_abs_i_at_zero_v, std::abs(i0));
            out.loop_area += std::abs(lobe);
            lobe = 0.0;
        }
    }
    out.loop_area += std::abs(lobe);

    // Full cycles only.
    const double t_end = samples.back().t;
    const long cycles = static_cast<long>(std::floor(t_end / period + 1e-9));
    out.min_cycle_coverage = cycles > 0 ? std::numeric_limits<double>::infinity() : 0.0;
    for (long c = 0; c < cycles; ++c) {
        const double t0 = c * period - 1e-12;
        const double t1 = (c + 1) * period + 1e-12;
        double lo = std::numeric_limits<double>::infinity();
        double hi = -lo;
        for (const SweepSample& s : samples) {
            if (s.t < t0 || s.t > t1) continue;
            lo = std::min(lo, s.r);
            hi = std::max(hi, s.r);
        }
        out.min_cycle_coverage = std::min(out.min_cycle_coverage, (hi - lo) / (r_off - r_on));
    }
    return out;
}

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y)
{
    const std::size_t n = std::min(x.size(), y.size());
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        const double lx = std::log(std::abs(x[k]));
        const double ly = std::log(std::abs(y[k]));
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    const double dn = static_cast<double>(n);
    return (dn * sxy - sx * sy) / (dn * sxx - sx * sx);
}

SwitchRateResult switch_rate(const MemristorParams& params, const SwitchRateSettings& settings)
{
    params.validate();
    SwitchRateResult out;
    const MemristorState state{settings.x * params.d, 1};
    const double ratio = std::log(settings.i_max / settings.i_min);
    std::vector<double> xs, ys;
    for (int k = 0; k < settings.points; ++k) {
        const double i = settings.i_min * std::exp(ratio * k / (settings.points - 1));
        const double rate = dwdt(params, state, i);
        out.points.push_back({i, rate});
        xs.push_back(i);
        ys.push_back(rate);
    }
    out.slope = loglog_slope(xs, ys);
    return out;
}

std::vector<PdSample> potentiation_depression(const SynapseConfig& config,
                                              const SynapsePdSettings& settings, double dt)
{
    config.validate();
    SynapseAssembly a = SynapseAssembly::at_rest(config);
    const long per_sample = steps_for(settings.sample_interval, dt);
    const long per_phase = steps_for(settings.phase_duration, dt);
    std::vector<PdSample> out;
    const auto record = [&](long step) {
        out.push_back({static_cast<double>(step) * dt, a.memristances(), a.weight()});
    };
    record(0);
    long step = 0;
    for (int p = 0; p < settings.phases; ++p) {
        const double v = p % 2 == 0 ? settings.amplitude : -settings.amplitude;
        for (long k = 0; k < per_phase; ++k) {
            a.apply(v, dt);
            if (++step % per_sample == 0) record(step);
        }
    }
    return out;
}

CalibrationResult weak_strong_calibration(const SynapseConfig& config,
                                          const CalibrationSettings& settings, double dt)
{
    const SynapseAssembly start = canonical_midpoint(config);
    const long n = steps_for(settings.width, dt);
    CalibrationResult out;
    for (double v : {settings.strong, settings.weak, -settings.strong, -settings.weak}) {
        SynapseAssembly a = start;
        for (long k = 0; k < n; ++k) a.apply(v, dt);
        out.rows.push_back({v, static_cast<double>(n) * dt, start.weight(), a.weight()});
    }
    out.strong = out.rows[0].dpsi();
    out.weak = out.rows[1].dpsi();
    out.ratio = out.weak / out.strong;
    return out;
}

ExperimentOutput run_experiment(const ExperimentSpec& spec, const Config& config)
{
    config.validate();
    // Only ever replace an empty directory or the output of an earlier run.
    if (fs::exists(spec.out_dir) && !fs::is_empty(spec.out_dir)
        && !fs::exists(spec.out_dir / "manifest.json")) {
        throw ConfigError("output directory " + spec.out_dir.string()
                          + " is not empty and holds no manifest.json");
    }
    const fs::path staging = staging_path(spec.out_dir);
    fs::remove_all(staging);
    if (spec.out_dir.has_parent_path()) fs::create_directories(spec.out_dir.parent_path());
    fs::create_directory(staging);

    ExperimentOutput out;
    try {
        Sink sink{staging, spec.plots, {}};
        switch (spec.name) {
        case Experiment::hysteresis: out.results = run_hysteresis(config, sink); break;
        case Experiment::switch_rate: out.results = run_switch_rate(config, sink); break;
        case Experiment::synapse_pd: out.results = run_synapse_pd(config, sink); break;
        case Experiment::weak_strong_calibration: out.results = run_calibration(config, sink); break;
        case Experiment::stdp_window:
            out.results = run_stdp(config.network(), config.stdp.min_offset, config.stdp.max_offset,
                                   config.stdp.tail_taus, sink, "stdp_window", "STDP window");
            break;
        case Experiment::stdp_window_vteam:
            out.results = run_stdp(config.vteam_network(), config.vteam_stdp.min_offset,
                                   config.vteam_stdp.max_offset, config.stdp.tail_taus, sink,
                                   "stdp_window_vteam", "VTEAM STDP window");
            break;
        case Experiment::pattern_learn: out.results = run_pattern(config, sink); break;
        }
        write_manifest(staging, to_string(spec.name), config, sink.files, out.results);

        fs::remove_all(spec.out_dir);
        fs::rename(staging, spec.out_dir);
        out.out_dir = spec.out_dir;
        for (const fs::path& f : sink.files) out.files.push_back(spec.out_dir / f.filename());
    } catch (...) {
        std::error_code ec;
        fs::remove_all(staging, ec);
        throw;
    }
    return out;
}

} // namespace memsnn
