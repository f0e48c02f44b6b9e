#include "memsnn/network.hpp"

#include "memsnn/errors.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <ostream>
#include <sstream>
#include <string>

namespace memsnn {

namespace {

constexpr std::string_view kFrameDumpHeader =
    "frame,slot,portA_level,portA_width,portB_level,portB_width,vab_strong_width";

std::string fault_context(long frame, int slot, const std::exception& e)
{
    std::ostringstream msg;
    msg << "frame " << frame << ", slot " << slot << ": " << e.what();
    return msg.str();
}

} // namespace

void NetworkConfig::validate() const
{
    if (n_pre == 0 || n_post == 0) {
        throw ConfigError("network: n_pre >= 1 and n_post >= 1");
    }
    if (!(base_freq > 0.0)) throw ConfigError("network: base_freq > 0");
    if (!(dt > 0.0)) throw ConfigError("network: dt > 0");
    steps_per_slot();
    for (const Connection& c : topology) {
        if (c.pre >= n_pre || c.post >= n_post) {
            throw ConfigError("network: every synapse maps one Pre to one Post");
        }
    }
    lif.validate();
    trace.validate();
    synapse.validate();
}

long NetworkConfig::steps_per_slot() const
{
    const double ratio = slot_width() / dt;
    const long n = std::lround(ratio);
    if (n < 1 || std::abs(ratio - static_cast<double>(n)) > 1e-9 * ratio) {
        throw ConfigError("network: dt divides slot_width");
    }
    return n;
}

Network::Network(NetworkConfig config) : config_(std::move(config))
{
    config_.validate();
    clock_.base_freq = config_.base_freq;

    post_inputs_.resize(config_.n_post);
    for (std::size_t k = 0; k < config_.topology.size(); ++k) {
        const Connection& c = config_.topology[k];
        SynapseConfig sc = config_.synapse;
        sc.polarity = c.polarity;
        synapses_.push_back(SynapseAssembly::at_rest(sc));
        post_inputs_[c.post].push_back(k);
    }

    post_params_.assign(config_.n_post, config_.lif);
    for (std::size_t p = 0; p < config_.n_post; ++p) {
        const std::size_t fan_in = post_inputs_[p].size();
        LifParams& lp = post_params_[p];
        if (config_.lif.r_in.size() == 1) {
            lp.r_in.assign(fan_in, config_.lif.r_in.front());
        } else if (config_.lif.r_in.size() >= fan_in) {
            lp.r_in.resize(fan_in);
        } else {
            throw ConfigError("lif: r_in needs one value or one per afferent");
        }
    }

    pre_.assign(config_.n_pre, LifState{});
    post_.assign(config_.n_post, LifState{});
    pre_trace_.assign(config_.n_pre, TraceState{});
    post_trace_.assign(config_.n_post, TraceState{});
}

void Network::schedule_fire(long frame, Side side, std::size_t index)
{
    if (index >= (side == Side::pre ? pre_.size() : post_.size())) {
        throw ConfigError("schedule_fire: neuron index out of range");
    }
    scheduled_[frame].emplace_back(side, index);
}

void Network::request_fire_at(double t, Side side, std::size_t index)
{
    if (index >= (side == Side::pre ? pre_.size() : post_.size())) {
        throw ConfigError("request_fire_at: neuron index out of range");
    }
    timed_.push_back({t, side, index});
}

void Network::set_synapse(std::size_t k, const SynapseAssembly& assembly)
{
    synapses_.at(k) = assembly;
}

void Network::set_frame_dump(std::ostream* out, std::size_t k)
{
    dump_ = out;
    dump_synapse_ = k;
    if (dump_) {
        dump_->precision(9);
        *dump_ << kFrameDumpHeader << '\n';
    }
}

void Network::load(Side side, std::size_t index)
{
    LifState& s = side == Side::pre ? pre_[index] : post_[index];
    s = force_load(s);
}

void Network::step_neurons(double t, double dt, std::span<const double> post_current_inputs)
{
    if (!timed_.empty()) {
        // Requests on a step boundary belong to the step that starts there,
        // even when the grid time carries rounding error.
        auto due = [&](const TimedRequest& r) { return r.t < t + dt * (1.0 - 1e-6); };
        for (const TimedRequest& r : timed_) {
            if (due(r)) load(r.side, r.index);
        }
        std::erase_if(timed_, due);
    }

    std::size_t offset = 0;
    for (std::size_t p = 0; p < post_.size(); ++p) {
        const std::size_t fan_in = post_inputs_[p].size();
        post_[p] = integrate(post_params_[p], post_[p],
                             post_current_inputs.subspan(offset, fan_in), dt);
        offset += fan_in;
    }
    for (std::size_t k = 0; k < pre_.size(); ++k) {
        pre_trace_[k] = trace_step(config_.trace, pre_trace_[k], pre_[k].q2, dt);
        pre_[k] = trigger_tick(config_.lif, pre_[k], comparator(config_.lif, pre_[k]), false).state;
    }
    for (std::size_t p = 0; p < post_.size(); ++p) {
        post_trace_[p] = trace_step(config_.trace, post_trace_[p], post_[p].q2, dt);
        post_[p] = trigger_tick(post_params_[p], post_[p], comparator(post_params_[p], post_[p]),
                                false).state;
    }
}

FrameReport Network::run_frame()
{
    const double sw = config_.slot_width();
    const double dt = config_.dt;
    const double v_cc = config_.lif.v_cc;
    const long n_steps = config_.steps_per_slot();
    const long frame = clock_.frame;
    const double t0 = time();

    FrameReport rep;
    rep.frame = frame;
    rep.t_start = t0;
    rep.pre_fired.assign(pre_.size(), false);
    rep.post_fired.assign(post_.size(), false);
    rep.post_v_mp_at_edge.assign(post_.size(), 0.0);
    rep.strong_width.assign(synapses_.size(), 0.0);

    if (auto it = scheduled_.find(frame); it != scheduled_.end()) {
        for (const auto& [side, index] : it->second) {
            load(side, index);
        }
        scheduled_.erase(it);
    }

    // Fractional-3 clock edge.
    for (std::size_t k = 0; k < pre_.size(); ++k) {
        pre_[k] = trigger_tick(config_.lif, pre_[k], comparator(config_.lif, pre_[k]), true).state;
        rep.pre_fired[k] = pre_[k].q2;
    }
    for (std::size_t p = 0; p < post_.size(); ++p) {
        rep.post_v_mp_at_edge[p] = post_[p].v_mp;
        post_[p] = trigger_tick(post_params_[p], post_[p], comparator(post_params_[p], post_[p]),
                                true).state;
        rep.post_fired[p] = post_[p].q2;
    }

    std::vector<double> pre_pwm(pre_.size(), 0.0);
    std::vector<double> post_pwm(post_.size(), 0.0);
    std::vector<std::array<SlotProfile, 3>> profiles(synapses_.size());
    std::vector<PortFrame> port_a(synapses_.size());
    std::vector<PortFrame> port_b(synapses_.size());
    const auto compose = [&] {
        for (std::size_t k = 0; k < synapses_.size(); ++k) {
            const Connection& c = config_.topology[k];
            port_a[k] = compose_pre_port(rep.pre_fired[c.pre], pre_pwm[c.pre], v_cc, sw);
            port_b[k] = compose_post_port(rep.post_fired[c.post], post_pwm[c.post], v_cc, sw);
            profiles[k] = differential_frame(port_a[k], port_b[k]);
        }
    };
    compose();

    std::vector<double> inputs(synapses_.size(), 0.0);
    std::vector<std::size_t> input_slot(synapses_.size());
    {
        std::size_t offset = 0;
        for (const auto& ids : post_inputs_) {
            for (std::size_t id : ids) input_slot[id] = offset++;
        }
    }

    for (int slot = 0; slot < 3; ++slot) {
        if (slot == 1) {
            // Traces are sampled once, at the start of slot 1.
            for (std::size_t k = 0; k < pre_.size(); ++k) {
                pre_pwm[k] = pwm_encode(config_.trace, pre_trace_[k].v_cp, sw, rep.pre_fired[k]);
            }
            for (std::size_t p = 0; p < post_.size(); ++p) {
                post_pwm[p] = pwm_encode(config_.trace, post_trace_[p].v_cp, sw, rep.post_fired[p]);
            }
            compose();
        }

        try {
            for (long i = 0; i < n_steps; ++i) {
                const double a = static_cast<double>(i) * dt;
                const double b = a + dt;
                std::fill(inputs.begin(), inputs.end(), 0.0);
                for (std::size_t k = 0; k < synapses_.size(); ++k) {
                    const SlotProfile& profile = profiles[k][slot];
                    if (profile.empty() || profile.back().end <= a) continue;
                    if (slot == 0) {
                        double mean_v = 0.0;
                        for (const Segment& seg : profile) {
                            const double ov = std::min(b, seg.end) - std::max(a, seg.start);
                            if (ov > 0.0) mean_v += seg.level * ov / dt;
                        }
                        inputs[input_slot[k]] = synapses_[k].weight() * mean_v;
                    }
                    for (const Segment& seg : profile) {
                        const double ov = std::min(b, seg.end) - std::max(a, seg.start);
                        if (ov > 0.0) synapses_[k].apply(seg.level, ov);
                    }
                }
                step_neurons(t0 + slot * sw + a, dt, inputs);
            }
        } catch (const SimulationFault& e) {
            throw SimulationFault(fault_context(frame, slot, e));
        }

        for (std::size_t k = 0; k < synapses_.size(); ++k) {
            const double strong = strong_width(profiles[k][slot], v_cc);
            if (slot > 0) rep.strong_width[k] += strong;
            const Connection& c = config_.topology[k];
            const bool allowed = slot == 1   ? pre_pwm[c.pre] > 0.0 && rep.post_fired[c.post]
                                 : slot == 2 ? rep.pre_fired[c.pre] && post_pwm[c.post] > 0.0
                                             : false;
            if (strong > 0.0 && !allowed) rep.protocol_ok = false;
        }
        if (dump_ && dump_synapse_ < synapses_.size()) {
            const SlotWaveform& wa = port_a[dump_synapse_][slot];
            const SlotWaveform& wb = port_b[dump_synapse_][slot];
            *dump_ << frame << ',' << slot << ',' << wa.level << ',' << wa.active_width << ','
                   << wb.level << ',' << wb.active_width << ','
                   << strong_width(profiles[dump_synapse_][slot], v_cc) << '\n';
        }
        clock_.advance();
    }

    rep.psi.reserve(synapses_.size());
    for (const SynapseAssembly& s : synapses_) {
        rep.psi.push_back(s.weight());
    }
    return rep;
}

// ---------------------------------------------------------------------------

void StimulusProgram::validate(std::size_t n_pre) const
{
    if (epoch_frames < 1) throw ConfigError("stimulus: epoch_frames >= 1");
    if (n_epochs < 0) throw ConfigError("stimulus: n_epochs >= 0");
    for (const StimulusEvent& e : events) {
        if (e.frame < 0 || e.frame >= epoch_frames) {
            throw ConfigError("stimulus: scheduled frames < epoch_frames");
        }
        if (e.pre >= n_pre) {
            throw ConfigError("stimulus: pre index out of range");
        }
    }
}

SimulationResult run_simulation(const NetworkConfig& config, const StimulusProgram& program,
                                const std::optional<std::vector<SynapseAssembly>>& initial,
                                FrameDump dump)
{
    program.validate(config.n_pre);
    Network net(config);
    if (dump.out) {
        net.set_frame_dump(dump.out, dump.synapse);
    }
    if (initial) {
        if (initial->size() != net.n_synapses()) {
            throw ConfigError("run_simulation: one initial assembly per synapse");
        }
        for (std::size_t k = 0; k < initial->size(); ++k) {
            net.set_synapse(k, (*initial)[k]);
        }
    }
    for (long e = 0; e < program.n_epochs; ++e) {
        for (const StimulusEvent& ev : program.events) {
            net.schedule_fire(e * program.epoch_frames + ev.frame, Side::pre, ev.pre);
        }
    }

    SimulationResult out;
    const long total = program.n_epochs * program.epoch_frames;
    for (long f = 0; f < total; ++f) {
        const FrameReport rep = net.run_frame();
        out.protocol_ok = out.protocol_ok && rep.protocol_ok;
        for (std::size_t p = 0; p < rep.post_fired.size(); ++p) {
            if (rep.post_fired[p]) {
                out.post_fires.push_back({rep.frame, rep.t_start, p});
            }
        }
        out.neuron_events.push_back(
            {rep.frame, rep.t_start, rep.post_v_mp_at_edge.front(), rep.post_fired.front()});
        if ((f + 1) % program.epoch_frames == 0) {
            out.weights.push_back(rep.psi);
        }
    }
    return out;
}

double spike_pair_dpsi(const NetworkConfig& config, long offset, const StdpOptions& opts)
{
    NetworkConfig cfg = config;
    cfg.n_pre = 1;
    cfg.n_post = 1;
    cfg.topology = {Connection{0, 0, config.synapse.polarity}};
    Network net(cfg);
    const SynapseAssembly start = opts.initial ? *opts.initial : canonical_midpoint(cfg.synapse);
    net.set_synapse(0, start);

    const long base = 1;
    const long pre_frame = base + std::max(0L, -offset);
    const long post_frame = base + std::max(0L, offset);
    if (opts.phase) {
        const double fw = cfg.frame_width();
        net.request_fire_at((pre_frame - 1 + *opts.phase) * fw, Side::pre, 0);
        net.request_fire_at((post_frame - 1 + *opts.phase) * fw, Side::post, 0);
    } else {
        net.schedule_fire(pre_frame, Side::pre, 0);
        net.schedule_fire(post_frame, Side::post, 0);
    }
    const long tail =
        static_cast<long>(std::ceil(opts.tail_taus * cfg.trace.tau / cfg.frame_width())) + 1;
    const long last = std::max(pre_frame, post_frame) + tail;
    while (net.frame() <= last) {
        net.run_frame();
    }
    return net.synapse(0).weight() - start.weight();
}

std::vector<WindowPoint> stdp_window(const NetworkConfig& config, long min_offset, long max_offset,
                                     const StdpOptions& opts)
{
    if (min_offset > max_offset) {
        throw ConfigError("stdp_window: min_offset <= max_offset");
    }
    config.validate();
    StdpOptions shared = opts;
    if (!shared.initial) {
        shared.initial = canonical_midpoint(config.synapse);
    }

    std::vector<std::future<double>> jobs;
    for (long k = min_offset; k <= max_offset; ++k) {
        jobs.push_back(std::async(std::launch::async,
                                  [&config, &shared, k] { return spike_pair_dpsi(config, k, shared); }));
    }
    std::vector<WindowPoint> out;
    for (long k = min_offset; k <= max_offset; ++k) {
        const double dpsi = jobs[static_cast<std::size_t>(k - min_offset)].get();
        out.push_back({k, static_cast<double>(k) * config.frame_width(), dpsi});
    }
    return out;
}

PatternInit parse_pattern_init(std::string_view name)
{
    if (name == "zero") return PatternInit::zero;
    if (name == "midpoint") return PatternInit::midpoint;
    throw ConfigError("unknown pattern init '" + std::string(name) + "' (expected zero or midpoint)");
}

StimulusProgram PatternSetup::program() const
{
    StimulusProgram p;
    p.epoch_frames = epoch_frames;
    p.n_epochs = n_epochs;
    for (std::size_t pre : pattern_pres) {
        p.events.push_back({pattern_frame, pre});
    }
    for (const auto& [pre, frame] : noise) {
        p.events.push_back({frame, pre});
    }
    return p;
}

NetworkConfig pattern_network(const NetworkConfig& base)
{
    NetworkConfig cfg = base;
    cfg.n_pre = 9;
    cfg.n_post = 1;
    cfg.topology.clear();
    for (std::size_t k = 0; k < 9; ++k) {
        cfg.topology.push_back({k, 0, Polarity::excitatory});
    }
    return cfg;
}

PatternResult pattern_learning(const NetworkConfig& base, const PatternSetup& setup,
                               PatternInit init, FrameDump dump)
{
    const NetworkConfig cfg = pattern_network(base);
    cfg.validate();
    SynapseConfig sc = cfg.synapse;
    sc.polarity = Polarity::excitatory;

    SynapseAssembly start = SynapseAssembly::at_rest(sc);
    if (init == PatternInit::zero) {
        // Erase from mid-range with one long negative programming pulse.
        start = canonical_midpoint(sc);
        const long n = std::lround(setup.reset_duration / cfg.dt);
        for (long k = 0; k < n; ++k) {
            start.apply(setup.reset_voltage, cfg.dt);
        }
    } else {
        start = program_to_weight(start, setup.midpoint_target, setup.midpoint_tolerance,
                                  ProgramOptions{4.0, cfg.dt, 20.0})
                    .assembly;
    }

    PatternResult out;
    const std::vector<SynapseAssembly> initial(cfg.topology.size(), start);
    for (const SynapseAssembly& s : initial) {
        out.initial_weights.push_back(s.weight());
    }
    out.sim = run_simulation(cfg, setup.program(), initial, dump);
    if (!out.sim.post_fires.empty()) {
        out.first_fire_epoch = out.sim.post_fires.front().frame / setup.epoch_frames;
    }
    out.epochs_to_stability = epochs_to_stability(out.sim.weights);
    return out;
}

long epochs_to_stability(const std::vector<std::vector<double>>& weights, std::size_t window,
                         double tolerance)
{
    if (window == 0 || weights.size() < window) {
        return -1;
    }
    const auto stable_at = [&](std::size_t e) {
        for (std::size_t k = 0; k < weights[e].size(); ++k) {
            double mean = 0.0;
            for (std::size_t m = e + 1 - window; m <= e; ++m) mean += weights[m][k];
            mean /= static_cast<double>(window);
            if (std::abs(weights[e][k] - mean) > tolerance) return false;
        }
        return true;
    };
    long first = -1;
    for (std::size_t e = weights.size(); e-- > window - 1;) {
        if (!stable_at(e)) break;
        first = static_cast<long>(e);
    }
    return first < 0 ? -1 : first + 1;
}

} // namespace memsnn
