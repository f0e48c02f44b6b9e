#pragma once

#include "memsnn/neuron.hpp"
#include "memsnn/plasticity.hpp"
#include "memsnn/synapse.hpp"

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string_view>
#include <vector>

namespace memsnn {

/// One synapse wiring pre -> post.
struct Connection {
    std::size_t pre = 0;
    std::size_t post = 0;
    Polarity polarity = Polarity::excitatory;
};

struct NetworkConfig {
    std::size_t n_pre = 1;
    std::size_t n_post = 1;
    std::vector<Connection> topology{Connection{}};
    double base_freq = 100.0;
    double dt = 10.0e-6;
    /// `r_in` holds either one value shared by every input or one per
    /// afferent of the busiest Post.
    LifParams lif{};
    TraceParams trace{};
    SynapseConfig synapse{};
    std::uint64_t seed = 0;

    void validate() const;
    double slot_width() const { return 1.0 / base_freq; }
    double frame_width() const { return 3.0 / base_freq; }
    long steps_per_slot() const;
};

enum class Side { pre, post };

struct FrameReport {
    long frame = 0;
    double t_start = 0.0;
    std::vector<bool> pre_fired;
    std::vector<bool> post_fired;
    std::vector<double> post_v_mp_at_edge;
    std::vector<double> psi;             ///< per synapse, after the frame
    std::vector<double> strong_width;    ///< per synapse, summed over slots 1-2
    bool protocol_ok = true;             ///< strong overlaps only where allowed
};

/// Clock-driven co-simulation of Pre/Post neurons, their traces and the
/// bridge synapses between them, one three-slot frame at a time.
class Network {
public:
    explicit Network(NetworkConfig config);

    /// Force `index` on `side` to fire in `frame` (bypasses its integrator).
    void schedule_fire(long frame, Side side, std::size_t index);
    /// Load the trigger of `index` at time `t`; it fires at the next frame edge.
    void request_fire_at(double t, Side side, std::size_t index);

    FrameReport run_frame();

    const NetworkConfig& config() const { return config_; }
    long frame() const { return clock_.frame; }
    double time() const { return clock_.frame * config_.frame_width(); }

    std::size_t n_synapses() const { return synapses_.size(); }
    const SynapseAssembly& synapse(std::size_t k) const { return synapses_.at(k); }
    void set_synapse(std::size_t k, const SynapseAssembly& assembly);
    const LifState& pre_state(std::size_t k) const { return pre_.at(k); }
    const LifState& post_state(std::size_t k) const { return post_.at(k); }
    LifState& post_state(std::size_t k) { return post_.at(k); }
    const TraceState& pre_trace(std::size_t k) const { return pre_trace_.at(k); }
    const TraceState& post_trace(std::size_t k) const { return post_trace_.at(k); }

    /// Per-slot port/differential rows for synapse `k` are written to `out`
    /// (header included) on every subsequent frame. Pass nullptr to stop.
    void set_frame_dump(std::ostream* out, std::size_t k = 0);

private:
    struct TimedRequest {
        double t;
        Side side;
        std::size_t index;
    };

    void load(Side side, std::size_t index);
    void step_neurons(double t, double dt, std::span<const double> post_current_inputs);

    NetworkConfig config_;
    FrameClock clock_;
    std::vector<SynapseAssembly> synapses_;
    std::vector<LifState> pre_;
    std::vector<LifState> post_;
    std::vector<LifParams> post_params_;
    std::vector<std::vector<std::size_t>> post_inputs_;  ///< synapse ids per Post
    std::vector<TraceState> pre_trace_;
    std::vector<TraceState> post_trace_;
    std::map<long, std::vector<std::pair<Side, std::size_t>>> scheduled_;
    std::vector<TimedRequest> timed_;
    std::ostream* dump_ = nullptr;
    std::size_t dump_synapse_ = 0;
};

// ---------------------------------------------------------------------------
// Experiments

struct StimulusEvent {
    long frame = 0;        ///< epoch-relative, 0-based
    std::size_t pre = 0;   ///< 0-based
};

struct StimulusProgram {
    std::vector<StimulusEvent> events;
    long epoch_frames = 10;
    long n_epochs = 1;

    void validate(std::size_t n_pre) const;
};

struct PostFire {
    long frame = 0;
    double t = 0.0;
    std::size_t post = 0;
};

struct NeuronEvent {
    long frame = 0;
    double t = 0.0;
    double v_mp_at_edge = 0.0;
    bool fired = false;
};

struct SimulationResult {
    std::vector<std::vector<double>> weights;  ///< [epoch][synapse], sampled at epoch end
    std::vector<PostFire> post_fires;
    std::vector<NeuronEvent> neuron_events;    ///< Post 0, one row per frame
    bool protocol_ok = true;
};

/// Per-frame port dump of one synapse (see Network::set_frame_dump).
struct FrameDump {
    std::ostream* out = nullptr;
    std::size_t synapse = 0;
};

/// Run `program` on a fresh network. `initial` optionally overrides the
/// starting assembly of every synapse (default: at rest).
SimulationResult run_simulation(const NetworkConfig& config, const StimulusProgram& program,
                                const std::optional<std::vector<SynapseAssembly>>& initial = {},
                                FrameDump dump = {});

struct WindowPoint {
    long dt_frames = 0;
    double dt_seconds = 0.0;
    double dpsi = 0.0;
};

struct StdpOptions {
    /// Sub-frame phase in [0, 1) of the frame before the scheduled one at
    /// which the fire requests are issued. Empty: load exactly at the edge.
    std::optional<double> phase;
    /// Frames simulated after the last spike, in units of tau.
    double tail_taus = 40.0;
    /// Run the spike pair on a synapse with these initial states instead of
    /// the canonical |psi| = 0.5 state.
    std::optional<SynapseAssembly> initial;
};

/// Delta psi induced by one Pre/Post spike pair per frame offset
/// (offset > 0: Pre fires first). One independent run per offset, executed
/// in parallel.
std::vector<WindowPoint> stdp_window(const NetworkConfig& config, long min_offset, long max_offset,
                                     const StdpOptions& opts = {});

/// Single Pre/Post pair on a 1-1 network, returning delta psi.
double spike_pair_dpsi(const NetworkConfig& config, long offset, const StdpOptions& opts = {});

enum class PatternInit { zero, midpoint };

PatternInit parse_pattern_init(std::string_view name);

struct PatternSetup {
    std::vector<std::size_t> pattern_pres{0, 2, 3, 5, 7};
    long pattern_frame = 0;
    /// (pre, frame) pairs, 0-based.
    std::vector<std::pair<std::size_t, long>> noise{{1, 2}, {4, 3}, {6, 4}, {8, 5}};
    long epoch_frames = 10;
    long n_epochs = 300;
    double midpoint_target = 0.5;
    double midpoint_tolerance = 0.01;
    double reset_voltage = -4.0;
    double reset_duration = 1.0;

    StimulusProgram program() const;
};

struct PatternResult {
    SimulationResult sim;
    std::vector<double> initial_weights;
    long first_fire_epoch = -1;      ///< 0-based epoch of the first Post spike
    long epochs_to_stability = -1;
};

/// 3x3 Pre array -> one Post through nine excitatory synapses.
NetworkConfig pattern_network(const NetworkConfig& base);

PatternResult pattern_learning(const NetworkConfig& base, const PatternSetup& setup,
                               PatternInit init, FrameDump dump = {});

/// First epoch from which every weight stays within `tolerance` of its
/// `window`-epoch trailing mean until the end of the run, or -1.
long epochs_to_stability(const std::vector<std::vector<double>>& weights, std::size_t window = 20,
                         double tolerance = 0.005);

} // namespace memsnn
