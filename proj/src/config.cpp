#include "memsnn/config.hpp"

#include "memsnn/errors.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

namespace memsnn {

namespace {

namespace pt = boost::property_tree;

std::string trim(std::string_view s)
{
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split_list(const std::string& s)
{
    std::vector<std::string> out;
    std::string token;
    for (char ch : s) {
        if (ch == ',' || ch == ' ' || ch == '\t') {
            if (!token.empty()) out.push_back(std::move(token));
            token.clear();
        } else {
            token += ch;
        }
    }
    if (!token.empty()) out.push_back(std::move(token));
    return out;
}

[[noreturn]] void bad_value(std::string_view key, std::string_view expected, std::string_view got)
{
    throw ConfigError("config: " + std::string(key) + ": expected " + std::string(expected)
                      + ", got '" + std::string(got) + "'");
}

template <class T>
T parse_number(std::string_view key, std::string_view text, std::string_view expected)
{
    T value{};
    const char* first = text.data();
    const char* last = text.data() + text.size();
    if (!text.empty() && *first == '+') ++first;
    const auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc{} || ptr != last) bad_value(key, expected, text);
    return value;
}

std::string format_double(double v)
{
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

std::string format_value(double v) { return format_double(v); }
std::string format_value(int v) { return std::to_string(v); }
std::string format_value(long v) { return std::to_string(v); }
std::string format_value(unsigned long v) { return std::to_string(v); }
std::string format_value(WindowKind v) { return std::string(to_string(v)); }
std::string format_value(PatternInit v) { return v == PatternInit::zero ? "zero" : "midpoint"; }

std::string format_value(const std::vector<double>& v)
{
    std::string out;
    for (double x : v) {
        if (!out.empty()) out += ' ';
        out += format_double(x);
    }
    return out;
}

void parse_value(std::string_view key, const std::string& s, double& out)
{
    out = parse_number<double>(key, s, "a number");
}
void parse_value(std::string_view key, const std::string& s, int& out)
{
    out = parse_number<int>(key, s, "an integer");
}
void parse_value(std::string_view key, const std::string& s, long& out)
{
    out = parse_number<long>(key, s, "an integer");
}
void parse_value(std::string_view key, const std::string& s, unsigned long& out)
{
    out = parse_number<unsigned long>(key, s, "a non-negative integer");
}
void parse_value(std::string_view, const std::string& s, WindowKind& out)
{
    out = parse_window_kind(s);
}
void parse_value(std::string_view, const std::string& s, PatternInit& out)
{
    out = parse_pattern_init(s);
}
void parse_value(std::string_view key, const std::string& s, std::vector<double>& out)
{
    out.clear();
    for (const std::string& t : split_list(s)) out.push_back(parse_number<double>(key, t, "a number"));
}

// Stimulus indices are 1-based in the file and 0-based in memory.
std::string format_pres(const std::vector<std::size_t>& pres)
{
    std::string out;
    for (std::size_t p : pres) {
        if (!out.empty()) out += ' ';
        out += std::to_string(p + 1);
    }
    return out;
}

std::vector<std::size_t> parse_pres(std::string_view key, const std::string& s)
{
    std::vector<std::size_t> out;
    for (const std::string& t : split_list(s)) {
        const auto n = parse_number<unsigned long>(key, t, "a 1-based index");
        if (n == 0) bad_value(key, "a 1-based index", t);
        out.push_back(n - 1);
    }
    return out;
}

std::string format_noise(const std::vector<std::pair<std::size_t, long>>& noise)
{
    std::string out;
    for (const auto& [pre, frame] : noise) {
        if (!out.empty()) out += ' ';
        out += std::to_string(pre + 1) + ':' + std::to_string(frame + 1);
    }
    return out;
}

std::vector<std::pair<std::size_t, long>> parse_noise(std::string_view key, const std::string& s)
{
    std::vector<std::pair<std::size_t, long>> out;
    for (const std::string& t : split_list(s)) {
        const auto colon = t.find(':');
        if (colon == std::string::npos) bad_value(key, "pre:frame pairs", t);
        const auto pre = parse_number<unsigned long>(key, std::string_view(t).substr(0, colon),
                                                     "pre:frame pairs");
        const auto frame = parse_number<long>(key, std::string_view(t).substr(colon + 1),
                                              "pre:frame pairs");
        if (pre == 0 || frame <= 0) bad_value(key, "1-based pre:frame pairs", t);
        out.emplace_back(pre - 1, frame - 1);
    }
    return out;
}

struct Key {
    std::string path;
    std::function<void(Config&, const std::string&)> set;
    std::function<std::string(const Config&)> get;
};

template <class Access>
Key field(std::string path, Access access)
{
    Key k;
    k.path = path;
    k.set = [access, path](Config& c, const std::string& s) { parse_value(path, s, access(c)); };
    k.get = [access](const Config& c) {
        Config copy = c;
        return format_value(access(copy));
    };
    return k;
}

template <class Access>
Key window_fields(std::vector<Key>& keys, const std::string& section, Access window)
{
    keys.push_back(field(section + ".window", [window](Config& c) -> WindowKind& { return window(c).kind; }));
    keys.push_back(field(section + ".window_p", [window](Config& c) -> int& { return window(c).p; }));
    return field(section + ".window_j", [window](Config& c) -> double& { return window(c).j; });
}

#define MEMSNN_FIELD(path, expr) field(path, [](Config& c) -> auto& { return c.expr; })

const std::vector<Key>& registry()
{
    static const std::vector<Key> keys = [] {
        std::vector<Key> k;
        k.push_back(MEMSNN_FIELD("device.r_on", device.r_on));
        k.push_back(MEMSNN_FIELD("device.r_off", device.r_off));
        k.push_back(MEMSNN_FIELD("device.d", device.d));
        k.push_back(MEMSNN_FIELD("device.mu_v", device.mu_v));
        k.push_back(MEMSNN_FIELD("device.a0", device.a0));
        k.push_back(MEMSNN_FIELD("device.i0", device.i0));
        k.push_back(MEMSNN_FIELD("device.q", device.q));
        k.push_back(window_fields(k, "device", [](Config& c) -> WindowSpec& { return c.device.window; }));

        k.push_back(MEMSNN_FIELD("vteam.v_on", vteam.v_on));
        k.push_back(MEMSNN_FIELD("vteam.v_off", vteam.v_off));
        k.push_back(MEMSNN_FIELD("vteam.k_on", vteam.k_on));
        k.push_back(MEMSNN_FIELD("vteam.k_off", vteam.k_off));
        k.push_back(MEMSNN_FIELD("vteam.alpha_on", vteam.alpha_on));
        k.push_back(MEMSNN_FIELD("vteam.alpha_off", vteam.alpha_off));
        k.push_back(MEMSNN_FIELD("vteam.w_on", vteam.w_on));
        k.push_back(MEMSNN_FIELD("vteam.w_off", vteam.w_off));
        k.push_back(MEMSNN_FIELD("vteam.r_on", vteam.r_on));
        k.push_back(MEMSNN_FIELD("vteam.r_off", vteam.r_off));
        k.push_back(window_fields(k, "vteam", [](Config& c) -> WindowSpec& { return c.vteam.window; }));

        k.push_back(MEMSNN_FIELD("synapse.r1", r1));
        k.push_back(MEMSNN_FIELD("synapse.r2", r2));
        k.push_back(MEMSNN_FIELD("synapse.gain_a", gain_a));

        k.push_back(MEMSNN_FIELD("lif.r_in", lif.r_in));
        k.push_back(MEMSNN_FIELD("lif.r_ref", lif.r_ref));
        k.push_back(MEMSNN_FIELD("lif.c", lif.c));
        k.push_back(MEMSNN_FIELD("lif.v_th", lif.v_th));
        k.push_back(MEMSNN_FIELD("lif.v_cc", lif.v_cc));

        k.push_back(MEMSNN_FIELD("trace.v_p", trace.v_p));
        k.push_back(MEMSNN_FIELD("trace.tau", trace.tau));

        k.push_back(MEMSNN_FIELD("clock.base_freq", base_freq));
        k.push_back(MEMSNN_FIELD("sim.dt", dt));
        k.push_back(MEMSNN_FIELD("sim.seed", seed));

        k.push_back(MEMSNN_FIELD("hysteresis.w0", hysteresis.w0));
        k.push_back(MEMSNN_FIELD("hysteresis.soft_amplitude", hysteresis.soft_amplitude));
        k.push_back(MEMSNN_FIELD("hysteresis.soft_frequency", hysteresis.soft_frequency));
        k.push_back(MEMSNN_FIELD("hysteresis.soft_duration", hysteresis.soft_duration));
        k.push_back(MEMSNN_FIELD("hysteresis.hard_amplitude", hysteresis.hard_amplitude));
        k.push_back(MEMSNN_FIELD("hysteresis.hard_frequency", hysteresis.hard_frequency));
        k.push_back(MEMSNN_FIELD("hysteresis.hard_duration", hysteresis.hard_duration));
        k.push_back(MEMSNN_FIELD("hysteresis.sample_interval", hysteresis.sample_interval));
        k.push_back(MEMSNN_FIELD("hysteresis.vteam_amplitude", hysteresis.vteam_amplitude));
        k.push_back(MEMSNN_FIELD("hysteresis.vteam_frequency", hysteresis.vteam_frequency));
        k.push_back(MEMSNN_FIELD("hysteresis.vteam_duration", hysteresis.vteam_duration));
        k.push_back(MEMSNN_FIELD("hysteresis.vteam_dt", hysteresis.vteam_dt));
        k.push_back(MEMSNN_FIELD("hysteresis.vteam_sample_interval", hysteresis.vteam_sample_interval));

        k.push_back(MEMSNN_FIELD("switch_rate.i_min", switch_rate.i_min));
        k.push_back(MEMSNN_FIELD("switch_rate.i_max", switch_rate.i_max));
        k.push_back(MEMSNN_FIELD("switch_rate.points", switch_rate.points));
        k.push_back(MEMSNN_FIELD("switch_rate.x", switch_rate.x));

        k.push_back(MEMSNN_FIELD("synapse_pd.amplitude", synapse_pd.amplitude));
        k.push_back(MEMSNN_FIELD("synapse_pd.phase_duration", synapse_pd.phase_duration));
        k.push_back(MEMSNN_FIELD("synapse_pd.phases", synapse_pd.phases));
        k.push_back(MEMSNN_FIELD("synapse_pd.sample_interval", synapse_pd.sample_interval));

        k.push_back(MEMSNN_FIELD("calibration.strong", calibration.strong));
        k.push_back(MEMSNN_FIELD("calibration.weak", calibration.weak));
        k.push_back(MEMSNN_FIELD("calibration.width", calibration.width));

        k.push_back(MEMSNN_FIELD("stdp.min_offset", stdp.min_offset));
        k.push_back(MEMSNN_FIELD("stdp.max_offset", stdp.max_offset));
        k.push_back(MEMSNN_FIELD("stdp.tail_taus", stdp.tail_taus));

        k.push_back(MEMSNN_FIELD("vteam_stdp.base_freq", vteam_stdp.base_freq));
        k.push_back(MEMSNN_FIELD("vteam_stdp.r1", vteam_stdp.r1));
        k.push_back(MEMSNN_FIELD("vteam_stdp.gain_a", vteam_stdp.gain_a));
        k.push_back(MEMSNN_FIELD("vteam_stdp.trace_tau", vteam_stdp.trace_tau));
        k.push_back(MEMSNN_FIELD("vteam_stdp.trace_v_p", vteam_stdp.trace_v_p));
        k.push_back(MEMSNN_FIELD("vteam_stdp.min_offset", vteam_stdp.min_offset));
        k.push_back(MEMSNN_FIELD("vteam_stdp.max_offset", vteam_stdp.max_offset));

        k.push_back(MEMSNN_FIELD("pattern.init", pattern.init));
        k.push_back(MEMSNN_FIELD("pattern.epochs", pattern.setup.n_epochs));
        k.push_back(MEMSNN_FIELD("pattern.epoch_frames", pattern.setup.epoch_frames));
        {
            Key pres;
            pres.path = "pattern.pattern_pres";
            pres.set = [](Config& c, const std::string& s) {
                c.pattern.setup.pattern_pres = parse_pres("pattern.pattern_pres", s);
            };
            pres.get = [](const Config& c) { return format_pres(c.pattern.setup.pattern_pres); };
            k.push_back(std::move(pres));

            Key frame;
            frame.path = "pattern.pattern_frame";
            frame.set = [](Config& c, const std::string& s) {
                const long f = parse_number<long>("pattern.pattern_frame", s, "a 1-based frame");
                if (f <= 0) bad_value("pattern.pattern_frame", "a 1-based frame", s);
                c.pattern.setup.pattern_frame = f - 1;
            };
            frame.get = [](const Config& c) { return std::to_string(c.pattern.setup.pattern_frame + 1); };
            k.push_back(std::move(frame));

            Key noise;
            noise.path = "pattern.noise";
            noise.set = [](Config& c, const std::string& s) {
                c.pattern.setup.noise = parse_noise("pattern.noise", s);
            };
            noise.get = [](const Config& c) { return format_noise(c.pattern.setup.noise); };
            k.push_back(std::move(noise));
        }
        k.push_back(MEMSNN_FIELD("pattern.midpoint_target", pattern.setup.midpoint_target));
        k.push_back(MEMSNN_FIELD("pattern.midpoint_tolerance", pattern.setup.midpoint_tolerance));
        k.push_back(MEMSNN_FIELD("pattern.reset_voltage", pattern.setup.reset_voltage));
        k.push_back(MEMSNN_FIELD("pattern.reset_duration", pattern.setup.reset_duration));
        k.push_back(MEMSNN_FIELD("pattern.frame_dump_synapse", pattern.frame_dump_synapse));
        return k;
    }();
    return keys;
}

#undef MEMSNN_FIELD

const Key& find_key(const std::string& path)
{
    static const std::map<std::string, const Key*> index = [] {
        std::map<std::string, const Key*> m;
        for (const Key& k : registry()) m.emplace(k.path, &k);
        return m;
    }();
    const auto it = index.find(path);
    if (it == index.end()) throw ConfigError("config: unknown key '" + path + "'");
    return *it->second;
}

void require_positive(double v, const char* rule)
{
    if (!(v > 0.0)) throw ConfigError(rule);
}

void require_multiple(double interval, double dt, const char* rule)
{
    const double ratio = interval / dt;
    if (!(ratio >= 1.0) || std::abs(ratio - std::round(ratio)) > 1e-9 * ratio) {
        throw ConfigError(rule);
    }
}

} // namespace

void Config::validate() const
{
    device.validate();
    vteam.validate();
    network().validate();
    vteam_network().validate();

    const HysteresisSettings& h = hysteresis;
    if (!(h.w0 >= 0.0 && h.w0 <= device.d)) throw ConfigError("hysteresis: 0 <= w0 <= device.d");
    require_positive(h.soft_frequency, "hysteresis: soft_frequency > 0");
    require_positive(h.soft_duration, "hysteresis: soft_duration > 0");
    require_positive(h.hard_frequency, "hysteresis: hard_frequency > 0");
    require_positive(h.hard_duration, "hysteresis: hard_duration > 0");
    require_positive(h.vteam_frequency, "hysteresis: vteam_frequency > 0");
    require_positive(h.vteam_duration, "hysteresis: vteam_duration > 0");
    require_positive(h.vteam_dt, "hysteresis: vteam_dt > 0");
    require_multiple(h.sample_interval, dt, "hysteresis: sim.dt divides sample_interval");
    require_multiple(h.vteam_sample_interval, h.vteam_dt,
                     "hysteresis: vteam_dt divides vteam_sample_interval");

    const SwitchRateSettings& s = switch_rate;
    if (!(s.i_min > 0.0 && s.i_min < s.i_max)) throw ConfigError("switch_rate: 0 < i_min < i_max");
    if (s.points < 2) throw ConfigError("switch_rate: points >= 2");
    if (!(s.x > 0.0 && s.x < 1.0)) throw ConfigError("switch_rate: 0 < x < 1");

    require_positive(synapse_pd.amplitude, "synapse_pd: amplitude > 0");
    require_positive(synapse_pd.phase_duration, "synapse_pd: phase_duration > 0");
    if (synapse_pd.phases < 1) throw ConfigError("synapse_pd: phases >= 1");
    require_multiple(synapse_pd.sample_interval, dt, "synapse_pd: sim.dt divides sample_interval");

    require_positive(calibration.width, "calibration: width > 0");

    if (stdp.min_offset > stdp.max_offset) throw ConfigError("stdp: min_offset <= max_offset");
    require_positive(stdp.tail_taus, "stdp: tail_taus > 0");
    if (vteam_stdp.min_offset > vteam_stdp.max_offset) {
        throw ConfigError("vteam_stdp: min_offset <= max_offset");
    }

    pattern.setup.program().validate(9);
    if (!(pattern.setup.midpoint_tolerance > 0.0)) {
        throw ConfigError("pattern: midpoint_tolerance > 0");
    }
    if (!(pattern.setup.reset_duration >= 0.0)) throw ConfigError("pattern: reset_duration >= 0");
    if (pattern.frame_dump_synapse > 9) throw ConfigError("pattern: frame_dump_synapse <= 9");
}

SynapseConfig Config::synapse(Polarity polarity) const
{
    SynapseConfig sc;
    sc.polarity = polarity;
    sc.r1 = r1;
    sc.r2 = r2;
    sc.gain_a = gain_a;
    sc.device = device;
    return sc;
}

NetworkConfig Config::network() const
{
    NetworkConfig nc;
    nc.base_freq = base_freq;
    nc.dt = dt;
    nc.lif = lif;
    nc.trace = trace;
    nc.synapse = synapse();
    nc.seed = seed;
    return nc;
}

NetworkConfig Config::vteam_network() const
{
    NetworkConfig nc = network();
    nc.base_freq = vteam_stdp.base_freq;
    nc.trace.tau = vteam_stdp.trace_tau;
    nc.trace.v_p = vteam_stdp.trace_v_p;
    nc.synapse.device = vteam;
    nc.synapse.r1 = vteam_stdp.r1;
    nc.synapse.r2 = vteam_stdp.r1;
    nc.synapse.gain_a = vteam_stdp.gain_a;
    return nc;
}

Config parse_config(std::string_view text, const std::vector<std::string>& overrides)
{
    pt::ptree tree;
    std::istringstream in{std::string(text)};
    try {
        pt::read_ini(in, tree);
    } catch (const pt::ini_parser_error& e) {
        throw ConfigError("config: line " + std::to_string(e.line()) + ": " + e.message());
    }

    std::vector<std::pair<std::string, std::string>> assignments;
    for (const auto& [section, children] : tree) {
        if (children.empty()) {
            throw ConfigError("config: key '" + section + "' must live inside a [section]");
        }
        for (const auto& [key, node] : children) {
            assignments.emplace_back(section + "." + key, node.data());
        }
    }
    for (const std::string& o : overrides) {
        const auto eq = o.find('=');
        if (eq == std::string::npos) {
            throw ConfigError("config: override '" + o + "' is not key=value");
        }
        assignments.emplace_back(trim(std::string_view(o).substr(0, eq)),
                                 std::string_view(o).substr(eq + 1));
    }

    static const Config defaults{};
    Config config;
    for (const auto& [path, raw] : assignments) {
        const Key& key = find_key(path);
        const std::string value = trim(raw);
        if (value.empty()) {
            throw ConfigError("config: " + path + " has no value (default " + key.get(defaults) + ")");
        }
        key.set(config, value);
    }
    config.validate();
    return config;
}

Config load_config(const std::filesystem::path& path, const std::vector<std::string>& overrides)
{
    std::ifstream in(path);
    if (!in) throw ConfigError("config: cannot open " + path.string());
    std::stringstream text;
    text << in.rdbuf();
    return parse_config(text.str(), overrides);
}

std::string to_ini(const Config& config)
{
    std::string out;
    std::string section;
    for (const Key& k : registry()) {
        const auto dot = k.path.find('.');
        const std::string sec = k.path.substr(0, dot);
        if (sec != section) {
            if (!section.empty()) out += '\n';
            out += '[' + sec + "]\n";
            section = sec;
        }
        out += k.path.substr(dot + 1) + " = " + k.get(config) + '\n';
    }
    return out;
}

} // namespace memsnn
