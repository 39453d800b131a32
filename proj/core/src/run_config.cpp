#include "chemoswarm/run_config.hpp"

#include <json.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>

namespace chemo {

namespace {

using nlohmann::ordered_json;

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::string unquote(std::string s) {
    if (s.size() >= 2 && (s.front() == '"' || s.front() == '\'') && s.back() == s.front()) {
        return s.substr(1, s.size() - 2);
    }
    return s;
}

template <class T>
T parse_integer(const std::string& key, const std::string& text) {
    T v{};
    const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
    if (res.ec != std::errc{} || res.ptr != text.data() + text.size()) {
        throw ConfigError("'" + key + "' expects an integer, got '" + text + "'");
    }
    return v;
}

double parse_real(const std::string& key, const std::string& text) {
    double v{};
    const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
    if (res.ec != std::errc{} || res.ptr != text.data() + text.size() || !std::isfinite(v)) {
        throw ConfigError("'" + key + "' expects a finite number, got '" + text + "'");
    }
    return v;
}

bool parse_bool(const std::string& key, const std::string& text) {
    std::string t = text;
    std::transform(t.begin(), t.end(), t.begin(), [](unsigned char c) { return std::tolower(c); });
    if (t == "true" || t == "1" || t == "yes" || t == "on") return true;
    if (t == "false" || t == "0" || t == "no" || t == "off") return false;
    throw ConfigError("'" + key + "' expects a boolean, got '" + text + "'");
}

const char* decay_mode_name(DecayMode m) {
    return m == DecayMode::multiplicative ? "multiplicative" : "subtractive";
}

struct Entry {
    const char* key;
    std::function<void(RunConfig&, const std::string&)> set;
    std::function<ordered_json(const RunConfig&)> get;
};

#define INT_ENTRY(name) \
    Entry{#name, [](RunConfig& c, const std::string& v) { c.name = parse_integer<int>(#name, v); }, \
          [](const RunConfig& c) { return ordered_json(c.name); }}
#define REAL_ENTRY(name) \
    Entry{#name, [](RunConfig& c, const std::string& v) { c.name = parse_real(#name, v); }, \
          [](const RunConfig& c) { return ordered_json(c.name); }}
#define BOOL_ENTRY(name) \
    Entry{#name, [](RunConfig& c, const std::string& v) { c.name = parse_bool(#name, v); }, \
          [](const RunConfig& c) { return ordered_json(c.name); }}
#define STRING_ENTRY(name) \
    Entry{#name, [](RunConfig& c, const std::string& v) { c.name = v; }, \
          [](const RunConfig& c) { return ordered_json(c.name); }}

const std::vector<Entry>& entries() {
    static const std::vector<Entry> table = {
        INT_ENTRY(field_width),
        INT_ENTRY(field_height),
        REAL_ENTRY(body_radius),
        REAL_ENTRY(sensor_radius),
        INT_ENTRY(n_spots),
        REAL_ENTRY(spot_amplitude_min),
        REAL_ENTRY(spot_amplitude_max),
        Entry{"spot_sigma_min",
              [](RunConfig& c, const std::string& v) {
                  if (v == "auto") c.spot_sigma_min.reset(); else c.spot_sigma_min = parse_real("spot_sigma_min", v);
              },
              [](const RunConfig& c) { return ordered_json(c.spot_ranges().sigma.lo); }},
        Entry{"spot_sigma_max",
              [](RunConfig& c, const std::string& v) {
                  if (v == "auto") c.spot_sigma_max.reset(); else c.spot_sigma_max = parse_real("spot_sigma_max", v);
              },
              [](const RunConfig& c) { return ordered_json(c.spot_ranges().sigma.hi); }},
        REAL_ENTRY(decay_rate),
        Entry{"decay_mode",
              [](RunConfig& c, const std::string& v) {
                  if (v == "multiplicative") c.decay_mode = DecayMode::multiplicative;
                  else if (v == "subtractive") c.decay_mode = DecayMode::subtractive;
                  else throw ConfigError("'decay_mode' must be multiplicative or subtractive, got '" + v + "'");
              },
              [](const RunConfig& c) { return ordered_json(decay_mode_name(c.decay_mode)); }},
        REAL_ENTRY(deposit_value),
        INT_ENTRY(single_steps),
        INT_ENTRY(multi_steps),
        INT_ENTRY(n_agents),
        INT_ENTRY(single_stride),
        INT_ENTRY(multi_stride),
        INT_ENTRY(population),
        INT_ENTRY(max_generations),
        INT_ENTRY(eval_every),
        REAL_ENTRY(initial_sigma),
        INT_ENTRY(trials),
        INT_ENTRY(energy_bins),
        REAL_ENTRY(bin_width),
        INT_ENTRY(correlogram_window),
        INT_ENTRY(correlogram_max_lag),
        INT_ENTRY(correlogram_step),
        Entry{"seed", [](RunConfig& c, const std::string& v) { c.seed = parse_integer<std::uint64_t>("seed", v); },
              [](const RunConfig& c) { return ordered_json(c.seed); }},
        INT_ENTRY(workers),
        STRING_ENTRY(out_dir),
        BOOL_ENTRY(resume),
        BOOL_ENTRY(probe_traces),
        BOOL_ENTRY(write_trace),
        BOOL_ENTRY(field_snapshot),
        STRING_ENTRY(genome),
        BOOL_ENTRY(rule_single),
        BOOL_ENTRY(rule_multi),
        Entry{"traces", [](RunConfig& c, const std::string& v) { c.traces.push_back(v); },
              [](const RunConfig& c) { return ordered_json(c.traces); }},
        INT_ENTRY(generation),
    };
    return table;
}

#undef INT_ENTRY
#undef REAL_ENTRY
#undef BOOL_ENTRY
#undef STRING_ENTRY

} // namespace

void RunConfig::set(const std::string& key, const std::string& value) {
    const auto& table = entries();
    const auto it = std::find_if(table.begin(), table.end(), [&](const Entry& e) { return key == e.key; });
    if (it == table.end()) throw ConfigError("unknown config key '" + key + "'");
    it->set(*this, value);
}

const std::vector<std::string>& RunConfig::keys() {
    static const std::vector<std::string> names = [] {
        std::vector<std::string> out;
        for (const auto& e : entries()) out.emplace_back(e.key);
        return out;
    }();
    return names;
}

void RunConfig::load_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file " + path.string());
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.resize(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw ConfigError(path.string() + ":" + std::to_string(line_no) + ": expected 'key = value'");
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string value = unquote(trim(line.substr(eq + 1)));
        try {
            set(key, value);
        } catch (const ConfigError& e) {
            throw ConfigError(path.string() + ":" + std::to_string(line_no) + ": " + e.what());
        }
    }
}

void RunConfig::validate() const {
    auto require = [](bool ok, const std::string& what) {
        if (!ok) throw ConfigError(what);
    };
    require(field_width > 0 && field_height > 0, "field dimensions must be positive");
    require(body_radius >= 0.0, "body_radius must be >= 0");
    require(sensor_radius > 0.0, "sensor_radius must be > 0");
    require(n_spots >= 0, "n_spots must be >= 0");
    require(spot_amplitude_min >= 0.0 && spot_amplitude_min <= spot_amplitude_max,
            "spot amplitude range must satisfy 0 <= min <= max");
    const auto ranges = spot_ranges();
    require(ranges.sigma.lo > 0.0 && ranges.sigma.lo <= ranges.sigma.hi, "spot sigma range must satisfy 0 < min <= max");
    require(field_width > 5 && field_height > 5, "field must be larger than 5 cells to place spot centers");
    require(decay_rate >= 0.0 && decay_rate < 1.0, "decay_rate must be in [0, 1)");
    require(deposit_value >= 0.0, "deposit_value must be >= 0");
    require(single_steps > 0 && multi_steps > 0, "step counts must be positive");
    require(n_agents > 0, "n_agents must be positive");
    require(single_stride >= 1 && multi_stride >= 1, "trace strides must be >= 1");
    require(population >= 2, "population must be >= 2");
    require(max_generations >= 0, "max_generations must be >= 0");
    require(eval_every >= 1, "eval_every must be >= 1");
    require(initial_sigma > 0.0, "initial_sigma must be > 0");
    require(trials >= 1, "trials must be >= 1");
    require(energy_bins >= 1, "energy_bins must be >= 1");
    require(bin_width > 0.0 && bin_width <= 1.0, "bin_width must be in (0, 1]");
    require(correlogram_window >= 2, "correlogram_window must be >= 2");
    require(correlogram_max_lag >= 0, "correlogram_max_lag must be >= 0");
    require(correlogram_step >= 1, "correlogram_step must be >= 1");
    require(workers >= 1, "workers must be >= 1");
    require(!out_dir.empty(), "out_dir must not be empty");
}

SpotRanges RunConfig::spot_ranges() const {
    SpotRanges r = SpotRanges::for_field(dims());
    r.amplitude = {spot_amplitude_min, spot_amplitude_max};
    if (spot_sigma_min) r.sigma.lo = *spot_sigma_min;
    if (spot_sigma_max) r.sigma.hi = *spot_sigma_max;
    return r;
}

EpisodeConfig RunConfig::single_episode() const {
    EpisodeConfig c = EpisodeConfig::single_defaults();
    c.steps = single_steps;
    c.dims = dims();
    c.decay_rate = decay_rate;
    c.decay_mode = decay_mode;
    c.deposit_value = deposit_value;
    c.n_spots = n_spots;
    c.spot_ranges = spot_ranges();
    c.sensors.body_radius = body_radius;
    c.sensors.sensor_radius = sensor_radius;
    c.trace_stride = single_stride;
    c.workers = 1;
    return c;
}

EpisodeConfig RunConfig::multi_episode() const {
    EpisodeConfig c = EpisodeConfig::multi_defaults();
    c.steps = multi_steps;
    c.n_agents = n_agents;
    c.dims = dims();
    c.decay_rate = decay_rate;
    c.decay_mode = decay_mode;
    c.deposit_value = deposit_value;
    c.n_spots = 0;
    c.spot_ranges = spot_ranges();
    c.sensors.body_radius = body_radius;
    c.sensors.sensor_radius = sensor_radius;
    c.trace_stride = multi_stride;
    c.workers = workers;
    return c;
}

EvolutionConfig RunConfig::evolution() const {
    EvolutionConfig c;
    c.population = population;
    c.max_generations = max_generations;
    c.eval_every = eval_every;
    c.initial_sigma = initial_sigma;
    c.trials = trials;
    c.seed = seed;
    c.workers = workers;
    return c;
}

std::string RunConfig::to_json() const {
    ordered_json j;
    for (const auto& e : entries()) j[e.key] = e.get(*this);
    j["n_sensors"] = kSensorCount;
    j["n_actions"] = kMotorCount;
    j["genome_size"] = kGenomeSize;
    return j.dump(2) + "\n";
}

} // namespace chemo
