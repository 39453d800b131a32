#pragma once

#include "chemoswarm/episode.hpp"
#include "chemoswarm/evolution.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace chemo {

/// Every tunable of a run. Defaults reproduce the reference parameter table.
struct RunConfig {
    // environment
    int field_width = 600;
    int field_height = 600;
    double body_radius = 20.0;
    double sensor_radius = 2.0;
    int n_spots = 5;
    double spot_amplitude_min = 0.2;
    double spot_amplitude_max = 1.0;
    std::optional<double> spot_sigma_min;  // unset: 50 scaled by min(width, height) / 600
    std::optional<double> spot_sigma_max;  // unset: 100 scaled likewise
    double decay_rate = 0.001;
    DecayMode decay_mode = DecayMode::multiplicative;
    double deposit_value = 1.0;

    // episodes
    int single_steps = 1000;
    int multi_steps = 5000;
    int n_agents = 1024;
    int single_stride = 1;
    int multi_stride = 5;

    // evolution
    int population = 100;
    int max_generations = 2000;
    int eval_every = 10;
    double initial_sigma = 0.1;
    int trials = 1;

    // analysis
    int energy_bins = 10;
    double bin_width = 0.01;
    int correlogram_window = 100;
    int correlogram_max_lag = 20;
    int correlogram_step = 50;

    // run control
    std::uint64_t seed = 1;
    int workers = 1;
    std::string out_dir = "run";
    bool resume = false;
    bool probe_traces = false;
    bool write_trace = true;
    bool field_snapshot = false;

    // subcommand inputs
    std::string genome;                 // multi, rulebased
    bool rule_single = true;            // rulebased
    bool rule_multi = true;             // rulebased
    std::vector<std::string> traces;    // analyze
    int generation = 0;                 // analyze row label

    /// Applies one `key = value` setting. Throws ConfigError for unknown keys
    /// or unparsable values.
    void set(const std::string& key, const std::string& value);

    /// Every key accepted by set().
    static const std::vector<std::string>& keys();

    /// Flat `key = value` file; blank lines and `#` comments ignored.
    void load_file(const std::filesystem::path& path);

    /// Throws ConfigError when a parameter is out of bounds.
    void validate() const;

    FieldDims dims() const { return {field_width, field_height}; }
    SpotRanges spot_ranges() const;
    EpisodeConfig single_episode() const;
    EpisodeConfig multi_episode() const;
    EvolutionConfig evolution() const;

    /// Flat JSON echo of every resolved parameter.
    std::string to_json() const;
};

} // namespace chemo
