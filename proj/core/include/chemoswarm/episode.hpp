#pragma once

#include "chemoswarm/agent.hpp"
#include "chemoswarm/common.hpp"
#include "chemoswarm/controller.hpp"
#include "chemoswarm/pheromone_field.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace chemo {

enum class Phase { single, multi };

struct EpisodeConfig {
    Phase phase = Phase::single;
    int steps = 1000;
    int n_agents = 1;
    FieldDims dims{};
    double decay_rate = 0.001;
    DecayMode decay_mode = DecayMode::multiplicative;
    double deposit_value = 1.0;
    int n_spots = 5;
    SpotRanges spot_ranges{};
    SensorLayout sensors{};
    /// Log every `trace_stride`-th step (and always the last one).
    int trace_stride = 1;
    bool record_trace = true;
    int workers = 1;

    static EpisodeConfig single_defaults();
    static EpisodeConfig multi_defaults();

    bool deposits_enabled() const noexcept { return phase == Phase::multi; }

    /// Throws ConfigError when an invariant is violated.
    void validate() const;
};

/// One logged step of one agent.
///
/// `gain` is the pheromone accrued over the steps since the previous logged
/// row (a single step's psi when the stride is 1), so the gain column of a
/// trace always sums to the agent's fitness. `prev` is the position one step
/// before `pos`.
struct TraceRow {
    int step = 0;
    SensorReadings sensors{};
    std::array<double, kMotorCount> raw{};
    std::array<double, kContextCount> context{};
    Vec2 pos;
    Vec2 prev;
    double gain = 0.0;
};

struct AgentTrace {
    AgentId agent = 0;
    std::vector<TraceRow> rows;
};

struct Pose {
    Vec2 pos;
    double theta = 0.0;
};

/// Explicit initial conditions of an episode.
struct Scenario {
    PheromoneField field;
    std::vector<Pose> poses;
};

struct EpisodeResult {
    std::vector<double> fitness;            // per agent, sum of per-step gains
    std::vector<AgentTrace> traces;         // empty unless record_trace
    std::vector<std::uint64_t> controller_digests;
    std::vector<AgentState> final_states;
    PheromoneField field;                   // final field
    int steps = 0;
    int trace_stride = 1;
};

/// Uniform pose over the field with heading in [0, 2 pi).
Pose random_pose(Rng& rng, FieldDims dims);

/// Random spots (single phase) or an empty field (multi phase) plus
/// config.n_agents random poses.
Scenario make_scenario(const EpisodeConfig& config, Rng& rng);

/// Runs one episode with one controller per agent. Every step:
///   1. all agents sense the current field
///   2. all controllers step
///   3. all agents move
///   4. (multi) deposits at each agent's previous position, ascending id
///   5. decay
///   6. each agent accrues gain_at(own id, new position)
/// Results do not depend on config.workers.
EpisodeResult run_episode(const EpisodeConfig& config, Scenario scenario,
                          std::span<const Controller> controllers);

/// Single-agent evolution episode on random spots.
EpisodeResult run_single(const Genome& genome, const EpisodeConfig& config, Rng& rng);

/// Homogeneous population: the genome is decoded once and cloned to every agent.
EpisodeResult run_multi(const Genome& genome, const EpisodeConfig& config, Rng& rng);

/// Mean of per-agent fitness.
double collective_fitness(const EpisodeResult& result);

} // namespace chemo
