#include "chemoswarm/episode.hpp"

#include "chemoswarm/parallel.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace chemo {

EpisodeConfig EpisodeConfig::single_defaults() {
    EpisodeConfig c;
    c.phase = Phase::single;
    c.steps = 1000;
    c.n_agents = 1;
    c.n_spots = 5;
    c.trace_stride = 1;
    c.spot_ranges = SpotRanges::for_field(c.dims);
    return c;
}

EpisodeConfig EpisodeConfig::multi_defaults() {
    EpisodeConfig c;
    c.phase = Phase::multi;
    c.steps = 5000;
    c.n_agents = 1024;
    c.n_spots = 0;
    c.trace_stride = 5;
    c.spot_ranges = SpotRanges::for_field(c.dims);
    return c;
}

void EpisodeConfig::validate() const {
    auto fail = [](const std::string& what) { throw ConfigError("episode config: " + what); };
    if (steps <= 0) fail("steps must be positive");
    if (n_agents <= 0) fail("n_agents must be positive");
    if (dims.width <= 0 || dims.height <= 0) fail("field dimensions must be positive");
    if (!(decay_rate >= 0.0 && decay_rate < 1.0)) fail("decay rate must be in [0, 1)");
    if (!(deposit_value >= 0.0) || !std::isfinite(deposit_value)) fail("deposit value must be finite and >= 0");
    if (n_spots < 0) fail("n_spots must be >= 0");
    if (trace_stride < 1) fail("trace stride must be >= 1");
    if (workers < 1) fail("workers must be >= 1");
    if (!(sensors.body_radius >= 0.0) || !(sensors.sensor_radius > 0.0)) fail("sensor geometry must be positive");
    for (const Range& r : {spot_ranges.amplitude, spot_ranges.sigma, spot_ranges.center_x, spot_ranges.center_y}) {
        if (!(r.lo <= r.hi)) fail("spot range lower bound exceeds upper bound");
    }
    if (!(spot_ranges.sigma.lo > 0.0)) fail("spot sigma must be positive");
    if (!(spot_ranges.amplitude.lo >= 0.0)) fail("spot amplitude must be >= 0");
    if (phase == Phase::single && n_agents != 1) fail("single phase runs exactly one agent");
    if (phase == Phase::multi && n_spots != 0) fail("multi phase starts from an empty field");
}

Pose random_pose(Rng& rng, FieldDims dims) {
    std::uniform_real_distribution<double> ux(0.0, dims.width);
    std::uniform_real_distribution<double> uy(0.0, dims.height);
    std::uniform_real_distribution<double> ua(0.0, 2.0 * std::numbers::pi);
    Pose p;
    p.pos.x = ux(rng);
    p.pos.y = uy(rng);
    p.theta = ua(rng);
    p.pos = wrap(p.pos, dims);
    return p;
}

Scenario make_scenario(const EpisodeConfig& config, Rng& rng) {
    config.validate();
    Scenario s;
    if (config.phase == Phase::single) {
        s.field = init_spots(rng, config.n_spots, config.dims, config.spot_ranges);
    } else {
        s.field = PheromoneField(config.dims);
    }
    s.poses.reserve(static_cast<std::size_t>(config.n_agents));
    for (int i = 0; i < config.n_agents; ++i) s.poses.push_back(random_pose(rng, config.dims));
    return s;
}

EpisodeResult run_episode(const EpisodeConfig& config, Scenario scenario,
                          std::span<const Controller> controllers) {
    config.validate();
    const auto n = static_cast<std::size_t>(config.n_agents);
    if (controllers.size() != n) throw ConfigError("one controller per agent required");
    if (scenario.poses.size() != n) throw ConfigError("one initial pose per agent required");
    if (scenario.field.dims() != config.dims) throw ConfigError("scenario field does not match config dimensions");

    EpisodeResult result;
    result.steps = config.steps;
    result.trace_stride = config.trace_stride;
    result.field = std::move(scenario.field);
    PheromoneField& field = result.field;

    std::vector<AgentState> agents(n);
    for (std::size_t i = 0; i < n; ++i) {
        agents[i].id = static_cast<AgentId>(i);
        agents[i].pos = wrap(scenario.poses[i].pos, config.dims);
        agents[i].theta = scenario.poses[i].theta;
        agents[i].prev = agents[i].pos;
    }

    result.controller_digests.resize(n);
    for (std::size_t i = 0; i < n; ++i) result.controller_digests[i] = controller_digest(controllers[i]);

    result.fitness.assign(n, 0.0);
    std::vector<double> pending_gain(n, 0.0);
    std::vector<SensorReadings> sensed(n);
    std::vector<MotorCommand> commands(n);

    if (config.record_trace) {
        result.traces.resize(n);
        const auto rows = static_cast<std::size_t>((config.steps + config.trace_stride - 1) / config.trace_stride);
        for (std::size_t i = 0; i < n; ++i) {
            result.traces[i].agent = static_cast<AgentId>(i);
            result.traces[i].rows.reserve(rows);
        }
    }

    for (int step = 1; step <= config.steps; ++step) {
        // 1-3: sense, think, move. Each agent only touches its own slot.
        parallel_for(n, config.workers, [&](std::size_t i) {
            sensed[i] = read_sensors(field, agents[i], config.sensors);
            const ForwardResult fr = act(controllers[i], sensed[i], agents[i].controller);
            commands[i] = fr.command;
            agents[i] = step_kinematics(agents[i], fr.command, config.dims);
            agents[i].controller = fr.state;
        });

        // 4: serial so the last writer is always the highest id
        if (config.deposits_enabled()) {
            for (std::size_t i = 0; i < n; ++i) field.deposit(agents[i].id, agents[i].prev, config.deposit_value);
        }

        // 5
        field.decay(config.decay_rate, config.decay_mode);

        // 6
        const bool flush = step % config.trace_stride == 0 || step == config.steps;
        parallel_for(n, config.workers, [&](std::size_t i) {
            pending_gain[i] += field.gain_at(agents[i].id, agents[i].pos);
            if (!flush) return;
            result.fitness[i] += pending_gain[i];
            if (config.record_trace) {
                TraceRow row;
                row.step = step;
                row.sensors = sensed[i];
                row.raw = commands[i].raw;
                row.context = agents[i].controller.context;
                row.pos = agents[i].pos;
                row.prev = agents[i].prev;
                row.gain = pending_gain[i];
                result.traces[i].rows.push_back(row);
            }
            pending_gain[i] = 0.0;
        });
    }

    result.final_states = std::move(agents);
    return result;
}

EpisodeResult run_single(const Genome& genome, const EpisodeConfig& config, Rng& rng) {
    if (config.phase != Phase::single) throw ConfigError("run_single needs a single-phase config");
    Scenario scenario = make_scenario(config, rng);
    const Controller controller = decode(genome);
    return run_episode(config, std::move(scenario), std::span<const Controller>(&controller, 1));
}

EpisodeResult run_multi(const Genome& genome, const EpisodeConfig& config, Rng& rng) {
    if (config.phase != Phase::multi) throw ConfigError("run_multi needs a multi-phase config");
    Scenario scenario = make_scenario(config, rng);
    const Controller prototype = decode(genome);
    const std::vector<Controller> clones(static_cast<std::size_t>(config.n_agents), prototype);
    return run_episode(config, std::move(scenario), clones);
}

double collective_fitness(const EpisodeResult& result) {
    if (result.fitness.empty()) return 0.0;
    double sum = 0.0;
    for (double f : result.fitness) sum += f;
    return sum / static_cast<double>(result.fitness.size());
}

} // namespace chemo
