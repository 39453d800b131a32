#include "chemoswarm/commands.hpp"

#include "chemoswarm/checkpoint.hpp"
#include "chemoswarm/seed.hpp"
#include "chemoswarm/trace_io.hpp"

#include <json.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace chemo {

namespace fs = std::filesystem;

namespace {

std::string padded(int generation) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "%06d", generation);
    return buf;
}

void write_file(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write " + path.string());
    out << text;
    if (!out) throw Error("write failed for " + path.string());
}

void append_file(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary | std::ios::app);
    if (!out) throw Error("cannot append to " + path.string());
    out << text;
    if (!out) throw Error("write failed for " + path.string());
}

/// Drops data rows whose leading generation column exceeds `generation`.
void truncate_csv(const fs::path& path, int generation) {
    if (!fs::exists(path)) throw Error("cannot resume: missing " + path.string());
    std::istringstream in(read_text_file(path));
    std::string out;
    std::string line;
    bool header = true;
    while (std::getline(in, line)) {
        if (header) {
            out += line + '\n';
            header = false;
            continue;
        }
        if (line.empty()) continue;
        const int g = std::stoi(line.substr(0, line.find(',')));
        if (g <= generation) out += line + '\n';
    }
    write_text_file_atomic(path, out);
}

std::string generations_header() {
    return "generation,best_fitness,mean_fitness,sigma\n";
}

std::string generation_row(const GenerationSummary& s) {
    return std::to_string(s.generation) + ',' + format_double(s.best_fitness) + ',' + format_double(s.mean_fitness) +
           ',' + format_double(s.sigma) + '\n';
}

std::string scatter_header() {
    return "generation,mi_mean,collective_fitness,area_std\n";
}

std::string scatter_row(const ProbeMetrics& m) {
    return std::to_string(m.generation) + ',' + format_double(m.mi_mean) + ',' + format_double(m.collective_fitness) +
           ',' + format_double(m.area_std) + '\n';
}

/// Distribution, time-series, and histogram exports of one episode.
void write_analysis(const fs::path& dir, const ProbeMetrics& m, std::span<const AgentTrace> traces) {
    fs::create_directories(dir);
    write_file(dir / "metrics.csv", probe_csv_header(static_cast<int>(m.energy.counts.size())) + probe_csv_row(m));

    std::string agents = "agent_id,fitness,movement_area\n";
    for (std::size_t i = 0; i < traces.size(); ++i) {
        agents += std::to_string(traces[i].agent) + ',' + format_double(m.fitness[i]) + ',' +
                  std::to_string(m.movement_areas[i]) + '\n';
    }
    write_file(dir / "agents.csv", agents);

    const auto gains = gain_timeseries(traces);
    std::string series = "step,mean_gain\n";
    for (std::size_t r = 0; r < gains.size(); ++r) {
        series += std::to_string(traces.front().rows[r].step) + ',' + format_double(gains[r]) + '\n';
    }
    write_file(dir / "gain_timeseries.csv", series);

    std::string context = "step,agent_id,c0,c1\n";
    for (const auto& row : traces.front().rows) {
        context += std::to_string(row.step) + ',' + std::to_string(traces.front().agent) + ',' +
                   format_double(row.context[0]) + ',' + format_double(row.context[1]) + '\n';
    }
    write_file(dir / "context.csv", context);

    std::string hist = "bin,lo,hi,count\n";
    for (std::size_t b = 0; b < m.energy.counts.size(); ++b) {
        hist += std::to_string(b) + ',' + format_double(m.energy.edges[b]) + ',' + format_double(m.energy.edges[b + 1]) +
                ',' + std::to_string(m.energy.counts[b]) + '\n';
    }
    write_file(dir / "energy_histogram.csv", hist);
}

void write_trace_file(const fs::path& path, std::span<const AgentTrace> traces) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write " + path.string());
    write_trace_csv(out, traces);
    if (!out) throw Error("write failed for " + path.string());
}

GenomeCheckpoint load_genome(const std::string& path) {
    if (path.empty()) throw ConfigError("a genome checkpoint is required (--genome)");
    const std::string text = read_text_file(path);
    try {
        return parse_genome_checkpoint(text);
    } catch (const ParseError& e) {
        throw ParseError(path + ": " + e.what());
    }
}

} // namespace

std::string probe_csv_header(int energy_bins) {
    std::string h = "generation,collective_fitness,gain_std,area_std,mi_mean,cond_entropy_mean";
    for (int b = 0; b < energy_bins; ++b) h += ",e" + std::to_string(b);
    return h + '\n';
}

std::string probe_csv_row(const ProbeMetrics& m) {
    std::string row = std::to_string(m.generation);
    for (double v : {m.collective_fitness, m.gain_std, m.area_std, m.mi_mean, m.cond_entropy_mean}) {
        row += ',' + format_double(v);
    }
    for (auto c : m.energy.counts) row += ',' + std::to_string(c);
    return row + '\n';
}

ProbeOutcome run_probe(const RunConfig& config, const GenerationSummary& summary) {
    EpisodeConfig multi = config.multi_episode();
    multi.record_trace = true;
    Rng rng(probe_seed(config.seed, summary.generation));
    ProbeOutcome out{run_multi(summary.best, multi, rng), {}};
    const auto expected = summary.best.digest();
    for (auto d : out.episode.controller_digests) {
        if (d != expected) throw Error("probe agent does not carry the probed genome");
    }
    out.metrics = probe_metrics(out.episode.traces, config.dims(), config.energy_bins, summary.generation,
                                config.bin_width);
    return out;
}

void cmd_evolve(const RunConfig& config) {
    config.validate();
    const fs::path dir = config.out_dir;
    fs::create_directories(dir / "checkpoints");
    fs::create_directories(dir / "probes");

    const EvolutionConfig evo = config.evolution();
    const GenomeEvaluator evaluate = single_agent_evaluator(config.single_episode());
    const fs::path state_path = dir / "state.json";
    const fs::path generations_path = dir / "generations.csv";
    const fs::path probes_path = dir / "probes.csv";
    const fs::path scatter_path = dir / "scatter.csv";

    CmaEs optimizer = initial_optimizer(evo);
    if (config.resume) {
        RunState state = parse_run_state(read_text_file(state_path));
        optimizer = CmaEs(CmaParameters::standard(static_cast<int>(kGenomeSize), evo.population), std::move(state.cma));
        const int g = optimizer.state().generation;
        truncate_csv(generations_path, g);
        truncate_csv(probes_path, g);
        truncate_csv(scatter_path, g);
    } else {
        write_file(generations_path, generations_header());
        write_file(probes_path, probe_csv_header(config.energy_bins));
        write_file(scatter_path, scatter_header());
        GenomeCheckpoint initial{0, std::nullopt, to_genome(optimizer.state().mean)};
        write_text_file_atomic(dir / "checkpoints" / ("genome_" + padded(0) + ".json"), genome_checkpoint_json(initial));
        write_text_file_atomic(state_path, run_state_json(RunState{optimizer.state(), std::nullopt}));
    }
    write_file(dir / "config.json", config.to_json());

    EvolutionHooks hooks;
    hooks.on_probe = [&](const GenerationSummary& s) {
        const ProbeOutcome probe = run_probe(config, s);
        const fs::path probe_dir = dir / "probes" / ("gen_" + padded(s.generation));
        write_analysis(probe_dir, probe.metrics, probe.episode.traces);
        if (config.probe_traces) write_trace_file(probe_dir / "trace.csv", probe.episode.traces);
        write_text_file_atomic(dir / "checkpoints" / ("genome_" + padded(s.generation) + ".json"),
                               genome_checkpoint_json(GenomeCheckpoint{s.generation, s.best_fitness, s.best}));
        append_file(probes_path, probe_csv_row(probe.metrics));
        append_file(scatter_path, scatter_row(probe.metrics));
    };
    hooks.on_generation = [&](const GenerationSummary& s, const CmaEs& opt) {
        append_file(generations_path, generation_row(s));
        write_text_file_atomic(state_path,
                               run_state_json(RunState{opt.state(), GenomeCheckpoint{s.generation, s.best_fitness, s.best}}));
    };

    evolve(evo, optimizer, evaluate, hooks);
}

void cmd_multi(const RunConfig& config) {
    config.validate();
    const GenomeCheckpoint checkpoint = load_genome(config.genome);
    const fs::path dir = config.out_dir;
    fs::create_directories(dir);

    GenerationSummary summary;
    summary.generation = checkpoint.generation;
    summary.best = checkpoint.genome;
    const ProbeOutcome probe = run_probe(config, summary);
    const ProbeMetrics& m = probe.metrics;

    write_file(dir / "config.json", config.to_json());
    write_analysis(dir, m, probe.episode.traces);
    write_file(dir / "scatter.csv", scatter_header() + scatter_row(m));
    if (config.write_trace) write_trace_file(dir / "trace.csv", probe.episode.traces);
    if (config.field_snapshot) {
        std::ofstream out(dir / "field.bin", std::ios::binary | std::ios::trunc);
        probe.episode.field.write_binary(out, probe.episode.steps);
        if (!out) throw Error("write failed for field.bin");
    }

    nlohmann::ordered_json summary_json;
    summary_json["seed"] = config.seed;
    summary_json["episode_seed"] = probe_seed(config.seed, checkpoint.generation);
    summary_json["generation"] = checkpoint.generation;
    summary_json["genome_digest"] = checkpoint.genome.digest();
    summary_json["collective_fitness"] = collective_fitness(probe.episode);
    summary_json["fitness"] = probe.episode.fitness;
    summary_json["config"] = nlohmann::ordered_json::parse(config.to_json());
    write_file(dir / "summary.json", summary_json.dump(2) + "\n");
}

void cmd_rulebased(const RunConfig& config) {
    config.validate();
    const fs::path dir = config.out_dir;
    fs::create_directories(dir);
    write_file(dir / "config.json", config.to_json());

    EpisodeConfig single = config.single_episode();
    single.record_trace = true;
    Rng rng(derive_seed(config.seed, SeedPurpose::rule_based, {0}));
    const Scenario scenario = make_scenario(single, rng);

    std::optional<EpisodeResult> rule_run;
    if (config.rule_single || !config.genome.empty()) {
        const Controller rule = RuleBased{};
        rule_run = run_episode(single, scenario, std::span<const Controller>(&rule, 1));
    }
    if (config.rule_single) {
        const auto m = probe_metrics(rule_run->traces, config.dims(), config.energy_bins, 0, config.bin_width);
        write_analysis(dir / "single", m, rule_run->traces);
        write_trace_file(dir / "single" / "trace.csv", rule_run->traces);
    }

    if (!config.genome.empty()) {
        const GenomeCheckpoint checkpoint = load_genome(config.genome);
        const Controller evolved = decode(checkpoint.genome);
        const EpisodeResult evolved_run = run_episode(single, scenario, std::span<const Controller>(&evolved, 1));
        const auto m = probe_metrics(evolved_run.traces, config.dims(), config.energy_bins, checkpoint.generation,
                                     config.bin_width);
        write_analysis(dir / "single_evolved", m, evolved_run.traces);
        write_trace_file(dir / "single_evolved" / "trace.csv", evolved_run.traces);

        auto channel = [](const EpisodeResult& r, std::size_t k) {
            std::vector<double> out;
            for (const auto& row : r.traces.front().rows) out.push_back(row.raw[k]);
            return out;
        };
        const auto rv = channel(*rule_run, 0);
        const auto ro = channel(*rule_run, 1);
        const auto ev = channel(evolved_run, 0);
        const auto eo = channel(evolved_run, 1);
        const auto cv = cross_correlogram(rv, ev, config.correlogram_max_lag, config.correlogram_window,
                                          config.correlogram_step);
        const auto co = cross_correlogram(ro, eo, config.correlogram_max_lag, config.correlogram_window,
                                          config.correlogram_step);
        std::string csv = "window,lag,r_v,r_omega,degenerate_v,degenerate_omega\n";
        for (std::size_t i = 0; i < cv.size(); ++i) {
            csv += std::to_string(cv[i].window_start) + ',' + std::to_string(cv[i].lag) + ',' + format_double(cv[i].r) +
                   ',' + format_double(co[i].r) + ',' + (cv[i].degenerate ? "1" : "0") + ',' +
                   (co[i].degenerate ? "1" : "0") + '\n';
        }
        write_file(dir / "correlogram.csv", csv);
    }

    if (config.rule_multi) {
        EpisodeConfig multi = config.multi_episode();
        multi.record_trace = true;
        Rng multi_rng(derive_seed(config.seed, SeedPurpose::rule_based, {1}));
        Scenario population = make_scenario(multi, multi_rng);
        const std::vector<Controller> agents(static_cast<std::size_t>(multi.n_agents), RuleBased{});
        const EpisodeResult r = run_episode(multi, std::move(population), agents);
        const auto m = probe_metrics(r.traces, config.dims(), config.energy_bins, 0, config.bin_width);
        write_analysis(dir / "multi", m, r.traces);
        if (config.write_trace) write_trace_file(dir / "multi" / "trace.csv", r.traces);
    }
}

void cmd_analyze(const RunConfig& config) {
    config.validate();
    if (config.traces.empty()) throw ConfigError("analyze needs at least one trace file (--traces)");
    const fs::path dir = config.out_dir;
    fs::create_directories(dir);

    std::string metrics = probe_csv_header(config.energy_bins);
    std::string scatter = scatter_header();
    for (std::size_t i = 0; i < config.traces.size(); ++i) {
        const fs::path path = config.traces[i];
        std::ifstream in(path, std::ios::binary);
        if (!in) throw Error("cannot open " + path.string());
        std::vector<AgentTrace> traces;
        try {
            traces = read_trace_csv(in);
        } catch (const ParseError& e) {
            throw ParseError(path.string() + ": " + e.what());
        }
        if (traces.empty()) throw ParseError(path.string() + ": trace has no rows");
        const auto m = probe_metrics(traces, config.dims(), config.energy_bins, config.generation, config.bin_width);
        const fs::path target = config.traces.size() == 1 ? dir : dir / (std::to_string(i) + "_" + path.stem().string());
        write_analysis(target, m, traces);
        metrics += probe_csv_row(m);
        scatter += scatter_row(m);
    }
    if (config.traces.size() > 1) write_file(dir / "metrics.csv", metrics);
    write_file(dir / "scatter.csv", scatter);
}

} // namespace chemo
