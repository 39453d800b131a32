#pragma once

#include "chemoswarm/metrics.hpp"
#include "chemoswarm/run_config.hpp"

#include <iosfwd>
#include <string>

namespace chemo {

/// Header of the per-probe metrics CSV for `energy_bins` histogram columns.
std::string probe_csv_header(int energy_bins);
std::string probe_csv_row(const ProbeMetrics& m);

struct ProbeOutcome {
    EpisodeResult episode;
    ProbeMetrics metrics;
};

/// Clones `summary.best` into config.n_agents agents, runs one traced
/// multi-agent episode seeded by probe_seed(), and computes its metrics.
/// Throws Error if any agent's controller differs from the probed genome.
ProbeOutcome run_probe(const RunConfig& config, const GenerationSummary& summary);

/// Evolution run. Writes into config.out_dir:
///   config.json, generations.csv, probes.csv, scatter.csv, state.json,
///   checkpoints/genome_<gen>.json, probes/gen_<gen>/...
/// With config.resume, continues from state.json.
void cmd_evolve(const RunConfig& config);

/// One multi-agent episode of the genome in config.genome plus analysis.
void cmd_multi(const RunConfig& config);

/// Rule-based single and population episodes, and a cross-correlogram
/// against config.genome when given.
void cmd_rulebased(const RunConfig& config);

/// Recomputes analysis outputs from trace CSVs in config.traces.
void cmd_analyze(const RunConfig& config);

} // namespace chemo
