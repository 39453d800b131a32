#pragma once

#include "chemoswarm/cmaes.hpp"
#include "chemoswarm/controller.hpp"

#include <filesystem>
#include <optional>
#include <string>

namespace chemo {

inline constexpr int kCheckpointSchemaVersion = 1;

struct GenomeCheckpoint {
    int generation = 0;
    std::optional<double> fitness;  // absent for the unevaluated initial mean
    Genome genome;
};

/// JSON record {schema_version, generation, fitness, weight_layout, weights};
/// weights are written with 17 significant digits in Genome layout order.
std::string genome_checkpoint_json(const GenomeCheckpoint& checkpoint);
GenomeCheckpoint parse_genome_checkpoint(const std::string& text);

/// Optimizer state plus the last generation's best genome.
struct RunState {
    CmaState cma;
    std::optional<GenomeCheckpoint> best;
};

std::string run_state_json(const RunState& state);
RunState parse_run_state(const std::string& text);

std::string read_text_file(const std::filesystem::path& path);

/// Writes via a temporary sibling and rename, so a crash never leaves a
/// truncated file at `path`.
void write_text_file_atomic(const std::filesystem::path& path, const std::string& text);

} // namespace chemo
