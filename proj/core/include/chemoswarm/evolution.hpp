#pragma once

#include "chemoswarm/cmaes.hpp"
#include "chemoswarm/controller.hpp"
#include "chemoswarm/episode.hpp"

#include <cstdint>
#include <functional>
#include <optional>

namespace chemo {

struct EvolutionConfig {
    int population = 100;
    int max_generations = 2000;
    int eval_every = 10;
    double initial_sigma = 0.1;
    int trials = 1;
    std::uint64_t seed = 1;
    int workers = 1;

    void validate() const;
};

/// Fitness of one genome in one randomized environment. Must be a pure
/// function of its arguments; it is called concurrently.
using GenomeEvaluator = std::function<double(const Genome& genome, std::uint64_t episode_seed)>;

/// run_single fitness under `config` (record_trace is forced off).
GenomeEvaluator single_agent_evaluator(EpisodeConfig config);

/// Seed of trial `trial` in generation `generation`. All candidates of a
/// generation share it, so they are ranked on identical environments.
std::uint64_t evaluation_seed(std::uint64_t master, int generation, int trial);

/// Seed of the multi-agent probe run at `generation`.
std::uint64_t probe_seed(std::uint64_t master, int generation);

struct GenerationSummary {
    int generation = 0;
    double best_fitness = 0.0;
    double mean_fitness = 0.0;
    double sigma = 0.0;   // step size after tell
    Genome best;
};

struct EvolutionHooks {
    /// After every generation's tell, with the updated optimizer.
    std::function<void(const GenerationSummary&, const CmaEs&)> on_generation;
    /// Every eval_every generations with that generation's best candidate.
    std::function<void(const GenerationSummary&)> on_probe;
};

Genome to_genome(const Eigen::VectorXd& v);
Eigen::VectorXd to_vector(const Genome& g);

/// Fresh optimizer at mean zero, sigma = config.initial_sigma.
CmaEs initial_optimizer(const EvolutionConfig& config);

/// ask -> parallel evaluate -> tell until state().generation reaches
/// config.max_generations. Resumes from whatever generation the optimizer is at.
void evolve(const EvolutionConfig& config, CmaEs& optimizer, const GenomeEvaluator& evaluate,
            const EvolutionHooks& hooks);

} // namespace chemo
