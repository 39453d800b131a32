#include "chemoswarm/evolution.hpp"

#include "chemoswarm/parallel.hpp"
#include "chemoswarm/seed.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace chemo {

void EvolutionConfig::validate() const {
    if (population < 2) throw ConfigError("population must be >= 2");
    if (max_generations < 0) throw ConfigError("max_generations must be >= 0");
    if (eval_every < 1) throw ConfigError("eval_every must be >= 1");
    if (!(initial_sigma > 0.0) || !std::isfinite(initial_sigma)) throw ConfigError("initial_sigma must be positive");
    if (trials < 1) throw ConfigError("trials must be >= 1");
    if (workers < 1) throw ConfigError("workers must be >= 1");
}

GenomeEvaluator single_agent_evaluator(EpisodeConfig config) {
    config.record_trace = false;
    config.workers = 1;
    config.validate();
    return [config](const Genome& genome, std::uint64_t episode_seed) {
        Rng rng(episode_seed);
        return run_single(genome, config, rng).fitness.front();
    };
}

std::uint64_t evaluation_seed(std::uint64_t master, int generation, int trial) {
    return derive_seed(master, SeedPurpose::single_episode,
                       {static_cast<std::uint64_t>(generation), static_cast<std::uint64_t>(trial)});
}

std::uint64_t probe_seed(std::uint64_t master, int generation) {
    return derive_seed(master, SeedPurpose::multi_episode, {static_cast<std::uint64_t>(generation)});
}

Genome to_genome(const Eigen::VectorXd& v) {
    return Genome::from_weights(std::span<const double>(v.data(), static_cast<std::size_t>(v.size())));
}

Eigen::VectorXd to_vector(const Genome& g) {
    const auto w = g.weights();
    return Eigen::Map<const Eigen::VectorXd>(w.data(), static_cast<Eigen::Index>(w.size()));
}

CmaEs initial_optimizer(const EvolutionConfig& config) {
    config.validate();
    return CmaEs(CmaParameters::standard(static_cast<int>(kGenomeSize), config.population),
                 Eigen::VectorXd::Zero(static_cast<Eigen::Index>(kGenomeSize)), config.initial_sigma);
}

void evolve(const EvolutionConfig& config, CmaEs& optimizer, const GenomeEvaluator& evaluate,
            const EvolutionHooks& hooks) {
    config.validate();
    if (optimizer.parameters().lambda != config.population) {
        throw ConfigError("optimizer population does not match config");
    }

    while (optimizer.state().generation < config.max_generations) {
        const int generation = optimizer.state().generation + 1;
        Rng ask_rng(derive_seed(config.seed, SeedPurpose::ask, {static_cast<std::uint64_t>(generation)}));
        const auto candidates = optimizer.ask(ask_rng);

        std::vector<Genome> genomes;
        genomes.reserve(candidates.size());
        for (const auto& c : candidates) genomes.push_back(to_genome(c));

        std::vector<double> fitness(genomes.size(), 0.0);
        parallel_for(genomes.size(), config.workers, [&](std::size_t k) {
            double total = 0.0;
            for (int trial = 0; trial < config.trials; ++trial) {
                total += evaluate(genomes[k], evaluation_seed(config.seed, generation, trial));
            }
            fitness[k] = total / config.trials;
        });

        // first index wins ties, matching the stable ranking in tell()
        std::size_t best = 0;
        double sum = 0.0;
        for (std::size_t k = 0; k < fitness.size(); ++k) {
            sum += fitness[k];
            if (fitness[k] > fitness[best]) best = k;
        }

        optimizer.tell(candidates, fitness);

        GenerationSummary summary;
        summary.generation = generation;
        summary.best_fitness = fitness[best];
        summary.mean_fitness = sum / static_cast<double>(fitness.size());
        summary.sigma = optimizer.state().sigma;
        summary.best = genomes[best];

        if (generation % config.eval_every == 0 && hooks.on_probe) hooks.on_probe(summary);
        if (hooks.on_generation) hooks.on_generation(summary, optimizer);
    }
}

} // namespace chemo
