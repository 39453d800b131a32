#pragma once

#include "chemoswarm/common.hpp"
#include "chemoswarm/episode.hpp"

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace chemo {

inline constexpr double kDefaultBinWidth = 0.01;

/// Multivariate symbol sequence: `length()` tuples of `dims` integers, each in
/// [0, n_bins).
struct DiscretizedSeries {
    int dims = 0;
    int n_bins = 0;
    std::vector<int> symbols;  // row-major, length() * dims

    std::size_t length() const noexcept {
        return dims > 0 ? symbols.size() / static_cast<std::size_t>(dims) : 0;
    }
    std::span<const int> at(std::size_t t) const {
        return std::span<const int>(symbols).subspan(t * static_cast<std::size_t>(dims),
                                                     static_cast<std::size_t>(dims));
    }
};

/// bin = min(floor(value / width), n_bins - 1) with n_bins = round(1 / width).
/// Values within 1e-9 bins of an upper edge count as on the edge.
/// `values` is row-major with `dims` columns. Throws RangeError for values
/// outside [0, 1].
DiscretizedSeries discretize(std::span<const double> values, int dims,
                             double bin_width = kDefaultBinWidth);

/// Entropies in bits from plug-in (maximum-likelihood) estimates.
struct InfoDecomposition {
    double mi = 0.0;            // MI(I;O) = H(I) + H(O) - H(I,O)
    double cond_entropy = 0.0;  // H(O|I) = H(I,O) - H(I)
    double out_entropy = 0.0;   // H(O)
    double in_entropy = 0.0;
    double joint_entropy = 0.0;
};

/// Plug-in entropy in bits of a symbol-tuple sequence.
double plugin_entropy(const DiscretizedSeries& series);

/// Throws RangeError if lengths differ or are below 2.
InfoDecomposition info_decomposition(const DiscretizedSeries& inputs,
                                     const DiscretizedSeries& outputs);

/// Sensor (6) vs raw motor (2) decomposition over one agent's logged rows.
InfoDecomposition agent_info(const AgentTrace& trace, double bin_width = kDefaultBinWidth);

/// Arithmetic mean of agent_info over agents.
InfoDecomposition population_info(std::span<const AgentTrace> traces,
                                  double bin_width = kDefaultBinWidth);

/// Per-row squared minimum-image displacement (pos - prev).
std::vector<double> kinetic_energy(const AgentTrace& trace, FieldDims dims);

struct EnergyHistogram {
    std::vector<double> edges;          // bins + 1 edges over [0, 1]
    std::vector<std::uint64_t> counts;  // bin = min(floor(E * bins), bins - 1)
    int generation = 0;

    std::uint64_t total() const;
};

/// Pooled histogram of every row's energy. Throws RangeError if bins < 1.
EnergyHistogram energy_histogram(std::span<const AgentTrace> traces, FieldDims dims, int bins,
                                 int generation = 0);

/// Distinct grid cells holding the agent's center: the first row's prev
/// position plus every logged position.
std::size_t movement_area(const AgentTrace& trace, FieldDims dims);

struct Dispersion {
    double mean = 0.0;
    double std = 0.0;  // population (divide by N)
};

Dispersion dispersion(std::span<const double> values);

/// Per-row mean of the gain column across agents. Traces must be aligned.
std::vector<double> gain_timeseries(std::span<const AgentTrace> traces);

/// Pearson correlation. Throws DegenerateError on zero variance and
/// RangeError on length mismatch or fewer than 2 points.
double pearson(std::span<const double> x, std::span<const double> y);

struct CorrelogramCell {
    int window_start = 0;
    int lag = 0;
    double r = 0.0;
    bool degenerate = false;  // zero variance, r reported as 0
};

/// For each window start w (0, step, 2 step, ...) with w + window <= n and each
/// lag in [-max_lag, max_lag]: Pearson r between a[w, w+window) and
/// b[w+lag, w+lag+window). Lags that leave b's range are skipped.
std::vector<CorrelogramCell> cross_correlogram(std::span<const double> a,
                                               std::span<const double> b, int max_lag,
                                               int window, int window_step);

/// Everything reported for one multi-agent probe.
struct ProbeMetrics {
    int generation = 0;
    double collective_fitness = 0.0;
    double gain_std = 0.0;
    double area_std = 0.0;
    double mi_mean = 0.0;
    double cond_entropy_mean = 0.0;
    double out_entropy_mean = 0.0;
    EnergyHistogram energy;
    std::vector<double> fitness;                // per agent
    std::vector<std::size_t> movement_areas;    // per agent
};

/// Recomputes every metric from traces alone; fitness is the sum of each
/// trace's gain column.
ProbeMetrics probe_metrics(std::span<const AgentTrace> traces, FieldDims dims, int energy_bins,
                           int generation, double bin_width = kDefaultBinWidth);

} // namespace chemo
