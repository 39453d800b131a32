#include "chemoswarm/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <optional>
#include <string>

namespace chemo {

namespace {

std::uint64_t checked_alphabet(int n_bins, int dims) {
    std::uint64_t size = 1;
    for (int d = 0; d < dims; ++d) {
        if (size > std::numeric_limits<std::uint64_t>::max() / static_cast<std::uint64_t>(n_bins)) {
            throw RangeError("symbol alphabet too large to encode");
        }
        size *= static_cast<std::uint64_t>(n_bins);
    }
    return size;
}

/// Mixed-radix code of every tuple.
std::vector<std::uint64_t> encode_tuples(const DiscretizedSeries& s) {
    checked_alphabet(s.n_bins, s.dims);
    std::vector<std::uint64_t> codes(s.length());
    for (std::size_t t = 0; t < codes.size(); ++t) {
        std::uint64_t code = 0;
        for (int sym : s.at(t)) {
            if (sym < 0 || sym >= s.n_bins) throw RangeError("symbol outside [0, n_bins)");
            code = code * static_cast<std::uint64_t>(s.n_bins) + static_cast<std::uint64_t>(sym);
        }
        codes[t] = code;
    }
    return codes;
}

/// Plug-in entropy (bits) of a code sequence; sums in sorted-code order.
double entropy_of_codes(std::vector<std::uint64_t> codes) {
    if (codes.empty()) return 0.0;
    std::sort(codes.begin(), codes.end());
    const double total = static_cast<double>(codes.size());
    double h = 0.0;
    std::size_t run_start = 0;
    for (std::size_t i = 1; i <= codes.size(); ++i) {
        if (i == codes.size() || codes[i] != codes[run_start]) {
            const double p = static_cast<double>(i - run_start) / total;
            h -= p * std::log2(p);
            run_start = i;
        }
    }
    return h;
}

} // namespace

// v / width can land just below an integer for decimal edges (0.29 / 0.01)
constexpr double kEdgeTolerance = 1e-9;

DiscretizedSeries discretize(std::span<const double> values, int dims, double bin_width) {
    if (dims < 1) throw RangeError("discretize needs at least one dimension");
    if (!(bin_width > 0.0 && bin_width <= 1.0)) throw RangeError("bin width must be in (0, 1]");
    if (values.size() % static_cast<std::size_t>(dims) != 0) throw RangeError("value count is not a multiple of dims");
    DiscretizedSeries s;
    s.dims = dims;
    s.n_bins = static_cast<int>(std::lround(1.0 / bin_width));
    s.symbols.resize(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) {
        const double v = values[i];
        if (!(v >= 0.0 && v <= 1.0)) throw RangeError("value " + std::to_string(v) + " outside [0, 1]");
        s.symbols[i] = std::min(static_cast<int>(std::floor(v / bin_width + kEdgeTolerance)), s.n_bins - 1);
    }
    return s;
}

double plugin_entropy(const DiscretizedSeries& series) {
    return entropy_of_codes(encode_tuples(series));
}

InfoDecomposition info_decomposition(const DiscretizedSeries& inputs, const DiscretizedSeries& outputs) {
    if (inputs.length() == 0 || outputs.length() == 0) throw RangeError("empty series");
    if (inputs.length() != outputs.length()) throw RangeError("input and output series differ in length");
    if (inputs.length() < 2) throw RangeError("series must have at least 2 steps");

    const auto in_codes = encode_tuples(inputs);
    const auto out_codes = encode_tuples(outputs);
    const std::uint64_t out_alphabet = checked_alphabet(outputs.n_bins, outputs.dims);
    const std::uint64_t in_alphabet = checked_alphabet(inputs.n_bins, inputs.dims);
    if (in_alphabet > std::numeric_limits<std::uint64_t>::max() / out_alphabet) {
        throw RangeError("joint alphabet too large to encode");
    }
    std::vector<std::uint64_t> joint(in_codes.size());
    for (std::size_t t = 0; t < joint.size(); ++t) joint[t] = in_codes[t] * out_alphabet + out_codes[t];

    InfoDecomposition r;
    r.in_entropy = entropy_of_codes(in_codes);
    r.out_entropy = entropy_of_codes(out_codes);
    r.joint_entropy = entropy_of_codes(std::move(joint));
    r.mi = std::max(0.0, r.in_entropy + r.out_entropy - r.joint_entropy);
    r.cond_entropy = std::max(0.0, r.joint_entropy - r.in_entropy);
    return r;
}

InfoDecomposition agent_info(const AgentTrace& trace, double bin_width) {
    std::vector<double> in;
    std::vector<double> out;
    in.reserve(trace.rows.size() * kSensorCount);
    out.reserve(trace.rows.size() * kMotorCount);
    for (const auto& row : trace.rows) {
        in.insert(in.end(), row.sensors.begin(), row.sensors.end());
        out.insert(out.end(), row.raw.begin(), row.raw.end());
    }
    return info_decomposition(discretize(in, static_cast<int>(kSensorCount), bin_width),
                              discretize(out, static_cast<int>(kMotorCount), bin_width));
}

InfoDecomposition population_info(std::span<const AgentTrace> traces, double bin_width) {
    if (traces.empty()) throw RangeError("population_info needs at least one trace");
    InfoDecomposition mean;
    for (const auto& t : traces) {
        const auto r = agent_info(t, bin_width);
        mean.mi += r.mi;
        mean.cond_entropy += r.cond_entropy;
        mean.out_entropy += r.out_entropy;
        mean.in_entropy += r.in_entropy;
        mean.joint_entropy += r.joint_entropy;
    }
    const double n = static_cast<double>(traces.size());
    mean.mi /= n;
    mean.cond_entropy /= n;
    mean.out_entropy /= n;
    mean.in_entropy /= n;
    mean.joint_entropy /= n;
    return mean;
}

std::vector<double> kinetic_energy(const AgentTrace& trace, FieldDims dims) {
    std::vector<double> e;
    e.reserve(trace.rows.size());
    for (const auto& row : trace.rows) {
        const double dx = min_image(row.pos.x - row.prev.x, dims.width);
        const double dy = min_image(row.pos.y - row.prev.y, dims.height);
        e.push_back(dx * dx + dy * dy);
    }
    return e;
}

std::uint64_t EnergyHistogram::total() const {
    return std::accumulate(counts.begin(), counts.end(), std::uint64_t{0});
}

EnergyHistogram energy_histogram(std::span<const AgentTrace> traces, FieldDims dims, int bins, int generation) {
    if (bins < 1) throw RangeError("energy histogram needs at least one bin");
    EnergyHistogram h;
    h.generation = generation;
    h.counts.assign(static_cast<std::size_t>(bins), 0);
    h.edges.resize(static_cast<std::size_t>(bins) + 1);
    for (int i = 0; i <= bins; ++i) h.edges[static_cast<std::size_t>(i)] = static_cast<double>(i) / bins;
    for (const auto& t : traces) {
        for (double e : kinetic_energy(t, dims)) {
            const int b = std::clamp(static_cast<int>(std::floor(e * bins)), 0, bins - 1);
            ++h.counts[static_cast<std::size_t>(b)];
        }
    }
    return h;
}

std::size_t movement_area(const AgentTrace& trace, FieldDims dims) {
    if (trace.rows.empty()) throw RangeError("movement_area needs a nonempty trace");
    auto cell = [&](Vec2 p) {
        return static_cast<std::uint64_t>(cell_index(p.y, dims.height)) * static_cast<std::uint64_t>(dims.width) +
               static_cast<std::uint64_t>(cell_index(p.x, dims.width));
    };
    std::vector<std::uint64_t> cells;
    cells.reserve(trace.rows.size() + 1);
    cells.push_back(cell(trace.rows.front().prev));
    for (const auto& row : trace.rows) cells.push_back(cell(row.pos));
    std::sort(cells.begin(), cells.end());
    return static_cast<std::size_t>(std::unique(cells.begin(), cells.end()) - cells.begin());
}

Dispersion dispersion(std::span<const double> values) {
    if (values.empty()) throw RangeError("dispersion needs at least one value");
    // Welford
    double mean = 0.0;
    double m2 = 0.0;
    std::size_t n = 0;
    for (double v : values) {
        ++n;
        const double delta = v - mean;
        mean += delta / static_cast<double>(n);
        m2 += delta * (v - mean);
    }
    return {mean, std::sqrt(std::max(0.0, m2 / static_cast<double>(n)))};
}

std::vector<double> gain_timeseries(std::span<const AgentTrace> traces) {
    if (traces.empty()) return {};
    const std::size_t rows = traces.front().rows.size();
    for (const auto& t : traces) {
        if (t.rows.size() != rows) throw RangeError("traces are not aligned");
    }
    std::vector<double> mean(rows, 0.0);
    for (const auto& t : traces) {
        for (std::size_t r = 0; r < rows; ++r) mean[r] += t.rows[r].gain;
    }
    for (double& m : mean) m /= static_cast<double>(traces.size());
    return mean;
}

namespace {

/// r, or nullopt when either side has zero variance.
std::optional<double> correlation(std::span<const double> x, std::span<const double> y) {
    const double n = static_cast<double>(x.size());
    double mx = 0.0;
    double my = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0.0;
    double syy = 0.0;
    double sxy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double dx = x[i] - mx;
        const double dy = y[i] - my;
        sxx += dx * dx;
        syy += dy * dy;
        sxy += dx * dy;
    }
    if (sxx <= 0.0 || syy <= 0.0) return std::nullopt;
    return std::clamp(sxy / (std::sqrt(sxx) * std::sqrt(syy)), -1.0, 1.0);
}

} // namespace

double pearson(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) throw RangeError("pearson inputs differ in length");
    if (x.size() < 2) throw RangeError("pearson needs at least 2 points");
    const auto r = correlation(x, y);
    if (!r) throw DegenerateError("pearson: zero variance");
    return *r;
}

std::vector<CorrelogramCell> cross_correlogram(std::span<const double> a, std::span<const double> b,
                                               int max_lag, int window, int window_step) {
    if (a.size() != b.size()) throw RangeError("correlogram series differ in length");
    if (max_lag < 0) throw RangeError("max_lag must be >= 0");
    if (window < 2 || static_cast<std::size_t>(window) > a.size()) throw RangeError("window must be in [2, length]");
    if (window_step < 1) throw RangeError("window step must be >= 1");

    const auto n = static_cast<long long>(a.size());
    const auto win = static_cast<std::size_t>(window);
    std::vector<CorrelogramCell> cells;
    for (long long w = 0; w + window <= n; w += window_step) {
        for (int lag = -max_lag; lag <= max_lag; ++lag) {
            const long long start_b = w + lag;
            if (start_b < 0 || start_b + window > n) continue;
            CorrelogramCell c;
            c.window_start = static_cast<int>(w);
            c.lag = lag;
            const auto r = correlation(a.subspan(static_cast<std::size_t>(w), win),
                                       b.subspan(static_cast<std::size_t>(start_b), win));
            c.degenerate = !r.has_value();
            c.r = r.value_or(0.0);
            cells.push_back(c);
        }
    }
    return cells;
}

ProbeMetrics probe_metrics(std::span<const AgentTrace> traces, FieldDims dims, int energy_bins, int generation,
                           double bin_width) {
    if (traces.empty()) throw RangeError("probe metrics need at least one trace");
    ProbeMetrics m;
    m.generation = generation;
    m.fitness.reserve(traces.size());
    m.movement_areas.reserve(traces.size());
    std::vector<double> areas;
    areas.reserve(traces.size());
    for (const auto& t : traces) {
        double f = 0.0;
        for (const auto& row : t.rows) f += row.gain;
        m.fitness.push_back(f);
        m.movement_areas.push_back(movement_area(t, dims));
        areas.push_back(static_cast<double>(m.movement_areas.back()));
    }
    double sum = 0.0;
    for (double f : m.fitness) sum += f;
    m.collective_fitness = sum / static_cast<double>(m.fitness.size());
    m.gain_std = dispersion(m.fitness).std;
    m.area_std = dispersion(areas).std;
    const auto info = population_info(traces, bin_width);
    m.mi_mean = info.mi;
    m.cond_entropy_mean = info.cond_entropy;
    m.out_entropy_mean = info.out_entropy;
    m.energy = energy_histogram(traces, dims, energy_bins, generation);
    return m;
}

} // namespace chemo
