#pragma once

#include "chemoswarm/common.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <utility>
#include <vector>

namespace chemo {

/// One bell-shaped initial pheromone hill: a * exp(-d^2 / (2 sigma^2)).
struct GaussianSpot {
    double amplitude = 1.0;
    double sigma = 50.0;
    double xc = 0.0;
    double yc = 0.0;
};

struct Range {
    double lo = 0.0;
    double hi = 0.0;
};

/// Uniform sampling ranges for random spots.
struct SpotRanges {
    Range amplitude{0.2, 1.0};
    Range sigma{50.0, 100.0};
    Range center_x{2.0, 597.0};
    Range center_y{2.0, 597.0};

    /// Defaults for a 600x600 field, rescaled to `dims`: centers span
    /// [2, extent - 3] and sigma scales with min(width, height) / 600.
    static SpotRanges for_field(FieldDims dims);
};

enum class DecayMode { multiplicative, subtractive };

/// Periodic 2-D grid of pheromone amounts with per-cell last-depositor.
///
/// Cell (cx, cy) covers [cx, cx+1) x [cy, cy+1). Stored amounts may exceed 1
/// where spots overlap; every readout clamps to [0, 1]. Uniform decay is
/// applied lazily and folded into the grid before the next write, so a field
/// without deposits costs O(1) per step.
class PheromoneField {
public:
    static constexpr std::int32_t kNoOwner = -1;

    PheromoneField() = default;
    explicit PheromoneField(FieldDims dims);

    static PheromoneField from_spots(FieldDims dims, std::span<const GaussianSpot> spots);

    FieldDims dims() const noexcept { return dims_; }
    int width() const noexcept { return dims_.width; }
    int height() const noexcept { return dims_.height; }

    /// Adds a Gaussian evaluated at integer cell coordinates with
    /// minimum-image distance to the center.
    void add_spot(const GaussianSpot& spot);

    /// Raw (unclamped) amount of a cell; indices are wrapped.
    double amount(int cx, int cy) const;
    void set_amount(int cx, int cy, double value);
    void fill(double value);
    std::optional<AgentId> owner(int cx, int cy) const;

    /// min(1, amount) of the cell containing pos.
    double read(Vec2 pos) const;

    /// Mean clamped amount over cells whose centers lie within `radius`
    /// (minimum image) of `center`. Falls back to read() if no center is inside.
    double sense_disc(Vec2 center, double radius) const;

    /// Overwrites the 3x3 block around the cell containing pos with `value`
    /// and marks `agent` as owner.
    void deposit(AgentId agent, Vec2 pos, double value = 1.0);

    /// Multiplicative: a *= (1 - rate). Subtractive: a = max(0, a - rate).
    void decay(double rate, DecayMode mode = DecayMode::multiplicative);

    /// read(pos) unless the cell was last written by `agent`, then 0.
    double gain_at(AgentId agent, Vec2 pos) const;

    /// Sum of raw amounts.
    double total_mass() const;

    /// Row-major (y outer) raw amounts, with pending decay applied.
    std::vector<double> snapshot() const;

    /// Flat binary: "PHFIELD1", int32 width, int32 height, int64 step, then
    /// width*height little-endian doubles, row-major with y outer.
    void write_binary(std::ostream& out, std::int64_t step) const;
    static std::pair<PheromoneField, std::int64_t> read_binary(std::istream& in);

private:
    std::size_t index(int cx, int cy) const;
    double effective(double stored) const;
    void materialize();

    FieldDims dims_{};
    std::vector<double> amount_;
    std::vector<std::int32_t> owner_;
    double pending_factor_ = 1.0;
    double pending_offset_ = 0.0;
    DecayMode pending_mode_ = DecayMode::multiplicative;
};

std::vector<GaussianSpot> random_spots(Rng& rng, int count, const SpotRanges& ranges);

/// Field of `count` random spots drawn from `ranges`; owners empty.
PheromoneField init_spots(Rng& rng, int count, FieldDims dims, const SpotRanges& ranges);

} // namespace chemo
