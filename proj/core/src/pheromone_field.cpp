#include "chemoswarm/pheromone_field.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <istream>
#include <ostream>

namespace chemo {

namespace {

constexpr char kBinaryMagic[8] = {'P', 'H', 'F', 'I', 'E', 'L', 'D', '1'};

template <class T>
void write_le(std::ostream& out, T value) {
    auto bits = std::bit_cast<std::array<unsigned char, sizeof(T)>>(value);
    if constexpr (std::endian::native == std::endian::big) std::reverse(bits.begin(), bits.end());
    out.write(reinterpret_cast<const char*>(bits.data()), sizeof(T));
}

template <class T>
T read_le(std::istream& in) {
    std::array<unsigned char, sizeof(T)> bits{};
    in.read(reinterpret_cast<char*>(bits.data()), sizeof(T));
    if (!in) throw ParseError("truncated field snapshot");
    if constexpr (std::endian::native == std::endian::big) std::reverse(bits.begin(), bits.end());
    return std::bit_cast<T>(bits);
}

} // namespace

SpotRanges SpotRanges::for_field(FieldDims dims) {
    SpotRanges r;
    const double scale = std::min(dims.width, dims.height) / 600.0;
    r.sigma = {50.0 * scale, 100.0 * scale};
    r.center_x = {2.0, dims.width - 3.0};
    r.center_y = {2.0, dims.height - 3.0};
    return r;
}

PheromoneField::PheromoneField(FieldDims dims) : dims_(dims) {
    if (dims.width <= 0 || dims.height <= 0) throw RangeError("field dimensions must be positive");
    const auto n = static_cast<std::size_t>(dims.width) * static_cast<std::size_t>(dims.height);
    amount_.assign(n, 0.0);
    owner_.assign(n, kNoOwner);
}

PheromoneField PheromoneField::from_spots(FieldDims dims, std::span<const GaussianSpot> spots) {
    PheromoneField field(dims);
    for (const auto& spot : spots) field.add_spot(spot);
    return field;
}

std::size_t PheromoneField::index(int cx, int cy) const {
    cx %= dims_.width;
    if (cx < 0) cx += dims_.width;
    cy %= dims_.height;
    if (cy < 0) cy += dims_.height;
    return static_cast<std::size_t>(cy) * static_cast<std::size_t>(dims_.width) +
           static_cast<std::size_t>(cx);
}

double PheromoneField::effective(double stored) const {
    if (pending_mode_ == DecayMode::multiplicative) return stored * pending_factor_;
    return std::max(0.0, stored - pending_offset_);
}

void PheromoneField::materialize() {
    if (pending_factor_ == 1.0 && pending_offset_ == 0.0) return;
    if (pending_mode_ == DecayMode::multiplicative) {
        const double f = pending_factor_;
        for (double& a : amount_) a *= f;
    } else {
        const double d = pending_offset_;
        for (double& a : amount_) a = std::max(0.0, a - d);
    }
    pending_factor_ = 1.0;
    pending_offset_ = 0.0;
}

void PheromoneField::add_spot(const GaussianSpot& spot) {
    materialize();
    const double inv_two_var = 1.0 / (2.0 * spot.sigma * spot.sigma);
    std::vector<double> gx(static_cast<std::size_t>(dims_.width));
    std::vector<double> gy(static_cast<std::size_t>(dims_.height));
    // exp(-(dx^2 + dy^2) k) = exp(-dx^2 k) exp(-dy^2 k)
    for (int x = 0; x < dims_.width; ++x) {
        const double dx = min_image(x - spot.xc, dims_.width);
        gx[static_cast<std::size_t>(x)] = std::exp(-dx * dx * inv_two_var);
    }
    for (int y = 0; y < dims_.height; ++y) {
        const double dy = min_image(y - spot.yc, dims_.height);
        gy[static_cast<std::size_t>(y)] = std::exp(-dy * dy * inv_two_var);
    }
    for (int y = 0; y < dims_.height; ++y) {
        const double row = spot.amplitude * gy[static_cast<std::size_t>(y)];
        double* dst = amount_.data() + static_cast<std::size_t>(y) * static_cast<std::size_t>(dims_.width);
        for (int x = 0; x < dims_.width; ++x) dst[x] += row * gx[static_cast<std::size_t>(x)];
    }
}

double PheromoneField::amount(int cx, int cy) const {
    return effective(amount_[index(cx, cy)]);
}

void PheromoneField::set_amount(int cx, int cy, double value) {
    if (!(value >= 0.0) || !std::isfinite(value)) throw RangeError("pheromone amount must be finite and >= 0");
    materialize();
    amount_[index(cx, cy)] = value;
}

void PheromoneField::fill(double value) {
    if (!(value >= 0.0) || !std::isfinite(value)) throw RangeError("pheromone amount must be finite and >= 0");
    pending_factor_ = 1.0;
    pending_offset_ = 0.0;
    std::fill(amount_.begin(), amount_.end(), value);
}

std::optional<AgentId> PheromoneField::owner(int cx, int cy) const {
    const auto o = owner_[index(cx, cy)];
    if (o == kNoOwner) return std::nullopt;
    return static_cast<AgentId>(o);
}

double PheromoneField::read(Vec2 pos) const {
    const int cx = cell_index(pos.x, dims_.width);
    const int cy = cell_index(pos.y, dims_.height);
    return std::min(1.0, amount(cx, cy));
}

double PheromoneField::sense_disc(Vec2 center, double radius) const {
    const double r2 = radius * radius;
    const int x0 = static_cast<int>(std::ceil(center.x - radius - 0.5));
    const int x1 = static_cast<int>(std::floor(center.x + radius - 0.5));
    const int y0 = static_cast<int>(std::ceil(center.y - radius - 0.5));
    const int y1 = static_cast<int>(std::floor(center.y + radius - 0.5));
    double sum = 0.0;
    int count = 0;
    for (int cy = y0; cy <= y1; ++cy) {
        const double dy = cy + 0.5 - center.y;
        for (int cx = x0; cx <= x1; ++cx) {
            const double dx = cx + 0.5 - center.x;
            if (dx * dx + dy * dy > r2) continue;
            sum += std::min(1.0, amount(cx, cy));
            ++count;
        }
    }
    if (count == 0) return read(center);
    return sum / count;
}

void PheromoneField::deposit(AgentId agent, Vec2 pos, double value) {
    if (!(value >= 0.0) || !std::isfinite(value)) throw RangeError("deposit value must be finite and >= 0");
    materialize();
    const int cx = cell_index(pos.x, dims_.width);
    const int cy = cell_index(pos.y, dims_.height);
    for (int dy = -1; dy <= 1; ++dy) {
        for (int dx = -1; dx <= 1; ++dx) {
            const auto i = index(cx + dx, cy + dy);
            amount_[i] = value;
            owner_[i] = static_cast<std::int32_t>(agent);
        }
    }
}

void PheromoneField::decay(double rate, DecayMode mode) {
    if (!(rate >= 0.0 && rate < 1.0)) throw RangeError("decay rate must be in [0, 1)");
    if (mode != pending_mode_) {
        materialize();
        pending_mode_ = mode;
    }
    if (mode == DecayMode::multiplicative) {
        pending_factor_ *= (1.0 - rate);
    } else {
        pending_offset_ += rate;
    }
}

double PheromoneField::gain_at(AgentId agent, Vec2 pos) const {
    const int cx = cell_index(pos.x, dims_.width);
    const int cy = cell_index(pos.y, dims_.height);
    const auto i = index(cx, cy);
    if (owner_[i] == static_cast<std::int32_t>(agent)) return 0.0;
    return std::min(1.0, effective(amount_[i]));
}

double PheromoneField::total_mass() const {
    double sum = 0.0;
    for (double a : amount_) sum += effective(a);
    return sum;
}

std::vector<double> PheromoneField::snapshot() const {
    std::vector<double> out(amount_.size());
    std::transform(amount_.begin(), amount_.end(), out.begin(), [this](double a) { return effective(a); });
    return out;
}

void PheromoneField::write_binary(std::ostream& out, std::int64_t step) const {
    out.write(kBinaryMagic, sizeof kBinaryMagic);
    write_le<std::int32_t>(out, dims_.width);
    write_le<std::int32_t>(out, dims_.height);
    write_le<std::int64_t>(out, step);
    for (double a : amount_) write_le<double>(out, effective(a));
}

std::pair<PheromoneField, std::int64_t> PheromoneField::read_binary(std::istream& in) {
    char magic[sizeof kBinaryMagic];
    in.read(magic, sizeof magic);
    if (!in || std::memcmp(magic, kBinaryMagic, sizeof magic) != 0) throw ParseError("not a field snapshot");
    const auto w = read_le<std::int32_t>(in);
    const auto h = read_le<std::int32_t>(in);
    const auto step = read_le<std::int64_t>(in);
    if (w <= 0 || h <= 0) throw ParseError("field snapshot has non-positive dimensions");
    PheromoneField field(FieldDims{w, h});
    for (double& a : field.amount_) a = read_le<double>(in);
    return {std::move(field), step};
}

std::vector<GaussianSpot> random_spots(Rng& rng, int count, const SpotRanges& ranges) {
    auto uniform = [&rng](Range r) { return std::uniform_real_distribution<double>(r.lo, r.hi)(rng); };
    std::vector<GaussianSpot> spots;
    spots.reserve(static_cast<std::size_t>(std::max(0, count)));
    for (int i = 0; i < count; ++i) {
        GaussianSpot s;
        s.amplitude = uniform(ranges.amplitude);
        s.sigma = uniform(ranges.sigma);
        s.xc = uniform(ranges.center_x);
        s.yc = uniform(ranges.center_y);
        spots.push_back(s);
    }
    return spots;
}

PheromoneField init_spots(Rng& rng, int count, FieldDims dims, const SpotRanges& ranges) {
    const auto spots = random_spots(rng, count, ranges);
    return PheromoneField::from_spots(dims, spots);
}

} // namespace chemo
