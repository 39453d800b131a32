#include "chemoswarm/controller.hpp"

#include <bit>
#include <cmath>
#include <string>

namespace chemo {

namespace {
constexpr std::size_t kHiddenBlock = kHiddenCount * kInputWidth;
} // namespace

Genome Genome::from_weights(std::span<const double> weights) {
    if (weights.size() != kGenomeSize) {
        throw InvalidGenome("genome must have " + std::to_string(kGenomeSize) + " weights, got " +
                            std::to_string(weights.size()));
    }
    Genome g;
    for (std::size_t i = 0; i < kGenomeSize; ++i) {
        if (!std::isfinite(weights[i])) {
            throw InvalidGenome("genome weight " + std::to_string(i) + " is not finite");
        }
        g.weights_[i] = weights[i];
    }
    return g;
}

std::uint64_t Genome::digest() const noexcept {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (double w : weights_) {
        auto bits = std::bit_cast<std::uint64_t>(w);
        for (int b = 0; b < 8; ++b) {
            h ^= (bits >> (8 * b)) & 0xff;
            h *= 0x100000001b3ULL;
        }
    }
    return h;
}

LayerWeights decode(const Genome& genome) {
    LayerWeights lw;
    auto w = genome.weights();
    for (std::size_t h = 0; h < kHiddenCount; ++h)
        for (std::size_t c = 0; c < kInputWidth; ++c)
            lw.input_to_hidden[h][c] = w[h * kInputWidth + c];
    for (std::size_t o = 0; o < kOutputCount; ++o)
        for (std::size_t c = 0; c < kHiddenWidth; ++c)
            lw.hidden_to_output[o][c] = w[kHiddenBlock + o * kHiddenWidth + c];
    return lw;
}

Genome encode(const LayerWeights& weights) {
    std::array<double, kGenomeSize> flat{};
    for (std::size_t h = 0; h < kHiddenCount; ++h)
        for (std::size_t c = 0; c < kInputWidth; ++c)
            flat[h * kInputWidth + c] = weights.input_to_hidden[h][c];
    for (std::size_t o = 0; o < kOutputCount; ++o)
        for (std::size_t c = 0; c < kHiddenWidth; ++c)
            flat[kHiddenBlock + o * kHiddenWidth + c] = weights.hidden_to_output[o][c];
    return Genome::from_weights(flat);
}

MotorCommand MotorCommand::from_raw(double raw_v, double raw_omega) {
    MotorCommand cmd;
    cmd.raw = {raw_v, raw_omega};
    cmd.v = raw_v;
    cmd.omega = (raw_omega - 0.5) * (2.0 * kMaxOmega);
    return cmd;
}

MotorCommand MotorCommand::from_velocity(double v, double omega) {
    MotorCommand cmd;
    cmd.v = v;
    cmd.omega = omega;
    cmd.raw = {v, omega / (2.0 * kMaxOmega) + 0.5};
    return cmd;
}

double logistic(double x) {
    return 1.0 / (1.0 + std::exp(-x));
}

ForwardResult forward(const LayerWeights& weights, const SensorReadings& sensors,
                      const ControllerState& state) {
    std::array<double, kInputWidth> input{};
    input[0] = 1.0;
    for (std::size_t i = 0; i < kSensorCount; ++i) input[1 + i] = sensors[i];
    for (std::size_t i = 0; i < kContextCount; ++i) input[1 + kSensorCount + i] = state.context[i];

    std::array<double, kHiddenWidth> hidden{};
    hidden[0] = 1.0;
    for (std::size_t h = 0; h < kHiddenCount; ++h) {
        double acc = 0.0;
        for (std::size_t c = 0; c < kInputWidth; ++c) acc += weights.input_to_hidden[h][c] * input[c];
        hidden[1 + h] = logistic(acc);
    }

    std::array<double, kOutputCount> out{};
    for (std::size_t o = 0; o < kOutputCount; ++o) {
        double acc = 0.0;
        for (std::size_t c = 0; c < kHiddenWidth; ++c) acc += weights.hidden_to_output[o][c] * hidden[c];
        out[o] = logistic(acc);
        if (!std::isfinite(out[o])) throw NumericError("non-finite controller output");
    }

    ForwardResult result;
    result.command = MotorCommand::from_raw(out[0], out[1]);
    result.state.context = {out[2], out[3]};
    return result;
}

} // namespace chemo
