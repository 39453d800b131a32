#pragma once

#include "chemoswarm/common.hpp"

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>

namespace chemo {

inline constexpr std::size_t kSensorCount = 6;
inline constexpr std::size_t kHiddenCount = 6;
inline constexpr std::size_t kMotorCount = 2;
inline constexpr std::size_t kContextCount = 2;
/// bias + sensors + context
inline constexpr std::size_t kInputWidth = 1 + kSensorCount + kContextCount;
/// bias + hidden
inline constexpr std::size_t kHiddenWidth = 1 + kHiddenCount;
inline constexpr std::size_t kOutputCount = kMotorCount + kContextCount;
inline constexpr std::size_t kGenomeSize =
    kHiddenCount * kInputWidth + kOutputCount * kHiddenWidth;
static_assert(kGenomeSize == 82);

inline constexpr double kMaxOmega = 0.05;

using SensorReadings = std::array<double, kSensorCount>;

/// Flat vector of the 82 synaptic weights.
///
/// Layout (row-major, also the checkpoint order):
///   [0, 54)   input_to_hidden[h][c], h in 0..5, c in 0..8,
///             column 0 = bias, 1..6 = sensors s0..s5, 7..8 = context c0..c1
///   [54, 82)  hidden_to_output[o][c], o in 0..3, c in 0..6,
///             row 0 = v, 1 = omega, 2..3 = context c0..c1; column 0 = bias
class Genome {
public:
    Genome() = default;

    /// Throws InvalidGenome on wrong length or non-finite entries.
    static Genome from_weights(std::span<const double> weights);
    static Genome zeros() { return Genome{}; }

    std::span<const double> weights() const noexcept { return weights_; }
    double operator[](std::size_t i) const { return weights_[i]; }

    /// FNV-1a over the bit patterns; identical weights give identical digests.
    std::uint64_t digest() const noexcept;

    friend bool operator==(const Genome&, const Genome&) = default;

private:
    std::array<double, kGenomeSize> weights_{};
};

struct LayerWeights {
    std::array<std::array<double, kInputWidth>, kHiddenCount> input_to_hidden{};
    std::array<std::array<double, kHiddenWidth>, kOutputCount> hidden_to_output{};

    friend bool operator==(const LayerWeights&, const LayerWeights&) = default;
};

LayerWeights decode(const Genome& genome);
Genome encode(const LayerWeights& weights);

struct ControllerState {
    std::array<double, kContextCount> context{0.5, 0.5};

    friend bool operator==(const ControllerState&, const ControllerState&) = default;
};

struct MotorCommand {
    double v = 0.0;      // cells per step, [0, 1]
    double omega = 0.0;  // radians per step, [-0.05, 0.05]
    std::array<double, kMotorCount> raw{0.0, 0.5};

    /// v = raw0, omega = (raw1 - 0.5) * 0.1
    static MotorCommand from_raw(double raw_v, double raw_omega);
    /// Inverse of from_raw.
    static MotorCommand from_velocity(double v, double omega);
};

struct ForwardResult {
    MotorCommand command;
    ControllerState state;
};

double logistic(double x);

/// One sensor-to-motor step of the recurrent network. Pure.
ForwardResult forward(const LayerWeights& weights, const SensorReadings& sensors,
                      const ControllerState& state);

} // namespace chemo
