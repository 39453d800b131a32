#pragma once

#include "chemoswarm/common.hpp"
#include "chemoswarm/controller.hpp"
#include "chemoswarm/pheromone_field.hpp"

#include <array>
#include <cstdint>
#include <numbers>
#include <variant>

namespace chemo {

struct AgentState {
    AgentId id = 0;
    Vec2 pos;
    double theta = 0.0;
    ControllerState controller;
    Vec2 prev;
};

/// Five peripheral sensors on the body rim, mirror-symmetric about the
/// heading (ids 0..4 at 0, +72, +144, -144, -72 degrees), and sensor 5 at the
/// body center.
struct SensorLayout {
    double body_radius = 20.0;
    double sensor_radius = 2.0;
    std::array<double, 5> peripheral_offsets{
        0.0,
        2.0 * std::numbers::pi / 5.0,
        4.0 * std::numbers::pi / 5.0,
        -4.0 * std::numbers::pi / 5.0,
        -2.0 * std::numbers::pi / 5.0,
    };
};

inline constexpr std::size_t kCenterSensor = 5;

std::array<Vec2, kSensorCount> sensor_positions(const AgentState& state, const SensorLayout& layout,
                                                FieldDims dims);

SensorReadings read_sensors(const PheromoneField& field, const AgentState& state,
                            const SensorLayout& layout);

/// theta' = theta + omega, then x' = x + v cos(theta'), y' = y + v sin(theta'),
/// wrapped. Records the old position in prev.
AgentState step_kinematics(AgentState state, const MotorCommand& cmd, FieldDims dims);

/// Index of the strongest sensor; ties go to the lowest id.
std::size_t strongest_sensor(const SensorReadings& sensors);

/// Fixed response table keyed by the strongest sensor.
MotorCommand rule_based_policy(const SensorReadings& sensors);

struct RuleBased {
    friend bool operator==(const RuleBased&, const RuleBased&) = default;
};

using Controller = std::variant<LayerWeights, RuleBased>;

/// Dispatches to forward() or rule_based_policy(). The rule-based agent has no
/// internal state and passes its context through unchanged.
ForwardResult act(const Controller& controller, const SensorReadings& sensors,
                  const ControllerState& state);

/// Digest of the parameters an agent actually runs with (0 for RuleBased).
std::uint64_t controller_digest(const Controller& controller);

} // namespace chemo
