#include "chemoswarm/agent.hpp"

#include <cmath>

namespace chemo {

namespace {

struct RuleRow {
    double v;
    double omega;
};

// Response per strongest sensor id.
constexpr std::array<RuleRow, kSensorCount> kRuleTable{{
    {1.0, 0.00},
    {0.6, 0.02},
    {0.2, 0.04},
    {0.2, -0.04},
    {0.6, -0.02},
    {0.0, 0.00},
}};

} // namespace

std::array<Vec2, kSensorCount> sensor_positions(const AgentState& state, const SensorLayout& layout,
                                                FieldDims dims) {
    std::array<Vec2, kSensorCount> out{};
    for (std::size_t k = 0; k < layout.peripheral_offsets.size(); ++k) {
        const double a = state.theta + layout.peripheral_offsets[k];
        out[k] = wrap(Vec2{state.pos.x + layout.body_radius * std::cos(a),
                           state.pos.y + layout.body_radius * std::sin(a)},
                      dims);
    }
    out[kCenterSensor] = wrap(state.pos, dims);
    return out;
}

SensorReadings read_sensors(const PheromoneField& field, const AgentState& state,
                            const SensorLayout& layout) {
    const auto positions = sensor_positions(state, layout, field.dims());
    SensorReadings s{};
    for (std::size_t k = 0; k < kSensorCount; ++k) s[k] = field.sense_disc(positions[k], layout.sensor_radius);
    return s;
}

AgentState step_kinematics(AgentState state, const MotorCommand& cmd, FieldDims dims) {
    state.prev = state.pos;
    state.theta += cmd.omega;
    state.pos = wrap(Vec2{state.pos.x + cmd.v * std::cos(state.theta),
                          state.pos.y + cmd.v * std::sin(state.theta)},
                     dims);
    return state;
}

std::size_t strongest_sensor(const SensorReadings& sensors) {
    std::size_t best = 0;
    for (std::size_t k = 1; k < sensors.size(); ++k) {
        if (sensors[k] > sensors[best]) best = k;
    }
    return best;
}

MotorCommand rule_based_policy(const SensorReadings& sensors) {
    const auto& row = kRuleTable[strongest_sensor(sensors)];
    return MotorCommand::from_velocity(row.v, row.omega);
}

ForwardResult act(const Controller& controller, const SensorReadings& sensors,
                  const ControllerState& state) {
    if (const auto* weights = std::get_if<LayerWeights>(&controller)) {
        return forward(*weights, sensors, state);
    }
    return ForwardResult{rule_based_policy(sensors), state};
}

std::uint64_t controller_digest(const Controller& controller) {
    if (const auto* weights = std::get_if<LayerWeights>(&controller)) return encode(*weights).digest();
    return 0;
}

} // namespace chemo
