#pragma once

#include <optional>
#include <vector>

#include "crashlab/world.hpp"

namespace crashlab {

// Tunables for the rule-based driver; overridable from the experiment config.
struct AutopilotParams {
    double target_speed{12.0};
    double base_range{60.0};
    double fog_coef{0.6};
    double rain_coef{0.3};
    double night_factor{0.7};
    double a_max_brake{6.0};
    double wet_brake_coef{0.4};
    double wet_speed_coef{0.25};  // cruise target drops with road wetness
    double a_accel{2.5};
    double a_cut{-2.0};
    double a_comfort_stop{3.0};
    double block_ahead_m{25.0};
    double adjacent_clear_m{15.0};
    double intersection_slow_m{25.0};
    double turn_curvature{0.02};
};

struct PerceivedEntity {
    int id{0};
    EntityKind kind{EntityKind::NpcVehicle};
    double distance_m{0.0};      // signed longitudinal gap; + ahead of ego
    double closing_speed{0.0};   // + when the gap is shrinking
    double lane_offset_m{0.0};   // entity lateral minus ego lateral; + left
    bool oncoming{false};
};

struct PerceivedLight {
    int id{0};
    LightColor color{LightColor::Red};
    double distance_m{0.0};
};

struct Perception {
    std::vector<PerceivedEntity> visible_entities;
    std::vector<PerceivedLight> visible_lights;
    double sensing_range_m{60.0};
    std::optional<double> sidewalk_ahead;
};

// Weather-degraded sensing:
// range = base * (1 - fog_coef*fog) * (1 - rain_coef*rain) * night_factor,
// with the night factor applied for local hours in [20, 6).
Perception perceive(const WorldState& world, const AutopilotParams& params = {});

// Deterministic priority rules over the perception.
Operation plan(const Perception& p, const Entity& ego, const WorldState& world,
               const AutopilotParams& params = {});

// Acceleration command for an operation, clamped to [-6, +3] m/s^2. Braking
// authority degrades with road wetness.
double control(Operation op, const Entity& ego, const WeatherState& weather,
               const Perception& p = {}, const AutopilotParams& params = {});

// One controller tick: perceive, plan, command, and start lane changes.
// Stores the active operation and acceleration command on the world.
void drive_tick(WorldState& world, const AutopilotParams& params = {});

}  // namespace crashlab
