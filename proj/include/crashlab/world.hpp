#pragma once

#include <array>
#include <memory>
#include <optional>
#include <vector>

#include "crashlab/geom.hpp"
#include "crashlab/rng.hpp"
#include "crashlab/route.hpp"
#include "crashlab/types.hpp"
#include "crashlab/weather.hpp"

namespace crashlab {

inline constexpr double kTickSeconds = 0.1;       // internal physics tick
inline constexpr double kSampleSeconds = 0.5;     // metric/scene sampling step t
inline constexpr double kActionPeriodSeconds = 3.0;  // simulation time T per action
inline constexpr double kSpeedMax = 30.0;
inline constexpr double kPedSpeedMax = 3.0;
inline constexpr double kLaneChangeSeconds = 2.0;
inline constexpr double kWalkSpeed = 1.4;
inline constexpr double kStuckSpeed = 0.1;
inline constexpr double kStuckLimitSeconds = 30.0;

struct Entity {
    int id{0};
    EntityKind kind{EntityKind::NpcVehicle};
    Pose pose;
    double speed{0.0};  // longitudinal speed along travel direction, >= 0
    double accel{0.0};
    double bbox_length{4.6};
    double bbox_width{1.9};
    NpcType npc_type{NpcType::Sedan};
    NpcColor color{NpcColor::Silver};
    NpcBehavior npc_behavior{NpcBehavior::CurrentLaneDriving};
    PedBehavior ped_behavior{PedBehavior::Stop};

    // Route-frame motion state. direction -1 = oncoming traffic.
    double route_s{0.0};
    double lateral{0.0};
    double lateral_target{0.0};
    double lateral_rate{0.0};
    int direction{1};
    int lane{0};

    Vec2 vel;  // world-frame velocity, refreshed every tick

    Obb obb() const { return {{pose.x, pose.y}, pose.heading, bbox_length, bbox_width}; }
};

struct TrafficLight {
    int id{0};
    Pose pose;
    LightColor color{LightColor::Red};
    double active_duration_s{24.0};
    double elapsed_s{0.0};
    double arclen{0.0};
};

struct RoadSegment {
    int id{0};
    double s_begin{0.0};
    double s_end{0.0};
    double damage_level{0.0};
};

struct CollisionEvent {
    int a{0};
    int b{0};
    double overlap_area{0.0};
};

// Everything the simulation evolves; the unit of determinism and rollback.
// The route and weather trace are immutable context shared by reference.
struct WorldState {
    std::shared_ptr<const Route> route;
    WeatherClock weather_clock;  // trace may be null for fixed-weather worlds

    double sim_time_s{0.0};
    double wall_unix_ts{0.0};
    WeatherState weather;

    int ego_id{0};
    std::vector<Entity> entities;  // sorted by id; ego present exactly once
    std::vector<TrafficLight> lights;
    std::vector<RoadSegment> segments;

    Rng rng;
    double stuck_time_s{0.0};
    int next_entity_id{1};

    // Ego control state driven by the autopilot between ticks.
    double ego_accel_cmd{0.0};
    Operation ego_operation{Operation::Cruise};

    // Ring of (time, accel) ticks for jerk computation.
    std::array<std::pair<double, double>, 16> accel_history{};
    int accel_history_count{0};
    int accel_history_cursor{0};

    Entity& ego();
    const Entity& ego() const;
    Entity* find_entity(int id);
    const Entity* find_entity(int id) const;
    RoadSegment* segment_at(double s);
    const RoadSegment* segment_at(double s) const;
    double damage_at(double s) const;

    void push_accel_sample(double t, double a);
    // Accel at or before t - dt_back; nullopt when history is too short.
    std::optional<double> accel_before(double dt_back) const;
};

// Builds a fresh world on a route: ego at the start, lights from the route
// spec, road segments cut every ~250 m, weather sampled at sim time 0.
WorldState make_world(std::shared_ptr<const Route> route, WeatherClock clock, uint64_t seed);

// Advances every dynamic entity by one fixed tick under its behavior policy,
// cycles traffic lights, refreshes weather and the mapped wall clock.
void step(WorldState& world, double dt = kTickSeconds);

// Every ego-involved pair of oriented boxes with positive intersection area.
std::vector<CollisionEvent> collision_events(const WorldState& world);

uint64_t world_hash(const WorldState& world);

struct Snapshot {
    std::vector<uint8_t> bytes;
    uint64_t hash{0};
};

Snapshot snapshot(const WorldState& world);
// Rebuilds the world from a snapshot; route/trace are re-attached from the
// donor context (content hashes are verified).
WorldState restore(const Snapshot& snap, std::shared_ptr<const Route> route,
                   const WeatherClock& clock);

// Pure spawn builders used by env-actions; they construct a candidate entity
// (id = world.next_entity_id) without inserting or validating it.
Entity make_npc(const WorldState& world, NpcType type, NpcBehavior behavior, double route_s,
                int lane, int direction);
Entity make_pedestrian(const WorldState& world, PedBehavior behavior, double route_s, bool left_side);
Entity make_cone(const WorldState& world, double route_s, int lane);

// Ego destination test (route end reached).
bool at_destination(const WorldState& world);

}  // namespace crashlab
