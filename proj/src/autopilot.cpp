#include "crashlab/autopilot.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace crashlab {

namespace {

bool is_night(double hour) { return hour >= 20.0 || hour < 6.0; }

bool in_ego_lane(const PerceivedEntity& e, double lane_width) {
    return std::abs(e.lane_offset_m) < 0.5 * lane_width;
}

// Nearest obstacle strictly ahead in the ego's path.
const PerceivedEntity* nearest_ahead(const Perception& p, double lane_width) {
    const PerceivedEntity* best = nullptr;
    for (const auto& e : p.visible_entities) {
        if (e.distance_m <= 0.0 || !in_ego_lane(e, lane_width)) continue;
        if (!best || e.distance_m < best->distance_m) best = &e;
    }
    return best;
}

const PerceivedLight* nearest_light_ahead(const Perception& p) {
    const PerceivedLight* best = nullptr;
    for (const auto& l : p.visible_lights) {
        if (l.distance_m < -2.0) continue;
        if (!best || l.distance_m < best->distance_m) best = &l;
    }
    return best;
}

bool lane_clear(const Perception& p, double lane_center_offset, double lane_width, double window) {
    for (const auto& e : p.visible_entities) {
        if (std::abs(e.lane_offset_m - lane_center_offset) >= 0.5 * lane_width) continue;
        if (std::abs(e.distance_m) <= window) return false;
    }
    return true;
}

}  // namespace

Perception perceive(const WorldState& world, const AutopilotParams& params) {
    const Entity& ego = world.ego();
    const WeatherState& wx = world.weather;

    Perception p;
    p.sensing_range_m = params.base_range * (1.0 - params.fog_coef * wx.fog) *
                        (1.0 - params.rain_coef * wx.rain) *
                        (is_night(wx.local_hour) ? params.night_factor : 1.0);

    for (const auto& e : world.entities) {
        if (e.id == ego.id) continue;
        const Vec2 d{e.pose.x - ego.pose.x, e.pose.y - ego.pose.y};
        if (norm(d) > p.sensing_range_m) continue;
        PerceivedEntity pe;
        pe.id = e.id;
        pe.kind = e.kind;
        // Longitudinal bumper gap, signed: + ahead of the ego, - behind.
        const double ds = e.route_s - ego.route_s;
        const double gap = std::abs(ds) - 0.5 * (ego.bbox_length + e.bbox_length);
        pe.distance_m = (ds >= 0.0 ? 1.0 : -1.0) * std::max(gap, 0.0);
        const double e_long_v = (e.kind == EntityKind::Pedestrian &&
                                 e.ped_behavior == PedBehavior::CrossRoad)
                                    ? 0.0
                                    : e.direction * e.speed;
        pe.closing_speed = pe.distance_m > 0.0 ? ego.speed - e_long_v : e_long_v - ego.speed;
        pe.lane_offset_m = e.lateral - ego.lateral;
        pe.oncoming = e.direction < 0;
        p.visible_entities.push_back(pe);
    }

    for (const auto& l : world.lights) {
        const double dist = l.arclen - ego.route_s;
        if (dist < -2.0 || dist > p.sensing_range_m) continue;
        p.visible_lights.push_back({l.id, l.color, dist});
    }

    const double sw = world.route->sidewalk_ahead(ego.route_s, p.sensing_range_m);
    if (sw >= 0.0) p.sidewalk_ahead = sw;
    return p;
}

Operation plan(const Perception& p, const Entity& ego, const WorldState& world,
               const AutopilotParams& params) {
    const double lane_width = world.route->lane_width();
    const double v = ego.speed;

    const PerceivedEntity* ahead = nearest_ahead(p, lane_width);
    const double brake_dist = v * v / (2.0 * params.a_max_brake) + 2.0;
    if (ahead && ahead->distance_m <= brake_dist) return Operation::EmergencyBrake;

    const PerceivedLight* light = nearest_light_ahead(p);
    if (light && light->color == LightColor::Red) {
        const double stop_trigger =
            std::max(v * v / (2.0 * params.a_comfort_stop) + 5.0, 20.0);
        if (light->distance_m <= stop_trigger) return Operation::Stop;
    }

    // An in-flight lane change keeps reporting itself until the blend settles.
    if (ego.lateral_rate != 0.0)
        return ego.lateral_rate > 0.0 ? Operation::SwitchLaneToLeft : Operation::SwitchLaneToRight;

    if (ahead && ahead->distance_m <= params.block_ahead_m && ahead->closing_speed > 0.5 &&
        v > 2.0) {
        if (ego.lane > 0 &&
            lane_clear(p, lane_width, lane_width, params.adjacent_clear_m))
            return Operation::SwitchLaneToLeft;
        if (ego.lane < world.route->lane_count() - 1 &&
            lane_clear(p, -lane_width, lane_width, params.adjacent_clear_m))
            return Operation::SwitchLaneToRight;
    }

    const double target =
        params.target_speed * (1.0 - params.wet_speed_coef * world.weather.wetness);
    const bool sidewalk_near = p.sidewalk_ahead && *p.sidewalk_ahead <= params.intersection_slow_m;
    const bool green_near =
        light && light->color == LightColor::Green && light->distance_m <= params.intersection_slow_m;
    if ((sidewalk_near || green_near) && v > 6.0) return Operation::SpeedCut;
    if (v > target + 0.5) return Operation::SpeedCut;

    const double curv = world.route->curvature_at(ego.route_s);
    if (std::abs(curv) > params.turn_curvature)
        return curv > 0.0 ? Operation::TurnLeft : Operation::TurnRight;

    const bool clear_ahead = !ahead || ahead->distance_m > 30.0;
    if (v < target - 0.3 && clear_ahead) return Operation::SpeedUp;
    return Operation::Cruise;
}

double control(Operation op, const Entity& ego, const WeatherState& weather, const Perception& p,
               const AutopilotParams& params) {
    const double v = ego.speed;
    const double wet_brake = params.a_max_brake * (1.0 - params.wet_brake_coef * weather.wetness);
    double accel = 0.0;
    switch (op) {
        case Operation::SpeedUp: accel = params.a_accel; break;
        case Operation::Cruise: accel = 0.0; break;
        case Operation::SpeedCut: accel = params.a_cut; break;
        case Operation::Stop:
        case Operation::EmergencyBrake: {
            double needed = std::numeric_limits<double>::infinity();
            double target_dist = std::numeric_limits<double>::infinity();
            if (op == Operation::Stop) {
                for (const auto& l : p.visible_lights)
                    if (l.color == LightColor::Red && l.distance_m > -2.0)
                        target_dist = std::min(target_dist, l.distance_m);
            } else {
                for (const auto& e : p.visible_entities)
                    if (e.distance_m > 0.0) target_dist = std::min(target_dist, e.distance_m);
            }
            if (std::isfinite(target_dist)) {
                needed = v * v / (2.0 * std::max(target_dist - 2.0, 0.5));
                // Firm hold near the stop point so the vehicle cannot creep
                // across the line at vanishing speeds.
                if (target_dist < 4.0) needed = std::max(needed, 2.0);
            }
            accel = -std::min(wet_brake, needed);
            break;
        }
        case Operation::SwitchLaneToLeft:
        case Operation::SwitchLaneToRight: accel = 0.0; break;
        case Operation::TurnLeft:
        case Operation::TurnRight: accel = v > 9.0 ? -1.5 : 0.0; break;
    }
    return std::clamp(accel, -6.0, 3.0);
}

void drive_tick(WorldState& world, const AutopilotParams& params) {
    const Perception p = perceive(world, params);
    Entity& ego = world.ego();
    const Operation op = plan(p, ego, world, params);

    if (ego.lateral_rate == 0.0) {
        if (op == Operation::SwitchLaneToLeft && ego.lane > 0) {
            ego.lane -= 1;
            ego.lateral_target = world.route->lane_lateral(ego.lane);
            ego.lateral_rate = (ego.lateral_target - ego.lateral) / kLaneChangeSeconds;
        } else if (op == Operation::SwitchLaneToRight && ego.lane < world.route->lane_count() - 1) {
            ego.lane += 1;
            ego.lateral_target = world.route->lane_lateral(ego.lane);
            ego.lateral_rate = (ego.lateral_target - ego.lateral) / kLaneChangeSeconds;
        }
    }

    world.ego_operation = op;
    world.ego_accel_cmd = control(op, ego, world.weather, p, params);
}

}  // namespace crashlab
