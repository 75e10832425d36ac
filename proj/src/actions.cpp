#include "crashlab/actions.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "crashlab/hash.hpp"

namespace crashlab {

const char* to_string(ActionKind k) {
    switch (k) {
        case ActionKind::NoOp: return "noop";
        case ActionKind::SpawnNpc: return "spawn_npc";
        case ActionKind::SpawnPedestrian: return "spawn_pedestrian";
        case ActionKind::PlaceCone: return "place_cone";
        case ActionKind::SetLightPhase: return "set_light_phase";
        case ActionKind::SetRoadDamage: return "set_road_damage";
    }
    return "?";
}

const char* to_string(SpawnSlot s) {
    switch (s) {
        case SpawnSlot::AheadSameLane: return "ahead_same_lane";
        case SpawnSlot::AheadLeft: return "ahead_left";
        case SpawnSlot::AheadRight: return "ahead_right";
        case SpawnSlot::Behind: return "behind";
        case SpawnSlot::Oncoming: return "oncoming";
    }
    return "?";
}

const char* to_string(ConstraintRule r) {
    switch (r) {
        case ConstraintRule::SafeDistance: return "safe_distance";
        case ConstraintRule::LightOrder: return "light_order";
        case ConstraintRule::RoadOccupied: return "road_occupied";
        case ConstraintRule::Overlap: return "overlap";
    }
    return "?";
}

std::string EnvAction::params_text() const {
    std::ostringstream ss;
    switch (kind) {
        case ActionKind::NoOp: ss << "-"; break;
        case ActionKind::SpawnNpc:
            ss << "slot=" << to_string(slot) << ",dist=" << distance_m
               << ",type=" << to_string(npc_type) << ",behavior=" << to_string(npc_behavior);
            break;
        case ActionKind::SpawnPedestrian:
            ss << "side=" << (left_side ? "left" : "right")
               << ",behavior=" << to_string(ped_behavior) << ",dist=" << distance_m;
            break;
        case ActionKind::PlaceCone: ss << "offset=" << cone_offset_m; break;
        case ActionKind::SetLightPhase: ss << "target=" << to_string(light_target); break;
        case ActionKind::SetRoadDamage: ss << "level=" << damage_level; break;
    }
    return ss.str();
}

ActionRegistry::ActionRegistry() {
    int next_id = 0;
    const auto add = [&](EnvAction a) {
        a.id = next_id++;
        actions_.push_back(a);
    };

    add(EnvAction{});  // id 0: NoOp

    const SpawnSlot slots[] = {SpawnSlot::AheadSameLane, SpawnSlot::AheadLeft,
                               SpawnSlot::AheadRight, SpawnSlot::Behind, SpawnSlot::Oncoming};
    const double distances[] = {10.0, 20.0, 35.0};
    const std::pair<NpcType, NpcBehavior> archetypes[] = {
        {NpcType::Sedan, NpcBehavior::CurrentLaneDriving},
        {NpcType::Sedan, NpcBehavior::Stop},
        {NpcType::BoxTruck, NpcBehavior::CurrentLaneDriving},
    };
    for (const SpawnSlot slot : slots)
        for (const double dist : distances)
            for (const auto& [type, behavior] : archetypes) {
                EnvAction a;
                a.kind = ActionKind::SpawnNpc;
                a.slot = slot;
                a.distance_m = dist;
                a.npc_type = type;
                a.npc_behavior = behavior;
                add(a);
            }

    const PedBehavior ped_behaviors[] = {PedBehavior::Stop, PedBehavior::CrossRoad,
                                         PedBehavior::FrontLaneWalk};
    for (const bool left : {true, false})
        for (const PedBehavior b : ped_behaviors) {
            EnvAction a;
            a.kind = ActionKind::SpawnPedestrian;
            a.left_side = left;
            a.ped_behavior = b;
            a.distance_m = 20.0;
            add(a);
        }

    for (const double off : {15.0, 25.0, 40.0}) {
        EnvAction a;
        a.kind = ActionKind::PlaceCone;
        a.cone_offset_m = off;
        add(a);
    }

    for (const LightColor c : {LightColor::Red, LightColor::Green, LightColor::Yellow}) {
        EnvAction a;
        a.kind = ActionKind::SetLightPhase;
        a.light_target = c;
        add(a);
    }

    for (const double level : {0.25, 0.5, 0.75, 1.0}) {
        EnvAction a;
        a.kind = ActionKind::SetRoadDamage;
        a.damage_level = level;
        add(a);
    }
}

const EnvAction& ActionRegistry::by_id(int id) const {
    if (id < 0 || static_cast<size_t>(id) >= actions_.size())
        throw std::out_of_range("action id " + std::to_string(id) + " not in registry");
    return actions_[static_cast<size_t>(id)];
}

std::string ActionRegistry::dump() const {
    std::ostringstream ss;
    for (const auto& a : actions_)
        ss << a.id << '\t' << to_string(a.kind) << '\t' << a.params_text() << '\n';
    return ss.str();
}

uint64_t ActionRegistry::dump_hash() const { return fnv1a(dump()); }

double required_spawn_distance(const EnvAction& a) {
    if (a.kind == ActionKind::SpawnNpc &&
        (a.npc_type == NpcType::SchoolBus || a.npc_type == NpcType::BoxTruck))
        return 10.0;
    return 8.0;
}

Entity resolve_spawn(const WorldState& world, const EnvAction& a) {
    const Entity& ego = world.ego();
    const double route_len = world.route->length();
    const auto clamp_s = [&](double s) { return std::clamp(s, 1.0, route_len - 1.0); };

    switch (a.kind) {
        case ActionKind::SpawnNpc: {
            double s = ego.route_s;
            int lane = ego.lane;
            int dir = 1;
            switch (a.slot) {
                case SpawnSlot::AheadSameLane: s += a.distance_m; break;
                case SpawnSlot::AheadLeft:
                    s += a.distance_m;
                    lane -= 1;
                    break;
                case SpawnSlot::AheadRight:
                    s += a.distance_m;
                    lane += 1;
                    break;
                case SpawnSlot::Behind: s -= a.distance_m; break;
                case SpawnSlot::Oncoming:
                    s += a.distance_m;
                    lane = -1;
                    dir = -1;
                    break;
            }
            return make_npc(world, a.npc_type, a.npc_behavior, clamp_s(s), lane, dir);
        }
        case ActionKind::SpawnPedestrian:
            return make_pedestrian(world, a.ped_behavior, clamp_s(ego.route_s + a.distance_m),
                                   a.left_side);
        case ActionKind::PlaceCone:
            return make_cone(world, clamp_s(ego.route_s + a.cone_offset_m), ego.lane);
        default: throw std::logic_error("resolve_spawn on a non-spawn action");
    }
}

const TrafficLight* target_light(const WorldState& world) {
    const double ego_s = world.ego().route_s;
    const TrafficLight* best = nullptr;
    for (const auto& l : world.lights) {
        if (l.arclen < ego_s) continue;
        if (!best || l.arclen < best->arclen) best = &l;
    }
    return best;
}

const RoadSegment* target_segment(const WorldState& world) {
    return world.segment_at(world.ego().route_s + 40.0);
}

std::optional<ConstraintViolation> validate(const WorldState& world, const EnvAction& a) {
    switch (a.kind) {
        case ActionKind::NoOp: return std::nullopt;

        case ActionKind::SpawnNpc:
        case ActionKind::SpawnPedestrian:
        case ActionKind::PlaceCone: {
            const Entity candidate = resolve_spawn(world, a);
            const Obb box = candidate.obb();
            for (const auto& e : world.entities) {
                if (obb_overlap_area(box, e.obb()) > 1e-9) {
                    return ConstraintViolation{
                        ConstraintRule::Overlap,
                        "spawn overlaps entity " + std::to_string(e.id)};
                }
            }
            const double required = required_spawn_distance(a);
            for (const auto& e : world.entities) {
                const double d = distance({candidate.pose.x, candidate.pose.y},
                                          {e.pose.x, e.pose.y});
                if (d < required) {
                    std::ostringstream ss;
                    ss << "spawn center " << d << " m from entity " << e.id << " (< " << required
                       << " m)";
                    return ConstraintViolation{ConstraintRule::SafeDistance, ss.str()};
                }
            }
            return std::nullopt;
        }

        case ActionKind::SetLightPhase: {
            const TrafficLight* light = target_light(world);
            if (!light)
                return ConstraintViolation{ConstraintRule::LightOrder, "no light ahead"};
            if (a.light_target != next_light_color(light->color)) {
                return ConstraintViolation{
                    ConstraintRule::LightOrder,
                    std::string(to_string(light->color)) + " -> " + to_string(a.light_target) +
                        " breaks the red-green-yellow cycle"};
            }
            return std::nullopt;
        }

        case ActionKind::SetRoadDamage: {
            const RoadSegment* seg = target_segment(world);
            if (!seg)
                return ConstraintViolation{ConstraintRule::RoadOccupied, "no segment ahead"};
            const double ego_s = world.ego().route_s;
            if (ego_s >= seg->s_begin && ego_s < seg->s_end) {
                return ConstraintViolation{
                    ConstraintRule::RoadOccupied,
                    "ego occupies segment " + std::to_string(seg->id)};
            }
            return std::nullopt;
        }
    }
    return std::nullopt;
}

void apply(WorldState& world, const EnvAction& a) {
    if (auto violation = validate(world, a)) throw RejectedAction(*violation);

    switch (a.kind) {
        case ActionKind::NoOp: break;

        case ActionKind::SpawnNpc:
        case ActionKind::SpawnPedestrian:
        case ActionKind::PlaceCone: {
            world.entities.push_back(resolve_spawn(world, a));
            world.next_entity_id += 1;
            break;
        }

        case ActionKind::SetLightPhase: {
            const TrafficLight* target = target_light(world);
            for (auto& l : world.lights) {
                if (l.id != target->id) continue;
                l.color = a.light_target;
                l.active_duration_s = light_duration_s(a.light_target);
                l.elapsed_s = 0.0;
            }
            break;
        }

        case ActionKind::SetRoadDamage: {
            const RoadSegment* target = target_segment(world);
            for (auto& seg : world.segments)
                if (seg.id == target->id) seg.damage_level = a.damage_level;
            break;
        }
    }
}

}  // namespace crashlab
