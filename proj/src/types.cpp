#include "crashlab/types.hpp"

namespace crashlab {

LightColor next_light_color(LightColor c) {
    switch (c) {
        case LightColor::Red: return LightColor::Green;
        case LightColor::Green: return LightColor::Yellow;
        case LightColor::Yellow: return LightColor::Red;
    }
    return LightColor::Red;
}

double light_duration_s(LightColor c) {
    switch (c) {
        case LightColor::Red: return 24.0;
        case LightColor::Green: return 30.0;
        case LightColor::Yellow: return 6.0;
    }
    return 24.0;
}

const char* to_string(EntityKind k) {
    switch (k) {
        case EntityKind::Ego: return "ego";
        case EntityKind::NpcVehicle: return "npc";
        case EntityKind::Pedestrian: return "pedestrian";
        case EntityKind::TrafficCone: return "cone";
    }
    return "?";
}

const char* to_string(NpcType t) {
    switch (t) {
        case NpcType::Sedan: return "sedan";
        case NpcType::Suv: return "suv";
        case NpcType::Jeep: return "jeep";
        case NpcType::Hatchback: return "hatchback";
        case NpcType::SchoolBus: return "schoolbus";
        case NpcType::BoxTruck: return "boxtruck";
    }
    return "?";
}

const char* to_string(NpcBehavior b) {
    switch (b) {
        case NpcBehavior::Stop: return "stop";
        case NpcBehavior::SwitchLane: return "switch_lane";
        case NpcBehavior::LeftLaneDriving: return "left_lane";
        case NpcBehavior::RightLaneDriving: return "right_lane";
        case NpcBehavior::CurrentLaneDriving: return "current_lane";
    }
    return "?";
}

const char* to_string(PedBehavior b) {
    switch (b) {
        case PedBehavior::Stop: return "stop";
        case PedBehavior::CrossRoad: return "cross_road";
        case PedBehavior::FrontLaneWalk: return "front_lane_walk";
    }
    return "?";
}

const char* to_string(LightColor c) {
    switch (c) {
        case LightColor::Red: return "red";
        case LightColor::Green: return "green";
        case LightColor::Yellow: return "yellow";
    }
    return "?";
}

const char* to_string(Operation op) {
    switch (op) {
        case Operation::Stop: return "stop";
        case Operation::Cruise: return "cruise";
        case Operation::SpeedUp: return "speed_up";
        case Operation::SpeedCut: return "speed_cut";
        case Operation::EmergencyBrake: return "emergency_brake";
        case Operation::SwitchLaneToRight: return "switch_lane_right";
        case Operation::SwitchLaneToLeft: return "switch_lane_left";
        case Operation::TurnLeft: return "turn_left";
        case Operation::TurnRight: return "turn_right";
    }
    return "?";
}

Footprint footprint_of(NpcType t) {
    switch (t) {
        case NpcType::Sedan:
        case NpcType::Suv:
        case NpcType::Jeep:
        case NpcType::Hatchback: return {4.6, 1.9, 1.5};
        case NpcType::SchoolBus:
        case NpcType::BoxTruck: return {10.0, 2.5, 3.0};
    }
    return {4.6, 1.9, 1.5};
}

}  // namespace crashlab
