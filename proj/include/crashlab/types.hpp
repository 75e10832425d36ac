#pragma once

#include <cstdint>
#include <string>

namespace crashlab {

enum class EntityKind : uint8_t { Ego, NpcVehicle, Pedestrian, TrafficCone };

enum class NpcType : uint8_t { Sedan, Suv, Jeep, Hatchback, SchoolBus, BoxTruck };

enum class NpcColor : uint8_t { Silver, White, Black, Red, Blue };

enum class NpcBehavior : uint8_t {
    Stop,
    SwitchLane,
    LeftLaneDriving,
    RightLaneDriving,
    CurrentLaneDriving,
};

enum class PedBehavior : uint8_t { Stop, CrossRoad, FrontLaneWalk };

enum class LightColor : uint8_t { Red, Green, Yellow };

// Driving operations the autopilot can be executing at any instant.
enum class Operation : uint8_t {
    Stop,
    Cruise,
    SpeedUp,
    SpeedCut,
    EmergencyBrake,
    SwitchLaneToRight,
    SwitchLaneToLeft,
    TurnLeft,
    TurnRight,
};

// Simulated weather channels as unit fractions plus local time of day.
struct WeatherState {
    double cloudiness{0.0};
    double rain{0.0};
    double fog{0.0};
    double wetness{0.0};
    double local_hour{12.0};  // fractional hour in [0, 24)
};

LightColor next_light_color(LightColor c);
double light_duration_s(LightColor c);

const char* to_string(EntityKind k);
const char* to_string(NpcType t);
const char* to_string(NpcBehavior b);
const char* to_string(PedBehavior b);
const char* to_string(LightColor c);
const char* to_string(Operation op);

// Footprints (meters). Heights are nominal and only feed volume bucketing.
struct Footprint {
    double length;
    double width;
    double height;
};

Footprint footprint_of(NpcType t);
inline Footprint ego_footprint() { return {4.6, 1.9, 1.5}; }
inline Footprint pedestrian_footprint() { return {0.6, 0.6, 1.8}; }
inline Footprint cone_footprint() { return {0.4, 0.4, 0.7}; }

}  // namespace crashlab
