#include "crashlab/scene.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace crashlab {

SpeedBucket bucket_speed(double mps) {
    if (mps <= 1.0) return SpeedBucket::Zero;
    if (mps <= 5.0) return SpeedBucket::Slow;
    if (mps <= 12.0) return SpeedBucket::Moderate;
    return SpeedBucket::Fast;
}

WeatherBucket bucket_weather(double fraction) {
    if (fraction <= 0.0) return WeatherBucket::None;
    if (fraction <= 0.2) return WeatherBucket::Light;
    if (fraction <= 0.5) return WeatherBucket::Moderate;
    return WeatherBucket::Heavy;
}

TimeBucket bucket_time(double local_hour) {
    if (local_hour >= 5.0 && local_hour < 11.0) return TimeBucket::Morning;
    if (local_hour >= 11.0 && local_hour < 17.0) return TimeBucket::Noon;
    return TimeBucket::Night;
}

VolumeBucket bucket_npc_volume(double m3) {
    if (m3 <= 10.0) return VolumeBucket::Small;
    if (m3 <= 60.0) return VolumeBucket::Medium;
    return VolumeBucket::Large;
}

VolumeBucket bucket_static_volume(double m3) {
    if (m3 <= 3.0) return VolumeBucket::Small;
    if (m3 <= 10.0) return VolumeBucket::Medium;
    return VolumeBucket::Large;
}

DistanceBucket bucket_distance(double abs_m) {
    if (abs_m <= 0.0) return DistanceBucket::Zero;
    if (abs_m <= 8.0) return DistanceBucket::VeryNear;
    if (abs_m <= 18.0) return DistanceBucket::Near;
    if (abs_m <= 28.0) return DistanceBucket::Far;
    return DistanceBucket::VeryFar;
}

const char* to_string(SpeedBucket b) {
    switch (b) {
        case SpeedBucket::Zero: return "zero";
        case SpeedBucket::Slow: return "slow";
        case SpeedBucket::Moderate: return "moderate";
        case SpeedBucket::Fast: return "fast";
    }
    return "?";
}

const char* to_string(WeatherBucket b) {
    switch (b) {
        case WeatherBucket::None: return "none";
        case WeatherBucket::Light: return "light";
        case WeatherBucket::Moderate: return "moderate";
        case WeatherBucket::Heavy: return "heavy";
    }
    return "?";
}

const char* to_string(TimeBucket b) {
    switch (b) {
        case TimeBucket::Morning: return "morning";
        case TimeBucket::Noon: return "noon";
        case TimeBucket::Night: return "night";
    }
    return "?";
}

const char* to_string(VolumeBucket b) {
    switch (b) {
        case VolumeBucket::Small: return "small";
        case VolumeBucket::Medium: return "medium";
        case VolumeBucket::Large: return "large";
    }
    return "?";
}

const char* to_string(DistanceBucket b) {
    switch (b) {
        case DistanceBucket::Zero: return "zero";
        case DistanceBucket::VeryNear: return "very_near";
        case DistanceBucket::Near: return "near";
        case DistanceBucket::Far: return "far";
        case DistanceBucket::VeryFar: return "very_far";
    }
    return "?";
}

const char* to_string(LightBucket b) {
    switch (b) {
        case LightBucket::None: return "none";
        case LightBucket::Green: return "green";
        case LightBucket::Yellow: return "yellow";
        case LightBucket::Red: return "red";
    }
    return "?";
}

const char* to_string(SidewalkBucket b) {
    return b == SidewalkBucket::None ? "none" : "slow_down";
}

bool Scene::same_properties(const Scene& other) const {
    return avut_operation == other.avut_operation && avut_speed == other.avut_speed &&
           rain == other.rain && fog == other.fog && wetness == other.wetness &&
           time_of_day == other.time_of_day && npcs == other.npcs &&
           pedestrians == other.pedestrians && statics == other.statics &&
           traffic_light == other.traffic_light && sidewalk == other.sidewalk;
}

Scene capture_scene(const WorldState& world, const AutopilotParams& params) {
    const Entity& ego = world.ego();
    const Perception p = perceive(world, params);

    Scene s;
    s.t = world.sim_time_s;
    s.avut_operation = world.ego_operation;
    s.avut_speed = bucket_speed(ego.speed);
    s.rain = bucket_weather(world.weather.rain);
    s.fog = bucket_weather(world.weather.fog);
    s.wetness = bucket_weather(world.weather.wetness);
    s.time_of_day = bucket_time(world.weather.local_hour);

    for (const auto& pe : p.visible_entities) {
        const Entity* e = world.find_entity(pe.id);
        if (!e) continue;
        const double d = distance({e->pose.x, e->pose.y}, {ego.pose.x, ego.pose.y});
        const DistanceBucket db = bucket_distance(d);
        switch (e->kind) {
            case EntityKind::NpcVehicle: {
                const Footprint fp = footprint_of(e->npc_type);
                s.npcs.push_back({bucket_npc_volume(fp.length * fp.width * fp.height),
                                  e->npc_behavior, bucket_speed(e->speed), db});
                break;
            }
            case EntityKind::Pedestrian:
                s.pedestrians.push_back({VolumeBucket::Small, e->ped_behavior, db});
                break;
            case EntityKind::TrafficCone: {
                const Footprint fp = cone_footprint();
                s.statics.push_back(
                    {bucket_static_volume(fp.length * fp.width * fp.height), db});
                break;
            }
            case EntityKind::Ego: break;
        }
    }

    const PerceivedLight* nearest = nullptr;
    for (const auto& l : p.visible_lights)
        if (l.distance_m >= 0.0 && (!nearest || l.distance_m < nearest->distance_m)) nearest = &l;
    if (nearest) {
        switch (nearest->color) {
            case LightColor::Green: s.traffic_light = LightBucket::Green; break;
            case LightColor::Yellow: s.traffic_light = LightBucket::Yellow; break;
            case LightColor::Red: s.traffic_light = LightBucket::Red; break;
        }
    }
    s.sidewalk = (p.sidewalk_ahead && *p.sidewalk_ahead <= params.intersection_slow_m)
                     ? SidewalkBucket::SlowDown
                     : SidewalkBucket::None;
    return s;
}

namespace {

std::vector<std::string> split(const std::string& text, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (const char c : text) {
        if (c == sep) {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    out.push_back(cur);
    return out;
}

template <typename T>
T parse_enum(const std::string& text, T last) {
    for (int i = 0; i <= static_cast<int>(last); ++i)
        if (text == to_string(static_cast<T>(i))) return static_cast<T>(i);
    throw std::invalid_argument("unknown bucket name: " + text);
}

Operation parse_operation(const std::string& text) {
    for (int i = 0; i <= static_cast<int>(Operation::TurnRight); ++i)
        if (text == to_string(static_cast<Operation>(i))) return static_cast<Operation>(i);
    throw std::invalid_argument("unknown operation: " + text);
}

NpcBehavior parse_npc_behavior(const std::string& text) {
    for (int i = 0; i <= static_cast<int>(NpcBehavior::CurrentLaneDriving); ++i)
        if (text == to_string(static_cast<NpcBehavior>(i))) return static_cast<NpcBehavior>(i);
    throw std::invalid_argument("unknown npc behavior: " + text);
}

PedBehavior parse_ped_behavior(const std::string& text) {
    for (int i = 0; i <= static_cast<int>(PedBehavior::FrontLaneWalk); ++i)
        if (text == to_string(static_cast<PedBehavior>(i))) return static_cast<PedBehavior>(i);
    throw std::invalid_argument("unknown ped behavior: " + text);
}

}  // namespace

std::string scene_to_text(const Scene& s) {
    std::ostringstream ss;
    ss << s.t << '|' << to_string(s.avut_operation) << '|' << to_string(s.avut_speed) << '|'
       << to_string(s.rain) << '|' << to_string(s.fog) << '|' << to_string(s.wetness) << '|'
       << to_string(s.time_of_day) << '|' << to_string(s.traffic_light) << '|'
       << to_string(s.sidewalk) << '|';
    for (size_t i = 0; i < s.npcs.size(); ++i) {
        const auto& n = s.npcs[i];
        if (i) ss << ';';
        ss << to_string(n.volume) << ':' << to_string(n.operation) << ':' << to_string(n.speed)
           << ':' << to_string(n.distance);
    }
    ss << '|';
    for (size_t i = 0; i < s.pedestrians.size(); ++i) {
        const auto& x = s.pedestrians[i];
        if (i) ss << ';';
        ss << to_string(x.volume) << ':' << to_string(x.operation) << ':' << to_string(x.distance);
    }
    ss << '|';
    for (size_t i = 0; i < s.statics.size(); ++i) {
        const auto& x = s.statics[i];
        if (i) ss << ';';
        ss << to_string(x.volume) << ':' << to_string(x.distance);
    }
    return ss.str();
}

Scene scene_from_text(const std::string& text) {
    const auto fields = split(text, '|');
    if (fields.size() != 12) throw std::invalid_argument("scene line wants 12 fields");
    Scene s;
    s.t = std::stod(fields[0]);
    s.avut_operation = parse_operation(fields[1]);
    s.avut_speed = parse_enum(fields[2], SpeedBucket::Fast);
    s.rain = parse_enum(fields[3], WeatherBucket::Heavy);
    s.fog = parse_enum(fields[4], WeatherBucket::Heavy);
    s.wetness = parse_enum(fields[5], WeatherBucket::Heavy);
    s.time_of_day = parse_enum(fields[6], TimeBucket::Night);
    s.traffic_light = parse_enum(fields[7], LightBucket::Red);
    s.sidewalk = parse_enum(fields[8], SidewalkBucket::SlowDown);
    if (!fields[9].empty())
        for (const auto& item : split(fields[9], ';')) {
            const auto parts = split(item, ':');
            if (parts.size() != 4) throw std::invalid_argument("bad npc tuple");
            s.npcs.push_back({parse_enum(parts[0], VolumeBucket::Large),
                              parse_npc_behavior(parts[1]),
                              parse_enum(parts[2], SpeedBucket::Fast),
                              parse_enum(parts[3], DistanceBucket::VeryFar)});
        }
    if (!fields[10].empty())
        for (const auto& item : split(fields[10], ';')) {
            const auto parts = split(item, ':');
            if (parts.size() != 3) throw std::invalid_argument("bad pedestrian tuple");
            s.pedestrians.push_back({parse_enum(parts[0], VolumeBucket::Large),
                                     parse_ped_behavior(parts[1]),
                                     parse_enum(parts[2], DistanceBucket::VeryFar)});
        }
    if (!fields[11].empty())
        for (const auto& item : split(fields[11], ';')) {
            const auto parts = split(item, ':');
            if (parts.size() != 2) throw std::invalid_argument("bad static tuple");
            s.statics.push_back({parse_enum(parts[0], VolumeBucket::Large),
                                 parse_enum(parts[1], DistanceBucket::VeryFar)});
        }
    return s;
}

}  // namespace crashlab
