#pragma once

#include <string>
#include <vector>

#include "crashlab/autopilot.hpp"
#include "crashlab/world.hpp"

namespace crashlab {

enum class SpeedBucket : uint8_t { Zero, Slow, Moderate, Fast };
enum class WeatherBucket : uint8_t { None, Light, Moderate, Heavy };
enum class TimeBucket : uint8_t { Morning, Noon, Night };
enum class VolumeBucket : uint8_t { Small, Medium, Large };
enum class DistanceBucket : uint8_t { Zero, VeryNear, Near, Far, VeryFar };
enum class LightBucket : uint8_t { None, Green, Yellow, Red };
enum class SidewalkBucket : uint8_t { None, SlowDown };

// Exact-threshold values belong to the lower bucket throughout.
SpeedBucket bucket_speed(double mps);              // <=1, <=5, <=12, >12
WeatherBucket bucket_weather(double fraction);     // =0, <=0.2, <=0.5, >0.5
TimeBucket bucket_time(double local_hour);         // [5,11), [11,17), else night
VolumeBucket bucket_npc_volume(double m3);         // <=10, <=60, >60
VolumeBucket bucket_static_volume(double m3);      // <=3, <=10, >10
DistanceBucket bucket_distance(double abs_m);      // =0, <=8, <=18, <=28, >28

const char* to_string(SpeedBucket b);
const char* to_string(WeatherBucket b);
const char* to_string(TimeBucket b);
const char* to_string(VolumeBucket b);
const char* to_string(DistanceBucket b);
const char* to_string(LightBucket b);
const char* to_string(SidewalkBucket b);

struct SceneNpc {
    VolumeBucket volume{VolumeBucket::Small};
    NpcBehavior operation{NpcBehavior::CurrentLaneDriving};
    SpeedBucket speed{SpeedBucket::Zero};
    DistanceBucket distance{DistanceBucket::VeryFar};

    bool operator==(const SceneNpc&) const = default;
};

struct ScenePed {
    VolumeBucket volume{VolumeBucket::Small};
    PedBehavior operation{PedBehavior::Stop};
    DistanceBucket distance{DistanceBucket::VeryFar};

    bool operator==(const ScenePed&) const = default;
};

struct SceneStatic {
    VolumeBucket volume{VolumeBucket::Small};
    DistanceBucket distance{DistanceBucket::VeryFar};

    bool operator==(const SceneStatic&) const = default;
};

// The 11 bucketed properties characterizing one sampled instant. Obstacle
// lists carry only entities inside the current sensing range.
struct Scene {
    Operation avut_operation{Operation::Cruise};
    SpeedBucket avut_speed{SpeedBucket::Zero};
    WeatherBucket rain{WeatherBucket::None};
    WeatherBucket fog{WeatherBucket::None};
    WeatherBucket wetness{WeatherBucket::None};
    TimeBucket time_of_day{TimeBucket::Noon};
    std::vector<SceneNpc> npcs;
    std::vector<ScenePed> pedestrians;
    std::vector<SceneStatic> statics;
    LightBucket traffic_light{LightBucket::None};
    SidewalkBucket sidewalk{SidewalkBucket::None};

    double t{0.0};  // capture time; carried for logs, not a compared property

    bool same_properties(const Scene& other) const;
};

Scene capture_scene(const WorldState& world, const AutopilotParams& params = {});

// Log round-trip: `|`-separated fields matching the execution log scene line.
std::string scene_to_text(const Scene& s);
Scene scene_from_text(const std::string& text);

}  // namespace crashlab
