#pragma once

#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "crashlab/types.hpp"

namespace crashlab {

struct WeatherError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// One observed record; channels are percents in [0, 100].
struct WeatherRecord {
    int64_t unix_ts{0};
    double cloudiness{0.0};
    double rain{0.0};
    double fog{0.0};
    double wetness{0.0};
};

// Immutable historical trace. Timestamps are "local" epoch seconds: the time
// of day is ts mod 86400, so traces carry their own time zone baked in.
class WeatherTrace {
public:
    explicit WeatherTrace(std::vector<WeatherRecord> records);

    const std::vector<WeatherRecord>& records() const { return records_; }
    int64_t first_ts() const { return records_.front().unix_ts; }
    int64_t last_ts() const { return records_.back().unix_ts; }
    uint64_t content_hash() const { return content_hash_; }

    // Linear interpolation at an absolute trace timestamp; percent -> fraction.
    WeatherState sample(double unix_ts) const;

private:
    std::vector<WeatherRecord> records_;
    uint64_t content_hash_{0};
};

// CSV with header `unix_ts,cloudiness,rain,fog,wetness`; percent values.
WeatherTrace load_trace(const std::string& path);

// Anchor alignment: sim_time 0 maps onto anchor_ts; mapped time advances at
// time_scale mapped-seconds per sim-second (<= 1 keeps the time-of-day
// realism constraint satisfied by construction).
struct WeatherClock {
    std::shared_ptr<const WeatherTrace> trace;
    double anchor_ts{0.0};
    double time_scale{1.0};

    double mapped_ts(double sim_time_s) const { return anchor_ts + sim_time_s * time_scale; }
    WeatherState at(double sim_time_s) const;
};

WeatherState weather_at(const WeatherTrace& trace, double anchor_ts, double sim_time_s,
                        double time_scale = 1.0);

// The four bundled presets: rainy/sunny x day/night.
enum class WeatherPreset : uint8_t { RD, RN, SD, SN };

const char* to_string(WeatherPreset p);
bool parse_weather_preset(const std::string& name, WeatherPreset& out);

// Loads the bundled trace for a preset from `data_dir` and anchors it at the
// preset's date and hour.
WeatherClock load_preset(WeatherPreset p, const std::string& data_dir);

}  // namespace crashlab
