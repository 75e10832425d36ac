#include "crashlab/weather.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "crashlab/hash.hpp"

namespace crashlab {

WeatherTrace::WeatherTrace(std::vector<WeatherRecord> records) : records_(std::move(records)) {
    if (records_.size() < 2) throw WeatherError("trace needs at least 2 records");
    for (size_t i = 0; i < records_.size(); ++i) {
        const auto& r = records_[i];
        const auto bad = [&](const char* ch) {
            throw WeatherError("record " + std::to_string(i) + ": " + ch + " out of [0,100]");
        };
        if (r.cloudiness < 0.0 || r.cloudiness > 100.0) bad("cloudiness");
        if (r.rain < 0.0 || r.rain > 100.0) bad("rain");
        if (r.fog < 0.0 || r.fog > 100.0) bad("fog");
        if (r.wetness < 0.0 || r.wetness > 100.0) bad("wetness");
        if (i > 0 && r.unix_ts <= records_[i - 1].unix_ts)
            throw WeatherError("timestamps must be strictly increasing at record " +
                               std::to_string(i));
    }
    ByteWriter w;
    for (const auto& r : records_) {
        w.u64(static_cast<uint64_t>(r.unix_ts));
        w.f64(r.cloudiness);
        w.f64(r.rain);
        w.f64(r.fog);
        w.f64(r.wetness);
    }
    content_hash_ = fnv1a(w.bytes().data(), w.bytes().size());
}

WeatherState WeatherTrace::sample(double unix_ts) const {
    if (unix_ts < static_cast<double>(first_ts()) || unix_ts > static_cast<double>(last_ts()))
        throw WeatherError("query time outside trace span");
    auto it = std::lower_bound(records_.begin(), records_.end(), unix_ts,
                               [](const WeatherRecord& r, double t) {
                                   return static_cast<double>(r.unix_ts) < t;
                               });
    if (it == records_.begin()) ++it;
    const WeatherRecord& hi = *it;
    const WeatherRecord& lo = *(it - 1);
    const double span = static_cast<double>(hi.unix_ts - lo.unix_ts);
    const double t = (unix_ts - static_cast<double>(lo.unix_ts)) / span;
    const auto lerp = [t](double a, double b) { return a + (b - a) * t; };
    WeatherState s;
    s.cloudiness = lerp(lo.cloudiness, hi.cloudiness) / 100.0;
    s.rain = lerp(lo.rain, hi.rain) / 100.0;
    s.fog = lerp(lo.fog, hi.fog) / 100.0;
    s.wetness = lerp(lo.wetness, hi.wetness) / 100.0;
    const double day_s = std::fmod(unix_ts, 86400.0);
    s.local_hour = (day_s < 0.0 ? day_s + 86400.0 : day_s) / 3600.0;
    return s;
}

WeatherState WeatherClock::at(double sim_time_s) const {
    if (!trace) throw WeatherError("weather clock has no trace");
    return trace->sample(mapped_ts(sim_time_s));
}

WeatherState weather_at(const WeatherTrace& trace, double anchor_ts, double sim_time_s,
                        double time_scale) {
    return trace.sample(anchor_ts + sim_time_s * time_scale);
}

WeatherTrace load_trace(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw WeatherError("cannot open trace file: " + path);
    std::vector<WeatherRecord> records;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line[0] == '#') continue;
        if (line.rfind("unix_ts", 0) == 0) continue;  // header
        std::istringstream ss(line);
        WeatherRecord r;
        std::string field;
        const auto take = [&](double& out) {
            if (!std::getline(ss, field, ','))
                throw WeatherError(path + ":" + std::to_string(line_no) + ": short row");
            try {
                out = std::stod(field);
            } catch (const std::exception&) {
                throw WeatherError(path + ":" + std::to_string(line_no) + ": bad number `" +
                                   field + "`");
            }
        };
        double ts;
        take(ts);
        r.unix_ts = static_cast<int64_t>(ts);
        take(r.cloudiness);
        take(r.rain);
        take(r.fog);
        take(r.wetness);
        records.push_back(r);
    }
    try {
        return WeatherTrace(std::move(records));
    } catch (const WeatherError& e) {
        throw WeatherError(path + ": " + e.what());
    }
}

const char* to_string(WeatherPreset p) {
    switch (p) {
        case WeatherPreset::RD: return "RD";
        case WeatherPreset::RN: return "RN";
        case WeatherPreset::SD: return "SD";
        case WeatherPreset::SN: return "SN";
    }
    return "?";
}

bool parse_weather_preset(const std::string& name, WeatherPreset& out) {
    if (name == "RD" || name == "rd") out = WeatherPreset::RD;
    else if (name == "RN" || name == "rn") out = WeatherPreset::RN;
    else if (name == "SD" || name == "sd") out = WeatherPreset::SD;
    else if (name == "SN" || name == "sn") out = WeatherPreset::SN;
    else return false;
    return true;
}

namespace {

// Local-epoch day starts for the two bundled observation windows.
constexpr int64_t kRainyDay = 1628294400;  // 2021-08-07 00:00
constexpr int64_t kSunnyDay = 1627084800;  // 2021-07-24 00:00

}  // namespace

WeatherClock load_preset(WeatherPreset p, const std::string& data_dir) {
    const bool rainy = (p == WeatherPreset::RD || p == WeatherPreset::RN);
    const bool night = (p == WeatherPreset::RN || p == WeatherPreset::SN);
    const std::string file = data_dir + "/weather/" + (rainy ? "heavy_rain.csv" : "clear_sky.csv");
    WeatherClock clock;
    clock.trace = std::make_shared<const WeatherTrace>(load_trace(file));
    const int64_t day = rainy ? kRainyDay : kSunnyDay;
    clock.anchor_ts = static_cast<double>(day + (night ? 20 : 8) * 3600);
    clock.time_scale = 1.0;
    return clock;
}

}  // namespace crashlab
