#include "crashlab/route.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "crashlab/hash.hpp"

namespace crashlab {

Route::Route(std::vector<Vec2> points, int lane_count, double lane_width,
             std::vector<std::pair<double, double>> sidewalk_zones,
             std::vector<RouteLightSpec> lights)
    : points_(std::move(points)),
      lane_count_(lane_count),
      lane_width_(lane_width),
      sidewalk_zones_(std::move(sidewalk_zones)),
      lights_(std::move(lights)) {
    if (points_.size() < 2) throw RouteError("route needs at least 2 centerline points");
    if (lane_count_ < 1) throw RouteError("lane_count must be >= 1");
    if (lane_width_ <= 0.0) throw RouteError("lane_width must be > 0");
    cum_arc_.resize(points_.size());
    cum_arc_[0] = 0.0;
    for (size_t i = 1; i < points_.size(); ++i) {
        const double d = distance(points_[i - 1], points_[i]);
        if (d <= 0.0) throw RouteError("degenerate centerline segment");
        cum_arc_[i] = cum_arc_[i - 1] + d;
    }
    std::sort(sidewalk_zones_.begin(), sidewalk_zones_.end());
    std::sort(lights_.begin(), lights_.end(),
              [](const RouteLightSpec& a, const RouteLightSpec& b) { return a.arclen < b.arclen; });

    ByteWriter w;
    w.u32(static_cast<uint32_t>(points_.size()));
    for (const auto& p : points_) {
        w.f64(p.x);
        w.f64(p.y);
    }
    w.i32(lane_count_);
    w.f64(lane_width_);
    for (const auto& z : sidewalk_zones_) {
        w.f64(z.first);
        w.f64(z.second);
    }
    for (const auto& l : lights_) {
        w.f64(l.arclen);
        w.u8(static_cast<uint8_t>(l.initial));
    }
    content_hash_ = fnv1a(w.bytes().data(), w.bytes().size());
}

size_t Route::segment_index(double s) const {
    if (s <= 0.0) return 0;
    if (s >= length()) return points_.size() - 2;
    const auto it = std::upper_bound(cum_arc_.begin(), cum_arc_.end(), s);
    return static_cast<size_t>(it - cum_arc_.begin()) - 1;
}

Vec2 Route::point_at(double s) const {
    const double sc = std::clamp(s, 0.0, length());
    const size_t i = segment_index(sc);
    const double seg_len = cum_arc_[i + 1] - cum_arc_[i];
    const double t = (sc - cum_arc_[i]) / seg_len;
    return points_[i] + (points_[i + 1] - points_[i]) * t;
}

Vec2 Route::tangent_at(double s) const {
    const size_t i = segment_index(std::clamp(s, 0.0, length()));
    const Vec2 d = points_[i + 1] - points_[i];
    const double n = norm(d);
    return {d.x / n, d.y / n};
}

double Route::heading_at(double s) const {
    const Vec2 t = tangent_at(s);
    return std::atan2(t.y, t.x);
}

double Route::curvature_at(double s) const {
    const double ds = 8.0;
    const double s0 = std::clamp(s - ds, 0.0, length());
    const double s1 = std::clamp(s + ds, 0.0, length());
    if (s1 - s0 < 1e-9) return 0.0;
    const double dh = wrap_angle(heading_at(s1) - heading_at(s0));
    return dh / (s1 - s0);
}

bool Route::in_sidewalk_zone(double s) const {
    for (const auto& z : sidewalk_zones_)
        if (s >= z.first && s <= z.second) return true;
    return false;
}

double Route::sidewalk_ahead(double s, double range) const {
    for (const auto& z : sidewalk_zones_) {
        if (z.second < s) continue;
        const double d = std::max(0.0, z.first - s);
        if (d <= range) return d;
        return -1.0;
    }
    return -1.0;
}

namespace {

bool parse_color(const std::string& name, LightColor& out) {
    if (name == "red") out = LightColor::Red;
    else if (name == "green") out = LightColor::Green;
    else if (name == "yellow") out = LightColor::Yellow;
    else return false;
    return true;
}

}  // namespace

Route load_route(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw RouteError("cannot open route file: " + path);

    std::vector<Vec2> points;
    int lanes = 1;
    double lane_width = 3.5;
    std::vector<std::pair<double, double>> zones;
    std::vector<RouteLightSpec> lights;

    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line[0] == '#') continue;
        const auto fail = [&](const std::string& why) {
            throw RouteError(path + ":" + std::to_string(line_no) + ": " + why);
        };
        if (line.rfind("lanes=", 0) == 0) {
            lanes = std::stoi(line.substr(6));
        } else if (line.rfind("lane_width=", 0) == 0) {
            lane_width = std::stod(line.substr(11));
        } else if (line.rfind("sidewalk=", 0) == 0) {
            const std::string v = line.substr(9);
            const auto sep = v.find("..");
            if (sep == std::string::npos) fail("sidewalk wants a..b");
            zones.emplace_back(std::stod(v.substr(0, sep)), std::stod(v.substr(sep + 2)));
        } else if (line.rfind("light=", 0) == 0) {
            const std::string v = line.substr(6);
            const auto sep = v.find(',');
            if (sep == std::string::npos) fail("light wants arclen,color");
            RouteLightSpec spec;
            spec.arclen = std::stod(v.substr(0, sep));
            if (!parse_color(v.substr(sep + 1), spec.initial)) fail("unknown light color");
            lights.push_back(spec);
        } else {
            std::istringstream ss(line);
            Vec2 p;
            if (!(ss >> p.x >> p.y)) fail("expected `x y`");
            points.push_back(p);
        }
    }
    return Route(std::move(points), lanes, lane_width, std::move(zones), std::move(lights));
}

}  // namespace crashlab
