#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "crashlab/geom.hpp"
#include "crashlab/types.hpp"

namespace crashlab {

struct RouteError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct RouteLightSpec {
    double arclen{0.0};
    LightColor initial{LightColor::Red};
};

// A drivable route: centerline polyline with lane layout, sidewalk zones and
// traffic light positions given by arc length. Lanes are indexed 0..N-1 from
// left to right; +lateral points left of the travel direction. Oncoming
// traffic uses the virtual lane index -1 (one lane width left of lane 0).
class Route {
public:
    Route(std::vector<Vec2> points, int lane_count, double lane_width,
          std::vector<std::pair<double, double>> sidewalk_zones, std::vector<RouteLightSpec> lights);

    double length() const { return cum_arc_.back(); }
    int lane_count() const { return lane_count_; }
    double lane_width() const { return lane_width_; }
    const std::vector<std::pair<double, double>>& sidewalk_zones() const { return sidewalk_zones_; }
    const std::vector<RouteLightSpec>& lights() const { return lights_; }
    const std::vector<Vec2>& points() const { return points_; }

    Vec2 point_at(double s) const;
    Vec2 tangent_at(double s) const;  // unit vector
    double heading_at(double s) const;

    // Signed heading change rate (rad/m) around s; positive = turning left.
    double curvature_at(double s) const;

    // Lateral offset of a lane center from the centerline (+left).
    double lane_lateral(int lane) const {
        return (0.5 * (lane_count_ - 1) - static_cast<double>(lane)) * lane_width_;
    }

    Vec2 lane_point(double s, int lane) const {
        return point_at(s) + normal_left(tangent_at(s)) * lane_lateral(lane);
    }

    bool in_sidewalk_zone(double s) const;
    // Distance to the next sidewalk zone beginning at or after s, if within `range`.
    double sidewalk_ahead(double s, double range) const;  // -1 when none

    uint64_t content_hash() const { return content_hash_; }

private:
    std::vector<Vec2> points_;
    std::vector<double> cum_arc_;
    int lane_count_;
    double lane_width_;
    std::vector<std::pair<double, double>> sidewalk_zones_;
    std::vector<RouteLightSpec> lights_;
    uint64_t content_hash_{0};

    size_t segment_index(double s) const;
};

// Line-oriented route file:
//   lanes=N
//   lane_width=W
//   sidewalk=a..b            (repeatable)
//   light=arclen,color0      (repeatable; color0 in {red,green,yellow})
//   x y                      (centerline points, meters)
Route load_route(const std::string& path);

}  // namespace crashlab
