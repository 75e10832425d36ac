#pragma once

#include <memory>
#include <string>

#include "crashlab/actions.hpp"
#include "crashlab/episode.hpp"
#include "crashlab/route.hpp"
#include "crashlab/weather.hpp"
#include "crashlab/world.hpp"

#ifndef CRASHLAB_DATA_DIR
#define CRASHLAB_DATA_DIR "data"
#endif

namespace crashlab::test {

inline std::string data_dir() { return CRASHLAB_DATA_DIR; }

inline std::shared_ptr<const Route> straight_route(double length = 1000.0, int lanes = 3,
                                                   std::vector<RouteLightSpec> lights = {}) {
    std::vector<Vec2> pts;
    for (double x = 0.0; x <= length + 1e-9; x += 10.0) pts.push_back({x, 0.0});
    return std::make_shared<Route>(std::move(pts), lanes, 3.5,
                                   std::vector<std::pair<double, double>>{}, std::move(lights));
}

// Straight-road world with no weather trace (constant default weather).
inline WorldState bare_world(uint64_t seed = 1,
                             std::shared_ptr<const Route> route = straight_route()) {
    return make_world(std::move(route), WeatherClock{}, seed);
}

inline Entity body_at(double x, double y, double vx, double vy, double length = 4.6,
                      double width = 1.9) {
    Entity e;
    e.id = 99;
    e.kind = EntityKind::NpcVehicle;
    e.pose = {x, y, std::atan2(vy, vx)};
    e.vel = {vx, vy};
    e.speed = norm({vx, vy});
    e.bbox_length = length;
    e.bbox_width = width;
    return e;
}

inline EpisodeEnv make_env(const ActionRegistry& registry, const std::string& route_id = "R1",
                           WeatherPreset preset = WeatherPreset::RD, uint64_t seed = 7,
                           RewardKind kind = RewardKind::Ttc) {
    std::string file = route_id;
    file[0] = 'r';
    auto route = std::make_shared<const Route>(load_route(data_dir() + "/routes/" + file + ".route"));
    WeatherClock clock = load_preset(preset, data_dir());
    EnvRunConfig cfg;
    cfg.route_id = route_id;
    cfg.weather_preset = to_string(preset);
    cfg.reward_kind = kind;
    return EpisodeEnv(route, clock, &registry, cfg, seed);
}

}  // namespace crashlab::test
