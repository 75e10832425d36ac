#include "crashlab/metrics.hpp"

#include <algorithm>
#include <cmath>

namespace crashlab {

std::optional<double> ttc_between(const Entity& ego, const Entity& obstacle, double horizon) {
    const Vec2 r0{obstacle.pose.x - ego.pose.x, obstacle.pose.y - ego.pose.y};
    const Vec2 w = obstacle.vel - ego.vel;
    const double w2 = dot(w, w);
    if (w2 < 1e-12) return std::nullopt;

    const double t_star = -dot(r0, w) / w2;
    if (t_star <= 0.0 || t_star > horizon) return std::nullopt;

    const Vec2 miss = r0 + w * t_star;
    const double radius = 0.5 * (ego.bbox_width + obstacle.bbox_width);
    if (norm(miss) > radius) return std::nullopt;
    return t_star;
}

std::optional<double> ttc_min(const WorldState& world) {
    const Entity& ego = world.ego();
    std::optional<double> best;
    for (const auto& e : world.entities) {
        if (e.id == ego.id) continue;
        if (e.kind != EntityKind::NpcVehicle && e.kind != EntityKind::Pedestrian) continue;
        if (const auto t = ttc_between(ego, e)) {
            if (!best || *t < *best) best = *t;
        }
    }
    return best;
}

double dto_min(const WorldState& world) {
    const Entity& ego = world.ego();
    const Obb ego_box = ego.obb();
    double best = kDtoCap;
    for (const auto& e : world.entities) {
        if (e.id == ego.id) continue;
        const Vec2 delta{e.pose.x - ego.pose.x, e.pose.y - ego.pose.y};
        const double center_dist = norm(delta);
        if (center_dist < 1e-9) {
            best = 0.0;
            continue;
        }
        const Vec2 u{delta.x / center_dist, delta.y / center_dist};
        const double allowance = ego_box.support_radius(u) + e.obb().support_radius(u);
        best = std::min(best, std::max(0.0, center_dist - allowance));
    }
    return best;
}

std::optional<double> jerk_now(const WorldState& world) {
    if (world.accel_history_count < 2) return std::nullopt;
    const int size = static_cast<int>(world.accel_history.size());
    const int newest = ((world.accel_history_cursor - 1) % size + size) % size;
    const double a_now = world.accel_history[static_cast<size_t>(newest)].second;
    const auto a_prev = world.accel_before(kSampleSeconds);
    if (!a_prev) return std::nullopt;
    return std::abs(a_now - *a_prev) / kSampleSeconds;
}

CollectResult collect(WorldState& world, const AutopilotParams& params, double T, double t,
                      const std::function<void(const WorldState&)>& on_sample) {
    CollectResult result;
    const int samples = static_cast<int>(std::llround(T / t));
    const int ticks_per_sample = static_cast<int>(std::llround(t / kTickSeconds));

    for (int s = 0; s < samples; ++s) {
        for (int k = 0; k < ticks_per_sample; ++k) {
            drive_tick(world, params);
            step(world);
            const auto events = collision_events(world);
            if (!events.empty()) {
                result.collided = true;
                result.collision = events.front();
                result.collision_time_s = world.sim_time_s;
                return result;
            }
        }
        if (const auto ttc = ttc_min(world)) result.buffers.ttc.push_back(*ttc);
        result.buffers.dto.push_back(dto_min(world));
        if (const auto j = jerk_now(world)) result.buffers.jerk.push_back(*j);
        result.buffers.samples_taken += 1;
        if (on_sample) on_sample(world);
    }
    return result;
}

}  // namespace crashlab
