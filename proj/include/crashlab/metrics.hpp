#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "crashlab/autopilot.hpp"
#include "crashlab/world.hpp"

namespace crashlab {

inline constexpr double kTtcHorizon = 30.0;
inline constexpr double kDtoCap = 100.0;

// Per-action-period sample lists, time-aligned at the 0.5 s cadence. TTC
// samples with no predicted conflict are omitted.
struct MetricBuffers {
    std::vector<double> ttc;
    std::vector<double> dto;
    std::vector<double> jerk;
    int samples_taken{0};
};

// Prediction-based time-to-collision between two bodies under constant
// velocity: closest approach of the relative trajectory within the horizon,
// declared a conflict when the miss distance is within the bodies' combined
// half-widths. Returns the closest-approach time.
std::optional<double> ttc_between(const Entity& ego, const Entity& obstacle,
                                  double horizon = kTtcHorizon);

// Minimum TTC over all dynamic obstacles (NPC vehicles and pedestrians).
std::optional<double> ttc_min(const WorldState& world);

// Minimum center distance minus the bodies' support extents along the center
// line, over all obstacles including statics. kDtoCap when the road is empty.
double dto_min(const WorldState& world);

// |a(t) - a(t - 0.5s)| / 0.5s from the ego's acceleration history.
std::optional<double> jerk_now(const WorldState& world);

struct CollectResult {
    MetricBuffers buffers;
    bool collided{false};
    CollisionEvent collision;
    double collision_time_s{0.0};
};

// Steps the world through one action period while the autopilot drives,
// sampling the three metrics every `t` seconds. Terminates early on
// collision, keeping only the full samples taken before contact.
CollectResult collect(WorldState& world, const AutopilotParams& params = {},
                      double T = kActionPeriodSeconds, double t = kSampleSeconds,
                      const std::function<void(const WorldState&)>& on_sample = {});

}  // namespace crashlab
