#include "crashlab/episode.hpp"

#include <algorithm>
#include <cmath>

namespace crashlab {

EpisodeEnv::EpisodeEnv(std::shared_ptr<const Route> route, WeatherClock clock,
                       const ActionRegistry* registry, EnvRunConfig cfg, uint64_t master_seed)
    : route_(std::move(route)),
      clock_(std::move(clock)),
      registry_(registry),
      cfg_(std::move(cfg)),
      episode_seeds_(master_seed) {
    reset_episode(master_seed);
}

void EpisodeEnv::reset_episode(uint64_t seed) {
    world_ = make_world(route_, clock_, seed);
    log_ = ExecutionLog{};
    log_.strategy = "unset";
    log_.reward_kind = to_string(cfg_.reward_kind);
    log_.route_id = cfg_.route_id;
    log_.weather_preset = cfg_.weather_preset;
    log_.seed = seed;
    log_.registry_hash = registry_->dump_hash();
    log_.provenance = cfg_.provenance;
    terminal_ = false;
    decision_count_ = 0;
    valid_count_ = 0;
}

StateVector EpisodeEnv::reset() {
    reset_episode(episode_seeds_.next_u64());
    return encode_state(world_, cfg_.autopilot);
}

EpisodeEnv::Outcome EpisodeEnv::do_action(int action) {
    const Decision d = decide(action);
    return {d.reward, encode_state(world_, cfg_.autopilot), d.terminal};
}

void EpisodeEnv::sample_streams(const WorldState& w) {
    log_.scenes.push_back(capture_scene(w, cfg_.autopilot));
    EnvSample e;
    e.t = w.sim_time_s;
    e.mapped_ts = w.wall_unix_ts;
    e.cloudiness = w.weather.cloudiness;
    e.rain = w.weather.rain;
    e.fog = w.weather.fog;
    e.wetness = w.weather.wetness;
    log_.env_samples.push_back(e);
}

EpisodeEnv::Decision EpisodeEnv::decide(int action_id, bool trial) {
    Decision d;
    d.action_id = action_id;
    if (terminal_) {
        d.terminal = true;
        return d;
    }
    const EnvAction& action = registry_->by_id(action_id);

    d.violation = validate(world_, action);
    if (d.violation) {
        d.valid = false;
        d.reward = -1.0;
        d.terminal = false;
        if (!trial) {
            StepRecord rec;
            rec.step = decision_count_;
            rec.action_id = action_id;
            rec.valid = false;
            rec.reward = d.reward;
            rec.world_hash = world_hash(world_);
            log_.steps.push_back(std::move(rec));
            decision_count_ += 1;
        }
        return d;
    }

    std::optional<SpawnRecord> spawn;
    if (action.kind == ActionKind::SpawnNpc || action.kind == ActionKind::SpawnPedestrian ||
        action.kind == ActionKind::PlaceCone) {
        const Entity candidate = resolve_spawn(world_, action);
        SpawnRecord sp;
        sp.t = world_.sim_time_s;
        sp.step = decision_count_;
        sp.kind = candidate.kind;
        sp.required_m = required_spawn_distance(action);
        double clearance = std::numeric_limits<double>::infinity();
        bool overlapped = false;
        for (const auto& e : world_.entities) {
            clearance = std::min(clearance, distance({candidate.pose.x, candidate.pose.y},
                                                     {e.pose.x, e.pose.y}));
            overlapped = overlapped || obb_overlap_area(candidate.obb(), e.obb()) > 1e-9;
        }
        sp.clearance_m = clearance;
        sp.overlapped = overlapped;
        spawn = sp;
    }

    apply(world_, action);

    const auto on_sample = [&](const WorldState& w) {
        if (!trial) sample_streams(w);
    };
    const CollectResult collected =
        collect(world_, cfg_.autopilot, kActionPeriodSeconds, kSampleSeconds, on_sample);
    d.buffers = collected.buffers;
    d.reward = reward_of(cfg_.reward_kind, collected.buffers, cfg_.reward);

    std::string end_reason;
    if (collected.collided) {
        end_reason = "collision";
    } else if (at_destination(world_)) {
        end_reason = "destination";
    } else if (world_.stuck_time_s >= kStuckLimitSeconds) {
        end_reason = "stuck";
    }
    d.terminal = !end_reason.empty();

    if (!trial) {
        if (spawn) log_.spawns.push_back(*spawn);
        StepRecord rec;
        rec.step = decision_count_;
        rec.action_id = action_id;
        rec.valid = true;
        rec.reward = d.reward;
        rec.ttc_buff = collected.buffers.ttc;
        rec.dto_buff = collected.buffers.dto;
        rec.jerk_buff = collected.buffers.jerk;
        rec.world_hash = world_hash(world_);
        log_.steps.push_back(std::move(rec));
        decision_count_ += 1;
        valid_count_ += 1;
        if (collected.collided) {
            log_.collision =
                CollisionRecord{collected.collision_time_s, collected.collision.a,
                                collected.collision.b};
        }
        if (d.terminal) {
            terminal_ = true;
            log_.end_reason = end_reason;
            log_.end_time_s = world_.sim_time_s;
        }
    }
    return d;
}

EpisodeEnv::SavedState EpisodeEnv::save() const {
    SavedState s;
    s.world = snapshot(world_);
    s.terminal = terminal_;
    s.end_reason = log_.end_reason;
    s.end_time_s = log_.end_time_s;
    s.decision_count = decision_count_;
    s.valid_count = valid_count_;
    return s;
}

void EpisodeEnv::restore_from(const SavedState& saved) {
    world_ = restore(saved.world, route_, clock_);
    terminal_ = saved.terminal;
    log_.end_reason = saved.end_reason;
    log_.end_time_s = saved.end_time_s;
    decision_count_ = saved.decision_count;
    valid_count_ = saved.valid_count;
}

ReplayReport replay_execution(const ExecutionLog& log, std::shared_ptr<const Route> route,
                              WeatherClock clock, const ActionRegistry& registry,
                              const EnvRunConfig& cfg) {
    EpisodeEnv env(std::move(route), std::move(clock), &registry, cfg, log.seed);
    env.reset_episode(log.seed);
    ReplayReport report;
    for (const auto& rec : log.steps) {
        if (env.terminal()) break;
        env.decide(rec.action_id);
        const uint64_t h = world_hash(env.world());
        report.steps_compared += 1;
        if (h != rec.world_hash) {
            report.divergences.push_back({rec.step, rec.world_hash, h});
        }
    }
    return report;
}

}  // namespace crashlab
