#pragma once

#include <memory>
#include <string>

#include "crashlab/actions.hpp"
#include "crashlab/autopilot.hpp"
#include "crashlab/dqn.hpp"
#include "crashlab/execlog.hpp"
#include "crashlab/metrics.hpp"
#include "crashlab/reward.hpp"
#include "crashlab/world.hpp"

namespace crashlab {

struct EnvRunConfig {
    std::string route_id{"R1"};
    std::string weather_preset{"RD"};
    RewardKind reward_kind{RewardKind::Ttc};
    AutopilotParams autopilot{};
    RewardConfig reward{};
    std::map<std::string, std::string> provenance;
};

// One driving session: applies validated environment actions, lets the
// autopilot drive through each action period while metrics and scenes are
// sampled, and accumulates the execution log. Implements the agent surface
// for the learning loop.
class EpisodeEnv : public AgentEnv {
public:
    EpisodeEnv(std::shared_ptr<const Route> route, WeatherClock clock,
               const ActionRegistry* registry, EnvRunConfig cfg, uint64_t master_seed);

    int action_count() const override { return static_cast<int>(registry_->size()); }
    StateVector reset() override;
    Outcome do_action(int action) override;

    // Begins a fresh episode from an explicit seed.
    void reset_episode(uint64_t seed);

    struct Decision {
        int action_id{0};
        bool valid{true};
        std::optional<ConstraintViolation> violation;
        double reward{0.0};
        MetricBuffers buffers;
        bool terminal{false};
    };

    // One decision step: validate, apply, run the action period, reward.
    // Invalid actions leave the world untouched and earn the -1 punishment.
    // Trial decisions skip all logging (greedy rollouts restore afterwards).
    Decision decide(int action_id, bool trial = false);

    bool terminal() const { return terminal_; }
    const std::string& end_reason() const { return log_.end_reason; }
    int decisions() const { return decision_count_; }

    const WorldState& world() const { return world_; }
    WorldState& mutable_world() { return world_; }
    const ActionRegistry& registry() const { return *registry_; }
    const EnvRunConfig& config() const { return cfg_; }

    ExecutionLog& log() { return log_; }
    const ExecutionLog& log() const { return log_; }

    struct SavedState {
        Snapshot world;
        bool terminal{false};
        std::string end_reason;
        double end_time_s{0.0};
        int decision_count{0};
        int valid_count{0};
    };
    SavedState save() const;
    void restore_from(const SavedState& saved);

private:
    std::shared_ptr<const Route> route_;
    WeatherClock clock_;
    const ActionRegistry* registry_;
    EnvRunConfig cfg_;
    Rng episode_seeds_;
    WorldState world_;
    ExecutionLog log_;
    bool terminal_{true};
    int decision_count_{0};
    int valid_count_{0};

    void sample_streams(const WorldState& w);
};

struct ReplayDivergence {
    int step{0};
    uint64_t logged_hash{0};
    uint64_t replayed_hash{0};
};

struct ReplayReport {
    int steps_compared{0};
    std::vector<ReplayDivergence> divergences;
    bool clean() const { return divergences.empty(); }
};

// Re-executes the logged action list from the logged seed on a fresh session
// and compares world hashes decision by decision.
ReplayReport replay_execution(const ExecutionLog& log, std::shared_ptr<const Route> route,
                              WeatherClock clock, const ActionRegistry& registry,
                              const EnvRunConfig& cfg);

}  // namespace crashlab
