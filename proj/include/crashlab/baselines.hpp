#pragma once

#include <functional>
#include <vector>

#include "crashlab/episode.hpp"

namespace crashlab {

enum class Strategy : uint8_t { RS, GS, DQN };

const char* to_string(Strategy s);
bool parse_strategy(const std::string& name, Strategy& out);

// Caller-supplied stopping criterion on top of the episode's own terminators.
using TerminatePredicate = std::function<bool(const EpisodeEnv&, int decisions)>;

struct TrialOutcome {
    int action_id{0};
    double reward{0.0};
};

struct GreedyStep {
    uint64_t pre_sweep_hash{0};
    std::vector<TrialOutcome> trials;  // valid actions only, registry order
    int valid_action_count{0};
    int committed_action{0};
    double committed_reward{0.0};
};

struct StrategyRun {
    Strategy strategy{Strategy::RS};
    RewardKind reward_kind{RewardKind::Ttc};
    uint64_t seed{0};
    std::vector<int> actions;
    std::vector<double> rewards;
    std::string outcome;
    std::vector<GreedyStep> greedy_steps;  // GS only
};

// Uniform valid-action selection each step; constraint-violating draws are
// re-drawn so every executed action is realistic.
StrategyRun run_random(EpisodeEnv& env, uint64_t seed, const TerminatePredicate& terminate = {});

// Snapshot, try every valid action for one action period, roll back, commit
// the reward-maximizing action (lowest id wins ties), repeat.
StrategyRun run_greedy(EpisodeEnv& env, uint64_t seed, const TerminatePredicate& terminate = {});

// Epsilon-greedy rollout of a trained Q-network through the same env surface.
StrategyRun run_policy(EpisodeEnv& env, const Mlp& net, double eps, uint64_t seed,
                       const TerminatePredicate& terminate = {});

}  // namespace crashlab
