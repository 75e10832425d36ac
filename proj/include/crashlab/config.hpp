#pragma once

#include <map>
#include <string>

#include "crashlab/baselines.hpp"
#include "crashlab/dqn.hpp"
#include "crashlab/episode.hpp"
#include "crashlab/weather.hpp"

namespace crashlab {

// Everything a batch run needs. Desk-scale defaults shrink the published
// training budgets; every value lands in the log headers for provenance.
struct ExperimentConfig {
    std::string route_id{"R1"};
    WeatherPreset preset{WeatherPreset::RD};
    Strategy strategy{Strategy::DQN};
    RewardKind reward_kind{RewardKind::Ttc};
    uint64_t seed{1};
    int runs{20};
    int parallel{1};
    double eval_eps{0.05};
    int max_decisions{200};
    double time_scale{1.0};  // mapped seconds per sim second, in (0, 1]
    std::string data_dir{"data"};

    AutopilotParams autopilot{};
    RewardConfig reward{};
    TrainConfig train{
        .gamma = 0.9,
        .minibatch = 64,
        .target_sync = 200,
        .total_states = 4000,
        .learning_rate = 1e-3,
        .replay_capacity = 1000,
        .epsilon = {},
        .max_decisions_per_episode = 200,
        .hidden = {64, 64},
    };

    std::map<std::string, std::string> provenance() const;
};

// Flat key=value overrides; '#' starts a comment. Unknown keys are an error.
void apply_config_file(ExperimentConfig& cfg, const std::string& path);
void apply_config_pair(ExperimentConfig& cfg, const std::string& key, const std::string& value);

// Resolves a route id (R1..R4) or literal path against the data directory.
std::string route_path(const ExperimentConfig& cfg);

EnvRunConfig make_env_config(const ExperimentConfig& cfg);

}  // namespace crashlab
