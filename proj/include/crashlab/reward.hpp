#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "crashlab/metrics.hpp"

namespace crashlab {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct RewardConfig {
    double ttc_thre{7.0};
    double dto_thre{10.0};
    double jerk_thre{5.0};
    double jerk_ratio_cap{10.0};
};

enum class RewardKind : uint8_t { Ttc, Dto, Jerk };

const char* to_string(RewardKind k);
bool parse_reward_kind(const std::string& name, RewardKind& out);

// (f - lo) / (hi - lo), clamped into [0, 1]. hi must exceed lo.
double nor(double f, double lo, double hi);

// Minimum TTC in the buffer drives the reward: -ln(TTC/thre) inside
// (0, thre], the -1 punishment above the threshold or with no conflict.
double ttc_reward(const std::vector<double>& ttc_buff, const RewardConfig& cfg = {});

// Same shape on the minimum distance to obstacles.
double dto_reward(const std::vector<double>& dto_buff, const RewardConfig& cfg = {});

// Maximum jerk drives the reward: e^(J/thre) - 1 at or above the threshold
// (ratio capped), -1 below it.
double jerk_reward(const std::vector<double>& jerk_buff, const RewardConfig& cfg = {});

double reward_of(RewardKind kind, const MetricBuffers& buffers, const RewardConfig& cfg = {});

}  // namespace crashlab
