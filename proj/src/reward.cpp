#include "crashlab/reward.hpp"

#include <algorithm>
#include <cmath>

namespace crashlab {

const char* to_string(RewardKind k) {
    switch (k) {
        case RewardKind::Ttc: return "ttc";
        case RewardKind::Dto: return "dto";
        case RewardKind::Jerk: return "jerk";
    }
    return "?";
}

bool parse_reward_kind(const std::string& name, RewardKind& out) {
    if (name == "ttc") out = RewardKind::Ttc;
    else if (name == "dto") out = RewardKind::Dto;
    else if (name == "jerk") out = RewardKind::Jerk;
    else return false;
    return true;
}

double nor(double f, double lo, double hi) {
    if (hi <= lo) throw ConfigError("nor() needs hi > lo");
    return std::clamp((f - lo) / (hi - lo), 0.0, 1.0);
}

double ttc_reward(const std::vector<double>& ttc_buff, const RewardConfig& cfg) {
    if (ttc_buff.empty()) return -1.0;
    const double ttc = *std::min_element(ttc_buff.begin(), ttc_buff.end());
    if (ttc <= 0.0 || ttc > cfg.ttc_thre) return -1.0;
    return -std::log(ttc / cfg.ttc_thre);
}

double dto_reward(const std::vector<double>& dto_buff, const RewardConfig& cfg) {
    if (dto_buff.empty()) return -1.0;
    const double dto = *std::min_element(dto_buff.begin(), dto_buff.end());
    if (dto <= 0.0 || dto > cfg.dto_thre) return -1.0;
    return -std::log(dto / cfg.dto_thre);
}

double jerk_reward(const std::vector<double>& jerk_buff, const RewardConfig& cfg) {
    if (jerk_buff.empty()) return -1.0;
    const double jerk = *std::max_element(jerk_buff.begin(), jerk_buff.end());
    if (jerk < cfg.jerk_thre) return -1.0;
    return std::exp(std::min(jerk / cfg.jerk_thre, cfg.jerk_ratio_cap)) - 1.0;
}

double reward_of(RewardKind kind, const MetricBuffers& buffers, const RewardConfig& cfg) {
    switch (kind) {
        case RewardKind::Ttc: return ttc_reward(buffers.ttc, cfg);
        case RewardKind::Dto: return dto_reward(buffers.dto, cfg);
        case RewardKind::Jerk: return jerk_reward(buffers.jerk, cfg);
    }
    return -1.0;
}

}  // namespace crashlab
