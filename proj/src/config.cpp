#include "crashlab/config.hpp"

#include <fstream>
#include <sstream>

namespace crashlab {

std::map<std::string, std::string> ExperimentConfig::provenance() const {
    std::map<std::string, std::string> p;
    const auto put = [&](const std::string& k, double v) {
        std::ostringstream ss;
        ss << v;
        p[k] = ss.str();
    };
    put("gamma", train.gamma);
    put("minibatch", train.minibatch);
    put("target_sync", static_cast<double>(train.target_sync));
    put("total_states", static_cast<double>(train.total_states));
    put("learning_rate", train.learning_rate);
    put("replay_capacity", static_cast<double>(train.replay_capacity));
    put("eps_start", train.epsilon.start);
    put("eps_end", train.epsilon.end);
    put("eps_anneal", static_cast<double>(train.epsilon.anneal_states));
    put("eval_eps", eval_eps);
    put("target_speed", autopilot.target_speed);
    put("ttc_thre", reward.ttc_thre);
    put("dto_thre", reward.dto_thre);
    put("jerk_thre", reward.jerk_thre);
    put("max_decisions", max_decisions);
    return p;
}

void apply_config_pair(ExperimentConfig& cfg, const std::string& key, const std::string& value) {
    const auto as_d = [&] { return std::stod(value); };
    const auto as_i = [&] { return std::stoll(value); };
    if (key == "route") cfg.route_id = value;
    else if (key == "weather") {
        if (!parse_weather_preset(value, cfg.preset)) throw ConfigError("unknown weather preset: " + value);
    } else if (key == "strategy") {
        if (!parse_strategy(value, cfg.strategy)) throw ConfigError("unknown strategy: " + value);
    } else if (key == "reward") {
        if (!parse_reward_kind(value, cfg.reward_kind)) throw ConfigError("unknown reward: " + value);
    } else if (key == "seed") cfg.seed = std::stoull(value);
    else if (key == "runs") cfg.runs = static_cast<int>(as_i());
    else if (key == "parallel") cfg.parallel = static_cast<int>(as_i());
    else if (key == "eval_eps") cfg.eval_eps = as_d();
    else if (key == "max_decisions") cfg.max_decisions = static_cast<int>(as_i());
    else if (key == "time_scale") {
        cfg.time_scale = as_d();
        if (cfg.time_scale <= 0.0 || cfg.time_scale > 1.0)
            throw ConfigError("time_scale must lie in (0, 1] to keep mapped time realistic");
    } else if (key == "data_dir") cfg.data_dir = value;
    else if (key == "target_speed") cfg.autopilot.target_speed = as_d();
    else if (key == "base_range") cfg.autopilot.base_range = as_d();
    else if (key == "fog_coef") cfg.autopilot.fog_coef = as_d();
    else if (key == "rain_coef") cfg.autopilot.rain_coef = as_d();
    else if (key == "night_factor") cfg.autopilot.night_factor = as_d();
    else if (key == "wet_brake_coef") cfg.autopilot.wet_brake_coef = as_d();
    else if (key == "ttc_thre") cfg.reward.ttc_thre = as_d();
    else if (key == "dto_thre") cfg.reward.dto_thre = as_d();
    else if (key == "jerk_thre") cfg.reward.jerk_thre = as_d();
    else if (key == "jerk_ratio_cap") cfg.reward.jerk_ratio_cap = as_d();
    else if (key == "gamma") cfg.train.gamma = as_d();
    else if (key == "minibatch") cfg.train.minibatch = static_cast<int>(as_i());
    else if (key == "target_sync") cfg.train.target_sync = as_i();
    else if (key == "total_states") cfg.train.total_states = as_i();
    else if (key == "learning_rate") cfg.train.learning_rate = as_d();
    else if (key == "replay_capacity") cfg.train.replay_capacity = static_cast<size_t>(as_i());
    else if (key == "eps_start") cfg.train.epsilon.start = as_d();
    else if (key == "eps_end") cfg.train.epsilon.end = as_d();
    else if (key == "eps_anneal") cfg.train.epsilon.anneal_states = as_i();
    else throw ConfigError("unknown config key: " + key);
}

void apply_config_file(ExperimentConfig& cfg, const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        while (!line.empty() && (line.back() == ' ' || line.back() == '\t' || line.back() == '\r'))
            line.pop_back();
        size_t start = 0;
        while (start < line.size() && (line[start] == ' ' || line[start] == '\t')) ++start;
        line = line.substr(start);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError(path + ":" + std::to_string(line_no) + ": expected key=value");
        try {
            apply_config_pair(cfg, line.substr(0, eq), line.substr(eq + 1));
        } catch (const ConfigError&) {
            throw;
        } catch (const std::exception& e) {
            throw ConfigError(path + ":" + std::to_string(line_no) + ": " + e.what());
        }
    }
}

std::string route_path(const ExperimentConfig& cfg) {
    if (cfg.route_id.size() == 2 && cfg.route_id[0] == 'R' && cfg.route_id[1] >= '1' &&
        cfg.route_id[1] <= '4') {
        std::string name = cfg.route_id;
        name[0] = 'r';
        return cfg.data_dir + "/routes/" + name + ".route";
    }
    return cfg.route_id;
}

EnvRunConfig make_env_config(const ExperimentConfig& cfg) {
    EnvRunConfig env;
    env.route_id = cfg.route_id;
    env.weather_preset = to_string(cfg.preset);
    env.reward_kind = cfg.reward_kind;
    env.autopilot = cfg.autopilot;
    env.reward = cfg.reward;
    env.provenance = cfg.provenance();
    return env;
}

}  // namespace crashlab
