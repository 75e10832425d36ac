#include "crashlab/baselines.hpp"

#include <limits>

namespace crashlab {

const char* to_string(Strategy s) {
    switch (s) {
        case Strategy::RS: return "rs";
        case Strategy::GS: return "gs";
        case Strategy::DQN: return "dqn";
    }
    return "?";
}

bool parse_strategy(const std::string& name, Strategy& out) {
    if (name == "rs") out = Strategy::RS;
    else if (name == "gs") out = Strategy::GS;
    else if (name == "dqn") out = Strategy::DQN;
    else return false;
    return true;
}

namespace {

bool should_stop(const EpisodeEnv& env, int decisions, const TerminatePredicate& terminate) {
    if (env.terminal()) return true;
    return terminate && terminate(env, decisions);
}

std::string outcome_of(const EpisodeEnv& env) {
    return env.end_reason().empty() ? "budget" : env.end_reason();
}

}  // namespace

StrategyRun run_random(EpisodeEnv& env, uint64_t seed, const TerminatePredicate& terminate) {
    env.reset_episode(seed);
    env.log().strategy = "rs";
    StrategyRun run;
    run.strategy = Strategy::RS;
    run.reward_kind = env.config().reward_kind;
    run.seed = seed;

    Rng rng(seed ^ 0xa5a5a5a5a5a5a5a5ULL);
    const int n = env.action_count();
    int decisions = 0;
    while (!should_stop(env, decisions, terminate)) {
        int action = 0;
        do {
            action = static_cast<int>(rng.next_below(static_cast<uint64_t>(n)));
        } while (validate(env.world(), env.registry().by_id(action)).has_value());
        const auto d = env.decide(action);
        run.actions.push_back(action);
        run.rewards.push_back(d.reward);
        decisions += 1;
    }
    run.outcome = outcome_of(env);
    return run;
}

StrategyRun run_greedy(EpisodeEnv& env, uint64_t seed, const TerminatePredicate& terminate) {
    env.reset_episode(seed);
    env.log().strategy = "gs";
    StrategyRun run;
    run.strategy = Strategy::GS;
    run.reward_kind = env.config().reward_kind;
    run.seed = seed;

    int decisions = 0;
    while (!should_stop(env, decisions, terminate)) {
        const auto saved = env.save();
        GreedyStep gs;
        gs.pre_sweep_hash = saved.world.hash;

        for (const auto& action : env.registry().actions())
            if (!validate(env.world(), action).has_value()) gs.valid_action_count += 1;

        double best_reward = -std::numeric_limits<double>::infinity();
        int best_action = -1;
        for (const auto& action : env.registry().actions()) {
            if (validate(env.world(), action).has_value()) continue;
            const auto trial = env.decide(action.id, /*trial=*/true);
            gs.trials.push_back({action.id, trial.reward});
            env.restore_from(saved);
            if (world_hash(env.world()) != gs.pre_sweep_hash)
                throw std::runtime_error("greedy rollback failed to restore the pre-trial state");
            if (trial.reward > best_reward) {
                best_reward = trial.reward;
                best_action = action.id;
            }
        }
        if (best_action < 0) break;  // no valid action; cannot happen with NoOp present

        const auto d = env.decide(best_action);
        gs.committed_action = best_action;
        gs.committed_reward = d.reward;
        run.greedy_steps.push_back(std::move(gs));
        run.actions.push_back(best_action);
        run.rewards.push_back(d.reward);
        decisions += 1;
    }
    run.outcome = outcome_of(env);
    return run;
}

StrategyRun run_policy(EpisodeEnv& env, const Mlp& net, double eps, uint64_t seed,
                       const TerminatePredicate& terminate) {
    env.reset_episode(seed);
    env.log().strategy = "dqn";
    StrategyRun run;
    run.strategy = Strategy::DQN;
    run.reward_kind = env.config().reward_kind;
    run.seed = seed;

    Rng rng(seed ^ 0x5a5a5a5a5a5a5a5aULL);
    int decisions = 0;
    while (!should_stop(env, decisions, terminate)) {
        const StateVector s = encode_state(env.world(), env.config().autopilot);
        const int action = select_action(net, s, eps, rng, env.action_count());
        const auto d = env.decide(action);
        run.actions.push_back(action);
        run.rewards.push_back(d.reward);
        decisions += 1;
    }
    run.outcome = outcome_of(env);
    return run;
}

}  // namespace crashlab
