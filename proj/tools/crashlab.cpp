// Batch driver: train agents, evaluate them against the baselines, replay
// recorded executions, and emit statistical comparison reports.

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <thread>

#include "crashlab/baselines.hpp"
#include "crashlab/config.hpp"
#include "crashlab/execlog.hpp"
#include "crashlab/hash.hpp"
#include "crashlab/stats.hpp"

namespace fs = std::filesystem;
using namespace crashlab;

namespace {

struct SessionParts {
    std::shared_ptr<const Route> route;
    WeatherClock clock;
};

SessionParts load_session(const ExperimentConfig& cfg) {
    SessionParts parts;
    parts.route = std::make_shared<const Route>(load_route(route_path(cfg)));
    parts.clock = load_preset(cfg.preset, cfg.data_dir);
    parts.clock.time_scale = cfg.time_scale;
    return parts;
}

uint64_t file_hash(const fs::path& path) {
    std::ifstream f(path, std::ios::binary);
    std::vector<char> bytes((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
    return fnv1a(bytes.data(), bytes.size());
}

void write_manifest(const fs::path& dir) {
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(dir)) {
        if (entry.is_regular_file() && entry.path().filename() != "manifest.txt")
            files.push_back(entry.path());
    }
    std::sort(files.begin(), files.end());
    std::ofstream out(dir / "manifest.txt");
    for (const auto& f : files) out << f.filename().string() << ' ' << to_hex(file_hash(f)) << '\n';
}

std::string fmt_opt(const std::optional<double>& v) {
    if (!v) return "-";
    std::ostringstream ss;
    ss << std::setprecision(6) << *v;
    return ss.str();
}

void print_summaries(std::ostream& out, const std::vector<std::pair<uint64_t, ExecSummary>>& rows) {
    out << "seed\tcollision\tcollision_time\tscm_ttc\tscm_dto\tscm_jerk\tdiv_api\tdiv_scenario"
        << "\tts\trcs\tucs\trns\tuns\trct\n";
    int collisions = 0;
    for (const auto& [seed, s] : rows) {
        collisions += s.collisions;
        out << seed << '\t' << s.collisions << '\t' << fmt_opt(s.collision_time) << '\t'
            << fmt_opt(s.scm_ttc) << '\t' << fmt_opt(s.scm_dto) << '\t' << fmt_opt(s.scm_jerk)
            << '\t' << fmt_opt(s.div_api) << '\t' << fmt_opt(s.div_scenario) << '\t'
            << s.realism.total_scenarios << '\t' << s.realism.rcs << '\t' << s.realism.ucs << '\t'
            << s.realism.rns << '\t' << s.realism.uns << '\t'
            << fmt_opt(s.realism.realistic_collision_time) << '\n';
    }
    out << "# collisions " << collisions << " / " << rows.size() << " runs\n";
}

struct EpisodeOutput {
    ExecutionLog log;
    StrategyRun run;
};

// One evaluated or baseline episode, logged and summarized.
EpisodeOutput run_episode(const ExperimentConfig& cfg, const SessionParts& parts,
                          const ActionRegistry& registry, const Mlp* net, uint64_t seed) {
    EpisodeEnv env(parts.route, parts.clock, &registry, make_env_config(cfg), seed);
    const int cap = cfg.max_decisions;
    const auto stop = [cap](const EpisodeEnv&, int d) { return d >= cap; };
    EpisodeOutput out;
    switch (cfg.strategy) {
        case Strategy::RS: out.run = run_random(env, seed, stop); break;
        case Strategy::GS: out.run = run_greedy(env, seed, stop); break;
        case Strategy::DQN: out.run = run_policy(env, *net, cfg.eval_eps, seed, stop); break;
    }
    out.log = env.log();
    return out;
}

std::vector<EpisodeOutput> run_batch(const ExperimentConfig& cfg, const ActionRegistry& registry,
                                     const Mlp* net) {
    const SessionParts parts = load_session(cfg);
    std::vector<EpisodeOutput> outputs(static_cast<size_t>(cfg.runs));
    const int workers = std::max(1, cfg.parallel);
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    const auto work = [&] {
        for (;;) {
            const int i = next.fetch_add(1);
            if (i >= cfg.runs) return;
            outputs[static_cast<size_t>(i)] =
                run_episode(cfg, parts, registry, net, cfg.seed + static_cast<uint64_t>(i));
        }
    };
    if (workers == 1) {
        work();
    } else {
        for (int w = 0; w < workers; ++w) pool.emplace_back(work);
        for (auto& t : pool) t.join();
    }
    return outputs;
}

int write_batch_outputs(const ExperimentConfig& cfg, const std::vector<EpisodeOutput>& outputs,
                        const std::string& out_dir) {
    fs::create_directories(out_dir);
    std::vector<std::pair<uint64_t, ExecSummary>> rows;
    for (const auto& out : outputs) {
        const ExecutionLog& log = out.log;
        const fs::path path = fs::path(out_dir) / ("run_" + std::to_string(log.seed) + ".log");
        write_log(log, path.string());
        rows.push_back({log.seed, summarize_execution(log)});
        if (out.run.strategy == Strategy::GS && !out.run.greedy_steps.empty()) {
            std::ofstream trials(fs::path(out_dir) /
                                 ("gs_trials_" + std::to_string(log.seed) + ".txt"));
            trials << "step\ttrials\tcommitted_action\tcommitted_reward\n";
            for (size_t i = 0; i < out.run.greedy_steps.size(); ++i) {
                const auto& gs = out.run.greedy_steps[i];
                trials << i << '\t' << gs.trials.size() << '\t' << gs.committed_action << '\t'
                       << std::setprecision(10) << gs.committed_reward << '\n';
            }
        }
    }
    std::sort(rows.begin(), rows.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    std::ofstream summary(fs::path(out_dir) / "summary.txt");
    print_summaries(summary, rows);
    print_summaries(std::cout, rows);
    write_manifest(out_dir);
    return 0;
}

std::vector<ExecutionLog> load_log_set(const std::string& spec) {
    std::vector<ExecutionLog> logs;
    const fs::path p(spec);
    if (fs::is_directory(p)) {
        std::vector<fs::path> files;
        for (const auto& entry : fs::directory_iterator(p))
            if (entry.path().extension() == ".log") files.push_back(entry.path());
        std::sort(files.begin(), files.end());
        for (const auto& f : files) logs.push_back(read_log(f.string()));
    } else {
        logs.push_back(read_log(spec));
    }
    if (logs.empty()) throw LogError("no .log files under " + spec);
    return logs;
}

struct MetricColumn {
    std::string name;
    std::vector<double> a, b;
};

void collect_metric(std::vector<MetricColumn>& cols, const std::string& name,
                    const std::vector<ExecSummary>& a, const std::vector<ExecSummary>& b,
                    const std::function<std::optional<double>(const ExecSummary&)>& pick) {
    MetricColumn col;
    col.name = name;
    for (const auto& s : a)
        if (const auto v = pick(s)) col.a.push_back(*v);
    for (const auto& s : b)
        if (const auto v = pick(s)) col.b.push_back(*v);
    cols.push_back(std::move(col));
}

int cmd_analyze(const std::string& a_spec, const std::string& b_spec, const std::string& out_path) {
    std::vector<ExecSummary> a, b;
    for (const auto& log : load_log_set(a_spec)) a.push_back(summarize_execution(log));
    for (const auto& log : load_log_set(b_spec)) b.push_back(summarize_execution(log));

    std::vector<MetricColumn> cols;
    const auto opt_int = [](int v) { return std::optional<double>(static_cast<double>(v)); };
    collect_metric(cols, "TTC", a, b, [](const ExecSummary& s) { return s.scm_ttc; });
    collect_metric(cols, "DTO", a, b, [](const ExecSummary& s) { return s.scm_dto; });
    collect_metric(cols, "Jerk", a, b, [](const ExecSummary& s) { return s.scm_jerk; });
    collect_metric(cols, "#Collision", a, b,
                   [&](const ExecSummary& s) { return opt_int(s.collisions); });
    collect_metric(cols, "CollisionTime", a, b,
                   [](const ExecSummary& s) { return s.collision_time; });
    collect_metric(cols, "Div_API", a, b, [](const ExecSummary& s) { return s.div_api; });
    collect_metric(cols, "Div_Scenario", a, b, [](const ExecSummary& s) { return s.div_scenario; });
    collect_metric(cols, "#RCS", a, b, [&](const ExecSummary& s) { return opt_int(s.realism.rcs); });
    collect_metric(cols, "#UCS", a, b, [&](const ExecSummary& s) { return opt_int(s.realism.ucs); });
    collect_metric(cols, "#RNS", a, b, [&](const ExecSummary& s) { return opt_int(s.realism.rns); });
    collect_metric(cols, "#UNS", a, b, [&](const ExecSummary& s) { return opt_int(s.realism.uns); });

    std::ostringstream table;
    table << "metric\tn_a\tn_b\ta12\tmagnitude\tp\n";
    for (const auto& col : cols) {
        table << col.name << '\t' << col.a.size() << '\t' << col.b.size() << '\t';
        if (col.a.empty() || col.b.empty()) {
            table << "-\t-\t-\n";
            continue;
        }
        const double effect = a12(col.a, col.b);
        const MwuResult mwu = mann_whitney_u(col.a, col.b);
        table << std::setprecision(6) << effect << '\t' << to_string(magnitude(effect)) << '\t'
              << mwu.p << '\n';
    }
    std::cout << table.str();
    if (!out_path.empty()) {
        std::ofstream out(out_path);
        out << table.str();
    }
    return 0;
}

int cmd_train(ExperimentConfig cfg, const std::string& out_dir) {
    const SessionParts parts = load_session(cfg);
    const ActionRegistry registry;
    EpisodeEnv env(parts.route, parts.clock, &registry, make_env_config(cfg), cfg.seed);

    const TrainResult result = run_training(env, cfg.train, cfg.seed);

    fs::create_directories(out_dir);
    Checkpoint ckpt;
    ckpt.net = result.net;
    ckpt.target_net = result.target_net;
    ckpt.observed_states = result.observed_states;
    ckpt.train_steps = result.train_steps;
    ckpt.rng_state = cfg.seed;
    ckpt.action_count = static_cast<int>(registry.size());
    const fs::path ckpt_path = fs::path(out_dir) / "checkpoint.bin";
    save_checkpoint(ckpt, ckpt_path.string());

    std::ofstream log(fs::path(out_dir) / "training_log.txt");
    log << "# route=" << cfg.route_id << " weather=" << to_string(cfg.preset)
        << " reward=" << to_string(cfg.reward_kind) << " seed=" << cfg.seed << '\n';
    for (const auto& [k, v] : cfg.provenance()) log << "# " << k << '=' << v << '\n';
    log << "episode\tdecisions\ttotal_reward\n";
    for (const auto& row : result.episodes)
        log << row.episode << '\t' << row.decisions << '\t' << std::setprecision(10)
            << row.total_reward << '\n';
    write_manifest(out_dir);

    std::cout << "trained " << result.episodes.size() << " episodes over "
              << result.observed_states << " observed states, " << result.train_steps
              << " updates\n";
    std::cout << "checkpoint " << ckpt_path.string() << " hash " << to_hex(checkpoint_hash(ckpt))
              << '\n';
    return 0;
}

int cmd_replay(const std::string& log_path, const std::string& data_dir) {
    const ExecutionLog log = read_log(log_path);
    ExperimentConfig cfg;
    cfg.route_id = log.route_id;
    cfg.data_dir = data_dir;
    if (!parse_weather_preset(log.weather_preset, cfg.preset))
        throw ConfigError("log carries unknown weather preset: " + log.weather_preset);
    if (!parse_reward_kind(log.reward_kind, cfg.reward_kind))
        throw ConfigError("log carries unknown reward kind: " + log.reward_kind);
    const SessionParts parts = load_session(cfg);
    const ActionRegistry registry;
    if (registry.dump_hash() != log.registry_hash)
        throw LogError("action registry hash mismatch; log was produced by another registry");

    const ReplayReport report =
        replay_execution(log, parts.route, parts.clock, registry, make_env_config(cfg));
    std::cout << "replayed " << report.steps_compared << " decision steps\n";
    for (const auto& d : report.divergences)
        std::cout << "divergence at step " << d.step << ": logged " << to_hex(d.logged_hash)
                  << " replayed " << to_hex(d.replayed_hash) << '\n';
    if (report.clean()) {
        std::cout << "replay clean: zero divergences\n";
        return 0;
    }
    return 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"environment-configuration stress testing for a rule-based autopilot"};
    app.require_subcommand(1);

    ExperimentConfig cfg;
    std::string config_file;
    std::string out_dir = "out";
    std::string checkpoint_path;
    std::string log_path;
    std::string a_spec, b_spec, report_path;

    const auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--route", cfg.route_id, "route id R1..R4 or a route file path");
        cmd->add_option("--weather", [&cfg](const std::vector<std::string>& v) {
            return parse_weather_preset(v.front(), cfg.preset);
        }, "weather preset RD|RN|SD|SN");
        cmd->add_option("--reward", [&cfg](const std::vector<std::string>& v) {
            return parse_reward_kind(v.front(), cfg.reward_kind);
        }, "reward kind ttc|dto|jerk");
        cmd->add_option("--seed", cfg.seed, "base seed");
        cmd->add_option("--data", cfg.data_dir, "data directory (routes/, weather/)");
        cmd->add_option("--config", config_file, "key=value config file");
        cmd->add_option("--out", out_dir, "output directory");
        cmd->add_option("--max-decisions", cfg.max_decisions, "decision cap per episode");
    };

    CLI::App* train = app.add_subcommand("train", "train a Q-network tester");
    add_common(train);
    train->add_option("--states", cfg.train.total_states, "observed-state budget");
    train->add_option("--replay-capacity", cfg.train.replay_capacity, "replay memory size");
    train->add_option("--eps-anneal", cfg.train.epsilon.anneal_states,
                      "states over which epsilon anneals");

    CLI::App* eval = app.add_subcommand("eval", "evaluate a trained checkpoint");
    add_common(eval);
    eval->add_option("--checkpoint", checkpoint_path, "checkpoint file")->required();
    eval->add_option("--runs", cfg.runs, "number of evaluation episodes");
    eval->add_option("--eps", cfg.eval_eps, "behavior-policy epsilon");
    eval->add_option("--parallel", cfg.parallel, "concurrent seeded episodes");

    CLI::App* baseline = app.add_subcommand("baseline", "run the random or greedy strategy");
    add_common(baseline);
    std::string strategy_name = "rs";
    baseline->add_option("--strategy", strategy_name, "rs|gs")->required();
    baseline->add_option("--runs", cfg.runs, "number of episodes");
    baseline->add_option("--parallel", cfg.parallel, "concurrent seeded episodes");

    CLI::App* analyze = app.add_subcommand("analyze", "compare two log sets");
    analyze->add_option("--a", a_spec, "log file or directory (set A)")->required();
    analyze->add_option("--b", b_spec, "log file or directory (set B)")->required();
    analyze->add_option("--out", report_path, "write the report here as well");

    CLI::App* replay = app.add_subcommand("replay", "verify a recorded execution");
    replay->add_option("--log", log_path, "execution log file")->required();
    replay->add_option("--data", cfg.data_dir, "data directory");

    CLI::App* registry_cmd = app.add_subcommand("registry", "print the action registry");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (!config_file.empty()) apply_config_file(cfg, config_file);

        if (train->parsed()) return cmd_train(cfg, out_dir);
        if (eval->parsed()) {
            const Checkpoint ckpt = load_checkpoint(checkpoint_path);
            const ActionRegistry registry;
            if (ckpt.action_count != static_cast<int>(registry.size()))
                throw ConfigError("checkpoint action count " + std::to_string(ckpt.action_count) +
                                  " does not match the registry");
            cfg.strategy = Strategy::DQN;
            const auto logs = run_batch(cfg, registry, &ckpt.net);
            return write_batch_outputs(cfg, logs, out_dir);
        }
        if (baseline->parsed()) {
            if (!parse_strategy(strategy_name, cfg.strategy) || cfg.strategy == Strategy::DQN)
                throw ConfigError("baseline strategy must be rs or gs");
            const ActionRegistry registry;
            const auto logs = run_batch(cfg, registry, nullptr);
            return write_batch_outputs(cfg, logs, out_dir);
        }
        if (analyze->parsed()) return cmd_analyze(a_spec, b_spec, report_path);
        if (replay->parsed()) return cmd_replay(log_path, cfg.data_dir);
        if (registry_cmd->parsed()) {
            const ActionRegistry registry;
            std::cout << registry.dump();
            std::cout << "# registry_hash " << to_hex(registry.dump_hash()) << '\n';
            return 0;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 2;
}
