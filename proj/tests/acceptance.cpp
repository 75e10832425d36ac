// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure. Each criterion carries a wall-clock budget.

#include <bit>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <sstream>

#include "crashlab/actions.hpp"
#include "crashlab/baselines.hpp"
#include "crashlab/config.hpp"
#include "crashlab/execlog.hpp"
#include "crashlab/metrics.hpp"
#include "crashlab/reward.hpp"
#include "crashlab/stats.hpp"
#include "grad_check.hpp"
#include "similarity_oracle.hpp"
#include "test_helpers.hpp"
#include "toy_mdp.hpp"

using namespace crashlab;
using namespace crashlab::test;

namespace {

int failures = 0;
std::ostringstream detail;

void expect(bool ok, const std::string& what) {
    if (!ok) {
        detail << "    failed: " << what << '\n';
        ++failures;
    }
}

void near(double actual, double want, double tol, const std::string& what) {
    if (!(std::abs(actual - want) <= tol)) {
        std::ostringstream ss;
        ss << what << " (got " << actual << ", want " << want << " +- " << tol << ")";
        expect(false, ss.str());
    }
}

bool run_criterion(int index, const std::string& name, double budget_s,
                   const std::function<void()>& body) {
    const int before = failures;
    detail.str("");
    const auto t0 = std::chrono::steady_clock::now();
    body();
    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (elapsed > budget_s) {
        std::ostringstream ss;
        ss << "runtime " << elapsed << " s exceeds budget " << budget_s << " s";
        expect(false, ss.str());
    }
    const bool ok = failures == before;
    std::printf("[%s] C%d %s (%.2f s)\n", ok ? "PASS" : "FAIL", index, name.c_str(), elapsed);
    if (!ok) std::fputs(detail.str().c_str(), stdout);
    return ok;
}

// ---------------------------------------------------------------- C1
void c1_reward_formulas() {
    const RewardConfig cfg;
    // Frozen closed-form values computed independently of this codebase.
    const std::pair<double, double> ttc_points[] = {
        {0.001, 8.85366542803745},      {0.01, 6.551080335043404},
        {0.1, 4.2484952420493585},      {0.5, 2.639057329615259},
        {1.0, 1.9459101490553135},      {2.0, 1.252762968495368},
        {2.5751560882000963, 1.0},      {3.0, 0.8472978603872037},
        {3.5, 0.6931471805599453},      {5.0, 0.3364722366212129},
        {6.0, 0.15415067982725836},     {6.999, 0.0001428673479107764},
        {7.0, 0.0},
    };
    for (const auto& [ttc, want] : ttc_points)
        near(ttc_reward({ttc}, cfg), want, 1e-9, "ttc_reward at " + std::to_string(ttc));
    near(ttc_reward({7.0 + 1e-12}, cfg), -1.0, 1e-12, "ttc punishment just past the threshold");
    near(ttc_reward({25.0}, cfg), -1.0, 1e-12, "ttc punishment far past the threshold");
    near(ttc_reward({}, cfg), -1.0, 1e-12, "ttc no-conflict punishment");

    const std::pair<double, double> dto_points[] = {
        {0.001, 9.210340371976182}, {0.5, 2.995732273553991},
        {1.0, 2.3025850929940455},  {2.5, 1.3862943611198906},
        {5.0, 0.6931471805599453},  {7.5, 0.2876820724517809},
        {9.0, 0.10536051565782628}, {9.999, 0.00010000500033334732},
        {10.0, 0.0},
    };
    for (const auto& [dto, want] : dto_points)
        near(dto_reward({dto}, cfg), want, 1e-9, "dto_reward at " + std::to_string(dto));
    near(dto_reward({10.0 + 1e-12}, cfg), -1.0, 1e-12, "dto punishment just past the threshold");

    const std::pair<double, double> jerk_points[] = {
        {5.0, 1.718281828459045},   {6.0, 2.3201169227365472},
        {7.5, 3.4816890703380645},  {10.0, 6.38905609893065},
        {12.5, 11.182493960703473}, {20.0, 53.598150033144236},
        {40.0, 2979.9579870417283}, {50.0, 22025.465794806718},
        {75.0, 22025.465794806718},
    };
    for (const auto& [jerk, want] : jerk_points)
        near(jerk_reward({jerk}, cfg), want, 1e-6 * want + 1e-9,
             "jerk_reward at " + std::to_string(jerk));
    near(jerk_reward({4.999999}, cfg), -1.0, 1e-12, "jerk punishment below the threshold");
    near(jerk_reward({2.5}, cfg), -1.0, 1e-12, "jerk punishment at 2.5");
}

// ---------------------------------------------------------------- C2
void c2_constraint_validator() {
    // Twelve canonical cases on a straight road with one light.
    auto route = straight_route(1000.0, 3, {{300.0, LightColor::Red}});
    WorldState w = bare_world(1, route);

    const auto npc_spawn = [](NpcType type, double dist) {
        EnvAction a;
        a.kind = ActionKind::SpawnNpc;
        a.slot = SpawnSlot::AheadSameLane;
        a.npc_behavior = NpcBehavior::Stop;
        a.npc_type = type;
        a.distance_m = dist;
        return a;
    };
    const auto rule_of = [&](const EnvAction& a) -> std::string {
        const auto v = validate(w, a);
        return v ? to_string(v->rule) : "ok";
    };

    expect(rule_of(npc_spawn(NpcType::Sedan, 7.9)) == "safe_distance", "sedan at 7.9 m");
    expect(rule_of(npc_spawn(NpcType::Sedan, 8.0)) == "ok", "sedan at 8.0 m");
    expect(rule_of(npc_spawn(NpcType::BoxTruck, 9.0)) == "safe_distance", "box truck at 9.0 m");
    expect(rule_of(npc_spawn(NpcType::BoxTruck, 10.0)) == "ok", "box truck at 10.0 m");

    EnvAction ped;
    ped.kind = ActionKind::SpawnPedestrian;
    ped.ped_behavior = PedBehavior::Stop;
    ped.distance_m = 2.0;  // hypotenuse to the sidewalk < 8 m
    expect(rule_of(ped) == "safe_distance", "pedestrian closer than 8 m");
    ped.distance_m = 20.0;
    expect(rule_of(ped) == "ok", "pedestrian at 20 m");

    EnvAction light;
    light.kind = ActionKind::SetLightPhase;
    light.light_target = LightColor::Yellow;
    expect(rule_of(light) == "light_order", "red -> yellow skips green");
    light.light_target = LightColor::Green;
    expect(rule_of(light) == "ok", "red -> green follows the cycle");
    apply(w, light);
    const TrafficLight* lt = target_light(w);
    expect(lt->color == LightColor::Green && lt->active_duration_s == 30.0 &&
               lt->elapsed_s == 0.0,
           "applied phase carries the mandated duration");
    light.light_target = LightColor::Red;
    expect(rule_of(light) == "light_order", "green -> red skips yellow");

    EnvAction damage;
    damage.kind = ActionKind::SetRoadDamage;
    damage.damage_level = 0.75;
    expect(rule_of(damage) == "road_occupied", "damage on the ego's segment");
    w.ego().route_s = 230.0;
    expect(rule_of(damage) == "ok", "damage on the next segment");
    w.ego().route_s = 5.0;

    // Overlap precedes safe distance in the verdict.
    w.entities.push_back(
        make_npc(w, NpcType::Sedan, NpcBehavior::Stop, w.ego().route_s + 15.0, w.ego().lane, 1));
    w.next_entity_id++;
    EnvAction cone;
    cone.kind = ActionKind::PlaceCone;
    cone.cone_offset_m = 15.0;
    expect(rule_of(cone) == "overlap", "cone inside a parked sedan reports overlap");

    // Fuzz: 1e5 (world, action) pairs; zero post-apply violations.
    ActionRegistry registry;
    Rng rng(777);
    WorldState fw = bare_world(777);
    fw.ego().speed = 10.0;
    int checked = 0;
    for (int i = 0; i < 100000; ++i) {
        const EnvAction& action = registry.by_id(static_cast<int>(rng.next_below(registry.size())));
        if (!validate(fw, action)) {
            apply(fw, action);
            ++checked;
            if (action.kind == ActionKind::SpawnNpc || action.kind == ActionKind::SpawnPedestrian ||
                action.kind == ActionKind::PlaceCone) {
                const Entity& spawned = fw.entities.back();
                const double required = required_spawn_distance(action);
                for (const auto& e : fw.entities) {
                    if (e.id == spawned.id) continue;
                    if (distance({spawned.pose.x, spawned.pose.y}, {e.pose.x, e.pose.y}) <
                        required - 1e-9) {
                        expect(false, "post-apply safety distance violated at iteration " +
                                          std::to_string(i));
                        return;
                    }
                    if (obb_overlap_area(spawned.obb(), e.obb()) > 1e-9) {
                        expect(false,
                               "post-apply overlap at iteration " + std::to_string(i));
                        return;
                    }
                }
            }
        }
        for (const auto& l : fw.lights) {
            if (std::abs(l.active_duration_s - light_duration_s(l.color)) > 1e-12) {
                expect(false, "light duration diverged from its color");
                return;
            }
        }
        if (i % 4 == 0) step(fw);
        if (fw.ego().route_s > fw.route->length() - 60.0 || fw.entities.size() > 120) {
            fw = bare_world(rng.next_u64());
            fw.ego().speed = 10.0;
        }
    }
    // Most draws are rightly rejected once the neighborhood saturates; the
    // pairs count is the contract, the applies count is a sanity floor.
    expect(checked > 5000, "fuzz applied a meaningful share of actions: " +
                               std::to_string(checked));
}

// ---------------------------------------------------------------- C3
struct OracleTtc {
    bool conflict{false};
    double t{0.0};
    double min_dist{0.0};
};

// 1 ms relative-frame scan: closest approach over the horizon.
OracleTtc brute_force_ttc(const Entity& ego, const Entity& obs) {
    const double rx = obs.pose.x - ego.pose.x;
    const double ry = obs.pose.y - ego.pose.y;
    const double wx = obs.vel.x - ego.vel.x;
    const double wy = obs.vel.y - ego.vel.y;
    OracleTtc out;
    double best_d2 = rx * rx + ry * ry;
    double best_t = 0.0;
    for (int k = 1; k <= 30000; ++k) {
        const double t = 0.001 * k;
        const double dx = rx + wx * t;
        const double dy = ry + wy * t;
        const double d2 = dx * dx + dy * dy;
        if (d2 < best_d2) {
            best_d2 = d2;
            best_t = t;
        }
    }
    const double radius = 0.5 * (ego.bbox_width + obs.bbox_width);
    out.min_dist = std::sqrt(best_d2);
    out.conflict = best_t > 0.0 && best_t < 30.0 && out.min_dist <= radius;
    out.t = best_t;
    return out;
}

void c3_ttc_oracle() {
    Rng rng(4242);
    int agree = 0;
    int conflicts = 0;
    int cases = 0;
    while (cases < 200) {
        Entity ego = body_at(0, 0, 0, 0);
        const double ego_speed = rng.next_range(0.5, 15.0);
        const double ego_heading = rng.next_range(-kPi, kPi);
        ego.vel = {ego_speed * std::cos(ego_heading), ego_speed * std::sin(ego_heading)};
        ego.speed = ego_speed;
        ego.pose.heading = ego_heading;

        Entity obs = body_at(0, 0, 0, 0);
        if (rng.next_double() < 0.5) {
            // Aimed case: the obstacle heads for a point on the ego's ray,
            // arriving within a couple of seconds of the ego.
            const double t1 = rng.next_range(1.0, 12.0);
            const Vec2 conflict{ego.vel.x * t1 + rng.next_range(-2.5, 2.5),
                                ego.vel.y * t1 + rng.next_range(-2.5, 2.5)};
            if (rng.next_double() < 0.3) {
                obs.pose.x = conflict.x;
                obs.pose.y = conflict.y;
                obs.vel = {0, 0};
                obs.speed = 0;
            } else {
                const double t2 = t1 + rng.next_range(-2.0, 2.0);
                const double back = rng.next_range(5.0, 60.0);
                const double h = rng.next_range(-kPi, kPi);
                obs.pose.x = conflict.x - back * std::cos(h);
                obs.pose.y = conflict.y - back * std::sin(h);
                const double v = back / std::max(t2, 0.5);
                obs.vel = {v * std::cos(h), v * std::sin(h)};
                obs.speed = v;
                obs.pose.heading = h;
            }
        } else {
            const double dist = rng.next_range(8.0, 120.0);
            const double bearing = rng.next_range(-kPi, kPi);
            obs.pose.x = dist * std::cos(bearing);
            obs.pose.y = dist * std::sin(bearing);
            if (rng.next_double() < 0.25) {
                obs.vel = {0, 0};
                obs.speed = 0;
            } else {
                const double v = rng.next_range(0.5, 12.0);
                const double h = rng.next_range(-kPi, kPi);
                obs.vel = {v * std::cos(h), v * std::sin(h)};
                obs.speed = v;
                obs.pose.heading = h;
            }
        }
        if (rng.next_double() < 0.3) {  // pedestrian-sized obstacle
            obs.bbox_length = 0.6;
            obs.bbox_width = 0.6;
        }
        if (norm({obs.pose.x - ego.pose.x, obs.pose.y - ego.pose.y}) < 6.0) continue;

        const OracleTtc oracle = brute_force_ttc(ego, obs);
        // Regenerate boundary-ambiguous draws using oracle-side quantities.
        const double radius = 0.5 * (ego.bbox_width + obs.bbox_width);
        if (std::abs(oracle.min_dist - radius) < 0.02) continue;
        if (oracle.t > 29.5) continue;
        const double rel_speed = std::hypot(obs.vel.x - ego.vel.x, obs.vel.y - ego.vel.y);
        if (rel_speed < 0.05) continue;
        ++cases;

        const auto impl = ttc_between(ego, obs);
        if (impl.has_value() != oracle.conflict) {
            std::ostringstream ss;
            ss << "existence disagreement on case " << cases << " (impl "
               << (impl ? "conflict" : "none") << ", oracle "
               << (oracle.conflict ? "conflict" : "none") << ")";
            expect(false, ss.str());
            continue;
        }
        ++agree;
        if (impl) {
            ++conflicts;
            near(*impl, oracle.t, 0.05, "ttc value on case " + std::to_string(cases));
        }
    }
    expect(agree == 200, "conflict existence agreement on all 200 cases");
    expect(conflicts >= 20, "enough conflicting cases to be meaningful: " +
                                std::to_string(conflicts));
}

// ---------------------------------------------------------------- C4
void c4_scenario_similarity() {
    Rng rng(1717);
    for (int i = 0; i < 50; ++i) {
        const Scenario a = random_scenario(rng, 2);
        const Scenario b = random_scenario(rng, 2);
        const double impl = scenario_similarity(a, b);
        const double ref = oracle_scenario_similarity(a, b);
        if (impl != ref) {
            std::ostringstream ss;
            ss << "pair " << i << ": impl " << impl << " != reference " << ref;
            expect(false, ss.str());
        }
        if (scenario_similarity(a, a) != 1.0) expect(false, "self similarity must be exactly 1");
    }

    Scenario a, b;
    for (int i = 0; i < kScenesPerScenario; ++i) {
        Scene& sa = a.scenes[static_cast<size_t>(i)];
        Scene& sb = b.scenes[static_cast<size_t>(i)];
        sa.avut_operation = Operation::Cruise;
        sb.avut_operation = Operation::EmergencyBrake;
        sa.avut_speed = SpeedBucket::Fast;
        sb.avut_speed = SpeedBucket::Zero;
        sa.rain = WeatherBucket::Heavy;
        sb.rain = WeatherBucket::None;
        sa.fog = WeatherBucket::Light;
        sb.fog = WeatherBucket::Heavy;
        sa.wetness = WeatherBucket::Moderate;
        sb.wetness = WeatherBucket::Light;
        sa.time_of_day = TimeBucket::Morning;
        sb.time_of_day = TimeBucket::Night;
        sa.traffic_light = LightBucket::Red;
        sb.traffic_light = LightBucket::Green;
        sa.sidewalk = SidewalkBucket::SlowDown;
        sb.sidewalk = SidewalkBucket::None;
    }
    expect(scenario_similarity(a, b) == 0.0, "all-distinct similarity is exactly 0");
}

// ---------------------------------------------------------------- C5
double oracle_a12_by_ranks(const std::vector<double>& x, const std::vector<double>& y) {
    std::vector<double> pooled(x);
    pooled.insert(pooled.end(), y.begin(), y.end());
    const auto ranks = midranks(pooled);
    double r1 = 0.0;
    for (size_t i = 0; i < x.size(); ++i) r1 += ranks[i];
    const double n1 = static_cast<double>(x.size());
    const double n2 = static_cast<double>(y.size());
    return (r1 - n1 * (n1 + 1.0) / 2.0) / (n1 * n2);
}

double oracle_exact_p(const std::vector<double>& x, const std::vector<double>& y) {
    // Independent enumeration by bitmask over pooled positions; U by direct
    // pair counting per assignment.
    const size_t n1 = x.size(), n2 = y.size(), n = n1 + n2;
    std::vector<double> pooled(x);
    pooled.insert(pooled.end(), y.begin(), y.end());
    const auto u_of = [&](uint32_t mask) {
        std::vector<double> xs, ys;
        for (size_t i = 0; i < n; ++i)
            (mask >> i & 1 ? xs : ys).push_back(pooled[i]);
        double u = 0.0;
        for (const double a : xs)
            for (const double b : ys) u += a > b ? 1.0 : (a == b ? 0.5 : 0.0);
        return u;
    };
    uint32_t obs_mask = 0;
    for (size_t i = 0; i < n1; ++i) obs_mask |= 1u << i;
    const double mean = 0.5 * static_cast<double>(n1) * static_cast<double>(n2);
    const double obs_dev = std::abs(u_of(obs_mask) - mean);
    size_t extreme = 0, total = 0;
    for (uint32_t mask = 0; mask < (1u << n); ++mask) {
        if (static_cast<size_t>(std::popcount(mask)) != n1) continue;
        ++total;
        if (std::abs(u_of(mask) - mean) >= obs_dev - 1e-12) ++extreme;
    }
    return static_cast<double>(extreme) / static_cast<double>(total);
}

double oracle_spearman(const std::vector<double>& x, const std::vector<double>& y) {
    const auto rx = midranks(x);
    const auto ry = midranks(y);
    const size_t n = x.size();
    double sx = 0, sy = 0, sxx = 0, syy = 0, sxy = 0;
    for (size_t i = 0; i < n; ++i) {
        sx += rx[i];
        sy += ry[i];
        sxx += rx[i] * rx[i];
        syy += ry[i] * ry[i];
        sxy += rx[i] * ry[i];
    }
    const double dn = static_cast<double>(n);
    const double cov = sxy - sx * sy / dn;
    const double vx = sxx - sx * sx / dn;
    const double vy = syy - sy * sy / dn;
    return cov / std::sqrt(vx * vy);
}

void c5_statistics() {
    Rng rng(9090);
    for (int i = 0; i < 100; ++i) {
        std::vector<double> x, y;
        const int n1 = 4 + static_cast<int>(rng.next_below(4));  // 4..7: exact regime
        const int n2 = 4 + static_cast<int>(rng.next_below(4));
        for (int k = 0; k < n1; ++k) x.push_back(std::floor(rng.next_range(0.0, 6.0)));
        for (int k = 0; k < n2; ++k) y.push_back(std::floor(rng.next_range(0.0, 6.0)));

        if (a12(x, y) != oracle_a12_by_ranks(x, y)) {
            expect(false, "a12 mismatch on sample " + std::to_string(i));
            return;
        }
        expect(magnitude(a12(x, y)) == magnitude(oracle_a12_by_ranks(x, y)),
               "magnitude stability on sample " + std::to_string(i));

        const MwuResult mwu = mann_whitney_u(x, y);
        if (!mwu.exact) {
            expect(false, "exact path expected at these sizes");
            return;
        }
        near(mwu.p, oracle_exact_p(x, y), 1e-9, "exact p on sample " + std::to_string(i));

        if (x.size() == y.size()) {
            const double rho = spearman_rho(x, y).rho;
            const double want = oracle_spearman(x, y);
            if (std::isfinite(want))
                near(rho, want, 1e-12, "spearman rho on sample " + std::to_string(i));
        }
    }
    // Magnitude thresholds pinned.
    expect(magnitude(0.5) == Magnitude::Negligible, "0.5 negligible");
    expect(magnitude(0.556) == Magnitude::Small, "0.556 small");
    expect(magnitude(0.638) == Magnitude::Medium, "0.638 medium");
    expect(magnitude(0.714) == Magnitude::Large, "0.714 large");
    expect(magnitude(0.286) == Magnitude::Large, "0.286 large");
    expect(magnitude(0.362) == Magnitude::Medium, "0.362 medium");
    expect(magnitude(0.444) == Magnitude::Small, "0.444 small");
}

// ---------------------------------------------------------------- C6
void c6_dqn_machinery() {
    Rng rng(2025);
    for (int trial = 0; trial < 100; ++trial) {
        auto c = make_grad_case(rng);
        const double err = max_grad_rel_err(c.net, c.batch);
        if (err >= 1e-4) {
            expect(false, "gradient check trial " + std::to_string(trial) + " rel err " +
                              std::to_string(err));
            return;
        }
    }

    const EpsilonSchedule eps;
    near(eps.at(0), 1.0, 0.0, "eps(0)");
    near(eps.at(10000), 0.2, 0.0, "eps(10000)");
    near(eps.at(25000), 0.2, 0.0, "eps(25000)");
    near(eps.at(5000), 0.6, 1e-12, "eps(5000) linear");

    ReplayMemory mem(100);
    for (int i = 0; i < 137; ++i) {
        Transition t;
        t.action = i;
        mem.push(t);
    }
    bool fifo_ok = mem.size() == 100;
    for (int i = 0; i < 100 && fifo_ok; ++i)
        fifo_ok = mem.at(static_cast<size_t>(i)).action == i + 37;
    expect(fifo_ok, "replay FIFO holds exactly the last capacity items in order");

    // Toy MDP: learned greedy policy equals value iteration, Q within 0.05.
    TrainConfig cfg;
    cfg.total_states = 12000;
    cfg.replay_capacity = 500;
    cfg.minibatch = 64;
    cfg.target_sync = 100;
    cfg.max_decisions_per_episode = 60;
    cfg.epsilon.anneal_states = 4000;
    cfg.epsilon.end = 0.2;
    ChainEnv env(3);
    const TrainResult result = run_training(env, cfg, 12);
    const auto q_star = chain_optimal_q(cfg.gamma);
    for (int s = 0; s < ChainEnv::kStates; ++s) {
        const auto q = result.net.forward(ChainEnv::encode(s).data());
        const int greedy = q[1] >= q[0] ? 1 : 0;
        expect(greedy == 1, "greedy policy moves right from state " + std::to_string(s));
        for (int a = 0; a < 2; ++a) {
            const double err = std::abs(q[static_cast<size_t>(a)] -
                                        q_star[static_cast<size_t>(s)][static_cast<size_t>(a)]);
            if (err > 0.05) {
                std::ostringstream ss;
                ss << "Q(" << s << "," << a << ") off by " << err;
                expect(false, ss.str());
            }
        }
    }
}

// ---------------------------------------------------------------- C7
void c7_determinism_replay() {
    const ActionRegistry registry;
    auto route = std::make_shared<const Route>(load_route(data_dir() + "/routes/r1.route"));
    const WeatherClock clock = load_preset(WeatherPreset::RD, data_dir());
    EnvRunConfig env_cfg;
    env_cfg.route_id = "R1";
    env_cfg.weather_preset = "RD";
    env_cfg.reward_kind = RewardKind::Ttc;

    // Any recorded execution replays hash-for-hash.
    EpisodeEnv env(route, clock, &registry, env_cfg, 0);
    run_random(env, 4242, [](const EpisodeEnv&, int d) { return d >= 40; });
    const ExecutionLog log = env.log();
    const ReplayReport report = replay_execution(log, route, clock, registry, env_cfg);
    expect(report.clean(), "recorded RS execution replays with zero divergences");
    expect(report.steps_compared == static_cast<int>(log.steps.size()),
           "replay compared every decision step");

    // Greedy rollback: every pre-trial hash restored across >= 50 steps.
    int greedy_steps = 0;
    uint64_t seed = 9000;
    while (greedy_steps < 50) {
        EpisodeEnv genv(route, clock, &registry, env_cfg, seed);
        const StrategyRun run = run_greedy(genv, seed, [](const EpisodeEnv&, int d) {
            return d >= 25;
        });  // run_greedy aborts internally on any rollback hash mismatch
        greedy_steps += static_cast<int>(run.greedy_steps.size());
        for (const auto& gs : run.greedy_steps) {
            double best = -1e300;
            for (const auto& t : gs.trials) best = std::max(best, t.reward);
            if (gs.committed_reward != best) {
                expect(false, "greedy committed reward below a trial reward");
                return;
            }
        }
        ++seed;
    }
    expect(greedy_steps >= 50, "accumulated at least 50 greedy steps");
}

// ---------------------------------------------------------------- C8
void c8_directional_learning(Checkpoint* out_ckpt) {
    ExperimentConfig cfg;
    cfg.route_id = "R1";
    cfg.preset = WeatherPreset::RD;
    cfg.reward_kind = RewardKind::Ttc;
    cfg.data_dir = data_dir();
    cfg.train.total_states = 8000;
    cfg.train.replay_capacity = 1000;
    cfg.train.epsilon.anneal_states = 3000;

    auto route = std::make_shared<const Route>(load_route(route_path(cfg)));
    const WeatherClock clock = load_preset(cfg.preset, cfg.data_dir);
    const ActionRegistry registry;

    EpisodeEnv train_env(route, clock, &registry, make_env_config(cfg), cfg.seed);
    const TrainResult trained = run_training(train_env, cfg.train, 7);
    expect(trained.episodes.size() >= 300,
           "trained at least 300 episodes (" + std::to_string(trained.episodes.size()) + ")");

    std::vector<double> dqn_collisions, rs_collisions, dqn_ttc, rs_ttc;
    for (int run = 0; run < 20; ++run) {
        EpisodeEnv env(route, clock, &registry, make_env_config(cfg), 1);
        run_policy(env, trained.net, 0.05, 500 + static_cast<uint64_t>(run),
                   [](const EpisodeEnv&, int d) { return d >= 200; });
        const ExecSummary s = summarize_execution(env.log());
        dqn_collisions.push_back(s.collisions);
        if (s.scm_ttc) dqn_ttc.push_back(*s.scm_ttc);
    }
    for (int run = 0; run < 20; ++run) {
        EpisodeEnv env(route, clock, &registry, make_env_config(cfg), 1);
        run_random(env, 100 + static_cast<uint64_t>(run),
                   [](const EpisodeEnv&, int d) { return d >= 200; });
        const ExecSummary s = summarize_execution(env.log());
        rs_collisions.push_back(s.collisions);
        if (s.scm_ttc) rs_ttc.push_back(*s.scm_ttc);
    }

    const double a_coll = a12(dqn_collisions, rs_collisions);
    const MwuResult p_coll = mann_whitney_u(dqn_collisions, rs_collisions);
    const double a_ttc = a12(dqn_ttc, rs_ttc);
    const MwuResult p_ttc = mann_whitney_u(dqn_ttc, rs_ttc);

    std::printf("    A12(#Collision) = %.3f (p = %.4g), A12(TTC) = %.3f (p = %.4g)\n", a_coll,
                p_coll.p, a_ttc, p_ttc.p);
    expect(a_coll >= 0.6, "A12(#Collision) >= 0.6");
    expect(p_coll.p < 0.05, "#Collision difference significant");
    expect(a_ttc <= 0.4, "A12(TTC) <= 0.4");
    expect(p_ttc.p < 0.05, "TTC difference significant");

    if (out_ckpt) {
        out_ckpt->net = trained.net;
        out_ckpt->target_net = trained.target_net;
        out_ckpt->observed_states = trained.observed_states;
        out_ckpt->train_steps = trained.train_steps;
        out_ckpt->action_count = static_cast<int>(registry.size());
    }
}

// ---------------------------------------------------------------- C9
void c9_realism_closure(const Checkpoint& ckpt) {
    const ActionRegistry registry;
    auto route = std::make_shared<const Route>(load_route(data_dir() + "/routes/r1.route"));
    const WeatherClock clock = load_preset(WeatherPreset::RD, data_dir());
    EnvRunConfig env_cfg;
    env_cfg.route_id = "R1";
    env_cfg.weather_preset = "RD";
    env_cfg.reward_kind = RewardKind::Ttc;

    int scenarios = 0;
    const auto check_log = [&](const ExecutionLog& log, const std::string& label) {
        const RealismReport r = classify_realism(log);
        scenarios += r.total_scenarios;
        if (r.ucs != 0 || r.uns != 0) {
            expect(false, label + ": unrealistic scenarios " + std::to_string(r.ucs) + "/" +
                              std::to_string(r.uns));
        }
    };
    for (uint64_t seed = 300; seed < 310; ++seed) {
        EpisodeEnv env(route, clock, &registry, env_cfg, seed);
        run_random(env, seed, [](const EpisodeEnv&, int d) { return d >= 200; });
        check_log(env.log(), "rs seed " + std::to_string(seed));
    }
    for (uint64_t seed = 600; seed < 610; ++seed) {
        EpisodeEnv env(route, clock, &registry, env_cfg, seed);
        run_policy(env, ckpt.net, 0.05, seed, [](const EpisodeEnv&, int d) { return d >= 200; });
        check_log(env.log(), "dqn seed " + std::to_string(seed));
    }
    expect(scenarios > 20, "pipeline produced a meaningful number of scenarios");

    // Seeded synthetic defect logs trigger each tag exactly once.
    const auto base_log = [] {
        ExecutionLog log;
        Rng rng(5);
        for (int step = 0; step < 2; ++step) {
            StepRecord rec;
            rec.step = step;
            rec.action_id = step + 1;
            rec.valid = true;
            log.steps.push_back(rec);
        }
        for (int i = 0; i < 12; ++i) {
            Scene s = random_scene(rng, 1);
            s.t = 0.5 * (i + 1);
            log.scenes.push_back(s);
            EnvSample e;
            e.t = s.t;
            e.mapped_ts = 2000.0 + s.t;
            e.cloudiness = 0.5;
            e.rain = 0.2;
            e.fog = 0.05;
            e.wetness = 0.3;
            log.env_samples.push_back(e);
        }
        log.spawns.push_back({0.0, 0, EntityKind::NpcVehicle, 11.0, 8.0, false});
        return log;
    };

    {
        ExecutionLog log = base_log();
        for (size_t i = 8; i < log.env_samples.size(); ++i) log.env_samples[i].mapped_ts += 7200.0;
        const RealismReport r = classify_realism(log);
        expect(r.defects.size() == 1 && r.defects[0].kind == DefectKind::UTC,
               "synthetic time jump triggers UTC exactly once");
    }
    {
        ExecutionLog log = base_log();
        for (size_t i = 8; i < log.env_samples.size(); ++i) log.env_samples[i].rain = 0.7;
        const RealismReport r = classify_realism(log);
        expect(r.defects.size() == 1 && r.defects[0].kind == DefectKind::UWC,
               "synthetic rain jump triggers UWC exactly once");
    }
    {
        ExecutionLog log = base_log();
        log.spawns[0].clearance_m = 7.0;
        const RealismReport r = classify_realism(log);
        expect(r.defects.size() == 1 && r.defects[0].kind == DefectKind::VSD,
               "synthetic close spawn triggers VSD exactly once");
    }
    {
        ExecutionLog log = base_log();
        log.spawns[0].overlapped = true;
        const RealismReport r = classify_realism(log);
        expect(r.defects.size() == 1 && r.defects[0].kind == DefectKind::OA,
               "synthetic overlapping spawn triggers OA exactly once");
    }
}

}  // namespace

int main() {
    Checkpoint trained;
    bool all = true;
    all &= run_criterion(1, "reward formulas match the closed forms", 1.0, c1_reward_formulas);
    all &= run_criterion(2, "constraint validator table and fuzz", 60.0, c2_constraint_validator);
    all &= run_criterion(3, "prediction-based TTC vs 1 ms brute force", 60.0, c3_ttc_oracle);
    all &= run_criterion(4, "scenario similarity vs exhaustive reference", 60.0,
                         c4_scenario_similarity);
    all &= run_criterion(5, "nonparametric statistics vs enumeration", 60.0, c5_statistics);
    all &= run_criterion(6, "DQN machinery and toy-MDP convergence", 120.0, c6_dqn_machinery);
    all &= run_criterion(7, "determinism, replay and greedy rollback", 120.0,
                         c7_determinism_replay);
    all &= run_criterion(8, "directional learning effect vs random", 900.0,
                         [&] { c8_directional_learning(&trained); });
    all &= run_criterion(9, "realism closure and defect taxonomy", 120.0,
                         [&] { c9_realism_closure(trained); });
    std::printf("%s\n", all ? "ACCEPTANCE: all criteria passed"
                            : "ACCEPTANCE: at least one criterion failed");
    return all ? 0 : 1;
}
