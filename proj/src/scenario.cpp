#include "crashlab/scenario.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

namespace crashlab {

std::vector<Scenario> assemble_scenarios(const std::vector<Scene>& stream) {
    std::vector<Scenario> out;
    const size_t n = stream.size() / kScenesPerScenario;
    for (size_t i = 0; i < n; ++i) {
        Scenario sc;
        sc.index = static_cast<int>(i);
        for (int k = 0; k < kScenesPerScenario; ++k)
            sc.scenes[static_cast<size_t>(k)] = stream[i * kScenesPerScenario + static_cast<size_t>(k)];
        out.push_back(std::move(sc));
    }
    return out;
}

double npc_identical_fraction(const SceneNpc& a, const SceneNpc& b) {
    int same = 0;
    same += a.volume == b.volume;
    same += a.operation == b.operation;
    same += a.speed == b.speed;
    same += a.distance == b.distance;
    return same / 4.0;
}

double ped_identical_fraction(const ScenePed& a, const ScenePed& b) {
    int same = 0;
    same += a.volume == b.volume;
    same += a.operation == b.operation;
    same += a.distance == b.distance;
    return same / 3.0;
}

double static_identical_fraction(const SceneStatic& a, const SceneStatic& b) {
    int same = 0;
    same += a.volume == b.volume;
    same += a.distance == b.distance;
    return same / 2.0;
}

double scene_similarity(const Scene& a, const Scene& b) {
    double total = 0.0;
    int np = 0;

    const auto match = [&](bool equal) {
        np += 1;
        total += equal ? 1.0 : 0.0;
    };
    match(a.avut_operation == b.avut_operation);
    match(a.avut_speed == b.avut_speed);
    match(a.rain == b.rain);
    match(a.fog == b.fog);
    match(a.wetness == b.wetness);
    match(a.time_of_day == b.time_of_day);
    match(a.traffic_light == b.traffic_light);
    match(a.sidewalk == b.sidewalk);

    if (!(a.npcs.empty() && b.npcs.empty())) {
        np += 1;
        total += (a.npcs == b.npcs)
                     ? 1.0
                     : obstacle_similarity(a.npcs, b.npcs, npc_identical_fraction);
    }
    if (!(a.pedestrians.empty() && b.pedestrians.empty())) {
        np += 1;
        total += (a.pedestrians == b.pedestrians)
                     ? 1.0
                     : obstacle_similarity(a.pedestrians, b.pedestrians, ped_identical_fraction);
    }
    if (!(a.statics.empty() && b.statics.empty())) {
        np += 1;
        total += (a.statics == b.statics)
                     ? 1.0
                     : obstacle_similarity(a.statics, b.statics, static_identical_fraction);
    }
    return total / static_cast<double>(np);
}

double scenario_similarity(const Scenario& a, const Scenario& b) {
    constexpr int n = kScenesPerScenario;
    double best = 0.0;
    for (int interval = 0; interval < n; ++interval) {
        double sim_ab = 0.0;
        double sim_ba = 0.0;
        for (int i = 0; i + interval < n; ++i) {
            sim_ab += scene_similarity(a.scenes[static_cast<size_t>(i)],
                                       b.scenes[static_cast<size_t>(i + interval)]);
            sim_ba += scene_similarity(b.scenes[static_cast<size_t>(i)],
                                       a.scenes[static_cast<size_t>(i + interval)]);
        }
        best = std::max(best, std::max(sim_ab / n, sim_ba / n));
    }
    return best;
}

std::optional<double> div_scenario(const std::vector<Scenario>& scenarios) {
    const size_t m = scenarios.size();
    if (m < 2) return std::nullopt;
    double sum = 0.0;
    for (size_t i = 0; i + 1 < m; ++i)
        for (size_t j = i + 1; j < m; ++j)
            sum += 1.0 - scenario_similarity(scenarios[i], scenarios[j]);
    return sum / static_cast<double>(m);
}

std::optional<double> div_api(const std::vector<int>& invoked_action_ids) {
    if (invoked_action_ids.empty()) return std::nullopt;
    const std::set<int> unique(invoked_action_ids.begin(), invoked_action_ids.end());
    return static_cast<double>(unique.size()) / static_cast<double>(invoked_action_ids.size());
}

std::optional<double> mean_of(const std::vector<double>& xs) {
    if (xs.empty()) return std::nullopt;
    double acc = 0.0;
    for (const double x : xs) acc += x;
    return acc / static_cast<double>(xs.size());
}

}  // namespace crashlab
