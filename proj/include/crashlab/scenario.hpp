#pragma once

#include <array>
#include <optional>
#include <vector>

#include "crashlab/scene.hpp"

namespace crashlab {

inline constexpr int kScenesPerScenario = 6;

// Six consecutive scenes spanning 3 s; the unit of similarity, diversity and
// realism classification.
struct Scenario {
    std::array<Scene, kScenesPerScenario> scenes;
    int index{0};
};

// Tiles the scene stream into consecutive windows of six, one scenario per
// action period; a trailing partial window is dropped.
std::vector<Scenario> assemble_scenarios(const std::vector<Scene>& stream);

// Fraction of identical (field, value) pairs between two obstacle tuples.
double npc_identical_fraction(const SceneNpc& a, const SceneNpc& b);
double ped_identical_fraction(const ScenePed& a, const ScenePed& b);
double static_identical_fraction(const SceneStatic& a, const SceneStatic& b);

// Per-item best-match similarity between two same-kind obstacle lists,
// normalized by the summed counts. The shorter list drives the outer loop;
// matches may reuse items, following the pseudocode's greedy structure.
template <typename T, typename F>
double obstacle_similarity(const std::vector<T>& a, const std::vector<T>& b, F identical_fraction) {
    const std::vector<T>& small = a.size() <= b.size() ? a : b;
    const std::vector<T>& large = a.size() <= b.size() ? b : a;
    double sum = 0.0;
    for (const T& u : small) {
        double best = 0.0;
        for (const T& v : large) best = std::max(best, identical_fraction(u, v));
        sum += best;
    }
    return sum / static_cast<double>(a.size() + b.size());
}

// Property-wise scene similarity: non-obstacle properties count 1 when equal;
// obstacle properties count 1 when the lists are identical, otherwise the
// obstacle similarity. Obstacle properties empty on both sides are excluded
// from the property count.
double scene_similarity(const Scene& a, const Scene& b);

// Interval-shifted alignment in both directions, averaged over n and
// maximized over all offsets.
double scenario_similarity(const Scenario& a, const Scenario& b);

// Sum over unordered pairs of (1 - similarity), divided by the scenario
// count m. nullopt when fewer than two scenarios exist.
std::optional<double> div_scenario(const std::vector<Scenario>& scenarios);

// Unique action ids over total invocations; nullopt when no invocations.
std::optional<double> div_api(const std::vector<int>& invoked_action_ids);

std::optional<double> mean_of(const std::vector<double>& xs);

}  // namespace crashlab
