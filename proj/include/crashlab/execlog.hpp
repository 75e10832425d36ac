#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "crashlab/scenario.hpp"
#include "crashlab/scene.hpp"
#include "crashlab/types.hpp"

namespace crashlab {

struct LogError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct StepRecord {
    int step{0};
    int action_id{0};
    bool valid{true};
    double reward{0.0};
    std::vector<double> ttc_buff;
    std::vector<double> dto_buff;
    std::vector<double> jerk_buff;
    uint64_t world_hash{0};
};

struct EnvSample {
    double t{0.0};
    double mapped_ts{0.0};
    double cloudiness{0.0};
    double rain{0.0};
    double fog{0.0};
    double wetness{0.0};
};

struct SpawnRecord {
    double t{0.0};
    int step{0};
    EntityKind kind{EntityKind::NpcVehicle};
    double clearance_m{0.0};  // min center distance to pre-existing objects
    double required_m{8.0};
    bool overlapped{false};
};

struct CollisionRecord {
    double t{0.0};
    int ego_id{0};
    int other_id{0};
};

// One execution: per-decision records plus the sampled scene/weather streams.
struct ExecutionLog {
    std::string strategy{"rs"};
    std::string reward_kind{"ttc"};
    std::string route_id{"R1"};
    std::string weather_preset{"RD"};
    uint64_t seed{0};
    uint64_t registry_hash{0};
    std::map<std::string, std::string> provenance;  // defaults in effect

    std::vector<StepRecord> steps;
    std::vector<Scene> scenes;
    std::vector<EnvSample> env_samples;
    std::vector<SpawnRecord> spawns;
    std::optional<CollisionRecord> collision;
    std::string end_reason;
    double end_time_s{0.0};
};

void write_log(const ExecutionLog& log, const std::string& path);
ExecutionLog read_log(const std::string& path);

// Realism-rate bounds per mapped hour (unit fractions).
struct RealismBounds {
    double rain{0.20};
    double cloudiness{0.25};
    double fog{0.10};
    double wetness{0.05};
};

enum class DefectKind : uint8_t { UTC, UWC, VSD, OA };
const char* to_string(DefectKind d);

struct ScenarioDefect {
    int scenario_index{0};
    DefectKind kind{DefectKind::UWC};
    std::string detail;
};

// RCS/UCS/RNS/UNS counts for one execution plus the defect tags that made
// scenarios unrealistic and the realistic-collision time when present.
struct RealismReport {
    int total_scenarios{0};
    int rcs{0};
    int ucs{0};
    int rns{0};
    int uns{0};
    std::vector<ScenarioDefect> defects;
    std::optional<double> realistic_collision_time;
};

RealismReport classify_realism(const ExecutionLog& log, const RealismBounds& bounds = {});

// Per-execution aggregates consumed by the analysis CLI.
struct ExecSummary {
    std::optional<double> scm_ttc;
    std::optional<double> scm_dto;
    std::optional<double> scm_jerk;
    int collisions{0};
    std::optional<double> collision_time;
    std::optional<double> div_api;
    std::optional<double> div_scenario;
    RealismReport realism;
};

ExecSummary summarize_execution(const ExecutionLog& log, const RealismBounds& bounds = {});

}  // namespace crashlab
