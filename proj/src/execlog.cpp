#include "crashlab/execlog.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "crashlab/hash.hpp"

namespace crashlab {

namespace {

std::vector<std::string> split(const std::string& text, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (const char c : text) {
        if (c == sep) {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    out.push_back(cur);
    return out;
}

std::string join_doubles(const std::vector<double>& xs) {
    std::ostringstream ss;
    ss << std::setprecision(17);
    for (size_t i = 0; i < xs.size(); ++i) {
        if (i) ss << ',';
        ss << xs[i];
    }
    return ss.str();
}

std::vector<double> parse_doubles(const std::string& text) {
    std::vector<double> out;
    if (text.empty()) return out;
    for (const auto& f : split(text, ',')) out.push_back(std::stod(f));
    return out;
}

}  // namespace

const char* to_string(DefectKind d) {
    switch (d) {
        case DefectKind::UTC: return "UTC";
        case DefectKind::UWC: return "UWC";
        case DefectKind::VSD: return "VSD";
        case DefectKind::OA: return "OA";
    }
    return "?";
}

void write_log(const ExecutionLog& log, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw LogError("cannot write log: " + path);
    out << std::setprecision(17);
    out << "schema=1\n";
    out << "meta|strategy=" << log.strategy << "|reward=" << log.reward_kind
        << "|route=" << log.route_id << "|weather=" << log.weather_preset << "|seed=" << log.seed
        << "|registry=" << to_hex(log.registry_hash);
    for (const auto& [k, v] : log.provenance) out << '|' << k << '=' << v;
    out << '\n';
    for (const auto& s : log.steps) {
        out << "step|" << s.action_id << '|' << (s.valid ? 1 : 0) << '|' << s.reward << '|'
            << join_doubles(s.ttc_buff) << '|' << join_doubles(s.dto_buff) << '|'
            << join_doubles(s.jerk_buff) << '|' << to_hex(s.world_hash) << '\n';
    }
    for (const auto& sc : log.scenes) out << "scene|" << scene_to_text(sc) << '\n';
    for (const auto& e : log.env_samples) {
        out << "env|" << e.t << '|' << e.mapped_ts << '|' << e.cloudiness << '|' << e.rain << '|'
            << e.fog << '|' << e.wetness << '\n';
    }
    for (const auto& sp : log.spawns) {
        out << "spawn|" << sp.t << '|' << sp.step << '|' << to_string(sp.kind) << '|'
            << sp.clearance_m << '|' << sp.required_m << '|' << (sp.overlapped ? 1 : 0) << '\n';
    }
    if (log.collision) {
        out << "collision|" << log.collision->t << '|' << log.collision->ego_id << ','
            << log.collision->other_id << '\n';
    }
    out << "end|" << log.end_reason << '|' << log.end_time_s << '\n';
}

ExecutionLog read_log(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw LogError("cannot open log: " + path);
    ExecutionLog log;
    std::string line;
    int line_no = 0;
    bool schema_seen = false;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        const auto fail = [&](const std::string& why) {
            throw LogError(path + ":" + std::to_string(line_no) + ": " + why);
        };
        if (!schema_seen) {
            if (line != "schema=1") fail("unsupported or missing schema header");
            schema_seen = true;
            continue;
        }
        const auto fields = split(line, '|');
        const std::string& kind = fields[0];
        if (kind == "meta") {
            for (size_t i = 1; i < fields.size(); ++i) {
                const auto eq = fields[i].find('=');
                if (eq == std::string::npos) fail("meta field without '='");
                const std::string key = fields[i].substr(0, eq);
                const std::string value = fields[i].substr(eq + 1);
                if (key == "strategy") log.strategy = value;
                else if (key == "reward") log.reward_kind = value;
                else if (key == "route") log.route_id = value;
                else if (key == "weather") log.weather_preset = value;
                else if (key == "seed") log.seed = std::stoull(value);
                else if (key == "registry") log.registry_hash = std::stoull(value, nullptr, 16);
                else log.provenance[key] = value;
            }
        } else if (kind == "step") {
            if (fields.size() != 8) fail("step line wants 8 fields");
            StepRecord s;
            s.step = static_cast<int>(log.steps.size());  // ordinal among step lines
            s.action_id = std::stoi(fields[1]);
            s.valid = fields[2] == "1";
            s.reward = std::stod(fields[3]);
            s.ttc_buff = parse_doubles(fields[4]);
            s.dto_buff = parse_doubles(fields[5]);
            s.jerk_buff = parse_doubles(fields[6]);
            s.world_hash = std::stoull(fields[7], nullptr, 16);
            log.steps.push_back(std::move(s));
        } else if (kind == "scene") {
            log.scenes.push_back(scene_from_text(line.substr(6)));
        } else if (kind == "env") {
            if (fields.size() != 7) fail("env line wants 7 fields");
            EnvSample e;
            e.t = std::stod(fields[1]);
            e.mapped_ts = std::stod(fields[2]);
            e.cloudiness = std::stod(fields[3]);
            e.rain = std::stod(fields[4]);
            e.fog = std::stod(fields[5]);
            e.wetness = std::stod(fields[6]);
            log.env_samples.push_back(e);
        } else if (kind == "spawn") {
            if (fields.size() != 7) fail("spawn line wants 7 fields");
            SpawnRecord sp;
            sp.t = std::stod(fields[1]);
            sp.step = std::stoi(fields[2]);
            if (fields[3] == "npc") sp.kind = EntityKind::NpcVehicle;
            else if (fields[3] == "pedestrian") sp.kind = EntityKind::Pedestrian;
            else if (fields[3] == "cone") sp.kind = EntityKind::TrafficCone;
            else fail("unknown spawn kind");
            sp.clearance_m = std::stod(fields[4]);
            sp.required_m = std::stod(fields[5]);
            sp.overlapped = fields[6] == "1";
            log.spawns.push_back(sp);
        } else if (kind == "collision") {
            if (fields.size() != 3) fail("collision line wants 3 fields");
            CollisionRecord c;
            c.t = std::stod(fields[1]);
            const auto ids = split(fields[2], ',');
            if (ids.size() != 2) fail("collision ids want `a,b`");
            c.ego_id = std::stoi(ids[0]);
            c.other_id = std::stoi(ids[1]);
            log.collision = c;
        } else if (kind == "end") {
            if (fields.size() != 3) fail("end line wants 3 fields");
            log.end_reason = fields[1];
            log.end_time_s = std::stod(fields[2]);
        } else {
            fail("unknown record kind `" + kind + "`");
        }
    }
    if (!schema_seen) throw LogError(path + ": empty log without schema header");
    return log;
}

RealismReport classify_realism(const ExecutionLog& log, const RealismBounds& bounds) {
    RealismReport report;
    const auto scenarios = assemble_scenarios(log.scenes);
    const int m = static_cast<int>(scenarios.size());
    report.total_scenarios = m;
    if (m == 0) return report;

    std::vector<bool> unrealistic(static_cast<size_t>(m), false);
    const auto tag = [&](int scenario_idx, DefectKind kind, std::string detail) {
        const int idx = std::clamp(scenario_idx, 0, m - 1);
        unrealistic[static_cast<size_t>(idx)] = true;
        for (const auto& d : report.defects)
            if (d.scenario_index == idx && d.kind == kind) return;
        report.defects.push_back({idx, kind, std::move(detail)});
    };

    // Env samples are positionally aligned with scenes: sample i belongs to
    // scenario i / 6. Weather rates are checked pairwise inside each mapped
    // hour; time must advance monotonically no faster than simulation time.
    const auto& env = log.env_samples;
    const double slack = 1e-9;
    for (size_t j = 1; j < env.size(); ++j) {
        const int scen = static_cast<int>(j) / kScenesPerScenario;
        const double dt_sim = env[j].t - env[j - 1].t;
        const double dt_map = env[j].mapped_ts - env[j - 1].mapped_ts;
        if (dt_map < -slack || dt_map > dt_sim + 1e-6) {
            tag(scen, DefectKind::UTC,
                "mapped time moved " + std::to_string(dt_map) + " s over " +
                    std::to_string(dt_sim) + " s of simulation");
        }
    }
    for (size_t j = 0; j < env.size(); ++j) {
        for (size_t i = 0; i < j; ++i) {
            const double dt_map = env[j].mapped_ts - env[i].mapped_ts;
            if (dt_map < 0.0 || dt_map > 3600.0) continue;
            const auto check = [&](double a, double b, double bound, const char* name) {
                if (std::abs(b - a) > bound + 1e-9) {
                    tag(static_cast<int>(j) / kScenesPerScenario, DefectKind::UWC,
                        std::string(name) + " changed " + std::to_string(std::abs(b - a)) +
                            " within one mapped hour (bound " + std::to_string(bound) + ")");
                    return true;
                }
                return false;
            };
            bool any = false;
            any |= check(env[i].rain, env[j].rain, bounds.rain, "rain");
            any |= check(env[i].cloudiness, env[j].cloudiness, bounds.cloudiness, "cloudiness");
            any |= check(env[i].fog, env[j].fog, bounds.fog, "fog");
            any |= check(env[i].wetness, env[j].wetness, bounds.wetness, "wetness");
            if (any) break;  // one tag per later sample is enough
        }
    }

    // Spawns are attributed through their decision step: the k-th valid step
    // produced the k-th action period, i.e. scenario k.
    std::map<int, int> step_to_period;
    int period = 0;
    for (const auto& s : log.steps)
        if (s.valid) step_to_period[s.step] = period++;
    for (const auto& sp : log.spawns) {
        const auto it = step_to_period.find(sp.step);
        const int scen = it != step_to_period.end() ? it->second : m - 1;
        if (sp.overlapped)
            tag(scen, DefectKind::OA, "spawn overlapped an existing object");
        if (sp.clearance_m < sp.required_m - 1e-9) {
            tag(scen, DefectKind::VSD,
                "spawn clearance " + std::to_string(sp.clearance_m) + " m < required " +
                    std::to_string(sp.required_m) + " m");
        }
    }

    // The collision, when present, belongs to the last assembled scenario.
    const int collision_scenario = log.collision ? m - 1 : -1;
    for (int i = 0; i < m; ++i) {
        const bool real = !unrealistic[static_cast<size_t>(i)];
        const bool coll = i == collision_scenario;
        if (coll && real) {
            report.rcs += 1;
            report.realistic_collision_time = log.collision->t;
        } else if (coll) {
            report.ucs += 1;
        } else if (real) {
            report.rns += 1;
        } else {
            report.uns += 1;
        }
    }
    return report;
}

ExecSummary summarize_execution(const ExecutionLog& log, const RealismBounds& bounds) {
    ExecSummary sum;
    std::vector<double> period_ttc, period_dto, period_jerk;
    std::vector<int> invoked;
    for (const auto& s : log.steps) {
        if (!s.valid) continue;
        invoked.push_back(s.action_id);
        if (!s.ttc_buff.empty())
            period_ttc.push_back(*std::min_element(s.ttc_buff.begin(), s.ttc_buff.end()));
        if (!s.dto_buff.empty())
            period_dto.push_back(*std::min_element(s.dto_buff.begin(), s.dto_buff.end()));
        if (!s.jerk_buff.empty())
            period_jerk.push_back(*std::max_element(s.jerk_buff.begin(), s.jerk_buff.end()));
    }
    sum.scm_ttc = mean_of(period_ttc);
    sum.scm_dto = mean_of(period_dto);
    sum.scm_jerk = mean_of(period_jerk);
    sum.collisions = log.collision ? 1 : 0;
    if (log.collision) sum.collision_time = log.collision->t;
    sum.div_api = div_api(invoked);
    sum.div_scenario = div_scenario(assemble_scenarios(log.scenes));
    sum.realism = classify_realism(log, bounds);
    return sum;
}

}  // namespace crashlab
