#include "crashlab/world.hpp"

#include <algorithm>
#include <cmath>

#include "crashlab/hash.hpp"

namespace crashlab {

namespace {

constexpr double kNpcCruiseSpeed = 8.0;
constexpr double kNpcBrake = 4.0;
constexpr double kNpcAccel = 2.0;
constexpr double kSegmentLength = 250.0;
constexpr uint64_t kSnapshotMagic = 0x434c534e41503031ULL;  // "CLSNAP01"

double sidewalk_lateral(const Route& route, bool left) {
    const double half = 0.5 * route.lane_count() * route.lane_width();
    return left ? half + 1.0 : -(half + 1.0);
}

void refresh_pose(const Route& route, Entity& e) {
    const double s = std::clamp(e.route_s, 0.0, route.length());
    const Vec2 t = route.tangent_at(s);
    const Vec2 n = normal_left(t);
    const Vec2 p = route.point_at(s) + n * e.lateral;
    e.pose.x = p.x;
    e.pose.y = p.y;

    Vec2 v = t * (e.direction * e.speed);
    if (e.kind == EntityKind::Pedestrian && e.ped_behavior == PedBehavior::CrossRoad) {
        v = n * e.lateral_rate;
    } else {
        v = v + n * e.lateral_rate;
    }
    e.vel = v;

    if (norm(v) > 0.3) {
        e.pose.heading = wrap_angle(std::atan2(v.y, v.x));
    } else if (e.kind != EntityKind::Pedestrian && e.kind != EntityKind::TrafficCone) {
        const double base = route.heading_at(s);
        e.pose.heading = wrap_angle(e.direction > 0 ? base : base + kPi);
    }
}

void advance_lateral_blend(Entity& e, double dt) {
    if (e.lateral_rate == 0.0 || e.kind == EntityKind::Pedestrian) return;
    e.lateral += e.lateral_rate * dt;
    const bool done = (e.lateral_rate > 0.0 && e.lateral >= e.lateral_target) ||
                      (e.lateral_rate < 0.0 && e.lateral <= e.lateral_target);
    if (done) {
        e.lateral = e.lateral_target;
        e.lateral_rate = 0.0;
        if (e.kind == EntityKind::NpcVehicle && e.npc_behavior == NpcBehavior::SwitchLane)
            e.npc_behavior = NpcBehavior::CurrentLaneDriving;
    }
}

// Simple car following: moving NPCs brake for any body ahead in their lane
// and resume cruise speed once clear. Parked (Stop) NPCs stay parked.
void follow_traffic(const WorldState& world, Entity& npc, double dt) {
    double nearest_gap = 1e18;
    for (const auto& other : world.entities) {
        if (other.id == npc.id) continue;
        if (std::abs(other.lateral - npc.lateral) > 2.0) continue;
        const double ahead = npc.direction * (other.route_s - npc.route_s);
        if (ahead <= 0.0) continue;
        const double gap = ahead - 0.5 * (npc.bbox_length + other.bbox_length);
        nearest_gap = std::min(nearest_gap, gap);
    }
    const double follow_dist = npc.speed * npc.speed / (2.0 * kNpcBrake) + 4.0;
    if (nearest_gap < follow_dist) {
        npc.speed = std::max(0.0, npc.speed - kNpcBrake * dt);
    } else if (npc.speed < kNpcCruiseSpeed) {
        npc.speed = std::min(kNpcCruiseSpeed, npc.speed + kNpcAccel * dt);
    }
}

void advance_pedestrian(const Route& route, Entity& e, double dt) {
    switch (e.ped_behavior) {
        case PedBehavior::Stop: break;
        case PedBehavior::CrossRoad: {
            e.lateral += e.lateral_rate * dt;
            const bool done = (e.lateral_rate > 0.0 && e.lateral >= e.lateral_target) ||
                              (e.lateral_rate < 0.0 && e.lateral <= e.lateral_target);
            if (done) {
                e.lateral = e.lateral_target;
                e.lateral_rate = 0.0;
                e.ped_behavior = PedBehavior::Stop;
                e.speed = 0.0;
            }
            break;
        }
        case PedBehavior::FrontLaneWalk:
            e.route_s += e.direction * e.speed * dt;
            break;
    }
    (void)route;
}

}  // namespace

Entity& WorldState::ego() { return *find_entity(ego_id); }

const Entity& WorldState::ego() const { return *find_entity(ego_id); }

Entity* WorldState::find_entity(int id) {
    for (auto& e : entities)
        if (e.id == id) return &e;
    return nullptr;
}

const Entity* WorldState::find_entity(int id) const {
    for (const auto& e : entities)
        if (e.id == id) return &e;
    return nullptr;
}

RoadSegment* WorldState::segment_at(double s) {
    for (auto& seg : segments)
        if (s >= seg.s_begin && s < seg.s_end) return &seg;
    return segments.empty() ? nullptr : &segments.back();
}

const RoadSegment* WorldState::segment_at(double s) const {
    return const_cast<WorldState*>(this)->segment_at(s);
}

double WorldState::damage_at(double s) const {
    const RoadSegment* seg = segment_at(s);
    return seg ? seg->damage_level : 0.0;
}

void WorldState::push_accel_sample(double t, double a) {
    accel_history[static_cast<size_t>(accel_history_cursor)] = {t, a};
    accel_history_cursor = (accel_history_cursor + 1) % static_cast<int>(accel_history.size());
    accel_history_count = std::min(accel_history_count + 1, static_cast<int>(accel_history.size()));
}

std::optional<double> WorldState::accel_before(double dt_back) const {
    if (accel_history_count < 2) return std::nullopt;
    const double want = sim_time_s - dt_back;
    const int n = accel_history_count;
    const int size = static_cast<int>(accel_history.size());
    // Newest entry is at cursor-1; walk backwards to the first entry at or
    // before the wanted time.
    for (int k = 1; k <= n; ++k) {
        const int idx = ((accel_history_cursor - k) % size + size) % size;
        const auto& [t, a] = accel_history[static_cast<size_t>(idx)];
        if (t <= want + 1e-9) return a;
    }
    return std::nullopt;
}

WorldState make_world(std::shared_ptr<const Route> route, WeatherClock clock, uint64_t seed) {
    WorldState w;
    w.route = std::move(route);
    w.weather_clock = std::move(clock);
    w.rng = Rng(seed);

    Entity ego;
    ego.id = 0;
    ego.kind = EntityKind::Ego;
    const Footprint fp = ego_footprint();
    ego.bbox_length = fp.length;
    ego.bbox_width = fp.width;
    ego.route_s = 5.0;
    ego.lane = w.route->lane_count() / 2;
    ego.lateral = w.route->lane_lateral(ego.lane);
    ego.lateral_target = ego.lateral;
    refresh_pose(*w.route, ego);
    w.ego_id = 0;
    w.entities.push_back(ego);
    w.next_entity_id = 1;

    int light_id = 0;
    for (const auto& spec : w.route->lights()) {
        TrafficLight l;
        l.id = light_id++;
        l.arclen = spec.arclen;
        l.color = spec.initial;
        l.active_duration_s = light_duration_s(spec.initial);
        l.elapsed_s = 0.0;
        const Vec2 p = w.route->point_at(spec.arclen);
        l.pose = {p.x, p.y, w.route->heading_at(spec.arclen)};
        w.lights.push_back(l);
    }

    const int n_seg = std::max(1, static_cast<int>(std::ceil(w.route->length() / kSegmentLength)));
    const double seg_len = w.route->length() / n_seg;
    for (int i = 0; i < n_seg; ++i) {
        RoadSegment seg;
        seg.id = i;
        seg.s_begin = i * seg_len;
        seg.s_end = (i + 1 == n_seg) ? w.route->length() + 1.0 : (i + 1) * seg_len;
        w.segments.push_back(seg);
    }

    if (w.weather_clock.trace) {
        w.wall_unix_ts = w.weather_clock.mapped_ts(0.0);
        w.weather = w.weather_clock.at(0.0);
    }
    w.push_accel_sample(0.0, 0.0);
    return w;
}

void step(WorldState& world, double dt) {
    const Route& route = *world.route;

    for (auto& light : world.lights) {
        light.elapsed_s += dt;
        while (light.elapsed_s >= light.active_duration_s) {
            light.elapsed_s -= light.active_duration_s;
            light.color = next_light_color(light.color);
            light.active_duration_s = light_duration_s(light.color);
        }
    }

    double ego_realized = 0.0;
    for (auto& e : world.entities) {
        switch (e.kind) {
            case EntityKind::Ego: {
                const double old_speed = e.speed;
                e.speed = std::clamp(old_speed + world.ego_accel_cmd * dt, 0.0, kSpeedMax);
                ego_realized = (e.speed - old_speed) / dt;
                e.accel = ego_realized;
                e.route_s += e.speed * dt;
                e.route_s = std::min(e.route_s, route.length() + 5.0);
                advance_lateral_blend(e, dt);
                break;
            }
            case EntityKind::NpcVehicle: {
                if (e.npc_behavior != NpcBehavior::Stop) {
                    follow_traffic(world, e, dt);
                    e.route_s += e.direction * e.speed * dt;
                    if (e.direction < 0 && e.route_s < 2.0) {
                        e.npc_behavior = NpcBehavior::Stop;
                        e.speed = 0.0;
                    }
                }
                advance_lateral_blend(e, dt);
                break;
            }
            case EntityKind::Pedestrian:
                advance_pedestrian(route, e, dt);
                break;
            case EntityKind::TrafficCone: break;
        }
        refresh_pose(route, e);
    }

    world.sim_time_s += dt;
    if (world.weather_clock.trace) {
        world.wall_unix_ts = world.weather_clock.mapped_ts(world.sim_time_s);
        world.weather = world.weather_clock.at(world.sim_time_s);
    }
    world.push_accel_sample(world.sim_time_s, ego_realized);

    if (world.ego().speed < kStuckSpeed) {
        world.stuck_time_s += dt;
    } else {
        world.stuck_time_s = 0.0;
    }
}

std::vector<CollisionEvent> collision_events(const WorldState& world) {
    std::vector<CollisionEvent> events;
    const Entity& ego = world.ego();
    const Obb ego_box = ego.obb();
    for (const auto& e : world.entities) {
        if (e.id == ego.id) continue;
        const double area = obb_overlap_area(ego_box, e.obb());
        if (area > 1e-9) events.push_back({ego.id, e.id, area});
    }
    return events;
}

namespace {

void write_entity(ByteWriter& w, const Entity& e) {
    w.i32(e.id);
    w.u8(static_cast<uint8_t>(e.kind));
    w.f64(e.pose.x);
    w.f64(e.pose.y);
    w.f64(e.pose.heading);
    w.f64(e.speed);
    w.f64(e.accel);
    w.f64(e.bbox_length);
    w.f64(e.bbox_width);
    w.u8(static_cast<uint8_t>(e.npc_type));
    w.u8(static_cast<uint8_t>(e.color));
    w.u8(static_cast<uint8_t>(e.npc_behavior));
    w.u8(static_cast<uint8_t>(e.ped_behavior));
    w.f64(e.route_s);
    w.f64(e.lateral);
    w.f64(e.lateral_target);
    w.f64(e.lateral_rate);
    w.i32(e.direction);
    w.i32(e.lane);
    w.f64(e.vel.x);
    w.f64(e.vel.y);
}

Entity read_entity(ByteReader& r) {
    Entity e;
    e.id = r.i32();
    e.kind = static_cast<EntityKind>(r.u8());
    e.pose.x = r.f64();
    e.pose.y = r.f64();
    e.pose.heading = r.f64();
    e.speed = r.f64();
    e.accel = r.f64();
    e.bbox_length = r.f64();
    e.bbox_width = r.f64();
    e.npc_type = static_cast<NpcType>(r.u8());
    e.color = static_cast<NpcColor>(r.u8());
    e.npc_behavior = static_cast<NpcBehavior>(r.u8());
    e.ped_behavior = static_cast<PedBehavior>(r.u8());
    e.route_s = r.f64();
    e.lateral = r.f64();
    e.lateral_target = r.f64();
    e.lateral_rate = r.f64();
    e.direction = r.i32();
    e.lane = r.i32();
    e.vel.x = r.f64();
    e.vel.y = r.f64();
    return e;
}

std::vector<uint8_t> serialize_world(const WorldState& w) {
    ByteWriter out;
    out.u64(kSnapshotMagic);
    out.u32(1);  // version
    out.u64(w.route ? w.route->content_hash() : 0);
    out.u8(w.weather_clock.trace ? 1 : 0);
    out.u64(w.weather_clock.trace ? w.weather_clock.trace->content_hash() : 0);
    out.f64(w.weather_clock.anchor_ts);
    out.f64(w.weather_clock.time_scale);
    out.f64(w.sim_time_s);
    out.f64(w.wall_unix_ts);
    out.f64(w.weather.cloudiness);
    out.f64(w.weather.rain);
    out.f64(w.weather.fog);
    out.f64(w.weather.wetness);
    out.f64(w.weather.local_hour);
    out.i32(w.ego_id);
    out.u32(static_cast<uint32_t>(w.entities.size()));
    for (const auto& e : w.entities) write_entity(out, e);
    out.u32(static_cast<uint32_t>(w.lights.size()));
    for (const auto& l : w.lights) {
        out.i32(l.id);
        out.f64(l.pose.x);
        out.f64(l.pose.y);
        out.f64(l.pose.heading);
        out.u8(static_cast<uint8_t>(l.color));
        out.f64(l.active_duration_s);
        out.f64(l.elapsed_s);
        out.f64(l.arclen);
    }
    out.u32(static_cast<uint32_t>(w.segments.size()));
    for (const auto& s : w.segments) {
        out.i32(s.id);
        out.f64(s.s_begin);
        out.f64(s.s_end);
        out.f64(s.damage_level);
    }
    out.u64(w.rng.state());
    out.f64(w.stuck_time_s);
    out.i32(w.next_entity_id);
    out.f64(w.ego_accel_cmd);
    out.u8(static_cast<uint8_t>(w.ego_operation));
    out.i32(w.accel_history_count);
    out.i32(w.accel_history_cursor);
    for (const auto& [t, a] : w.accel_history) {
        out.f64(t);
        out.f64(a);
    }
    return out.bytes();
}

}  // namespace

uint64_t world_hash(const WorldState& world) {
    const auto bytes = serialize_world(world);
    return fnv1a(bytes.data(), bytes.size());
}

Snapshot snapshot(const WorldState& world) {
    Snapshot s;
    s.bytes = serialize_world(world);
    s.hash = fnv1a(s.bytes.data(), s.bytes.size());
    return s;
}

WorldState restore(const Snapshot& snap, std::shared_ptr<const Route> route,
                   const WeatherClock& clock) {
    if (fnv1a(snap.bytes.data(), snap.bytes.size()) != snap.hash)
        throw DecodeError("snapshot bytes do not match stored hash");
    ByteReader in(snap.bytes.data(), snap.bytes.size());
    if (in.u64() != kSnapshotMagic) throw DecodeError("bad snapshot magic");
    if (in.u32() != 1) throw DecodeError("unsupported snapshot version");

    WorldState w;
    w.route = std::move(route);
    w.weather_clock = clock;

    const uint64_t route_hash = in.u64();
    if (w.route && route_hash != w.route->content_hash())
        throw DecodeError("snapshot was taken on a different route");
    const bool has_trace = in.u8() != 0;
    const uint64_t trace_hash = in.u64();
    if (has_trace) {
        if (!w.weather_clock.trace) throw DecodeError("snapshot needs a weather trace");
        if (trace_hash != w.weather_clock.trace->content_hash())
            throw DecodeError("snapshot was taken with a different weather trace");
    } else {
        w.weather_clock.trace = nullptr;
    }
    w.weather_clock.anchor_ts = in.f64();
    w.weather_clock.time_scale = in.f64();
    w.sim_time_s = in.f64();
    w.wall_unix_ts = in.f64();
    w.weather.cloudiness = in.f64();
    w.weather.rain = in.f64();
    w.weather.fog = in.f64();
    w.weather.wetness = in.f64();
    w.weather.local_hour = in.f64();
    w.ego_id = in.i32();
    const uint32_t n_ent = in.u32();
    for (uint32_t i = 0; i < n_ent; ++i) w.entities.push_back(read_entity(in));
    const uint32_t n_lights = in.u32();
    for (uint32_t i = 0; i < n_lights; ++i) {
        TrafficLight l;
        l.id = in.i32();
        l.pose.x = in.f64();
        l.pose.y = in.f64();
        l.pose.heading = in.f64();
        l.color = static_cast<LightColor>(in.u8());
        l.active_duration_s = in.f64();
        l.elapsed_s = in.f64();
        l.arclen = in.f64();
        w.lights.push_back(l);
    }
    const uint32_t n_seg = in.u32();
    for (uint32_t i = 0; i < n_seg; ++i) {
        RoadSegment s;
        s.id = in.i32();
        s.s_begin = in.f64();
        s.s_end = in.f64();
        s.damage_level = in.f64();
        w.segments.push_back(s);
    }
    w.rng.set_state(in.u64());
    w.stuck_time_s = in.f64();
    w.next_entity_id = in.i32();
    w.ego_accel_cmd = in.f64();
    w.ego_operation = static_cast<Operation>(in.u8());
    w.accel_history_count = in.i32();
    w.accel_history_cursor = in.i32();
    for (auto& [t, a] : w.accel_history) {
        t = in.f64();
        a = in.f64();
    }
    if (!in.done()) throw DecodeError("trailing bytes in snapshot");
    return w;
}

Entity make_npc(const WorldState& world, NpcType type, NpcBehavior behavior, double route_s,
                int lane, int direction) {
    const Route& route = *world.route;
    Entity e;
    e.id = world.next_entity_id;
    e.kind = EntityKind::NpcVehicle;
    e.npc_type = type;
    const Footprint fp = footprint_of(type);
    e.bbox_length = fp.length;
    e.bbox_width = fp.width;
    e.color = (fp.length > 5.0) ? NpcColor::White : NpcColor::Silver;
    e.npc_behavior = behavior;
    e.route_s = route_s;
    e.direction = direction;
    e.lane = lane;
    e.lateral = direction > 0 ? route.lane_lateral(lane) : route.lane_lateral(-1);
    e.lateral_target = e.lateral;
    e.speed = (behavior == NpcBehavior::Stop) ? 0.0 : kNpcCruiseSpeed;

    const int ego_lane = world.ego().lane;
    if (behavior == NpcBehavior::SwitchLane) {
        int target = lane;
        if (lane > ego_lane) target = lane - 1;
        else if (lane < ego_lane) target = lane + 1;
        else target = lane > 0 ? lane - 1 : lane + 1;
        target = std::clamp(target, 0, route.lane_count() - 1);
        e.lateral_target = route.lane_lateral(target);
        e.lane = target;
    } else if (behavior == NpcBehavior::LeftLaneDriving) {
        e.lane = std::max(0, lane - 1);
        e.lateral_target = route.lane_lateral(e.lane);
    } else if (behavior == NpcBehavior::RightLaneDriving) {
        e.lane = std::min(route.lane_count() - 1, lane + 1);
        e.lateral_target = route.lane_lateral(e.lane);
    }
    if (e.lateral_target != e.lateral)
        e.lateral_rate = (e.lateral_target - e.lateral) / kLaneChangeSeconds;

    refresh_pose(route, e);
    return e;
}

Entity make_pedestrian(const WorldState& world, PedBehavior behavior, double route_s,
                       bool left_side) {
    const Route& route = *world.route;
    Entity e;
    e.id = world.next_entity_id;
    e.kind = EntityKind::Pedestrian;
    const Footprint fp = pedestrian_footprint();
    e.bbox_length = fp.length;
    e.bbox_width = fp.width;
    e.ped_behavior = behavior;
    e.route_s = route_s;
    e.direction = 1;
    switch (behavior) {
        case PedBehavior::Stop:
            e.lateral = sidewalk_lateral(route, left_side);
            e.lateral_target = e.lateral;
            break;
        case PedBehavior::CrossRoad:
            e.lateral = sidewalk_lateral(route, left_side);
            e.lateral_target = sidewalk_lateral(route, !left_side);
            e.lateral_rate = (e.lateral_target > e.lateral) ? kWalkSpeed : -kWalkSpeed;
            e.speed = kWalkSpeed;
            break;
        case PedBehavior::FrontLaneWalk: {
            const int edge_lane = left_side ? 0 : route.lane_count() - 1;
            e.lateral = route.lane_lateral(edge_lane);
            e.lateral_target = e.lateral;
            e.speed = kWalkSpeed;
            break;
        }
    }
    refresh_pose(route, e);
    return e;
}

Entity make_cone(const WorldState& world, double route_s, int lane) {
    const Route& route = *world.route;
    Entity e;
    e.id = world.next_entity_id;
    e.kind = EntityKind::TrafficCone;
    const Footprint fp = cone_footprint();
    e.bbox_length = fp.length;
    e.bbox_width = fp.width;
    e.route_s = route_s;
    e.lane = lane;
    e.lateral = route.lane_lateral(lane);
    e.lateral_target = e.lateral;
    refresh_pose(route, e);
    return e;
}

bool at_destination(const WorldState& world) {
    return world.ego().route_s >= world.route->length() - 0.5;
}

}  // namespace crashlab
