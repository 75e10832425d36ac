#include "crashlab/dqn.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>

namespace crashlab {

StateVector encode_state(const WorldState& world, const AutopilotParams& params) {
    const Entity& ego = world.ego();
    const Perception p = perceive(world, params);
    const double range = std::max(p.sensing_range_m, 1e-6);
    const double lane_w = world.route->lane_width();

    StateVector v{};
    v[0] = std::clamp(ego.speed / kSpeedMax, 0.0, 1.0);
    v[1] = std::clamp(ego.accel / 6.0, -1.0, 1.0);
    v[2] = std::clamp(ego.route_s / world.route->length(), 0.0, 1.0);

    // Sectors: ahead-same, ahead-left, ahead-right, behind, oncoming.
    std::array<const PerceivedEntity*, 5> nearest{};
    for (const auto& e : p.visible_entities) {
        int sector;
        if (e.oncoming) sector = 4;
        else if (e.distance_m <= 0.0) sector = 3;
        else if (e.lane_offset_m >= 0.5 * lane_w) sector = 1;
        else if (e.lane_offset_m <= -0.5 * lane_w) sector = 2;
        else sector = 0;
        auto& slot = nearest[static_cast<size_t>(sector)];
        if (!slot || std::abs(e.distance_m) < std::abs(slot->distance_m)) slot = &e;
    }
    for (int sct = 0; sct < 5; ++sct) {
        const PerceivedEntity* e = nearest[static_cast<size_t>(sct)];
        v[static_cast<size_t>(3 + 2 * sct)] =
            e ? std::clamp(std::abs(e->distance_m) / range, 0.0, 1.0) : 1.0;
        v[static_cast<size_t>(4 + 2 * sct)] =
            e ? std::clamp(e->closing_speed / 24.0, -1.0, 1.0) : 0.0;
    }

    const PerceivedLight* light = nullptr;
    for (const auto& l : p.visible_lights)
        if (l.distance_m >= 0.0 && (!light || l.distance_m < light->distance_m)) light = &l;
    if (light) {
        v[13 + static_cast<size_t>(light->color)] = 1.0;
        v[16] = std::clamp(light->distance_m / range, 0.0, 1.0);
    } else {
        v[16] = 1.0;
    }

    v[17] = world.weather.cloudiness;
    v[18] = world.weather.rain;
    v[19] = world.weather.fog;
    v[20] = world.weather.wetness;
    const double phase = 2.0 * kPi * world.weather.local_hour / 24.0;
    v[21] = std::sin(phase);
    v[22] = std::cos(phase);
    v[23] = world.route->lane_count() > 1
                ? static_cast<double>(ego.lane) / (world.route->lane_count() - 1)
                : 0.0;
    v[24] = world.damage_at(ego.route_s);

    int npcs = 0, peds = 0, cones = 0;
    for (const auto& e : p.visible_entities) {
        if (e.kind == EntityKind::NpcVehicle) ++npcs;
        else if (e.kind == EntityKind::Pedestrian) ++peds;
        else if (e.kind == EntityKind::TrafficCone) ++cones;
    }
    v[25] = std::min(1.0, npcs / 10.0);
    v[26] = std::min(1.0, peds / 10.0);
    v[27] = std::min(1.0, cones / 10.0);
    // v[28..31] stay zero padding.
    return v;
}

ReplayMemory::ReplayMemory(size_t capacity) : buffer_(capacity) {
    if (capacity == 0) throw std::invalid_argument("replay capacity must be > 0");
}

void ReplayMemory::push(Transition t) {
    buffer_[cursor_] = std::move(t);
    cursor_ = (cursor_ + 1) % buffer_.size();
    count_ = std::min(count_ + 1, buffer_.size());
}

const Transition& ReplayMemory::at(size_t i) const {
    if (i >= count_) throw std::out_of_range("replay index");
    const size_t oldest = (count_ == buffer_.size()) ? cursor_ : 0;
    return buffer_[(oldest + i) % buffer_.size()];
}

std::vector<Transition> ReplayMemory::sample(Rng& rng, size_t n) const {
    if (n > count_) throw std::invalid_argument("sample larger than memory fill");
    std::vector<size_t> idx(count_);
    for (size_t i = 0; i < count_; ++i) idx[i] = i;
    std::vector<Transition> out;
    out.reserve(n);
    for (size_t i = 0; i < n; ++i) {
        const size_t j = i + static_cast<size_t>(rng.next_below(count_ - i));
        std::swap(idx[i], idx[j]);
        out.push_back(at(idx[i]));
    }
    return out;
}

double EpsilonSchedule::at(int64_t observed_states) const {
    if (observed_states >= anneal_states) return end;
    if (observed_states <= 0) return start;
    const double f = static_cast<double>(observed_states) / static_cast<double>(anneal_states);
    return start + (end - start) * f;
}

int select_action(const Mlp& net, const StateVector& s, double eps, Rng& rng, int action_count) {
    const double u = rng.next_double();
    if (u < eps) return static_cast<int>(rng.next_below(static_cast<uint64_t>(action_count)));
    const auto q = net.forward(s.data());
    return argmax_lowest(q);
}

std::vector<double> td_targets(const std::vector<Transition>& batch, const Mlp& target_net,
                               double gamma) {
    std::vector<double> y;
    y.reserve(batch.size());
    for (const auto& t : batch) {
        double target = t.reward;
        if (!t.terminal) {
            const auto q = target_net.forward(t.s_next.data());
            target += gamma * *std::max_element(q.begin(), q.end());
        }
        y.push_back(target);
    }
    return y;
}

double train_step(Mlp& net, const std::vector<Transition>& batch,
                  const std::vector<double>& targets, const AdamConfig& cfg) {
    std::vector<QExample> examples;
    examples.reserve(batch.size());
    for (size_t i = 0; i < batch.size(); ++i)
        examples.push_back({batch[i].s.data(), batch[i].action, targets[i]});
    return net.train_step(examples, cfg);
}

void sync_target(const Mlp& net, Mlp& target_net, int64_t step, int64_t sync_every) {
    if (sync_every > 0 && step % sync_every == 0) target_net = net;
}

TrainResult run_training(AgentEnv& env, const TrainConfig& cfg, uint64_t seed) {
    if (static_cast<size_t>(cfg.minibatch) > cfg.replay_capacity)
        throw std::invalid_argument("minibatch exceeds the replay memory capacity");
    Rng rng(seed);
    Rng init_rng = rng.split();

    std::vector<int> dims;
    dims.push_back(kStateDim);
    for (const int h : cfg.hidden) dims.push_back(h);
    dims.push_back(env.action_count());

    TrainResult result;
    result.net = Mlp(dims, init_rng);
    result.target_net = result.net;

    ReplayMemory memory(cfg.replay_capacity);
    AdamConfig adam;
    adam.lr = cfg.learning_rate;

    int episode = 0;
    while (result.observed_states < cfg.total_states) {
        StateVector s = env.reset();
        EpisodeRow row;
        row.episode = episode;
        bool terminal = false;
        while (!terminal && result.observed_states < cfg.total_states &&
               row.decisions < cfg.max_decisions_per_episode) {
            const double eps = cfg.epsilon.at(result.observed_states);
            const int action = select_action(result.net, s, eps, rng, env.action_count());
            const auto out = env.do_action(action);

            memory.push({s, action, out.reward, out.state, out.terminal});
            result.observed_states += 1;
            row.decisions += 1;
            row.total_reward += out.reward;

            if (memory.full() && static_cast<size_t>(cfg.minibatch) <= memory.size()) {
                const auto batch = memory.sample(rng, static_cast<size_t>(cfg.minibatch));
                const auto targets = td_targets(batch, result.target_net, cfg.gamma);
                train_step(result.net, batch, targets, adam);
                result.train_steps += 1;
                sync_target(result.net, result.target_net, result.train_steps, cfg.target_sync);
            }

            s = out.state;
            terminal = out.terminal;
        }
        result.episodes.push_back(row);
        episode += 1;
    }
    return result;
}

namespace {
constexpr uint64_t kCheckpointMagic = 0x434c434b50543031ULL;  // "CLCKPT01"
}

void save_checkpoint(const Checkpoint& c, const std::string& path) {
    ByteWriter out;
    out.u64(kCheckpointMagic);
    out.u32(1);
    c.net.serialize(out);
    c.target_net.serialize(out);
    out.u64(static_cast<uint64_t>(c.observed_states));
    out.u64(static_cast<uint64_t>(c.train_steps));
    out.u64(c.rng_state);
    out.i32(c.action_count);
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write checkpoint: " + path);
    f.write(reinterpret_cast<const char*>(out.bytes().data()),
            static_cast<std::streamsize>(out.bytes().size()));
}

Checkpoint load_checkpoint(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open checkpoint: " + path);
    std::vector<uint8_t> bytes((std::istreambuf_iterator<char>(f)),
                               std::istreambuf_iterator<char>());
    ByteReader in(bytes.data(), bytes.size());
    if (in.u64() != kCheckpointMagic) throw DecodeError("bad checkpoint magic");
    if (in.u32() != 1) throw DecodeError("unsupported checkpoint version");
    Checkpoint c;
    c.net = Mlp::deserialize(in);
    c.target_net = Mlp::deserialize(in);
    c.observed_states = static_cast<int64_t>(in.u64());
    c.train_steps = static_cast<int64_t>(in.u64());
    c.rng_state = in.u64();
    c.action_count = in.i32();
    if (!in.done()) throw DecodeError("trailing bytes in checkpoint");
    return c;
}

uint64_t checkpoint_hash(const Checkpoint& c) {
    ByteWriter out;
    c.net.serialize(out);
    c.target_net.serialize(out);
    out.u64(static_cast<uint64_t>(c.observed_states));
    out.u64(static_cast<uint64_t>(c.train_steps));
    out.u64(c.rng_state);
    out.i32(c.action_count);
    return fnv1a(out.bytes().data(), out.bytes().size());
}

}  // namespace crashlab
