#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "crashlab/autopilot.hpp"
#include "crashlab/nn.hpp"
#include "crashlab/rng.hpp"
#include "crashlab/world.hpp"

namespace crashlab {

inline constexpr int kStateDim = 32;

using StateVector = std::array<double, kStateDim>;

// Structured feature encoding of a world: ego kinematics, nearest obstacle
// per relative sector, nearest light, weather, clock, road. Deterministic;
// distances are normalized by the current sensing range.
StateVector encode_state(const WorldState& world, const AutopilotParams& params = {});

struct Transition {
    StateVector s{};
    int action{0};
    double reward{0.0};
    StateVector s_next{};
    bool terminal{false};
};

// Fixed-capacity FIFO ring sampled uniformly for training.
class ReplayMemory {
public:
    explicit ReplayMemory(size_t capacity);

    void push(Transition t);
    size_t size() const { return count_; }
    size_t capacity() const { return buffer_.size(); }
    bool full() const { return count_ == buffer_.size(); }

    // i = 0 is the oldest retained transition.
    const Transition& at(size_t i) const;

    // Uniform sample of `n` distinct transitions (n <= size).
    std::vector<Transition> sample(Rng& rng, size_t n) const;

private:
    std::vector<Transition> buffer_;
    size_t cursor_{0};
    size_t count_{0};
};

struct EpsilonSchedule {
    double start{1.0};
    double end{0.2};
    int64_t anneal_states{10000};
    double eval_eps{0.05};

    double at(int64_t observed_states) const;
};

// Epsilon-greedy over the Q head: argmax with lowest-id tie-break, or a
// uniform draw with probability eps.
int select_action(const Mlp& net, const StateVector& s, double eps, Rng& rng, int action_count);

// y_i = r_i + gamma * max_a Qhat(s'_i, a), with the max term dropped on
// terminal transitions.
std::vector<double> td_targets(const std::vector<Transition>& batch, const Mlp& target_net,
                               double gamma);

// One Q-network regression step on the batch against the given targets.
double train_step(Mlp& net, const std::vector<Transition>& batch,
                  const std::vector<double>& targets, const AdamConfig& cfg = {});

// Copies the online parameters into the target every C steps.
void sync_target(const Mlp& net, Mlp& target_net, int64_t step, int64_t sync_every);

struct TrainConfig {
    double gamma{0.9};
    int minibatch{64};
    int64_t target_sync{200};
    int64_t total_states{40000};
    double learning_rate{1e-3};
    size_t replay_capacity{6000};
    EpsilonSchedule epsilon{};
    int max_decisions_per_episode{200};
    std::vector<int> hidden{64, 64};
};

// Environment surface the learner drives. Implementations own all episode
// mechanics (validation, simulation, reward).
class AgentEnv {
public:
    virtual ~AgentEnv() = default;
    virtual int action_count() const = 0;
    virtual StateVector reset() = 0;

    struct Outcome {
        double reward{0.0};
        StateVector state{};
        bool terminal{false};
    };
    virtual Outcome do_action(int action) = 0;
};

struct EpisodeRow {
    int episode{0};
    int decisions{0};
    double total_reward{0.0};
};

struct TrainResult {
    Mlp net;
    Mlp target_net;
    std::vector<EpisodeRow> episodes;
    int64_t observed_states{0};
    int64_t train_steps{0};
};

// The learning loop: per decision, epsilon-greedy action selection, replay
// storage, minibatch updates once the memory is full, periodic target syncs.
// Stops once the observed-state budget is spent.
TrainResult run_training(AgentEnv& env, const TrainConfig& cfg, uint64_t seed);

// Checkpoint IO: layer shapes, parameters, optimizer state and the schedule
// position; round-trips bit-exactly.
struct Checkpoint {
    Mlp net;
    Mlp target_net;
    int64_t observed_states{0};
    int64_t train_steps{0};
    uint64_t rng_state{0};
    int action_count{0};
};

void save_checkpoint(const Checkpoint& c, const std::string& path);
Checkpoint load_checkpoint(const std::string& path);
uint64_t checkpoint_hash(const Checkpoint& c);

}  // namespace crashlab
