#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "crashlab/world.hpp"

namespace crashlab {

enum class ActionKind : uint8_t {
    NoOp,
    SpawnNpc,
    SpawnPedestrian,
    PlaceCone,
    SetLightPhase,
    SetRoadDamage,
};

// Spawn slot relative to the ego at action time.
enum class SpawnSlot : uint8_t { AheadSameLane, AheadLeft, AheadRight, Behind, Oncoming };

const char* to_string(ActionKind k);
const char* to_string(SpawnSlot s);

struct EnvAction {
    int id{0};
    ActionKind kind{ActionKind::NoOp};

    // SpawnNpc
    NpcType npc_type{NpcType::Sedan};
    NpcBehavior npc_behavior{NpcBehavior::CurrentLaneDriving};
    SpawnSlot slot{SpawnSlot::AheadSameLane};
    double distance_m{10.0};

    // SpawnPedestrian
    PedBehavior ped_behavior{PedBehavior::Stop};
    bool left_side{true};

    // PlaceCone
    double cone_offset_m{12.0};

    // SetLightPhase
    LightColor light_target{LightColor::Red};

    // SetRoadDamage
    double damage_level{0.25};

    std::string params_text() const;
};

enum class ConstraintRule : uint8_t { SafeDistance, LightOrder, RoadOccupied, Overlap };

const char* to_string(ConstraintRule r);

struct ConstraintViolation {
    ConstraintRule rule{ConstraintRule::SafeDistance};
    std::string detail;
};

struct RejectedAction : std::runtime_error {
    explicit RejectedAction(ConstraintViolation v)
        : std::runtime_error(std::string(to_string(v.rule)) + ": " + v.detail),
          violation(std::move(v)) {}
    ConstraintViolation violation;
};

// The discrete action space. The default registry enumerates 62 actions with
// stable ids: the full NPC spawn product (5 slots x 3 distances) over the
// sedan/box-truck archetypes and the current-lane/stop behaviors minus the
// (box-truck, stop) combination, plus pedestrian, cone, light-phase, road
// damage and no-op variants. Id 0 is always NoOp.
class ActionRegistry {
public:
    ActionRegistry();

    const std::vector<EnvAction>& actions() const { return actions_; }
    size_t size() const { return actions_.size(); }
    const EnvAction& by_id(int id) const;

    // One action per line: id<TAB>kind<TAB>params.
    std::string dump() const;
    uint64_t dump_hash() const;

private:
    std::vector<EnvAction> actions_;
};

// Minimum center distance a freshly spawned object of the given class must
// keep from every existing object.
double required_spawn_distance(const EnvAction& a);

// Resolves the concrete entity a spawn action would create in this world.
// Only meaningful for spawn kinds.
Entity resolve_spawn(const WorldState& world, const EnvAction& a);

// Checks an action against the realism constraints. Evaluation order:
// Overlap, SafeDistance, LightOrder, RoadOccupied. nullopt = ok.
std::optional<ConstraintViolation> validate(const WorldState& world, const EnvAction& a);

// Applies a validated action. Throws RejectedAction when validate() fails.
// NoOp leaves the world hash unchanged.
void apply(WorldState& world, const EnvAction& a);

// The light a SetLightPhase action targets: nearest light ahead of the ego.
const TrafficLight* target_light(const WorldState& world);
// The segment a SetRoadDamage action targets: the one 40 m ahead of the ego.
const RoadSegment* target_segment(const WorldState& world);

}  // namespace crashlab
