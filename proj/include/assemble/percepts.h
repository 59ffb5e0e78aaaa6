#pragma once

#include <optional>
#include <string>
#include <vector>

#include "assemble/actions.h"
#include "assemble/world.h"

namespace assemble {

enum class ThingKind : std::uint8_t { Entity, Block, Dispenser };

std::string_view to_string(ThingKind k);
ThingKind parse_thing_kind(std::string_view s);

struct Thing {
    ThingKind kind = ThingKind::Block;
    int detail = 0;  // team for entities, block type otherwise
    auto operator<=>(const Thing&) const = default;
};

struct PerceivedThing {
    Vec2 rel;
    Thing thing;
    bool operator==(const PerceivedThing&) const = default;
};

struct TaskView {
    std::string name;
    int deadline = 0;
    int reward = 0;
    std::vector<Requirement> requirements;
    bool submitted = false;
    bool operator==(const TaskView&) const = default;
};

// What one entity learns at the start of one step. Coordinates are relative to
// the entity; teammates carry only their team label.
struct RawPerceptSet {
    int step = 0;
    int team = 0;
    int vision = 0;  // radius of the perceived diamond
    int score = 0;
    int energy = 0;
    bool disabled = false;
    std::optional<ActionRequest> lastAction;
    std::optional<ActionResult> lastActionResult;
    std::vector<std::pair<Vec2, Terrain>> terrain;  // diamond order
    std::vector<PerceivedThing> things;
    std::vector<Vec2> attached;
    std::vector<TaskView> tasks;

    bool operator==(const RawPerceptSet&) const = default;

    Terrain terrain_at(Vec2 rel) const;  // Obstacle when outside the diamond
    std::vector<Thing> things_at(Vec2 rel) const;
    bool attached_at(Vec2 rel) const;
    bool in_vision(Vec2 rel) const { return manhattan(rel) <= vision; }
};

// `lastAction` / `lastResult` are the previous step's request and outcome for this entity.
RawPerceptSet compute_percepts(const WorldState& world, const SimConfig& config, EntityId entity,
                               std::optional<ActionRequest> lastAction = std::nullopt,
                               std::optional<ActionResult> lastResult = std::nullopt);

}  // namespace assemble
