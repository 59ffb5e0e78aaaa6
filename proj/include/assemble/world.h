#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "assemble/actions.h"
#include "assemble/config.h"
#include "assemble/geometry.h"

namespace assemble {

enum class Terrain : std::uint8_t { Empty, Obstacle, Goal };

char terrain_char(Terrain t);
Terrain terrain_from_char(char c);

// Deterministic generator. Bounded draws avoid std distributions, whose output
// differs between standard library implementations.
class Rng {
public:
    explicit Rng(std::uint64_t seed = 1) : engine_(seed) {}

    std::uint64_t next() { return engine_(); }
    // Uniform in [lo, hi].
    int uniform(int lo, int hi);
    double unit();  // [0, 1)
    bool chance(double p) { return unit() < p; }

    std::string state() const;
    void set_state(const std::string& s);
    bool operator==(const Rng& o) const { return engine_ == o.engine_; }

private:
    std::mt19937_64 engine_;
};

struct Requirement {
    Vec2 pos;  // relative to the submitting agent
    BlockType type = 0;
    bool operator==(const Requirement&) const = default;
};

std::string block_type_name(BlockType t);

struct TaskSpec {
    std::string name;
    int created = 0;
    int deadline = 0;
    int reward = 0;
    std::vector<Requirement> requirements;
    std::optional<int> submittedBy;  // team index

    bool active(int step) const { return !submittedBy && step <= deadline; }
    bool operator==(const TaskSpec&) const = default;
};

struct ClearEvent {
    Vec2 center;
    int radius = 1;
    int triggerStep = 0;
    bool operator==(const ClearEvent&) const = default;
};

// Blocks attach to entities through anchors (entity directly holding the block)
// and to each other through links created by connect. An entity's attachments
// are all blocks reachable from its anchors.
struct Block {
    BlockId id = 0;
    BlockType type = 0;
    Vec2 pos;
    std::set<EntityId> anchors;
    std::set<BlockId> links;
    bool operator==(const Block&) const = default;
};

struct ClearCharge {
    Vec2 target;  // absolute cell
    int count = 0;
    int lastStep = 0;
    bool operator==(const ClearCharge&) const = default;
};

struct EntityState {
    EntityId id = 0;
    int team = 0;
    std::string name;
    Vec2 pos;
    std::optional<int> disabledUntil;
    int energy = 0;
    std::optional<ClearCharge> clearCharge;

    bool disabled(int step) const { return disabledUntil && step < *disabledUntil; }
    bool operator==(const EntityState&) const = default;
};

struct AttachedBlock {
    Vec2 offset;  // in the holder's frame
    BlockType type = 0;
    BlockId id = 0;
    bool operator==(const AttachedBlock&) const = default;
};

struct WorldState {
    int width = 0;
    int height = 0;
    std::vector<Terrain> terrain;
    std::vector<std::optional<BlockType>> dispensers;
    std::map<BlockId, Block> blocks;
    std::vector<EntityState> entities;
    std::vector<TaskSpec> tasks;
    std::vector<ClearEvent> pendingEvents;
    int step = 0;
    std::vector<int> scores;
    Rng rng;
    BlockId nextBlockId = 0;
    int nextTaskIndex = 0;
    // Occupancy indices derived from `blocks` / `entities`; kept current by reindex().
    std::vector<BlockId> blockGrid;
    std::vector<EntityId> entityGrid;

    // Fixture helpers. All keep the occupancy indices current.
    static WorldState empty(int width, int height, int teams, std::uint64_t seed = 1);
    void set_terrain(Vec2 c, Terrain t) { terrain[index(c)] = t; }
    void set_dispenser(Vec2 c, BlockType t) { dispensers[index(c)] = t; }
    EntityId add_entity(int team, std::string name, Vec2 pos, int energy = 100);
    BlockId add_block(BlockType type, Vec2 pos);
    void anchor(EntityId e, BlockId b);
    void reindex();

    bool in_bounds(Vec2 c) const { return c.x >= 0 && c.y >= 0 && c.x < width && c.y < height; }
    std::size_t index(Vec2 c) const { return static_cast<std::size_t>(c.y * width + c.x); }
    // Out-of-bounds cells read as obstacles.
    Terrain terrain_at(Vec2 c) const { return in_bounds(c) ? terrain[index(c)] : Terrain::Obstacle; }
    std::optional<BlockType> dispenser_at(Vec2 c) const {
        return in_bounds(c) ? dispensers[index(c)] : std::nullopt;
    }
    const Block* block_at(Vec2 c) const;
    const EntityState* entity_at(Vec2 c) const;
    const TaskSpec* find_task(const std::string& name) const;

    // Every block reachable from the entity's anchors, offsets relative to it.
    std::vector<AttachedBlock> attachments_of(EntityId e) const;
    std::set<BlockId> component_of(EntityId e) const;
    bool is_attached(const Block& b) const;

    bool operator==(const WorldState&) const = default;
};

enum class EventKind : std::uint8_t {
    TaskCreated,
    Requested,
    Attached,
    Detached,
    Connected,
    Submitted,
    ClearTriggered,
    ClearEventFired,
};

std::string_view to_string(EventKind k);
EventKind parse_event_kind(std::string_view s);

struct Victim {
    EntityId entity = 0;
    bool onGoal = false;
    int attachments = 0;
    bool operator==(const Victim&) const = default;
};

// World-derived record of something that happened during a step.
struct WorldEvent {
    EventKind kind = EventKind::TaskCreated;
    int step = 0;
    EntityId entity = -1;
    EntityId partner = -1;
    int team = -1;
    std::vector<BlockId> blocks;
    std::string task;
    Vec2 cell;
    int radius = 0;
    int reward = 0;
    std::vector<Victim> victims;
    bool operator==(const WorldEvent&) const = default;
};

struct StepOutcome {
    std::vector<ActionResult> results;  // indexed by entity id
    std::vector<WorldEvent> events;
};

// Throws Error(InvalidConfig) when the layout cannot be realised.
WorldState generate_world(const SimConfig& config);
// Draws a task from the world's generator and advances the task counter. The
// caller decides whether to store it.
TaskSpec generate_task(WorldState& world, const SimConfig& config);
// Resolves one lockstep step. `actions` holds one request per entity.
StepOutcome apply_step(WorldState& world, const SimConfig& config,
                       const std::vector<ActionRequest>& actions);

std::vector<Vec2> diamond(int radius);

}  // namespace assemble
