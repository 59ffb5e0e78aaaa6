#include "assemble/world.h"

#include <algorithm>
#include <deque>
#include <sstream>

#include "assemble/error.h"

namespace assemble {

char terrain_char(Terrain t) {
    switch (t) {
        case Terrain::Empty: return '.';
        case Terrain::Obstacle: return '#';
        case Terrain::Goal: return 'G';
    }
    return '?';
}

Terrain terrain_from_char(char c) {
    switch (c) {
        case '.': return Terrain::Empty;
        case '#': return Terrain::Obstacle;
        case 'G': return Terrain::Goal;
        default: throw Error(ErrorCode::MalformedTrace, std::string("bad terrain glyph '") + c + "'");
    }
}

std::string block_type_name(BlockType t) { return "b" + std::to_string(t); }

int Rng::uniform(int lo, int hi) {
    if (hi <= lo) return lo;
    const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % span;
    std::uint64_t v = 0;
    do {
        v = engine_();
    } while (v >= limit);
    return lo + static_cast<int>(v % span);
}

double Rng::unit() { return static_cast<double>(engine_() >> 11) * (1.0 / 9007199254740992.0); }

std::string Rng::state() const {
    std::ostringstream out;
    out << engine_;
    return out.str();
}

void Rng::set_state(const std::string& s) {
    std::istringstream in(s);
    in >> engine_;
    if (!in) throw Error(ErrorCode::MalformedTrace, "bad generator state");
}

std::string_view to_string(EventKind k) {
    switch (k) {
        case EventKind::TaskCreated: return "task_created";
        case EventKind::Requested: return "requested";
        case EventKind::Attached: return "attached";
        case EventKind::Detached: return "detached";
        case EventKind::Connected: return "connected";
        case EventKind::Submitted: return "submitted";
        case EventKind::ClearTriggered: return "clear_triggered";
        case EventKind::ClearEventFired: return "clear_event";
    }
    return "?";
}

EventKind parse_event_kind(std::string_view s) {
    for (auto k : {EventKind::TaskCreated, EventKind::Requested, EventKind::Attached,
                   EventKind::Detached, EventKind::Connected, EventKind::Submitted,
                   EventKind::ClearTriggered, EventKind::ClearEventFired})
        if (to_string(k) == s) return k;
    throw Error(ErrorCode::MalformedTrace, "unknown event kind '" + std::string(s) + "'");
}

std::vector<Vec2> diamond(int radius) {
    std::vector<Vec2> out;
    for (int y = -radius; y <= radius; ++y) {
        const int span = radius - (y < 0 ? -y : y);
        for (int x = -span; x <= span; ++x) out.push_back({x, y});
    }
    return out;
}

// ---------------------------------------------------------------------------
// WorldState

WorldState WorldState::empty(int width, int height, int teams, std::uint64_t seed) {
    WorldState w;
    w.width = width;
    w.height = height;
    w.terrain.assign(static_cast<std::size_t>(width * height), Terrain::Empty);
    w.dispensers.assign(w.terrain.size(), std::nullopt);
    w.scores.assign(static_cast<std::size_t>(teams), 0);
    w.rng = Rng(seed);
    w.reindex();
    return w;
}

EntityId WorldState::add_entity(int team, std::string name, Vec2 pos, int energy) {
    EntityState e;
    e.id = static_cast<EntityId>(entities.size());
    e.team = team;
    e.name = std::move(name);
    e.pos = pos;
    e.energy = energy;
    entities.push_back(std::move(e));
    reindex();
    return entities.back().id;
}

BlockId WorldState::add_block(BlockType type, Vec2 pos) {
    Block b;
    b.id = nextBlockId++;
    b.type = type;
    b.pos = pos;
    blocks.emplace(b.id, b);
    reindex();
    return b.id;
}

void WorldState::anchor(EntityId e, BlockId b) { blocks.at(b).anchors.insert(e); }

void WorldState::reindex() {
    const auto n = static_cast<std::size_t>(width * height);
    blockGrid.assign(n, -1);
    entityGrid.assign(n, -1);
    for (const auto& [id, b] : blocks)
        if (in_bounds(b.pos)) blockGrid[index(b.pos)] = id;
    for (const auto& e : entities)
        if (in_bounds(e.pos)) entityGrid[index(e.pos)] = e.id;
}

const Block* WorldState::block_at(Vec2 c) const {
    if (!in_bounds(c)) return nullptr;
    const BlockId id = blockGrid[index(c)];
    return id < 0 ? nullptr : &blocks.at(id);
}

const EntityState* WorldState::entity_at(Vec2 c) const {
    if (!in_bounds(c)) return nullptr;
    const EntityId id = entityGrid[index(c)];
    return id < 0 ? nullptr : &entities[static_cast<std::size_t>(id)];
}

const TaskSpec* WorldState::find_task(const std::string& name) const {
    for (const auto& t : tasks)
        if (t.name == name) return &t;
    return nullptr;
}

std::set<BlockId> WorldState::component_of(EntityId e) const {
    std::set<BlockId> seen;
    std::deque<BlockId> frontier;
    for (const auto& [id, b] : blocks)
        if (b.anchors.count(e)) {
            seen.insert(id);
            frontier.push_back(id);
        }
    while (!frontier.empty()) {
        const BlockId cur = frontier.front();
        frontier.pop_front();
        for (BlockId n : blocks.at(cur).links)
            if (seen.insert(n).second) frontier.push_back(n);
    }
    return seen;
}

std::vector<AttachedBlock> WorldState::attachments_of(EntityId e) const {
    std::vector<AttachedBlock> out;
    const Vec2 origin = entities[static_cast<std::size_t>(e)].pos;
    for (BlockId id : component_of(e)) {
        const Block& b = blocks.at(id);
        out.push_back({b.pos - origin, b.type, b.id});
    }
    std::sort(out.begin(), out.end(),
              [](const AttachedBlock& a, const AttachedBlock& b) { return a.offset < b.offset; });
    return out;
}

bool WorldState::is_attached(const Block& b) const { return !b.anchors.empty() || !b.links.empty(); }

// ---------------------------------------------------------------------------
// Generation

namespace {

Vec2 random_cell(WorldState& w) { return {w.rng.uniform(0, w.width - 1), w.rng.uniform(0, w.height - 1)}; }

constexpr int kPlacementAttempts = 20000;

bool grow_cluster(WorldState& w, const SimConfig& cfg, std::vector<int>& clusterOf, int id) {
    auto blocked = [&](Vec2 c) {
        if (!w.in_bounds(c) || clusterOf[w.index(c)] >= 0) return true;
        for (Direction d : kDirections) {
            const Vec2 n = c + unit(d);
            if (w.in_bounds(n) && clusterOf[w.index(n)] >= 0 && clusterOf[w.index(n)] != id) return true;
        }
        return false;
    };
    for (int attempt = 0; attempt < 200; ++attempt) {
        const Vec2 seed = random_cell(w);
        if (blocked(seed)) continue;
        std::vector<Vec2> cells{seed};
        clusterOf[w.index(seed)] = id;
        std::vector<Vec2> frontier;
        while (static_cast<int>(cells.size()) < cfg.goalClusterSize) {
            frontier.clear();
            for (Vec2 c : cells)
                for (Direction d : kDirections) {
                    const Vec2 n = c + unit(d);
                    if (!blocked(n) && std::find(frontier.begin(), frontier.end(), n) == frontier.end())
                        frontier.push_back(n);
                }
            if (frontier.empty()) break;
            const Vec2 pick = frontier[static_cast<std::size_t>(
                w.rng.uniform(0, static_cast<int>(frontier.size()) - 1))];
            clusterOf[w.index(pick)] = id;
            cells.push_back(pick);
        }
        if (static_cast<int>(cells.size()) == cfg.goalClusterSize) {
            for (Vec2 c : cells) w.terrain[w.index(c)] = Terrain::Goal;
            return true;
        }
        for (Vec2 c : cells) clusterOf[w.index(c)] = -1;
    }
    return false;
}

template <typename Pred>
Vec2 place(WorldState& w, Pred ok, const char* what) {
    for (int i = 0; i < kPlacementAttempts; ++i) {
        const Vec2 c = random_cell(w);
        if (ok(c)) return c;
    }
    throw Error(ErrorCode::InvalidConfig, std::string("cannot place ") + what);
}

}  // namespace

WorldState generate_world(const SimConfig& cfg) {
    cfg.validate();
    WorldState w = WorldState::empty(cfg.width, cfg.height, static_cast<int>(cfg.teams.size()), cfg.seed);

    std::vector<int> clusterOf(w.terrain.size(), -1);
    for (int k = 0; k < cfg.goalClusters; ++k)
        if (!grow_cluster(w, cfg, clusterOf, k))
            throw Error(ErrorCode::InvalidConfig, "cannot place goal cluster " + std::to_string(k));

    for (std::size_t i = 0; i < w.terrain.size(); ++i)
        if (w.terrain[i] == Terrain::Empty && w.rng.chance(cfg.obstacleDensity))
            w.terrain[i] = Terrain::Obstacle;

    for (BlockType t = 0; t < cfg.blockTypes; ++t)
        for (int i = 0; i < cfg.dispensersPerType; ++i) {
            const Vec2 c = place(
                w, [&](Vec2 p) { return w.terrain_at(p) == Terrain::Empty && !w.dispenser_at(p); },
                "dispenser");
            w.dispensers[w.index(c)] = t;
        }

    for (std::size_t team = 0; team < cfg.teams.size(); ++team)
        for (int i = 0; i < cfg.entitiesPerTeam; ++i) {
            const Vec2 c = place(
                w,
                [&](Vec2 p) {
                    return w.terrain_at(p) == Terrain::Empty && !w.dispenser_at(p) && !w.entity_at(p);
                },
                "entity");
            w.add_entity(static_cast<int>(team), cfg.teams[team] + std::to_string(i + 1), c,
                         cfg.energyStart);
        }

    for (int i = 0; i < cfg.initialTasks; ++i) w.tasks.push_back(generate_task(w, cfg));
    return w;
}

TaskSpec generate_task(WorldState& w, const SimConfig& cfg) {
    TaskSpec t;
    t.name = "task" + std::to_string(w.nextTaskIndex++);
    t.created = w.step;
    t.deadline = w.step + cfg.taskDuration;
    const int size = w.rng.uniform(cfg.taskSizeMin, cfg.taskSizeMax);
    Vec2 cur{0, 1};
    t.requirements.push_back({cur, w.rng.uniform(0, cfg.blockTypes - 1)});
    while (static_cast<int>(t.requirements.size()) < size) {
        std::vector<Vec2> options;
        for (Direction d : {Direction::S, Direction::E, Direction::W}) {
            const Vec2 n = cur + unit(d);
            const bool used = std::any_of(t.requirements.begin(), t.requirements.end(),
                                          [&](const Requirement& r) { return r.pos == n; });
            if (!used && n.y >= 1) options.push_back(n);
        }
        // South of the walk's current cell is never visited, so options is never empty.
        cur = options[static_cast<std::size_t>(w.rng.uniform(0, static_cast<int>(options.size()) - 1))];
        t.requirements.push_back({cur, w.rng.uniform(0, cfg.blockTypes - 1)});
    }
    t.reward = cfg.rewardBase * size;
    return t;
}

// ---------------------------------------------------------------------------
// Step resolution

namespace {

class StepResolver {
public:
    StepResolver(WorldState& w, const SimConfig& cfg, const std::vector<ActionRequest>& actions)
        : w_(w), cfg_(cfg), actions_(actions), step_(w.step) {}

    StepOutcome run() {
        const std::size_t n = w_.entities.size();
        if (actions_.size() != n)
            throw Error(ErrorCode::MalformedActions, "expected " + std::to_string(n) + " actions, got " +
                                                         std::to_string(actions_.size()));
        effective_ = actions_;
        out_.results.assign(n, ActionResult::FailedInvalid);
        decided_.assign(n, false);

        for (std::size_t i = 0; i < n; ++i) {
            if (w_.entities[i].disabled(step_)) {
                out_.results[i] = actions_[i].type == ActionType::Skip ? ActionResult::Success
                                                                        : ActionResult::FailedInvalid;
                effective_[i] = ActionRequest::skip();
                decided_[i] = true;
            }
            if (effective_[i].type != ActionType::Clear) w_.entities[i].clearCharge.reset();
        }

        for (std::size_t i = 0; i < n; ++i) {
            if (decided_[i]) continue;
            decided_[i] = true;
            out_.results[i] = resolve(static_cast<EntityId>(i));
        }

        fire_clear_events();
        spawn_clear_event();
        spawn_task();
        for (auto& e : w_.entities) e.energy = std::min(cfg_.energyMax, e.energy + cfg_.energyRegen);
        ++w_.step;
        return std::move(out_);
    }

private:
    EntityState& entity(EntityId e) { return w_.entities[static_cast<std::size_t>(e)]; }

    bool free_for(Vec2 c, EntityId mover, const std::set<BlockId>& moving) const {
        if (!w_.in_bounds(c) || w_.terrain_at(c) == Terrain::Obstacle) return false;
        if (const auto* e = w_.entity_at(c); e && e->id != mover) return false;
        if (const auto* b = w_.block_at(c); b && !moving.count(b->id)) return false;
        return true;
    }

    bool co_anchored(EntityId e, const std::set<BlockId>& comp) const {
        for (BlockId id : comp)
            for (EntityId holder : w_.blocks.at(id).anchors)
                if (holder != e) return true;
        return false;
    }

    ActionResult resolve(EntityId e) {
        const ActionRequest& a = effective_[static_cast<std::size_t>(e)];
        switch (a.type) {
            case ActionType::Skip: return ActionResult::Success;
            case ActionType::Move: return move(e, a.dir);
            case ActionType::Rotate: return rotate_entity(e, a.rotation);
            case ActionType::Attach: return attach(e, a.dir);
            case ActionType::Detach: return detach(e, a.dir);
            case ActionType::Request: return request(e, a.dir);
            case ActionType::Connect: return connect(e, a);
            case ActionType::Clear: return clear(e, a.offset);
            case ActionType::Submit: return submit(e, a.task);
        }
        return ActionResult::FailedInvalid;
    }

    ActionResult move(EntityId e, Direction d) {
        const auto comp = w_.component_of(e);
        if (co_anchored(e, comp)) return ActionResult::FailedBlocked;
        const Vec2 delta = unit(d);
        EntityState& me = entity(e);
        if (!free_for(me.pos + delta, e, comp)) return ActionResult::FailedBlocked;
        for (BlockId id : comp)
            if (!free_for(w_.blocks.at(id).pos + delta, e, comp)) return ActionResult::FailedBlocked;
        me.pos += delta;
        for (BlockId id : comp) w_.blocks.at(id).pos += delta;
        w_.reindex();
        return ActionResult::Success;
    }

    ActionResult rotate_entity(EntityId e, Rotation r) {
        const auto comp = w_.component_of(e);
        if (co_anchored(e, comp)) return ActionResult::FailedBlocked;
        const Vec2 origin = entity(e).pos;
        for (BlockId id : comp) {
            const Vec2 target = origin + rotate(w_.blocks.at(id).pos - origin, r);
            if (!free_for(target, e, comp)) return ActionResult::FailedBlocked;
        }
        for (BlockId id : comp) {
            Block& b = w_.blocks.at(id);
            b.pos = origin + rotate(b.pos - origin, r);
        }
        w_.reindex();
        return ActionResult::Success;
    }

    ActionResult attach(EntityId e, Direction d) {
        const Block* b = w_.block_at(entity(e).pos + unit(d));
        if (!b || w_.is_attached(*b)) return ActionResult::FailedTarget;
        w_.blocks.at(b->id).anchors.insert(e);
        emit({.kind = EventKind::Attached, .entity = e, .team = entity(e).team, .blocks = {b->id}});
        return ActionResult::Success;
    }

    ActionResult detach(EntityId e, Direction d) {
        const Block* b = w_.block_at(entity(e).pos + unit(d));
        if (!b || !b->anchors.count(e)) return ActionResult::FailedTarget;
        const BlockId id = b->id;
        w_.blocks.at(id).anchors.erase(e);
        normalize();
        emit({.kind = EventKind::Detached, .entity = e, .team = entity(e).team, .blocks = {id}});
        return ActionResult::Success;
    }

    ActionResult request(EntityId e, Direction d) {
        const Vec2 c = entity(e).pos + unit(d);
        const auto type = w_.dispenser_at(c);
        if (!type) return ActionResult::FailedTarget;
        if (w_.block_at(c) || w_.entity_at(c)) return ActionResult::FailedBlocked;
        const BlockId id = w_.add_block(*type, c);
        emit({.kind = EventKind::Requested, .entity = e, .team = entity(e).team, .blocks = {id}});
        return ActionResult::Success;
    }

    ActionResult connect(EntityId e, const ActionRequest& a) {
        const EntityId p = a.partner;
        if (p < 0 || p >= static_cast<EntityId>(w_.entities.size()) || p == e)
            return ActionResult::FailedPartner;
        const ActionRequest& other = effective_[static_cast<std::size_t>(p)];
        if (other.type != ActionType::Connect || other.partner != e) return ActionResult::FailedPartner;

        // The partner's outcome is decided together with ours.
        decided_[static_cast<std::size_t>(p)] = true;
        auto fail = [&](ActionResult r) {
            out_.results[static_cast<std::size_t>(p)] = r;
            return r;
        };
        const Block* mine = w_.block_at(entity(e).pos + a.offset);
        const Block* theirs = w_.block_at(entity(p).pos + other.offset);
        if (!mine || !theirs || mine == theirs) return fail(ActionResult::FailedTarget);
        if (!w_.component_of(e).count(mine->id) || !w_.component_of(p).count(theirs->id))
            return fail(ActionResult::FailedTarget);
        if (manhattan(mine->pos, theirs->pos) != 1) return fail(ActionResult::FailedTarget);

        w_.blocks.at(mine->id).links.insert(theirs->id);
        w_.blocks.at(theirs->id).links.insert(mine->id);
        emit({.kind = EventKind::Connected,
              .entity = e,
              .partner = p,
              .team = entity(e).team,
              .blocks = {mine->id, theirs->id}});
        out_.results[static_cast<std::size_t>(p)] = ActionResult::Success;
        return ActionResult::Success;
    }

    std::vector<Victim> collect_victims(const std::vector<Vec2>& area, EntityId exclude) const {
        std::vector<Victim> out;
        for (Vec2 c : area)
            if (const auto* v = w_.entity_at(c); v && v->id != exclude)
                out.push_back({v->id, w_.terrain_at(c) == Terrain::Goal,
                               static_cast<int>(w_.component_of(v->id).size())});
        std::sort(out.begin(), out.end(),
                  [](const Victim& a, const Victim& b) { return a.entity < b.entity; });
        return out;
    }

    // Removes obstacles and blocks in `area`, disables and strips victims.
    std::vector<BlockId> devastate(const std::vector<Vec2>& area, const std::vector<Victim>& victims) {
        std::vector<BlockId> removed;
        for (Vec2 c : area) {
            if (w_.terrain_at(c) == Terrain::Obstacle) w_.terrain[w_.index(c)] = Terrain::Empty;
            if (const Block* b = w_.block_at(c)) removed.push_back(b->id);
        }
        for (BlockId id : removed) erase_block(id);
        for (const Victim& v : victims) {
            entity(v.entity).disabledUntil = step_ + 1 + cfg_.disableDuration;
            entity(v.entity).clearCharge.reset();
            // Victims that have not acted yet this step are already disabled.
            const auto i = static_cast<std::size_t>(v.entity);
            if (!decided_[i]) {
                decided_[i] = true;
                out_.results[i] =
                    actions_[i].type == ActionType::Skip ? ActionResult::Success : ActionResult::FailedInvalid;
                effective_[i] = ActionRequest::skip();
            }
            for (auto& [id, b] : w_.blocks) b.anchors.erase(v.entity);
        }
        normalize();
        w_.reindex();
        std::sort(removed.begin(), removed.end());
        return removed;
    }

    std::vector<Vec2> area_around(Vec2 center, int radius) const {
        std::vector<Vec2> out;
        for (Vec2 off : diamond(radius))
            if (w_.in_bounds(center + off)) out.push_back(center + off);
        return out;
    }

    ActionResult clear(EntityId e, Vec2 offset) {
        EntityState& me = entity(e);
        const Vec2 target = me.pos + offset;
        if (offset == Vec2{} || manhattan(offset) > cfg_.visionRadius || !w_.in_bounds(target)) {
            me.clearCharge.reset();
            return ActionResult::FailedTarget;
        }
        if (me.energy < cfg_.clearEnergy) {
            me.clearCharge.reset();
            return ActionResult::FailedResources;
        }
        if (me.clearCharge && me.clearCharge->target == target && me.clearCharge->lastStep == step_ - 1)
            ++me.clearCharge->count;
        else
            me.clearCharge = ClearCharge{target, 1, step_};
        me.clearCharge->lastStep = step_;
        if (me.clearCharge->count < 3) return ActionResult::Success;

        me.clearCharge.reset();
        me.energy -= cfg_.clearEnergy;
        const auto area = area_around(target, cfg_.clearRadius);
        auto victims = collect_victims(area, e);
        auto removed = devastate(area, victims);
        emit({.kind = EventKind::ClearTriggered,
              .entity = e,
              .team = me.team,
              .blocks = std::move(removed),
              .cell = target,
              .radius = cfg_.clearRadius,
              .victims = std::move(victims)});
        return ActionResult::Success;
    }

    ActionResult submit(EntityId e, const std::string& name) {
        TaskSpec* task = nullptr;
        for (auto& t : w_.tasks)
            if (t.name == name) task = &t;
        if (!task || task->submittedBy) return ActionResult::FailedTarget;
        if (step_ > task->deadline) return ActionResult::FailedDeadline;
        EntityState& me = entity(e);
        if (w_.terrain_at(me.pos) != Terrain::Goal) return ActionResult::FailedTarget;
        const auto held = w_.attachments_of(e);
        std::vector<BlockId> used;
        for (const Requirement& r : task->requirements) {
            auto it = std::find_if(held.begin(), held.end(), [&](const AttachedBlock& b) {
                return b.offset == r.pos && b.type == r.type;
            });
            if (it == held.end()) return ActionResult::FailedTarget;
            used.push_back(it->id);
        }
        for (BlockId id : used) erase_block(id);
        normalize();
        w_.reindex();
        task->submittedBy = me.team;
        w_.scores[static_cast<std::size_t>(me.team)] += task->reward;
        emit({.kind = EventKind::Submitted,
              .entity = e,
              .team = me.team,
              .blocks = std::move(used),
              .task = name,
              .reward = task->reward});
        return ActionResult::Success;
    }

    void fire_clear_events() {
        std::vector<ClearEvent> keep;
        for (const ClearEvent& ev : w_.pendingEvents) {
            if (ev.triggerStep != step_) {
                keep.push_back(ev);
                continue;
            }
            const auto area = area_around(ev.center, ev.radius);
            auto victims = collect_victims(area, -1);
            auto removed = devastate(area, victims);
            std::vector<Vec2> candidates;
            for (Vec2 c : area)
                if (w_.terrain_at(c) == Terrain::Empty && !w_.dispenser_at(c) && !w_.entity_at(c) &&
                    !w_.block_at(c))
                    candidates.push_back(c);
            for (int i = 0; i < cfg_.regenObstacles && !candidates.empty(); ++i) {
                const auto k = static_cast<std::size_t>(
                    w_.rng.uniform(0, static_cast<int>(candidates.size()) - 1));
                w_.terrain[w_.index(candidates[k])] = Terrain::Obstacle;
                candidates.erase(candidates.begin() + static_cast<std::ptrdiff_t>(k));
            }
            emit({.kind = EventKind::ClearEventFired,
                  .blocks = std::move(removed),
                  .cell = ev.center,
                  .radius = ev.radius,
                  .victims = std::move(victims)});
        }
        w_.pendingEvents = std::move(keep);
    }

    void spawn_clear_event() {
        if (cfg_.clearEventRate <= 0.0 || !w_.rng.chance(cfg_.clearEventRate)) return;
        ClearEvent ev;
        ev.center = random_cell(w_);
        ev.radius = w_.rng.uniform(1, cfg_.clearEventMaxRadius);
        ev.triggerStep = step_ + std::max(1, cfg_.clearEventWarning);
        w_.pendingEvents.push_back(ev);
    }

    void spawn_task() {
        const auto active = std::count_if(w_.tasks.begin(), w_.tasks.end(),
                                          [&](const TaskSpec& t) { return t.active(step_); });
        if (active >= cfg_.maxActiveTasks || cfg_.taskRate <= 0.0 || !w_.rng.chance(cfg_.taskRate))
            return;
        w_.tasks.push_back(generate_task(w_, cfg_));
        emit({.kind = EventKind::TaskCreated, .task = w_.tasks.back().name});
    }

    void erase_block(BlockId id) {
        auto it = w_.blocks.find(id);
        if (it == w_.blocks.end()) return;
        for (BlockId n : it->second.links) w_.blocks.at(n).links.erase(id);
        w_.blocks.erase(it);
    }

    // Drops links inside components that no entity holds any more.
    void normalize() {
        std::set<BlockId> seen;
        for (auto& [id, b] : w_.blocks) {
            if (seen.count(id)) continue;
            std::vector<BlockId> comp{id};
            seen.insert(id);
            bool held = false;
            for (std::size_t i = 0; i < comp.size(); ++i) {
                const Block& cur = w_.blocks.at(comp[i]);
                held = held || !cur.anchors.empty();
                for (BlockId n : cur.links)
                    if (seen.insert(n).second) comp.push_back(n);
            }
            if (!held)
                for (BlockId c : comp) w_.blocks.at(c).links.clear();
        }
    }

    void emit(WorldEvent ev) {
        ev.step = step_;
        out_.events.push_back(std::move(ev));
    }

    WorldState& w_;
    const SimConfig& cfg_;
    const std::vector<ActionRequest>& actions_;
    const int step_;
    std::vector<ActionRequest> effective_;
    std::vector<bool> decided_;
    StepOutcome out_;
};

}  // namespace

StepOutcome apply_step(WorldState& world, const SimConfig& config,
                       const std::vector<ActionRequest>& actions) {
    return StepResolver(world, config, actions).run();
}

}  // namespace assemble
