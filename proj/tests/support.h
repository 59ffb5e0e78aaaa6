#pragma once

// Independent oracles and scripted scenarios shared by the unit and acceptance tests.
// The oracles deliberately avoid the library's own search and bookkeeping code.

#include <algorithm>
#include <deque>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <vector>

#include "assemble/error.h"
#include "assemble/metrics.h"
#include "assemble/replay.h"
#include "assemble/runner.h"
#include "assemble/task_plan.h"

namespace oracle {

using namespace assemble;

// Each block touches the agent (origin) or a block placed before it.
inline bool sequentially_buildable(const std::vector<Requirement>& order) {
    std::set<std::pair<int, int>> placed{{0, 0}};
    for (const auto& r : order) {
        if (placed.count({r.pos.x, r.pos.y})) return false;
        const int dx[] = {1, -1, 0, 0}, dy[] = {0, 0, 1, -1};
        bool touches = false;
        for (int k = 0; k < 4; ++k) touches |= placed.count({r.pos.x + dx[k], r.pos.y + dy[k]}) > 0;
        if (!touches) return false;
        placed.insert({r.pos.x, r.pos.y});
    }
    return true;
}

inline bool same_multiset(std::vector<Requirement> a, std::vector<Requirement> b) {
    const auto key = [](const Requirement& r) { return std::tuple(r.pos.x, r.pos.y, r.type); };
    const auto less = [&](const Requirement& x, const Requirement& y) { return key(x) < key(y); };
    std::sort(a.begin(), a.end(), less);
    std::sort(b.begin(), b.end(), less);
    return a == b;
}

// Tries every ordering.
inline bool some_order_buildable(std::vector<Requirement> reqs) {
    std::vector<std::size_t> idx(reqs.size());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    do {
        std::vector<Requirement> order;
        for (auto i : idx) order.push_back(reqs[i]);
        if (sequentially_buildable(order)) return true;
    } while (std::next_permutation(idx.begin(), idx.end()));
    return false;
}

// Plain breadth-first search on a boolean grid; `open[y][x]`.
inline std::optional<int> grid_bfs(const std::vector<std::vector<bool>>& open, Vec2 from, Vec2 to) {
    const int h = static_cast<int>(open.size()), w = static_cast<int>(open[0].size());
    const auto inside = [&](Vec2 c) { return c.x >= 0 && c.y >= 0 && c.x < w && c.y < h; };
    if (!inside(from) || !inside(to) || !open[to.y][to.x]) return std::nullopt;
    std::vector<std::vector<int>> dist(h, std::vector<int>(w, -1));
    std::deque<Vec2> q{from};
    dist[from.y][from.x] = 0;
    while (!q.empty()) {
        Vec2 c = q.front();
        q.pop_front();
        if (c == to) return dist[c.y][c.x];
        const Vec2 steps[] = {{0, -1}, {1, 0}, {0, 1}, {-1, 0}};
        for (Vec2 s : steps) {
            Vec2 n{c.x + s.x, c.y + s.y};
            if (inside(n) && open[n.y][n.x] && dist[n.y][n.x] < 0) {
                dist[n.y][n.x] = dist[c.y][c.x] + 1;
                q.push_back(n);
            }
        }
    }
    return std::nullopt;
}

// What a cell of the world contains, read straight from the state vectors.
struct CellTruth {
    CellTerrain terrain = CellTerrain::Obstacle;
    std::vector<Thing> things;
    bool operator==(const CellTruth&) const = default;
};

struct Snapshot {
    int width = 0, height = 0;
    std::vector<CellTruth> cells;

    CellTruth at(Vec2 c) const {
        if (c.x < 0 || c.y < 0 || c.x >= width || c.y >= height) return {};
        return cells[static_cast<std::size_t>(c.y * width + c.x)];
    }
};

inline Snapshot snapshot(const WorldState& w) {
    Snapshot s{w.width, w.height, {}};
    s.cells.resize(static_cast<std::size_t>(w.width * w.height));
    for (int y = 0; y < w.height; ++y)
        for (int x = 0; x < w.width; ++x) {
            auto& c = s.cells[static_cast<std::size_t>(y * w.width + x)];
            const Terrain t = w.terrain[static_cast<std::size_t>(y * w.width + x)];
            c.terrain = t == Terrain::Obstacle ? CellTerrain::Obstacle
                        : t == Terrain::Goal   ? CellTerrain::Goal
                                               : CellTerrain::Empty;
            if (auto d = w.dispensers[static_cast<std::size_t>(y * w.width + x)])
                c.things.push_back({ThingKind::Dispenser, *d});
        }
    for (const auto& [id, b] : w.blocks)
        s.cells[static_cast<std::size_t>(b.pos.y * w.width + b.pos.x)].things.push_back({ThingKind::Block, b.type});
    for (const auto& e : w.entities)
        s.cells[static_cast<std::size_t>(e.pos.y * w.width + e.pos.x)].things.push_back({ThingKind::Entity, e.team});
    for (auto& c : s.cells) std::sort(c.things.begin(), c.things.end());
    return s;
}

// Ground-truth attachments as (offset, type), sorted like the model's items().
inline std::vector<std::pair<Vec2, BlockType>> truth_attachments(const WorldState& w, EntityId e) {
    std::vector<std::pair<Vec2, BlockType>> out;
    for (const auto& a : w.attachments_of(e)) out.emplace_back(a.offset, a.type);
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace oracle

namespace scenario {

using namespace assemble;

inline SimConfig scripted_config(std::vector<std::string> teams, int perTeam, std::vector<Role> roles) {
    SimConfig c;
    c.seed = 11;
    c.teams = std::move(teams);
    c.entitiesPerTeam = perTeam;
    c.roles = std::move(roles);
    c.initialTasks = 0;
    c.taskRate = 0;
    c.clearEventRate = 0;
    return c;
}

// Two builders, neighbouring dispensers, one goal cluster and one two-block task.
inline std::pair<SimConfig, WorldState> two_builders() {
    auto cfg = scripted_config({"A"}, 2, {Role::Builder, Role::Builder});
    cfg.width = cfg.height = 20;
    cfg.maxSteps = 300;
    WorldState w = WorldState::empty(20, 20, 1, cfg.seed);
    for (int y = 11; y <= 13; ++y)
        for (int x = 11; x <= 13; ++x) w.set_terrain({x, y}, Terrain::Goal);
    w.set_dispenser({6, 6}, 0);
    w.set_dispenser({7, 6}, 1);
    w.add_entity(0, "A1", {4, 8}, cfg.energyStart);
    w.add_entity(0, "A2", {8, 9}, cfg.energyStart);
    w.tasks.push_back({"task0", 0, 250, 40, {{{0, 1}, 0}, {{0, 2}, 1}}, std::nullopt});
    w.nextTaskIndex = 1;
    return {cfg, w};
}

// An attacker of team A and a parked enemy of team B holding a block on goal terrain.
inline std::pair<SimConfig, WorldState> parked_enemy() {
    auto cfg = scripted_config({"A", "B"}, 1, {Role::Attacker});
    cfg.width = cfg.height = 15;
    cfg.maxSteps = 60;
    WorldState w = WorldState::empty(15, 15, 2, cfg.seed);
    for (int y = 6; y <= 8; ++y)
        for (int x = 8; x <= 10; ++x) w.set_terrain({x, y}, Terrain::Goal);
    w.add_entity(0, "A1", {3, 7}, cfg.energyStart);
    const EntityId enemy = w.add_entity(1, "B1", {9, 7}, cfg.energyStart);
    w.anchor(enemy, w.add_block(0, {9, 8}));
    return {cfg, w};
}

// One task, two requirements: attach@100 (master), attach@110 (slave), connect@140, submit@142.
inline ReplayTrace synthetic_metrics_trace(bool withSubmit = true) {
    ReplayTrace t;
    t.header.config = scripted_config({"A", "B"}, 2, {Role::Builder, Role::Builder});
    WorldState w = WorldState::empty(10, 10, 2);
    w.add_entity(0, "A1", {1, 1});
    w.add_entity(0, "A2", {3, 1});
    w.add_entity(1, "B1", {8, 8});
    w.add_entity(1, "B2", {8, 6});
    t.header.world = w;
    std::vector<int> scores{0, 0};
    for (int s = 0; s <= 150; ++s) {
        StepRecord r;
        r.step = s;
        for (const auto& e : w.entities) {
            AgentRecord a;
            a.name = e.name;
            a.percept.tasks = {{"task0", 200, 20, {{{0, 1}, 0}, {{0, 2}, 1}}, s > 142 && withSubmit}};
            r.agents.push_back(a);
        }
        if (s == 100) r.events.push_back({.kind = EventKind::Attached, .step = s, .entity = 0, .team = 0, .blocks = {7}});
        if (s == 110) r.events.push_back({.kind = EventKind::Attached, .step = s, .entity = 1, .team = 0, .blocks = {9}});
        if (s == 120) r.events.push_back({.kind = EventKind::Attached, .step = s, .entity = 2, .team = 1, .blocks = {12}});
        if (s == 140) {
            r.events.push_back(
                {.kind = EventKind::Connected, .step = s, .entity = 0, .partner = 1, .team = 0, .blocks = {7, 9}});
            r.taskEvents.push_back({s, 0, "assembled", "task0", {"A1"}, ""});
        }
        if (s == 142 && withSubmit) {
            r.events.push_back({.kind = EventKind::Submitted,
                                .step = s,
                                .entity = 0,
                                .team = 0,
                                .blocks = {7, 9},
                                .task = "task0",
                                .reward = 20});
            scores[0] += 20;
        }
        r.scores = scores;
        t.steps.push_back(std::move(r));
    }
    return t;
}

// Random walkers: every agent moves in a random direction (or waits) each step.
inline std::map<EntityId, ActionRequest> random_walk(const WorldState& w, std::mt19937& rng) {
    std::map<EntityId, ActionRequest> out;
    for (const auto& e : w.entities) {
        const int r = static_cast<int>(rng() % 10);
        out[e.id] = r < 8 ? ActionRequest::move(kDirections[static_cast<std::size_t>(r % 4)]) : ActionRequest::skip();
    }
    return out;
}

struct ScriptStats {
    int steps = 0;
    int checks = 0;
    int mismatches = 0;
    std::string firstMismatch;
    int attaches = 0, detaches = 0, connects = 0, submits = 0, clears = 0, clearEvents = 0;
};

// A small arena with dispensers, goal terrain and many one-block tasks, in which six
// agents act at random. Connects are proposed to pairs whose blocks touch, and each
// connect is told which blocks it brings in (as a coordinating builder would know).
inline std::pair<SimConfig, WorldState> arena(std::uint64_t seed) {
    auto cfg = scripted_config({"A", "B"}, 4, {Role::Idle, Role::Idle, Role::Idle, Role::Idle});
    cfg.seed = seed;
    cfg.width = cfg.height = 16;
    cfg.clearEventRate = 0.05;
    cfg.clearEventMaxRadius = 2;
    cfg.clearEventWarning = 3;
    cfg.clearEnergy = 10;
    cfg.energyRegen = 2;
    WorldState w = WorldState::empty(16, 16, 2, seed);
    for (int y = 6; y <= 9; ++y)
        for (int x = 6; x <= 9; ++x) w.set_terrain({x, y}, Terrain::Goal);
    const std::pair<Vec2, BlockType> dispensers[] = {{{3, 3}, 0}, {{12, 3}, 1}, {{3, 12}, 1},
                                                     {{12, 12}, 0}, {{5, 7}, 0}, {{10, 8}, 1}};
    for (const auto& [c, t] : dispensers) w.set_dispenser(c, t);
    const Vec2 starts[] = {{4, 4}, {6, 5}, {9, 10}, {11, 11}, {4, 10}, {11, 5}};
    for (int i = 0; i < 6; ++i) {
        const int team = i < 4 ? 0 : 1;
        w.add_entity(team, std::string(team == 0 ? "A" : "B") + std::to_string(team == 0 ? i + 1 : i - 3), starts[i],
                     cfg.energyStart);
    }
    for (int i = 0; i < 40; ++i)
        w.tasks.push_back({"s" + std::to_string(i), 0, 100000, 1, {{{0, 1}, i % 2}}, std::nullopt});
    w.nextTaskIndex = 40;
    return {cfg, w};
}

inline ScriptStats attachment_script(std::uint64_t seed, int steps) {
    auto [cfg, world] = arena(seed);
    Match m(cfg, world);
    std::mt19937 rng(static_cast<std::uint32_t>(seed * 7919 + 1));
    std::map<EntityId, std::pair<Vec2, int>> clearing;  // absolute target, steps left
    ScriptStats st;
    const auto dir = [&] { return kDirections[rng() % 4]; };

    for (int s = 0; s < steps; ++s) {
        const WorldState& w = m.world();
        std::vector<std::vector<std::pair<Vec2, BlockType>>> truth;
        for (const auto& e : w.entities) truth.push_back(oracle::truth_attachments(w, e.id));

        std::map<EntityId, ActionRequest> act;
        std::map<EntityId, std::vector<GainedBlock>> gained;
        for (std::size_t i = 0; i < w.entities.size(); ++i)
            for (std::size_t j = i + 1; j < w.entities.size(); ++j) {
                const auto& a = w.entities[i];
                const auto& b = w.entities[j];
                if (act.count(a.id) || act.count(b.id) || a.disabled(w.step) || b.disabled(w.step)) continue;
                const auto ca = w.component_of(a.id), cb = w.component_of(b.id);
                if (std::any_of(ca.begin(), ca.end(), [&](BlockId x) { return cb.count(x) > 0; })) continue;
                // Only exclusively held structures are joined, as in the builder protocol: a
                // third holder would gain blocks without any percept or message saying so.
                const auto exclusive = [&](const std::set<BlockId>& comp, EntityId self) {
                    for (BlockId x : comp)
                        for (EntityId h : w.blocks.at(x).anchors)
                            if (h != self) return false;
                    return true;
                };
                if (!exclusive(ca, a.id) || !exclusive(cb, b.id)) continue;
                std::optional<std::pair<BlockId, BlockId>> joint;
                for (BlockId x : ca)
                    for (BlockId y : cb)
                        if (!joint && manhattan(w.blocks.at(x).pos, w.blocks.at(y).pos) == 1) joint = {x, y};
                if (!joint || rng() % 2) continue;
                const Block& ba = w.blocks.at(joint->first);
                const Block& bb = w.blocks.at(joint->second);
                act[a.id] = ActionRequest::connect(b.id, ba.pos - a.pos);
                act[b.id] = ActionRequest::connect(a.id, bb.pos - b.pos);
                // A connect brings in what hangs off the partner's block through links.
                const auto into = [&](const EntityState& self, BlockId first) {
                    std::vector<GainedBlock> g;
                    std::set<BlockId> seen{first};
                    std::deque<BlockId> q{first};
                    while (!q.empty()) {
                        const Block& x = w.blocks.at(q.front());
                        q.pop_front();
                        g.push_back({x.pos - self.pos, x.type});
                        for (BlockId l : x.links)
                            if (seen.insert(l).second) q.push_back(l);
                    }
                    return g;
                };
                gained[a.id] = into(a, joint->second);
                gained[b.id] = into(b, joint->first);
            }

        for (const auto& e : w.entities) {
            if (act.count(e.id)) continue;
            if (auto c = clearing.find(e.id); c != clearing.end()) {
                act[e.id] = ActionRequest::clear(c->second.first - e.pos);
                if (--c->second.second == 0) clearing.erase(c);
                continue;
            }
            const int r = static_cast<int>(rng() % 100);
            const auto adjacent = [&](auto pred) {
                std::vector<Direction> out;
                for (Direction k : kDirections)
                    if (pred(e.pos + unit(k))) out.push_back(k);
                return out;
            };
            if (r < 25) {
                // Drift towards the goal area half of the time so that agents meet.
                Direction d = dir();
                if (rng() % 2) {
                    const Vec2 to = Vec2{7, 7} - e.pos;
                    if (to.x != 0 && (to.y == 0 || rng() % 2)) d = to.x > 0 ? Direction::E : Direction::W;
                    else if (to.y != 0) d = to.y > 0 ? Direction::S : Direction::N;
                }
                act[e.id] = ActionRequest::move(d);
            } else if (r < 35) {
                act[e.id] = ActionRequest::rotate(rng() % 2 ? Rotation::Cw : Rotation::Ccw);
            } else if (r < 48) {
                auto ds = adjacent([&](Vec2 c) { return w.dispenser_at(c) && !w.block_at(c); });
                act[e.id] = ActionRequest::request(ds.empty() ? dir() : ds[rng() % ds.size()]);
            } else if (r < 68) {
                auto ds = adjacent([&](Vec2 c) { return w.block_at(c) != nullptr; });
                act[e.id] = ActionRequest::attach(ds.empty() ? dir() : ds[rng() % ds.size()]);
            } else if (r < 72) {
                act[e.id] = ActionRequest::detach(dir());
            } else if (r < 74) {
                Vec2 off{static_cast<int>(rng() % 5) - 2, static_cast<int>(rng() % 5) - 2};
                if (off == Vec2{} || manhattan(off) > 2) off = {0, 1};
                clearing[e.id] = {e.pos + off, 2};
                act[e.id] = ActionRequest::clear(off);
            } else if (r < 84) {
                std::string task = "s" + std::to_string(rng() % 40);
                for (const auto& a : w.attachments_of(e.id))
                    if (a.offset == Vec2{0, 1})
                        for (const auto& t : w.tasks)
                            if (!t.submittedBy && t.requirements[0].type == a.type) {
                                task = t.name;
                                break;
                            }
                act[e.id] = ActionRequest::submit(task);
            } else {
                act[e.id] = ActionRequest::skip();
            }
        }

        const StepRecord& rec = m.step(act);
        for (std::size_t i = 0; i < rec.agents.size(); ++i) {
            ++st.checks;
            if (rec.agents[i].attachments != truth[i]) {
                if (!st.mismatches)
                    st.firstMismatch = "seed " + std::to_string(seed) + " step " + std::to_string(rec.step) + " " +
                                       rec.agents[i].name;
                ++st.mismatches;
            }
        }
        for (const auto& e : rec.events) {
            st.attaches += e.kind == EventKind::Attached;
            st.detaches += e.kind == EventKind::Detached;
            st.connects += e.kind == EventKind::Connected;
            st.submits += e.kind == EventKind::Submitted;
            st.clears += e.kind == EventKind::ClearTriggered;
            st.clearEvents += e.kind == EventKind::ClearEventFired;
        }
        for (auto& [id, g] : gained) {
            const auto& ent = m.world().entities[static_cast<std::size_t>(id)];
            m.team(ent.team).pipeline().register_gained(ent.name, g);
        }
        ++st.steps;
    }
    return st;
}

}  // namespace scenario
