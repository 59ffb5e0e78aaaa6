#include <doctest.h>

#include <chrono>
#include <thread>

#include "support.h"

using namespace assemble;

namespace {

SimConfig solo(int vision = 5) {
    auto c = scenario::scripted_config({"A"}, 1, {Role::Idle});
    c.visionRadius = vision;
    return c;
}

const PerceptPipeline::Hook kSync = [](std::vector<AgentWorkspace*>& a, int step) { synchronize_team(a, step); };

// One agent driven by hand: world percepts in, pipeline container out.
struct Rig {
    SimConfig cfg;
    WorldState w;
    PerceptPipeline p{std::vector<std::string>{"A1"}};
    std::optional<ActionRequest> last;
    std::optional<ActionResult> lastResult;

    void ingest() { p.ingest({{"A1", compute_percepts(w, cfg, 0, last, lastResult)}}); }
    void act(const ActionRequest& a) {
        auto out = apply_step(w, cfg, {a});
        last = a;
        lastResult = out.results[0];
        ingest();
    }
    std::shared_ptr<const AgentContainer> c() const { return p.latest("A1"); }
};

}  // namespace

TEST_CASE("map model stamps the vision diamond with the observation step") {
    auto cfg = solo(2);
    auto w = WorldState::empty(10, 10, 1);
    w.add_entity(0, "A1", {4, 4});
    w.set_terrain({5, 4}, Terrain::Obstacle);
    w.set_dispenser({4, 3}, 0);
    MapModel m("A1");
    m.update_from_percepts(compute_percepts(w, cfg, 0), {0, 0});
    CHECK(m.size() == 13);
    CHECK(m.terrain_at({1, 0}) == CellTerrain::Obstacle);
    CHECK(m.terrain_at({3, 0}) == CellTerrain::Unknown);
    CHECK(m.at({0, -1})->has(ThingKind::Dispenser, 0));
    CHECK(m.at({0, 0})->has(ThingKind::Entity, 0));
    CHECK(m.at({0, 0})->source == "A1");
    CHECK_FALSE(traversable(m, {1, 0}));
    CHECK_FALSE(traversable(m, {0, -1}));
    CHECK_FALSE(traversable(m, {5, 5}));  // unknown
    CHECK(traversable(m, {-1, 0}));
    CHECK(traversable(m, {0, 0}, false, {{0, 0}}));
}

TEST_CASE("merge keeps the newer observation, local on ties") {
    MapModel m("A1");
    auto cfg = solo(1);
    auto w = WorldState::empty(6, 6, 1);
    w.add_entity(0, "A1", {2, 2});
    w.step = 3;
    m.update_from_percepts(compute_percepts(w, cfg, 0), {0, 0});

    const Vec2 t{10, 0};  // remote frame + t = local frame
    MapPercept newer{{-9, 0}, CellTerrain::Obstacle, {}, 5, "A2"};
    MapPercept older{{-10, 1}, CellTerrain::Obstacle, {}, 2, "A2"};
    MapPercept tie{{-10, -1}, CellTerrain::Goal, {}, 3, "A2"};
    MapPercept fresh{{0, 0}, CellTerrain::Goal, {}, 1, "A2"};
    CHECK(m.merge_remote({newer, older, tie, fresh}, t) == 2);
    CHECK(m.terrain_at({1, 0}) == CellTerrain::Obstacle);
    CHECK(m.at({1, 0})->source == "A2");
    CHECK(m.terrain_at({0, 1}) == CellTerrain::Empty);
    CHECK(m.terrain_at({0, -1}) == CellTerrain::Empty);
    CHECK(m.terrain_at({10, 0}) == CellTerrain::Goal);
    CHECK(m.current_step() == 3);
}

TEST_CASE("shortest path agrees with a plain grid search") {
    std::mt19937 rng(3);
    for (int round = 0; round < 20; ++round) {
        auto cfg = solo(40);
        auto w = WorldState::empty(14, 14, 1);
        std::vector<std::vector<bool>> open(14, std::vector<bool>(14, true));
        const Vec2 start{static_cast<int>(rng() % 14), static_cast<int>(rng() % 14)};
        for (int y = 0; y < 14; ++y)
            for (int x = 0; x < 14; ++x)
                if (Vec2{x, y} != start && rng() % 100 < 28) {
                    w.set_terrain({x, y}, Terrain::Obstacle);
                    open[y][x] = false;
                }
        w.add_entity(0, "A1", start);
        MapModel m("A1");
        m.update_from_percepts(compute_percepts(w, cfg, 0), {0, 0});
        for (int k = 0; k < 15; ++k) {
            const Vec2 goal{static_cast<int>(rng() % 14), static_cast<int>(rng() % 14)};
            if (goal == start) continue;
            const auto want = oracle::grid_bfs(open, start, goal);
            const auto path = shortest_path(m, {0, 0}, goal - start);
            REQUIRE(want.has_value() == path.has_value());
            CHECK(bfs_distance(m, {0, 0}, goal - start) == want);
            if (!path) continue;
            CHECK(static_cast<int>(path->size()) == *want);
            Vec2 at = start;
            for (Direction d : *path) {
                at += unit(d);
                REQUIRE(open[at.y][at.x]);
            }
            CHECK(at == goal);
        }
    }
}

TEST_CASE("stale entity sightings do not block paths") {
    // The owner itself is far away, observing at step 5.
    auto cfg = solo(1);
    auto w = WorldState::empty(40, 5, 1);
    w.add_entity(0, "A1", {30, 2});
    w.step = 5;
    MapModel m("A1");
    m.update_from_percepts(compute_percepts(w, cfg, 0), {0, 0});
    std::vector<MapPercept> cells;
    for (int x = -25; x <= -20; ++x) cells.push_back({{x, 0}, CellTerrain::Empty, {}, 1, "A2"});
    cells[2].things = {{ThingKind::Entity, 0}};
    cells[4].things = {{ThingKind::Entity, 1}};
    cells[4].lastSeen = 5;
    m.merge_remote(cells, {});
    CHECK(traversable(m, {-23, 0}));
    CHECK_FALSE(traversable(m, {-21, 0}));
    CHECK(traversable(m, {-21, 0}, true));
    CHECK(shortest_path(m, {-25, 0}, {-22, 0})->size() == 3);
    CHECK_FALSE(shortest_path(m, {-25, 0}, {-20, 0}).has_value());
}

TEST_CASE("explore heads for the open side of a corridor") {
    auto cfg = solo(3);
    auto w = WorldState::empty(30, 30, 1);
    for (int y = 0; y < 30; ++y)
        for (int x = 0; x < 30; ++x)
            if (y != 15) w.set_terrain({x, y}, Terrain::Obstacle);
    w.add_entity(0, "A1", {1, 15});
    MapModel m("A1");
    m.update_from_percepts(compute_percepts(w, cfg, 0), {0, 0});
    auto choice = explore_direction(m, {0, 0}, 5);
    CHECK(choice.dir == Direction::E);
    CHECK_FALSE(choice.mapComplete);

    // Walled in: nothing reachable to explore, so the fixed fallback.
    auto w2 = WorldState::empty(12, 12, 1);
    for (Direction d : kDirections) w2.set_terrain(Vec2{5, 5} + unit(d), Terrain::Obstacle);
    w2.add_entity(0, "A1", {5, 5});
    MapModel m2("A1");
    m2.update_from_percepts(compute_percepts(w2, cfg, 0), {0, 0});
    choice = explore_direction(m2, {0, 0}, 5);
    CHECK(choice.mapComplete);
    CHECK(choice.dir == Direction::E);
}

TEST_CASE("pairing aborts ambiguous sightings") {
    auto res = pair_reports({{"A1", 4, {3, 1}}, {"A2", 4, {-3, -1}}});
    REQUIRE(res.pairs.size() == 1);
    CHECK(res.pairs[0].a.reporter == "A1");
    CHECK(res.aborted.empty());

    res = pair_reports({{"A1", 4, {1, 0}}, {"A3", 4, {1, 0}}, {"A2", 4, {-1, 0}}, {"A4", 4, {0, 2}}, {"A5", 4, {0, -2}}});
    CHECK(res.aborted.size() == 3);
    REQUIRE(res.pairs.size() == 1);
    CHECK(res.pairs[0].a.reporter == "A4");
    CHECK(res.pairs[0].b.reporter == "A5");

    res = pair_reports({{"A1", 4, {3, 1}}, {"A2", 4, {-3, -1}}}, [](auto&, auto&) { return true; });
    CHECK(res.pairs.empty());
}

TEST_CASE("identification translates between frames and shares maps") {
    auto cfg = scenario::scripted_config({"A"}, 2, {Role::Idle, Role::Idle});
    auto w = WorldState::empty(14, 8, 1);
    w.add_entity(0, "A1", {2, 2});
    w.add_entity(0, "A2", {5, 3});
    w.set_terrain({9, 3}, Terrain::Obstacle);
    PerceptPipeline p({"A1", "A2"});
    p.ingest({{"A1", compute_percepts(w, cfg, 0)}, {"A2", compute_percepts(w, cfg, 1)}}, kSync);
    auto a = p.get_container("A1", 0), b = p.get_container("A2", 0);
    REQUIRE(a->identified.count("A2"));
    const Vec2 t = a->identified.at("A2");
    CHECK(t == Vec2{3, 1});
    CHECK(b->identified.at("A1") == -t);
    CHECK(compute_translation({0, 0}, {3, 1}, {0, 0}) == t);
    // A point in A2's frame maps into A1's frame and back.
    const Vec2 q{4, 0};
    CHECK(q + t + b->identified.at("A1") == q);
    CHECK(a->map->terrain_at(q + t) == CellTerrain::Obstacle);
    CHECK(manhattan(q + t) > cfg.visionRadius);
}

TEST_CASE("attachment model follows attach, rotate and detach") {
    Rig r{solo(), WorldState::empty(10, 10, 1)};
    r.w.add_entity(0, "A1", {5, 5});
    r.w.add_block(1, {5, 6});
    r.ingest();
    r.act(ActionRequest::attach(Direction::S));
    CHECK(r.c()->attachments.items() == std::vector<std::pair<Vec2, BlockType>>{{{0, 1}, 1}});
    r.act(ActionRequest::rotate(Rotation::Cw));
    CHECK(r.c()->attachments.items() == std::vector<std::pair<Vec2, BlockType>>{{{-1, 0}, 1}});
    r.act(ActionRequest::attach(Direction::E));  // nothing there
    CHECK(r.c()->attachments.size() == 1);
    r.act(ActionRequest::detach(Direction::W));
    CHECK(r.c()->attachments.empty());
}

TEST_CASE("attachment model drops blocks that lost their flag") {
    AttachmentModel m;
    Rig r{solo(), WorldState::empty(10, 10, 1)};
    r.w.add_entity(0, "A1", {5, 5});
    r.w.anchor(0, r.w.add_block(0, {5, 6}));
    auto before = compute_percepts(r.w, r.cfg, 0);
    m.on_action(ActionRequest::attach(Direction::S), ActionResult::Success, before);
    CHECK(m.holds({0, 1}));
    r.w.blocks.clear();
    r.w.reindex();
    CHECK(m.refresh(compute_percepts(r.w, r.cfg, 0)) == std::vector<Vec2>{{0, 1}});
    CHECK(m.empty());
}

TEST_CASE("blocked moves and rotations account for held blocks") {
    Rig r{solo(), WorldState::empty(10, 10, 1)};
    r.w.add_entity(0, "A1", {5, 5});
    r.w.anchor(0, r.w.add_block(0, {5, 6}));
    r.w.set_terrain({5, 7}, Terrain::Obstacle);
    r.w.set_terrain({4, 5}, Terrain::Obstacle);
    const auto raw = compute_percepts(r.w, r.cfg, 0);
    AttachmentModel m;
    m.on_action(ActionRequest::attach(Direction::S), ActionResult::Success, raw);
    CHECK(blocked_moves(m, raw) == std::set<Direction>{Direction::S, Direction::W});
    CHECK(blocked_rotations(m, raw) == std::set<Rotation>{Rotation::Cw});
}

TEST_CASE("move_with_rotation turns the load out of the way") {
    Rig r{solo(), WorldState::empty(10, 10, 1)};
    r.w.add_entity(0, "A1", {5, 5});
    r.w.add_block(0, {5, 6});
    r.w.set_terrain({5, 7}, Terrain::Obstacle);
    r.ingest();
    r.act(ActionRequest::attach(Direction::S));
    CHECK(move_with_rotation(*r.c(), Direction::E) == ActionRequest::move(Direction::E));
    CHECK(move_with_rotation(*r.c(), Direction::S) == ActionRequest::rotate(Rotation::Cw));
    r.w.set_terrain({4, 5}, Terrain::Obstacle);
    r.act(ActionRequest::skip());
    CHECK(move_with_rotation(*r.c(), Direction::S) == ActionRequest::rotate(Rotation::Ccw));
}

TEST_CASE("unstuck clears a wall when caged") {
    Rig r{solo(2), WorldState::empty(12, 12, 1)};
    r.w.add_entity(0, "A1", {5, 5});
    for (Direction d : kDirections) r.w.set_terrain(Vec2{5, 5} + unit(d), Terrain::Obstacle);
    r.ingest();
    std::optional<Vec2> hold;
    auto a = unstuck_decide(*r.c(), hold, r.cfg);
    REQUIRE(a.has_value());
    CHECK(a->type == ActionType::Clear);
    CHECK(r.w.terrain_at(Vec2{5, 5} + a->offset) == Terrain::Obstacle);
    REQUIRE(hold.has_value());
    CHECK(unstuck_decide(*r.c(), hold, r.cfg) == a);

    Rig free{solo(2), WorldState::empty(12, 12, 1)};
    free.w.add_entity(0, "A1", {5, 5});
    free.ingest();
    std::optional<Vec2> none;
    CHECK_FALSE(unstuck_decide(*free.c(), none, free.cfg).has_value());
}

TEST_CASE("planner orders requirements outward from the agent") {
    CHECK(plan_requirements({{{1, 2}, 0}, {{0, 2}, 0}, {{0, 1}, 1}}) ==
          OrderedPlan{{{0, 1}, 1}, {{0, 2}, 0}, {{1, 2}, 0}});
    const std::vector<Requirement> tee{{{0, 2}, 1}, {{-1, 1}, 0}, {{1, 1}, 1}, {{0, 1}, 0}};
    const auto plan = plan_requirements(tee);
    CHECK(plan == OrderedPlan{{{0, 1}, 0}, {{1, 1}, 1}, {{-1, 1}, 0}, {{0, 2}, 1}});
    CHECK(oracle::sequentially_buildable(plan));
    CHECK(oracle::same_multiset(plan, tee));
    CHECK_THROWS_AS(plan_requirements({{{0, 1}, 0}, {{0, 3}, 0}}), Error);
    CHECK_THROWS_AS(plan_requirements({{{1, 1}, 0}}), Error);
}

TEST_CASE("sub-teams are greedy maximum cliques") {
    // Brute force over subsets, smallest sorted member list among the largest.
    const auto brute = [](std::vector<std::string> names, const IdentifiedFn& f) {
        std::sort(names.begin(), names.end());
        std::vector<std::vector<std::string>> out;
        while (!names.empty()) {
            std::vector<std::string> best;
            for (unsigned mask = 1; mask < (1u << names.size()); ++mask) {
                std::vector<std::string> s;
                for (std::size_t i = 0; i < names.size(); ++i)
                    if (mask & (1u << i)) s.push_back(names[i]);
                bool clique = true;
                for (std::size_t i = 0; i < s.size() && clique; ++i)
                    for (std::size_t j = i + 1; j < s.size() && clique; ++j) clique = f(s[i], s[j]);
                if (clique && (s.size() > best.size() || (s.size() == best.size() && s < best))) best = s;
            }
            for (const auto& n : best) names.erase(std::find(names.begin(), names.end(), n));
            out.push_back(best);
        }
        return out;
    };
    std::mt19937 rng(17);
    for (int round = 0; round < 200; ++round) {
        const int n = 1 + static_cast<int>(rng() % 8);
        std::vector<std::string> names;
        for (int i = 0; i < n; ++i) names.push_back("A" + std::to_string(i + 1));
        std::set<std::pair<std::string, std::string>> edges;
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j)
                if (rng() % 100 < 55) edges.insert({names[i], names[j]});
        const IdentifiedFn f = [&](const std::string& a, const std::string& b) {
            return edges.count({std::min(a, b), std::max(a, b)}) > 0;
        };
        CHECK(form_subteams(names, f) == brute(names, f));
    }
}

TEST_CASE("tasks go to sub-teams large enough, biggest first") {
    const std::vector<TaskView> tasks{{"small", 300, 10, {{{0, 1}, 0}}, false},
                                      {"big", 300, 30, {{{0, 1}, 0}, {{0, 2}, 1}, {{1, 2}, 0}}, false},
                                      {"mid", 300, 20, {{{0, 1}, 0}, {{0, 2}, 1}}, false},
                                      {"tight", 40, 20, {{{0, 1}, 0}, {{0, 2}, 1}}, false}};
    const auto got = assign_tasks({{"A3", "A1"}, {"A2"}}, tasks, 0, 60);
    REQUIRE(got.size() == 3);
    CHECK(got[0] == TaskAssignment{"A1", "mid", {{0, 1}, 0}});
    CHECK(got[1] == TaskAssignment{"A3", "mid", {{0, 2}, 1}});
    CHECK(got[2] == TaskAssignment{"A2", "small", {{0, 1}, 0}});
    CHECK(is_master(got[0]));
    CHECK(assign_tasks({{"A2"}}, tasks, 0, 60, {"small"}).empty());

    auto mon = monitor_assignments(got, {tasks[2]}, 301);
    CHECK(mon.kept.empty());
    CHECK(mon.cancelled.size() == 3);
    mon = monitor_assignments(got, tasks, 10);
    CHECK(mon.kept.size() == 3);
}

TEST_CASE("pipeline parses each step once and publishes atomically") {
    auto cfg = solo();
    auto w = WorldState::empty(10, 10, 1);
    w.add_entity(0, "A1", {3, 3});
    PerceptPipeline p({"A1"});

    std::shared_ptr<const AgentContainer> seen;
    std::thread reader([&] { seen = p.get_container("A1", 0); });
    std::this_thread::sleep_for(std::chrono::milliseconds(30));
    CHECK(p.ready_step() == -1);
    CHECK(p.ingest({{"A1", compute_percepts(w, cfg, 0)}}));
    reader.join();
    REQUIRE(seen);
    CHECK(seen->currentStep == 0);
    CHECK_FALSE(p.ingest({{"A1", compute_percepts(w, cfg, 0)}}));
    CHECK(p.parse_count("A1") == 1);

    const auto mv = ActionRequest::move(Direction::E);
    auto out = apply_step(w, cfg, {mv});
    p.ingest({{"A1", compute_percepts(w, cfg, 0, mv, out.results[0])}});
    CHECK(p.parse_count("A1") == 2);
    CHECK(p.latest("A1")->virtualPos == Vec2{1, 0});
    CHECK(seen->virtualPos == Vec2{0, 0});  // older container untouched
    out = apply_step(w, cfg, {ActionRequest::skip()});
    p.ingest({{"A1", compute_percepts(w, cfg, 0, ActionRequest::skip(), out.results[0])}});

    CHECK_THROWS_AS(p.get_container("A1", 0), Error);
    CHECK_THROWS_AS(p.get_container("Z9", 2), Error);
    try {
        p.get_container("Z9", 2);
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::UnknownAgent);
    }
    try {
        p.get_container("A1", 0);
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::StepOutOfRange);
    }
}

TEST_CASE("virtual position follows successful moves only") {
    Rig r{solo(), WorldState::empty(10, 10, 1)};
    r.w.add_entity(0, "A1", {4, 4});
    r.w.set_terrain({5, 3}, Terrain::Obstacle);
    r.ingest();
    CHECK(r.c()->virtualPos == Vec2{0, 0});
    r.act(ActionRequest::move(Direction::N));
    CHECK(r.c()->virtualPos == Vec2{0, -1});
    r.act(ActionRequest::move(Direction::E));
    CHECK(r.lastResult == ActionResult::FailedBlocked);
    CHECK(r.c()->virtualPos == Vec2{0, -1});
    CHECK(r.c()->virtualPos == r.w.entities[0].pos - Vec2{4, 4});
}

TEST_CASE("map model overwrites what is in view and keeps the rest") {
    auto cfg = solo(5);
    auto w = WorldState::empty(30, 30, 1);
    w.add_entity(0, "A1", {15, 15});
    w.set_terrain({16, 15}, Terrain::Obstacle);
    w.step = 3;
    MapModel m("A1");
    m.update_from_percepts(compute_percepts(w, cfg, 0), {0, 0});
    CHECK(m.size() == 61);
    CHECK(m.terrain_at({1, 0}) == CellTerrain::Obstacle);
    const int westEdge = m.at({-5, 0})->lastSeen;

    w.set_terrain({16, 15}, Terrain::Empty);
    w.step = 9;
    w.entities[0].pos = {17, 15};
    w.reindex();
    m.update_from_percepts(compute_percepts(w, cfg, 0), {2, 0});
    CHECK(m.terrain_at({1, 0}) == CellTerrain::Empty);
    CHECK(m.at({1, 0})->lastSeen == 9);
    CHECK(m.at({-5, 0})->lastSeen == westEdge);
}

TEST_CASE("merge of disjoint regions is a union") {
    MapModel m("A1");
    m.merge_remote({{{0, 0}, CellTerrain::Empty, {}, 1, "A2"}}, {});
    m.merge_remote({{{0, 0}, CellTerrain::Goal, {}, 1, "A3"}}, {4, 4});
    CHECK(m.size() == 2);
    CHECK(m.terrain_at({4, 4}) == CellTerrain::Goal);
}

TEST_CASE("nearest dispenser by path distance") {
    const auto dispenser = [](const MapPercept& c) { return c.has(ThingKind::Dispenser); };
    auto cfg = solo(10);
    auto w = WorldState::empty(20, 20, 1);
    w.add_entity(0, "A1", {10, 10});
    MapModel none("A1");
    none.update_from_percepts(compute_percepts(w, cfg, 0), {0, 0});
    CHECK_FALSE(find_nearest(none, {0, 0}, dispenser).has_value());

    w.set_dispenser({13, 10}, 0);  // path 3 away, but walled off behind a detour
    w.set_dispenser({10, 7}, 1);   // straight line 3
    w.set_dispenser({10, 17}, 0);  // 7
    for (int y = 8; y <= 12; ++y) w.set_terrain({12, y}, Terrain::Obstacle);
    MapModel m("A1");
    m.update_from_percepts(compute_percepts(w, cfg, 0), {0, 0});
    CHECK(find_nearest(m, {0, 0}, dispenser) == Vec2{0, -3});
    CHECK(bfs_distance(m, {0, 0}, {3, 0}, {}) != 3);

    // Equal distance: the (y, x)-smaller cell.
    auto w2 = WorldState::empty(20, 20, 1);
    w2.add_entity(0, "A1", {10, 10});
    w2.set_dispenser({12, 10}, 0);
    w2.set_dispenser({10, 12}, 0);
    w2.set_dispenser({8, 10}, 0);
    MapModel t("A1");
    t.update_from_percepts(compute_percepts(w2, cfg, 0), {0, 0});
    CHECK(find_nearest(t, {0, 0}, dispenser) == Vec2{-2, 0});
}

TEST_CASE("trivial paths") {
    MapModel m("A1");
    std::vector<MapPercept> cells;
    for (int y = 0; y < 5; ++y)
        for (int x = 0; x < 5; ++x) cells.push_back({{x, y}, CellTerrain::Empty, {}, 0, "A1"});
    m.merge_remote(cells, {});
    CHECK(shortest_path(m, {2, 2}, {2, 2})->empty());
    CHECK(shortest_path(m, {0, 0}, {4, 4})->size() == 8);
}

TEST_CASE("path invalidation looks only at the next cell") {
    auto cfg = solo(2);
    auto w = WorldState::empty(10, 10, 2);
    w.add_entity(0, "A1", {2, 2});
    const Path east{Direction::E, Direction::E, Direction::E};
    CHECK_FALSE(path_invalidated(east, compute_percepts(w, cfg, 0)));
    w.add_entity(1, "B1", {3, 2});
    CHECK(path_invalidated(east, compute_percepts(w, cfg, 0)));
    // Vision 0 sees nothing past the agent's own cell.
    cfg.visionRadius = 0;
    CHECK_FALSE(path_invalidated(east, compute_percepts(w, cfg, 0)));
}

TEST_CASE("explore picks the lone unknown chunk") {
    MapModel m("A1");
    std::vector<MapPercept> cells;
    // Everything in [-15, 14]^2 is known and open except the chunk [-15, -11]^2 in the north-west.
    for (int y = -15; y < 15; ++y)
        for (int x = -15; x < 15; ++x)
            if (!(x < -10 && y < -10)) cells.push_back({{x, y}, CellTerrain::Empty, {}, 0, "A1"});
    // A wall all around keeps the outside out of the picture.
    for (int i = -16; i <= 15; ++i)
        for (Vec2 c : {Vec2{i, -16}, Vec2{i, 15}, Vec2{-16, i}, Vec2{15, i}})
            cells.push_back({c, CellTerrain::Obstacle, {}, 0, "A1"});
    m.merge_remote(cells, {});
    const auto choice = explore_direction(m, {0, 0}, 5);
    REQUIRE(choice.dir.has_value());
    CHECK((*choice.dir == Direction::N || *choice.dir == Direction::W));
    CHECK(explore_direction(m, {0, 0}, 5).dir == choice.dir);

    // Fresh agent: deterministic.
    auto cfg = solo(5);
    auto w = WorldState::empty(40, 40, 1);
    w.add_entity(0, "A1", {20, 20});
    MapModel f("A1");
    f.update_from_percepts(compute_percepts(w, cfg, 0), {0, 0});
    const auto a = explore_direction(f, {0, 0}, 5);
    REQUIRE(a.dir.has_value());
    CHECK(explore_direction(f, {0, 0}, 5).dir == a.dir);
    CHECK_FALSE(a.mapComplete);
    CHECK(explore_direction(MapModel{}, {0, 0}, 5).dir == Direction::E);
}

TEST_CASE("pairing examples") {
    auto res = pair_reports({{"T1", 0, {2, 0}}, {"T2", 0, {-2, 0}}});
    REQUIRE(res.pairs.size() == 1);
    CHECK(res.pairs[0].a.reporter == "T1");
    CHECK(res.pairs[0].b.reporter == "T2");
    res = pair_reports({{"T1", 0, {2, 0}}, {"T2", 0, {-2, 0}}, {"T3", 0, {2, 0}}, {"T4", 0, {-2, 0}}});
    CHECK(res.pairs.empty());
    CHECK(res.aborted.size() == 4);
    CHECK(compute_translation({0, 0}, {2, 0}, {0, 0}) == Vec2{2, 0});
}

TEST_CASE("identifications match the true start offsets") {
    auto cfg = scenario::scripted_config({"A"}, 6, std::vector<Role>(6, Role::Idle));
    cfg.width = cfg.height = 16;
    cfg.maxSteps = 500;
    auto w = WorldState::empty(16, 16, 1, 4);
    std::map<std::string, Vec2> start;
    for (int i = 0; i < 6; ++i) {
        const Vec2 p{2 + 2 * i, 3 + (i % 3) * 4};
        w.add_entity(0, "A" + std::to_string(i + 1), p);
        start["A" + std::to_string(i + 1)] = p;
    }
    Match m(cfg, w);
    std::mt19937 rng(8);
    int events = 0;
    while (!m.finished()) {
        const auto& rec = m.step(scenario::random_walk(m.world(), rng));
        for (const auto& id : rec.identifications) {
            ++events;
            CHECK(id.event.translation == start.at(id.event.b) - start.at(id.event.a));
        }
    }
    CHECK(events == 15);  // everyone ends up knowing everyone
    const auto c = m.team(0).pipeline().latest("A1");
    for (const auto& [peer, t] : c->identified) CHECK(t == start.at(peer) - start.at("A1"));
}

TEST_CASE("attachment refresh keeps confirmed blocks and drops destroyed ones") {
    auto cfg = solo();
    cfg.clearEventRate = 0;
    auto w = WorldState::empty(12, 12, 1);
    w.add_entity(0, "A1", {5, 5});
    w.anchor(0, w.add_block(0, {5, 6}));
    w.anchor(0, w.add_block(1, {6, 5}));
    AttachmentModel m;
    auto raw = compute_percepts(w, cfg, 0);
    m.on_action(ActionRequest::attach(Direction::S), ActionResult::Success, raw);
    m.on_action(ActionRequest::attach(Direction::E), ActionResult::Success, raw);
    CHECK(m.refresh(raw).empty());
    auto open = WorldState::empty(12, 12, 1);
    open.add_entity(0, "A1", {5, 5});
    CHECK(blocked_moves(AttachmentModel{}, compute_percepts(open, cfg, 0)).empty());
    CHECK(blocked_rotations(AttachmentModel{}, compute_percepts(open, cfg, 0)).empty());

    w.pendingEvents.push_back({{5, 7}, 1, w.step});
    apply_step(w, cfg, {ActionRequest::skip()});
    raw = compute_percepts(w, cfg, 0);
    CHECK(m.refresh(raw) == std::vector<Vec2>{{0, 1}});
    CHECK(m.items() == oracle::truth_attachments(w, 0));
}

TEST_CASE("predicted blocked moves agree with the engine") {
    std::mt19937 rng(23);
    int compared = 0;
    for (int round = 0; round < 300; ++round) {
        auto cfg = solo(3);
        auto w = WorldState::empty(12, 12, 1);
        w.add_entity(0, "A1", {5, 5});
        AttachmentModel m;
        for (Direction d : kDirections)
            if (rng() % 2) {
                w.anchor(0, w.add_block(0, Vec2{5, 5} + unit(d)));
                m.on_action(ActionRequest::attach(d), ActionResult::Success, compute_percepts(w, cfg, 0));
            }
        for (int y = 2; y <= 8; ++y)
            for (int x = 2; x <= 8; ++x)
                if (!w.entity_at({x, y}) && !w.block_at({x, y}) && rng() % 100 < 25)
                    w.set_terrain({x, y}, Terrain::Obstacle);
        const auto raw = compute_percepts(w, cfg, 0);
        const auto moves = blocked_moves(m, raw);
        const auto turns = blocked_rotations(m, raw);
        for (Direction d : kDirections) {
            auto copy = w;
            const auto out = apply_step(copy, cfg, {ActionRequest::move(d)});
            CHECK((out.results[0] == ActionResult::Success) == !moves.count(d));
            ++compared;
        }
        for (Rotation r : {Rotation::Cw, Rotation::Ccw}) {
            auto copy = w;
            const auto out = apply_step(copy, cfg, {ActionRequest::rotate(r)});
            CHECK((out.results[0] == ActionResult::Success) == !turns.count(r));
            ++compared;
        }
    }
    CHECK(compared == 1800);
}

TEST_CASE("planner and assignment examples") {
    CHECK(plan_requirements({{{0, 1}, 0}}) == OrderedPlan{{{0, 1}, 0}});

    const IdentifiedFn nobody = [](auto&, auto&) { return false; };
    const IdentifiedFn everyone = [](auto&, auto&) { return true; };
    CHECK(form_subteams({"A3", "A1", "A2"}, nobody) ==
          std::vector<std::vector<std::string>>{{"A1"}, {"A2"}, {"A3"}});
    CHECK(form_subteams({"A4", "A3", "A1", "A2"}, everyone) ==
          std::vector<std::vector<std::string>>{{"A1", "A2", "A3", "A4"}});

    const TaskView two{"two", 300, 20, {{{0, 1}, 0}, {{0, 2}, 1}}, false};
    const TaskView three{"three", 200, 30, {{{0, 1}, 0}, {{0, 2}, 1}, {{1, 2}, 0}}, false};
    auto got = assign_tasks({{"A1", "A2"}}, {two, three}, 0, 60);
    REQUIRE(got.size() == 2);
    CHECK(got[0].task == "two");
    got = assign_tasks({{"A1", "A2", "A3"}}, {two, three}, 0, 60);
    REQUIRE(got.size() == 3);
    CHECK(got[0].task == "three");
    got = assign_tasks({{"A1", "A2", "A3", "A4", "A5"}}, {two}, 0, 60);
    CHECK(got.size() == 2);  // the other three stay free

    auto taken = two;
    taken.submitted = true;  // e.g. by the other team
    CHECK(monitor_assignments(assign_tasks({{"A1", "A2"}}, {two}, 0, 60), {taken}, 5).cancelled.size() == 2);

    CHECK(is_master({"A1", "t", {{0, 1}, 0}}));
    CHECK_FALSE(is_master({"A1", "t", {{1, 1}, 0}}));
}

TEST_CASE("move_with_rotation gives up when fully enclosed") {
    Rig r{solo(), WorldState::empty(10, 10, 1)};
    r.w.add_entity(0, "A1", {5, 5});
    for (Direction d : kDirections) r.w.set_terrain(Vec2{5, 5} + unit(d), Terrain::Obstacle);
    r.ingest();
    for (Direction d : kDirections) CHECK_FALSE(move_with_rotation(*r.c(), d).has_value());
}

TEST_CASE("unstuck targets the wall with the most open space behind it") {
    Rig r{solo(3), WorldState::empty(12, 12, 1)};
    r.w.add_entity(0, "A1", {5, 5});
    for (Direction d : kDirections) r.w.set_terrain(Vec2{5, 5} + unit(d), Terrain::Obstacle);
    for (Vec2 c : {Vec2{7, 5}, Vec2{6, 6}, Vec2{3, 5}, Vec2{4, 6}}) r.w.set_terrain(c, Terrain::Obstacle);
    r.ingest();
    std::optional<Vec2> hold;
    for (int i = 0; i < 3; ++i) {
        const auto a = unstuck_decide(*r.c(), hold, r.cfg);
        REQUIRE(a.has_value());
        CHECK(*a == ActionRequest::clear({0, -1}));
        if (i < 2) r.act(*a);
    }
    r.act(ActionRequest::clear({0, -1}));
    CHECK(r.w.terrain_at({5, 4}) == Terrain::Empty);
}

TEST_CASE("free builder explores; assigned builder fetches from an adjacent dispenser") {
    Rig r{solo(), WorldState::empty(20, 20, 1)};
    r.w.add_entity(0, "A1", {10, 10});
    r.ingest();
    const std::map<std::string, EntityId> ids{{"A1", 0}};
    DecisionContext ctx{r.cfg, ids};
    BuilderState st;
    auto d = builder_decide(*r.c(), st, {}, ctx);
    CHECK(d.action.type == ActionType::Move);

    Rig g{solo(), WorldState::empty(20, 20, 1)};
    g.w.add_entity(0, "A1", {10, 10});
    g.w.set_dispenser({10, 11}, 0);
    g.ingest();
    BuilderState bs;
    CoordinationMessage assign{.type = MessageType::Assign, .from = kOperatorName, .to = "A1", .task = "t"};
    assign.req = {{0, 1}, 0};
    assign.plan = {assign.req};
    assign.roster = {"A1"};
    d = builder_decide(*g.c(), bs, {assign}, ctx);
    CHECK(d.action == ActionRequest::request(Direction::S));
    g.act(d.action);
    d = builder_decide(*g.c(), bs, {}, ctx);
    CHECK(d.action == ActionRequest::attach(Direction::S));
}

TEST_CASE("meeting point leaves room for the structure") {
    auto cfg = solo(8);
    auto w = WorldState::empty(20, 20, 1);
    w.add_entity(0, "A1", {5, 5});
    for (int y = 4; y <= 6; ++y)
        for (int x = 9; x <= 11; ++x) w.set_terrain({x, y}, Terrain::Goal);
    w.set_terrain({9, 5}, Terrain::Obstacle);
    MapModel m("A1");
    m.update_from_percepts(compute_percepts(w, cfg, 0), {0, 0});
    const OrderedPlan plan{{{0, 1}, 0}, {{0, 2}, 0}};
    const auto mp = choose_meeting_point(m, {0, 0}, plan);
    REQUIRE(mp.has_value());
    const Vec2 abs = *mp + Vec2{5, 5};
    CHECK(w.terrain_at(abs) == Terrain::Goal);
    CHECK(w.terrain_at(abs + Vec2{0, 1}) != Terrain::Obstacle);
    CHECK(w.terrain_at(abs + Vec2{0, 2}) != Terrain::Obstacle);
    CHECK(abs != Vec2{9, 4});  // its (0,1) cell is the obstacle

    MapModel blind("A1");
    CHECK_FALSE(choose_meeting_point(blind, {0, 0}, plan).has_value());
}

TEST_CASE("attacker explores without a goal and drops a vanished target") {
    auto cfg = scenario::scripted_config({"A", "B"}, 1, {Role::Attacker});
    Rig r{cfg, WorldState::empty(20, 20, 2)};
    r.w.add_entity(0, "A1", {3, 3});
    r.w.add_entity(1, "B1", {18, 18});
    r.ingest();
    AttackerState st;
    CHECK(attacker_decide(*r.c(), st, cfg).type == ActionType::Move);

    auto [pc, pw] = scenario::parked_enemy();
    Match m(pc, pw);
    std::map<EntityId, ActionRequest> park{{1, ActionRequest::skip()}};
    std::optional<int> charging;
    for (int s = 0; s < 40 && !charging; ++s)
        if (m.step(park).agents[0].action.type == ActionType::Clear) charging = s;
    REQUIRE(charging.has_value());
    // The enemy walks away before the third charge.
    std::map<EntityId, ActionRequest> flee{{1, ActionRequest::move(Direction::E)}};
    m.step(flee);
    m.step(flee);
    m.step(flee);
    m.step(flee);
    const auto& rec = m.step(flee);
    CHECK(rec.agents[0].action.type != ActionType::Clear);
    CHECK(m.world().entities[1].disabledUntil == std::nullopt);
}
