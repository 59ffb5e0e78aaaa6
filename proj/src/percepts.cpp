#include "assemble/percepts.h"

#include <algorithm>

#include "assemble/error.h"

namespace assemble {

std::string_view to_string(ThingKind k) {
    switch (k) {
        case ThingKind::Entity: return "entity";
        case ThingKind::Block: return "block";
        case ThingKind::Dispenser: return "dispenser";
    }
    return "?";
}

ThingKind parse_thing_kind(std::string_view s) {
    if (s == "entity") return ThingKind::Entity;
    if (s == "block") return ThingKind::Block;
    if (s == "dispenser") return ThingKind::Dispenser;
    throw Error(ErrorCode::MalformedTrace, "unknown thing kind '" + std::string(s) + "'");
}

namespace {

// Position of `rel` in row-major diamond order.
std::size_t diamond_index(Vec2 rel, int r) {
    std::size_t idx = 0;
    for (int y = -r; y < rel.y; ++y) idx += static_cast<std::size_t>(2 * (r - std::abs(y)) + 1);
    return idx + static_cast<std::size_t>(rel.x + (r - std::abs(rel.y)));
}

}  // namespace

Terrain RawPerceptSet::terrain_at(Vec2 rel) const {
    if (!in_vision(rel)) return Terrain::Obstacle;
    const std::size_t idx = diamond_index(rel, vision);
    if (idx < terrain.size() && terrain[idx].first == rel) return terrain[idx].second;
    for (const auto& [p, t] : terrain)
        if (p == rel) return t;
    return Terrain::Obstacle;
}

std::vector<Thing> RawPerceptSet::things_at(Vec2 rel) const {
    std::vector<Thing> out;
    for (const auto& t : things)
        if (t.rel == rel) out.push_back(t.thing);
    return out;
}

bool RawPerceptSet::attached_at(Vec2 rel) const {
    return std::find(attached.begin(), attached.end(), rel) != attached.end();
}

RawPerceptSet compute_percepts(const WorldState& world, const SimConfig& config, EntityId entity,
                               std::optional<ActionRequest> lastAction,
                               std::optional<ActionResult> lastResult) {
    const EntityState& me = world.entities.at(static_cast<std::size_t>(entity));
    RawPerceptSet p;
    p.step = world.step;
    p.team = me.team;
    p.vision = config.visionRadius;
    p.score = world.scores.at(static_cast<std::size_t>(me.team));
    p.energy = me.energy;
    p.disabled = me.disabled(world.step);
    p.lastAction = std::move(lastAction);
    p.lastActionResult = lastResult;

    for (Vec2 off : diamond(config.visionRadius)) {
        const Vec2 c = me.pos + off;
        p.terrain.emplace_back(off, world.terrain_at(c));
        if (const auto* e = world.entity_at(c); e && e->id != me.id)
            p.things.push_back({off, {ThingKind::Entity, e->team}});
        if (const auto* b = world.block_at(c)) {
            p.things.push_back({off, {ThingKind::Block, b->type}});
            if (world.is_attached(*b)) p.attached.push_back(off);
        }
        if (const auto d = world.dispenser_at(c)) p.things.push_back({off, {ThingKind::Dispenser, *d}});
    }

    for (const TaskSpec& t : world.tasks)
        if (world.step <= t.deadline)
            p.tasks.push_back({t.name, t.deadline, t.reward, t.requirements, t.submittedBy.has_value()});
    return p;
}

}  // namespace assemble
