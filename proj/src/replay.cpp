#include "assemble/replay.h"

#include <algorithm>
#include <set>
#include <sstream>

#include "assemble/error.h"

namespace assemble {

namespace {

const StepRecord& record(const ReplayTrace& trace, int step) {
    const int first = trace.header.world.step;
    if (step < first || step >= first + static_cast<int>(trace.steps.size()))
        throw Error(ErrorCode::StepOutOfRange, "step " + std::to_string(step) + " is not in the trace");
    return trace.steps[static_cast<std::size_t>(step - first)];
}

std::vector<ActionRequest> actions_of(const StepRecord& s) {
    std::vector<ActionRequest> out;
    for (const auto& a : s.agents) out.push_back(a.action);
    return out;
}

// Blocks a successful connect brought in, recovered from the next step's recorded model.
std::vector<GainedBlock> gained_from(const AgentRecord& now, const AgentRecord* next) {
    std::vector<GainedBlock> out;
    if (!next || now.action.type != ActionType::Connect || now.result != ActionResult::Success) return out;
    std::set<Vec2> before;
    for (const auto& [o, t] : now.attachments) before.insert(o);
    for (const auto& [o, t] : next->attachments)
        if (!before.count(o)) out.push_back({o, t});
    const Vec2 own = now.action.offset;
    std::stable_partition(out.begin(), out.end(), [&](const GainedBlock& g) { return manhattan(g.offset, own) == 1; });
    return out;
}

}  // namespace

WorldState world_at(const ReplayTrace& trace, int step) {
    const int first = trace.header.world.step;
    if (step != first + static_cast<int>(trace.steps.size())) record(trace, step);
    WorldState w = trace.header.world;
    for (int s = first; s < step; ++s) apply_step(w, trace.header.config, actions_of(trace.steps[static_cast<std::size_t>(s - first)]));
    return w;
}

std::shared_ptr<const AgentContainer> container_at(const ReplayTrace& trace, int step, const std::string& agent) {
    record(trace, step);
    const auto& entities = trace.header.world.entities;
    auto it = std::find_if(entities.begin(), entities.end(), [&](const EntityState& e) { return e.name == agent; });
    if (it == entities.end()) throw Error(ErrorCode::UnknownAgent, agent);
    std::vector<std::size_t> members;
    std::vector<std::string> names;
    for (std::size_t i = 0; i < entities.size(); ++i)
        if (entities[i].team == it->team) {
            members.push_back(i);
            names.push_back(entities[i].name);
        }

    PerceptPipeline pipeline(names);
    const auto hook = [](std::vector<AgentWorkspace*>& agents, int s) { synchronize_team(agents, s); };
    const int first = trace.header.world.step;
    for (int s = first; s <= step; ++s) {
        const auto& rec = trace.steps[static_cast<std::size_t>(s - first)];
        PerceptBatch batch;
        for (std::size_t i : members) batch.emplace_back(entities[i].name, rec.agents.at(i).percept);
        pipeline.ingest(batch, hook);
        if (s == step) break;
        const StepRecord* next = s + 1 - first < static_cast<int>(trace.steps.size())
                                     ? &trace.steps[static_cast<std::size_t>(s + 1 - first)]
                                     : nullptr;
        for (std::size_t i : members)
            pipeline.register_gained(entities[i].name,
                                     gained_from(rec.agents.at(i), next ? &next->agents.at(i) : nullptr));
    }
    return pipeline.get_container(agent, step);
}

ValidationReport validate_trace(const ReplayTrace& trace, std::size_t maxMismatches) {
    ValidationReport report;
    WorldState w = trace.header.world;
    const auto& cfg = trace.header.config;
    const auto note = [&](int step, const std::string& what) {
        if (report.mismatches.size() < maxMismatches)
            report.mismatches.push_back("step " + std::to_string(step) + ": " + what);
    };
    const StepRecord* prev = nullptr;
    for (const auto& rec : trace.steps) {
        if (rec.step != w.step) note(rec.step, "step index differs from the world step " + std::to_string(w.step));
        if (rec.agents.size() != w.entities.size()) {
            note(rec.step, "agent count differs");
            break;
        }
        for (std::size_t i = 0; i < w.entities.size(); ++i) {
            std::optional<ActionRequest> lastAction;
            std::optional<ActionResult> lastResult;
            if (prev) {
                lastAction = prev->agents[i].action;
                lastResult = prev->agents[i].result;
            }
            const auto p = compute_percepts(w, cfg, w.entities[i].id, lastAction, lastResult);
            if (rec.agents[i].name != w.entities[i].name) note(rec.step, "agent name " + rec.agents[i].name);
            if (!(p == rec.agents[i].percept)) note(rec.step, "percepts of " + w.entities[i].name);
        }
        const auto outcome = apply_step(w, cfg, actions_of(rec));
        for (std::size_t i = 0; i < outcome.results.size(); ++i)
            if (outcome.results[i] != rec.agents[i].result)
                note(rec.step, "result of " + w.entities[i].name + ": recorded " +
                                   std::string(to_string(rec.agents[i].result)) + ", replayed " +
                                   std::string(to_string(outcome.results[i])));
        if (outcome.events != rec.events) note(rec.step, "world events");
        if (w.scores != rec.scores) note(rec.step, "scores");
        ++report.stepsChecked;
        prev = &rec;
    }
    return report;
}

namespace {

char entity_glyph(int team) { return static_cast<char>('a' + team % 26); }

std::string legend(bool agentView) {
    std::string s = "legend: a-z entity (by team)";
    if (agentView) s += ", @ self";
    s += ", # obstacle, + goal, D dispenser, B block, . empty";
    if (agentView) s += ", ? unknown";
    return s;
}

std::string banner(const ReplayTrace& trace, const StepRecord& rec) {
    std::ostringstream out;
    out << "step " << rec.step << "  score";
    const auto& scores = rec.step == trace.header.world.step ? trace.header.world.scores
                                                             : record(trace, rec.step - 1).scores;
    for (std::size_t t = 0; t < scores.size(); ++t) {
        const auto name = t < trace.header.config.teams.size() ? trace.header.config.teams[t] : std::to_string(t);
        out << ' ' << name << '=' << scores[t];
    }
    return out.str();
}

}  // namespace

std::string render(const ReplayTrace& trace, int step, const std::optional<std::string>& agent) {
    const StepRecord& rec = record(trace, step);
    std::ostringstream out;
    out << banner(trace, rec) << '\n';

    if (!agent) {
        const WorldState w = world_at(trace, step);
        for (int y = 0; y < w.height; ++y) {
            for (int x = 0; x < w.width; ++x) {
                const Vec2 c{x, y};
                char g = '.';
                if (w.terrain_at(c) == Terrain::Obstacle) g = '#';
                if (w.terrain_at(c) == Terrain::Goal) g = '+';
                if (w.dispenser_at(c)) g = 'D';
                if (w.block_at(c)) g = 'B';
                if (const auto* e = w.entity_at(c)) g = entity_glyph(e->team);
                out << g;
            }
            out << '\n';
        }
        out << legend(false) << '\n';
        return out.str();
    }

    const auto c = container_at(trace, step, *agent);
    const auto& cells = c->map->cells();
    Vec2 lo = c->virtualPos, hi = c->virtualPos;
    for (const auto& [p, _] : cells) {
        lo = {std::min(lo.x, p.x), std::min(lo.y, p.y)};
        hi = {std::max(hi.x, p.x), std::max(hi.y, p.y)};
    }
    out << "agent " << *agent << "  pos (" << c->virtualPos.x << "," << c->virtualPos.y << ")  origin ("
        << lo.x << "," << lo.y << ")\n";
    for (int y = lo.y; y <= hi.y; ++y) {
        for (int x = lo.x; x <= hi.x; ++x) {
            const Vec2 p{x, y};
            char g = '?';
            if (const MapPercept* m = c->map->at(p)) {
                g = m->terrain == CellTerrain::Unknown ? '?' : cell_terrain_char(m->terrain);
                if (m->terrain == CellTerrain::Goal) g = '+';
                if (m->terrain == CellTerrain::Obstacle) g = '#';
                if (m->terrain == CellTerrain::Empty) g = '.';
                if (m->has(ThingKind::Dispenser)) g = 'D';
                if (m->has(ThingKind::Block)) g = 'B';
                for (const Thing& t : m->things)
                    if (t.kind == ThingKind::Entity) g = entity_glyph(t.detail);
            }
            if (p == c->virtualPos) g = '@';
            out << g;
        }
        out << '\n';
    }
    out << legend(true) << '\n';
    out << "identified:";
    if (c->identified.empty()) out << " none";
    for (const auto& [peer, t] : c->identified) out << ' ' << peer << " (" << t.x << "," << t.y << ")";
    out << '\n';
    return out.str();
}

}  // namespace assemble
