#include "assemble/trace.h"

#include <fstream>
#include <sstream>

#include "assemble/error.h"

namespace assemble {

using nlohmann::json;

namespace {

json vec(Vec2 v) { return json::array({v.x, v.y}); }
Vec2 vec(const json& j) { return {j.at(0).get<int>(), j.at(1).get<int>()}; }

json reqs_to_json(const std::vector<Requirement>& reqs) {
    json out = json::array();
    for (const auto& r : reqs) out.push_back({r.pos.x, r.pos.y, r.type});
    return out;
}

std::vector<Requirement> reqs_from_json(const json& j) {
    std::vector<Requirement> out;
    for (const auto& r : j) out.push_back({{r.at(0).get<int>(), r.at(1).get<int>()}, r.at(2).get<int>()});
    return out;
}

template <class T>
json opt(const std::optional<T>& v) {
    return v ? json(*v) : json(nullptr);
}

template <class T>
std::optional<T> opt_from(const json& j) {
    if (j.is_null()) return std::nullopt;
    return j.get<T>();
}

json task_to_json(const TaskSpec& t) {
    return {{"name", t.name},
            {"created", t.created},
            {"deadline", t.deadline},
            {"reward", t.reward},
            {"requirements", reqs_to_json(t.requirements)},
            {"submittedBy", opt(t.submittedBy)}};
}

TaskSpec task_from_json(const json& j) {
    TaskSpec t;
    t.name = j.at("name").get<std::string>();
    t.created = j.at("created").get<int>();
    t.deadline = j.at("deadline").get<int>();
    t.reward = j.at("reward").get<int>();
    t.requirements = reqs_from_json(j.at("requirements"));
    t.submittedBy = opt_from<int>(j.at("submittedBy"));
    return t;
}

json event_to_json(const WorldEvent& e) {
    json victims = json::array();
    for (const auto& v : e.victims) victims.push_back({v.entity, v.onGoal, v.attachments});
    return {{"kind", std::string(to_string(e.kind))},
            {"step", e.step},
            {"entity", e.entity},
            {"partner", e.partner},
            {"team", e.team},
            {"blocks", e.blocks},
            {"task", e.task},
            {"cell", vec(e.cell)},
            {"radius", e.radius},
            {"reward", e.reward},
            {"victims", victims}};
}

WorldEvent event_from_json(const json& j) {
    WorldEvent e;
    e.kind = parse_event_kind(j.at("kind").get<std::string>());
    e.step = j.at("step").get<int>();
    e.entity = j.at("entity").get<int>();
    e.partner = j.at("partner").get<int>();
    e.team = j.at("team").get<int>();
    e.blocks = j.at("blocks").get<std::vector<BlockId>>();
    e.task = j.at("task").get<std::string>();
    e.cell = vec(j.at("cell"));
    e.radius = j.at("radius").get<int>();
    e.reward = j.at("reward").get<int>();
    for (const auto& v : j.at("victims"))
        e.victims.push_back({v.at(0).get<int>(), v.at(1).get<bool>(), v.at(2).get<int>()});
    return e;
}

json message_to_json(const CoordinationMessage& m) {
    json j{{"type", std::string(to_string(m.type))}, {"from", m.from}, {"to", m.to}, {"task", m.task}};
    if (m.type == MessageType::Assign) {
        j["req"] = {m.req.pos.x, m.req.pos.y, m.req.type};
        j["plan"] = reqs_to_json(m.plan);
        j["roster"] = m.roster;
    }
    if (m.type == MessageType::DeliverRequest) {
        j["dest"] = vec(m.dest);
        j["master"] = vec(m.master);
        json s = json::array();
        for (const auto& g : m.structure) s.push_back({g.offset.x, g.offset.y, g.type});
        j["structure"] = s;
    }
    return j;
}

CoordinationMessage message_from_json(const json& j) {
    CoordinationMessage m;
    m.type = parse_message_type(j.at("type").get<std::string>());
    m.from = j.at("from").get<std::string>();
    m.to = j.at("to").get<std::string>();
    m.task = j.at("task").get<std::string>();
    if (j.contains("req")) {
        const auto& r = j.at("req");
        m.req = {{r.at(0).get<int>(), r.at(1).get<int>()}, r.at(2).get<int>()};
        m.plan = reqs_from_json(j.at("plan"));
        m.roster = j.at("roster").get<std::vector<std::string>>();
    }
    if (j.contains("dest")) {
        m.dest = vec(j.at("dest"));
        m.master = vec(j.at("master"));
        for (const auto& s : j.at("structure"))
            m.structure.push_back({{s.at(0).get<int>(), s.at(1).get<int>()}, s.at(2).get<int>()});
    }
    return m;
}

json tasks_to_json(const std::vector<TaskView>& tasks) {
    json out = json::array();
    for (const auto& t : tasks)
        out.push_back({{"name", t.name},
                       {"deadline", t.deadline},
                       {"reward", t.reward},
                       {"requirements", reqs_to_json(t.requirements)},
                       {"submitted", t.submitted}});
    return out;
}

std::vector<TaskView> tasks_from_json(const json& j) {
    std::vector<TaskView> out;
    for (const auto& t : j)
        out.push_back({t.at("name").get<std::string>(), t.at("deadline").get<int>(), t.at("reward").get<int>(),
                       reqs_from_json(t.at("requirements")), t.at("submitted").get<bool>()});
    return out;
}

json percept_to_json(const RawPerceptSet& p) {
    std::string terrain;
    for (const auto& [_, t] : p.terrain) terrain.push_back(terrain_char(t));
    json things = json::array();
    for (const auto& t : p.things)
        things.push_back({t.rel.x, t.rel.y, std::string(to_string(t.thing.kind)), t.thing.detail});
    json attached = json::array();
    for (Vec2 a : p.attached) attached.push_back(vec(a));
    return {{"terrain", terrain},   {"things", things},   {"attached", attached},
            {"score", p.score},     {"energy", p.energy}, {"disabled", p.disabled}};
}

RawPerceptSet percept_from_json(const json& j, int step, int team, int vision) {
    RawPerceptSet p;
    p.step = step;
    p.team = team;
    p.vision = vision;
    p.score = j.at("score").get<int>();
    p.energy = j.at("energy").get<int>();
    p.disabled = j.at("disabled").get<bool>();
    const auto terrain = j.at("terrain").get<std::string>();
    const auto cells = diamond(vision);
    if (terrain.size() != cells.size()) throw Error(ErrorCode::MalformedTrace, "percept terrain has wrong size");
    for (std::size_t i = 0; i < cells.size(); ++i) p.terrain.emplace_back(cells[i], terrain_from_char(terrain[i]));
    for (const auto& t : j.at("things"))
        p.things.push_back({{t.at(0).get<int>(), t.at(1).get<int>()},
                            {parse_thing_kind(t.at(2).get<std::string>()), t.at(3).get<int>()}});
    for (const auto& a : j.at("attached")) p.attached.push_back(vec(a));
    return p;
}

}  // namespace

json world_to_json(const WorldState& w) {
    json rows = json::array();
    for (int y = 0; y < w.height; ++y) {
        std::string row;
        for (int x = 0; x < w.width; ++x) row.push_back(terrain_char(w.terrain_at({x, y})));
        rows.push_back(row);
    }
    json dispensers = json::array();
    for (int y = 0; y < w.height; ++y)
        for (int x = 0; x < w.width; ++x)
            if (auto d = w.dispenser_at({x, y})) dispensers.push_back({x, y, *d});
    json blocks = json::array();
    for (const auto& [id, b] : w.blocks)
        blocks.push_back({{"id", id}, {"type", b.type}, {"pos", vec(b.pos)}, {"anchors", b.anchors}, {"links", b.links}});
    json entities = json::array();
    for (const auto& e : w.entities) {
        json charge = nullptr;
        if (e.clearCharge)
            charge = {{"target", vec(e.clearCharge->target)},
                      {"count", e.clearCharge->count},
                      {"lastStep", e.clearCharge->lastStep}};
        entities.push_back({{"id", e.id},
                            {"team", e.team},
                            {"name", e.name},
                            {"pos", vec(e.pos)},
                            {"disabledUntil", opt(e.disabledUntil)},
                            {"energy", e.energy},
                            {"clearCharge", charge}});
    }
    json tasks = json::array();
    for (const auto& t : w.tasks) tasks.push_back(task_to_json(t));
    json events = json::array();
    for (const auto& e : w.pendingEvents)
        events.push_back({{"center", vec(e.center)}, {"radius", e.radius}, {"triggerStep", e.triggerStep}});
    return {{"width", w.width},
            {"height", w.height},
            {"terrain", rows},
            {"dispensers", dispensers},
            {"blocks", blocks},
            {"entities", entities},
            {"tasks", tasks},
            {"pendingEvents", events},
            {"step", w.step},
            {"scores", w.scores},
            {"rng", w.rng.state()},
            {"nextBlockId", w.nextBlockId},
            {"nextTaskIndex", w.nextTaskIndex}};
}

WorldState world_from_json(const json& j) {
    try {
        WorldState w = WorldState::empty(j.at("width").get<int>(), j.at("height").get<int>(),
                                         static_cast<int>(j.at("scores").size()));
        const auto& rows = j.at("terrain");
        for (int y = 0; y < w.height; ++y) {
            const auto row = rows.at(static_cast<std::size_t>(y)).get<std::string>();
            for (int x = 0; x < w.width; ++x) w.set_terrain({x, y}, terrain_from_char(row.at(static_cast<std::size_t>(x))));
        }
        for (const auto& d : j.at("dispensers")) w.set_dispenser({d.at(0).get<int>(), d.at(1).get<int>()}, d.at(2).get<int>());
        for (const auto& b : j.at("blocks")) {
            Block block;
            block.id = b.at("id").get<int>();
            block.type = b.at("type").get<int>();
            block.pos = vec(b.at("pos"));
            block.anchors = b.at("anchors").get<std::set<EntityId>>();
            block.links = b.at("links").get<std::set<BlockId>>();
            w.blocks.emplace(block.id, block);
        }
        for (const auto& e : j.at("entities")) {
            EntityState s;
            s.id = e.at("id").get<int>();
            s.team = e.at("team").get<int>();
            s.name = e.at("name").get<std::string>();
            s.pos = vec(e.at("pos"));
            s.disabledUntil = opt_from<int>(e.at("disabledUntil"));
            s.energy = e.at("energy").get<int>();
            if (const auto& c = e.at("clearCharge"); !c.is_null())
                s.clearCharge = ClearCharge{vec(c.at("target")), c.at("count").get<int>(), c.at("lastStep").get<int>()};
            w.entities.push_back(std::move(s));
        }
        for (const auto& t : j.at("tasks")) w.tasks.push_back(task_from_json(t));
        for (const auto& e : j.at("pendingEvents"))
            w.pendingEvents.push_back({vec(e.at("center")), e.at("radius").get<int>(), e.at("triggerStep").get<int>()});
        w.step = j.at("step").get<int>();
        w.scores = j.at("scores").get<std::vector<int>>();
        w.rng.set_state(j.at("rng").get<std::string>());
        w.nextBlockId = j.at("nextBlockId").get<int>();
        w.nextTaskIndex = j.at("nextTaskIndex").get<int>();
        w.reindex();
        return w;
    } catch (const json::exception& e) {
        throw Error(ErrorCode::MalformedTrace, std::string("world: ") + e.what());
    }
}

json header_to_json(const TraceHeader& h) {
    return {{"version", h.version}, {"config", to_json(h.config)}, {"world", world_to_json(h.world)}};
}

TraceHeader header_from_json(const json& j) {
    TraceHeader h;
    try {
        h.version = j.at("version").get<int>();
        h.config = config_from_json(j.at("config"));
    } catch (const json::exception& e) {
        throw Error(ErrorCode::MalformedTrace, std::string("header: ") + e.what());
    } catch (const Error& e) {
        throw Error(ErrorCode::MalformedTrace, std::string("header: ") + e.what());
    }
    if (h.version != kTraceVersion) throw Error(ErrorCode::MalformedTrace, "unsupported trace version");
    h.world = world_from_json(j.at("world"));
    return h;
}

json step_to_json(const StepRecord& s) {
    json agents = json::array();
    for (const auto& a : s.agents) {
        json att = json::array();
        for (const auto& [o, t] : a.attachments) att.push_back({o.x, o.y, t});
        agents.push_back({{"name", a.name},
                          {"percept", percept_to_json(a.percept)},
                          {"pos", vec(a.virtualPos)},
                          {"attached", att},
                          {"action", to_string(a.action)},
                          {"result", std::string(to_string(a.result))},
                          {"phase", a.phase}});
    }
    json messages = json::array();
    for (const auto& m : s.messages) messages.push_back(message_to_json(m));
    json ids = json::array();
    for (const auto& i : s.identifications)
        ids.push_back({{"team", i.team}, {"a", i.event.a}, {"b", i.event.b}, {"translation", vec(i.event.translation)}});
    json taskEvents = json::array();
    for (const auto& t : s.taskEvents)
        taskEvents.push_back(
            {{"kind", t.kind}, {"team", t.team}, {"task", t.task}, {"agents", t.agents}, {"detail", t.detail}});
    json events = json::array();
    for (const auto& e : s.events) events.push_back(event_to_json(e));
    json out{{"step", s.step}};
    out["tasks"] = s.agents.empty() ? json::array() : tasks_to_json(s.agents.front().percept.tasks);
    out["agents"] = agents;
    out["messages"] = messages;
    out["identifications"] = ids;
    out["taskEvents"] = taskEvents;
    out["events"] = events;
    out["scores"] = s.scores;
    return out;
}

StepRecord step_from_json(const json& j, const TraceHeader& header, const StepRecord* previous) {
    try {
        StepRecord s;
        s.step = j.at("step").get<int>();
        const auto tasks = tasks_from_json(j.at("tasks"));
        const auto& agents = j.at("agents");
        if (agents.size() != header.world.entities.size())
            throw Error(ErrorCode::MalformedTrace, "step " + std::to_string(s.step) + " has the wrong agent count");
        for (std::size_t i = 0; i < agents.size(); ++i) {
            const auto& a = agents.at(i);
            AgentRecord r;
            r.name = a.at("name").get<std::string>();
            r.percept = percept_from_json(a.at("percept"), s.step, header.world.entities[i].team,
                                          header.config.visionRadius);
            r.percept.tasks = tasks;
            if (previous) {
                r.percept.lastAction = previous->agents.at(i).action;
                r.percept.lastActionResult = previous->agents.at(i).result;
            }
            r.virtualPos = vec(a.at("pos"));
            for (const auto& t : a.at("attached"))
                r.attachments.emplace_back(Vec2{t.at(0).get<int>(), t.at(1).get<int>()}, t.at(2).get<int>());
            r.action = parse_action(a.at("action").get<std::string>());
            r.result = parse_action_result(a.at("result").get<std::string>());
            r.phase = a.at("phase").get<std::string>();
            s.agents.push_back(std::move(r));
        }
        for (const auto& m : j.at("messages")) s.messages.push_back(message_from_json(m));
        for (const auto& i : j.at("identifications"))
            s.identifications.push_back({i.at("team").get<int>(),
                                         {s.step, i.at("a").get<std::string>(), i.at("b").get<std::string>(),
                                          vec(i.at("translation"))}});
        for (const auto& t : j.at("taskEvents"))
            s.taskEvents.push_back({s.step, t.at("team").get<int>(), t.at("kind").get<std::string>(),
                                    t.at("task").get<std::string>(), t.at("agents").get<std::vector<std::string>>(),
                                    t.at("detail").get<std::string>()});
        for (const auto& e : j.at("events")) s.events.push_back(event_from_json(e));
        s.scores = j.at("scores").get<std::vector<int>>();
        return s;
    } catch (const json::exception& e) {
        throw Error(ErrorCode::MalformedTrace, std::string("step record: ") + e.what());
    }
}

void write_trace(std::ostream& out, const ReplayTrace& trace) {
    out << header_to_json(trace.header).dump() << '\n';
    for (const auto& s : trace.steps) out << step_to_json(s).dump() << '\n';
}

std::string trace_to_string(const ReplayTrace& trace) {
    std::ostringstream out;
    write_trace(out, trace);
    return out.str();
}

ReplayTrace read_trace(std::istream& in) {
    ReplayTrace trace;
    std::string line;
    if (!std::getline(in, line)) throw Error(ErrorCode::MalformedTrace, "empty trace");
    try {
        trace.header = header_from_json(json::parse(line));
        while (std::getline(in, line)) {
            if (line.empty()) continue;
            const StepRecord* prev = trace.steps.empty() ? nullptr : &trace.steps.back();
            StepRecord s = step_from_json(json::parse(line), trace.header, prev);
            if (s.step != trace.header.world.step + static_cast<int>(trace.steps.size()))
                throw Error(ErrorCode::MalformedTrace, "step records must be consecutive");
            trace.steps.push_back(std::move(s));
        }
    } catch (const json::exception& e) {
        throw Error(ErrorCode::MalformedTrace, e.what());
    }
    return trace;
}

ReplayTrace load_trace(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::IoError, "cannot open " + path.string());
    return read_trace(in);
}

void save_trace(const std::filesystem::path& path, const ReplayTrace& trace) {
    std::ofstream out(path);
    if (!out) throw Error(ErrorCode::IoError, "cannot write " + path.string());
    write_trace(out, trace);
    if (!out) throw Error(ErrorCode::IoError, "write failed for " + path.string());
}

}  // namespace assemble
