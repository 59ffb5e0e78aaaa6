#include "assemble/behaviors.h"

#include <algorithm>
#include <deque>
#include <set>
#include <unordered_map>

#include "assemble/error.h"

namespace assemble {

std::string_view to_string(MessageType t) {
    switch (t) {
        case MessageType::Assign: return "assign";
        case MessageType::Cancel: return "cancel";
        case MessageType::DeliverRequest: return "deliver-request";
        case MessageType::Delivered: return "delivered";
        case MessageType::ReadyToConnect: return "ready-to-connect";
        case MessageType::ConnectDone: return "connect-done";
        case MessageType::TaskSubmitted: return "task-submitted";
    }
    return "?";
}

MessageType parse_message_type(std::string_view s) {
    for (auto t : {MessageType::Assign, MessageType::Cancel, MessageType::DeliverRequest, MessageType::Delivered,
                   MessageType::ReadyToConnect, MessageType::ConnectDone, MessageType::TaskSubmitted})
        if (to_string(t) == s) return t;
    throw Error(ErrorCode::MalformedTrace, "unknown message type '" + std::string(s) + "'");
}

void sort_for_delivery(std::vector<CoordinationMessage>& messages) {
    std::stable_sort(messages.begin(), messages.end(), [](const auto& a, const auto& b) {
        return std::tie(a.from, a.type) < std::tie(b.from, b.type);
    });
}

std::string_view to_string(BuilderPhase p) {
    switch (p) {
        case BuilderPhase::Free: return "free";
        case BuilderPhase::Obtaining: return "obtaining";
        case BuilderPhase::AwaitingTurn: return "awaiting-turn";
        case BuilderPhase::Delivering: return "delivering";
        case BuilderPhase::Connecting: return "connecting";
        case BuilderPhase::SubmittingSupport: return "submitting-support";
        case BuilderPhase::MasterCollecting: return "master-collecting";
        case BuilderPhase::MasterSubmitting: return "master-submitting";
    }
    return "?";
}

std::string_view to_string(AttackerPhase p) {
    switch (p) {
        case AttackerPhase::Exploring: return "exploring";
        case AttackerPhase::MonitoringGoal: return "monitoring-goal";
        case AttackerPhase::Striking: return "striking";
    }
    return "?";
}

// ---------------------------------------------------------------------------
// Shared movement

namespace {

PassCells pass_cells(const AgentContainer& c) {
    PassCells out{c.virtualPos};
    for (Vec2 o : c.attachments.offsets()) out.push_back(c.virtualPos + o);
    return out;
}

bool has_thing(const RawPerceptSet& raw, Vec2 rel, ThingKind kind) {
    for (const Thing& t : raw.things_at(rel))
        if (t.kind == kind) return true;
    return false;
}

std::optional<BlockType> block_at(const RawPerceptSet& raw, Vec2 rel) {
    for (const Thing& t : raw.things_at(rel))
        if (t.kind == ThingKind::Block) return t.detail;
    return std::nullopt;
}

// Quarter turns (clockwise) that take `from` onto `to`; -1 if none does.
int cw_turns(Vec2 from, Vec2 to) {
    Vec2 v = from;
    for (int k = 0; k < 4; ++k) {
        if (v == to) return k;
        v = rotate(v, Rotation::Cw);
    }
    return -1;
}

// First rotation of a feasible sequence turning the block at `from` onto `to`.
std::optional<ActionRequest> rotate_block(const AgentContainer& c, Vec2 from, Vec2 to) {
    const int k = cw_turns(from, to);
    if (k <= 0) return std::nullopt;
    const std::vector<std::pair<Rotation, int>> options =
        k == 3 ? std::vector<std::pair<Rotation, int>>{{Rotation::Ccw, 1}, {Rotation::Cw, 3}}
               : std::vector<std::pair<Rotation, int>>{{Rotation::Cw, k}, {Rotation::Ccw, 4 - k}};
    for (const auto& [r, turns] : options) {
        AttachmentModel m = c.attachments;
        bool ok = true;
        for (int i = 0; i < turns && ok; ++i) {
            ok = !blocked_rotations(m, c.raw).count(r);
            m.rotate(r);
        }
        if (ok) return ActionRequest::rotate(r);
    }
    return std::nullopt;
}

ActionRequest wander(const AgentContainer& c, std::optional<Vec2>& hold, const SimConfig& cfg) {
    const auto choice = explore_direction(*c.map, c.virtualPos, cfg.chunkSize, pass_cells(c));
    if (choice.dir)
        if (auto a = move_with_rotation(c, *choice.dir)) return *a;
    if (auto u = unstuck_decide(c, hold, cfg)) return *u;
    const auto blocked = blocked_moves(c.attachments, c.raw);
    for (int k = 0; k < 4; ++k) {
        const Direction d = kDirections[static_cast<std::size_t>((c.currentStep + k) % 4)];
        if (!blocked.count(d)) return ActionRequest::move(d);
    }
    return ActionRequest::skip();
}

struct Nav {
    bool arrived = false;
    ActionRequest action;
};

// Heads for `target`; with `adjacent` the trip ends next to it instead of on it.
Nav navigate(const AgentContainer& c, Vec2 target, std::optional<Vec2>& hold, const SimConfig& cfg,
             bool adjacent = false) {
    const Vec2 pos = c.virtualPos;
    if (adjacent ? manhattan(pos, target) == 1 : pos == target) return {true, {}};
    const auto path = shortest_path(*c.map, pos, target, pass_cells(c));
    if (!path || path->empty()) return {false, wander(c, hold, cfg)};
    if (auto a = move_with_rotation(c, path->front())) return {false, *a};
    if (auto u = unstuck_decide(c, hold, cfg)) return {false, *u};
    return {false, wander(c, hold, cfg)};
}

}  // namespace

std::optional<ActionRequest> move_with_rotation(const AgentContainer& c, Direction dir) {
    if (!blocked_moves(c.attachments, c.raw).count(dir)) return ActionRequest::move(dir);
    if (c.attachments.empty()) return std::nullopt;
    // Once turned, our blocks no longer sit where the percepts show them.
    RawPerceptSet view = c.raw;
    std::erase_if(view.things, [&](const PerceivedThing& t) {
        return t.thing.kind == ThingKind::Block && c.attachments.holds(t.rel);
    });
    for (int turns = 1; turns <= 3; ++turns)
        for (Rotation r : {Rotation::Cw, Rotation::Ccw}) {
            AttachmentModel m = c.attachments;
            bool ok = true;
            for (int i = 0; i < turns && ok; ++i) {
                ok = !blocked_rotations(m, view).count(r);
                m.rotate(r);
            }
            if (ok && !blocked_moves(m, view).count(dir)) return ActionRequest::rotate(r);
        }
    return std::nullopt;
}

std::optional<ActionRequest> unstuck_decide(const AgentContainer& c, std::optional<Vec2>& hold,
                                            const SimConfig& config) {
    const RawPerceptSet& raw = c.raw;
    const auto open = [&](Vec2 rel) {
        if (!raw.in_vision(rel) || raw.terrain_at(rel) == Terrain::Obstacle) return false;
        if (c.attachments.holds(rel)) return true;
        return !has_thing(raw, rel, ThingKind::Entity) && !has_thing(raw, rel, ThingKind::Block);
    };
    std::set<Vec2> region{Vec2{}};
    std::deque<Vec2> frontier{Vec2{}};
    bool escapes = false;
    while (!frontier.empty()) {
        const Vec2 cur = frontier.front();
        frontier.pop_front();
        if (manhattan(cur) == raw.vision) escapes = true;
        for (Direction d : kDirections) {
            const Vec2 n = cur + unit(d);
            if (!region.count(n) && open(n)) {
                region.insert(n);
                frontier.push_back(n);
            }
        }
    }
    if (escapes) {
        hold.reset();
        return std::nullopt;
    }
    if (raw.energy < config.clearEnergy) return ActionRequest::skip();

    if (hold) {
        const Vec2 rel = *hold - c.virtualPos;
        if (rel != Vec2{} && raw.in_vision(rel) && raw.terrain_at(rel) == Terrain::Obstacle)
            return ActionRequest::clear(rel);
        hold.reset();
    }
    std::optional<Vec2> best;
    int bestScore = -1;
    for (Vec2 cell : region)
        for (Direction d : kDirections) {
            const Vec2 n = cell + unit(d);
            if (n == Vec2{} || !raw.in_vision(n) || raw.terrain_at(n) != Terrain::Obstacle) continue;
            int score = 0;
            for (Direction e : kDirections) {
                const Vec2 m = n + unit(e);
                if (!region.count(m) && open(m)) ++score;
            }
            if (score > bestScore || (score == bestScore && n < *best)) {
                best = n;
                bestScore = score;
            }
        }
    if (!best) return std::nullopt;
    hold = c.virtualPos + *best;
    return ActionRequest::clear(*best);
}

std::optional<VirtualPosition> choose_meeting_point(const MapModel& model, VirtualPosition from,
                                                    const OrderedPlan& plan, const PassCells& pass) {
    auto flood = [&](std::vector<Vec2> sources) {
        std::unordered_map<Vec2, int, Vec2Hash> dist;
        std::deque<Vec2> frontier;
        for (Vec2 s : sources)
            if (dist.emplace(s, 0).second) frontier.push_back(s);
        while (!frontier.empty()) {
            const Vec2 cur = frontier.front();
            frontier.pop_front();
            for (Direction d : kDirections) {
                const Vec2 n = cur + unit(d);
                if (dist.count(n) || !traversable(model, n, false, pass)) continue;
                dist[n] = dist[cur] + 1;
                frontier.push_back(n);
            }
        }
        return dist;
    };
    const auto fromMaster = flood({from});

    std::set<BlockType> needed;
    for (std::size_t i = 1; i < plan.size(); ++i) needed.insert(plan[i].type);
    std::vector<std::unordered_map<Vec2, int, Vec2Hash>> dispenserFields;
    for (BlockType t : needed) {
        std::vector<Vec2> sources;
        for (const auto& [p, cell] : model.cells())
            if (cell.has(ThingKind::Dispenser, t)) sources.push_back(p);
        if (!sources.empty()) dispenserFields.push_back(flood(sources));
    }

    std::optional<Vec2> best;
    long bestCost = 0;
    for (const auto& [p, d] : fromMaster) {
        if (model.terrain_at(p) != CellTerrain::Goal) continue;
        if (p != from && !traversable(model, p, false, pass)) continue;
        bool room = true;
        for (const Requirement& r : plan) {
            const Vec2 q = p + r.pos;
            if (model.at(q) && q != from && !traversable(model, q, false, pass)) room = false;
        }
        if (!room) continue;
        long cost = d;
        for (const auto& field : dispenserFields)
            if (auto it = field.find(p); it != field.end()) cost += it->second;
        if (!best || cost < bestCost || (cost == bestCost && p < *best)) {
            best = p;
            bestCost = cost;
        }
    }
    return best;
}

// ---------------------------------------------------------------------------
// Builder

namespace {

class Builder {
public:
    Builder(const AgentContainer& c, BuilderState& st, const DecisionContext& ctx)
        : c_(c), raw_(c.raw), st_(st), cfg_(ctx.config), ids_(ctx.entityIds) {}

    Decision decide(const std::vector<CoordinationMessage>& inbox) {
        if (raw_.lastAction && raw_.lastAction->type != ActionType::Skip && raw_.lastActionResult) {
            if (*raw_.lastActionResult == ActionResult::Success)
                st_.failStreak = 0;
            else
                ++st_.failStreak;
        }
        for (const auto& m : inbox) receive(m);

        if (raw_.disabled) return finish(ActionRequest::skip());
        if (st_.failStreak >= cfg_.failTolerance && !st_.resetting) begin_reset();
        if (st_.resetting) {
            const auto anchors = c_.attachments.anchors();
            if (!anchors.empty() && st_.resetAttempts < 6) {
                ++st_.resetAttempts;
                return finish(ActionRequest::detach(*direction_of(anchors.front())));
            }
            st_.resetting = false;
        }

        for (int guard = 0; guard < 6; ++guard) {
            std::optional<ActionRequest> a;
            switch (st_.phase) {
                case BuilderPhase::Free: a = wander(c_, st_.clearTarget, cfg_); break;
                case BuilderPhase::Obtaining: a = obtaining(); break;
                case BuilderPhase::AwaitingTurn: a = awaiting(); break;
                case BuilderPhase::Delivering: a = delivering(); break;
                case BuilderPhase::Connecting: a = connecting(); break;
                case BuilderPhase::SubmittingSupport: a = ActionRequest::skip(); break;
                case BuilderPhase::MasterCollecting: a = collecting(); break;
                case BuilderPhase::MasterSubmitting: a = submitting(); break;
            }
            if (a) return finish(*a);
        }
        return finish(ActionRequest::skip());
    }

private:
    Decision finish(ActionRequest a) {
        out_.action = std::move(a);
        return std::move(out_);
    }

    void send(MessageType type, const std::string& to, const std::string& task) {
        CoordinationMessage m;
        m.type = type;
        m.from = c_.name;
        m.to = to;
        m.task = task;
        out_.outbox.push_back(std::move(m));
    }

    bool mine(const CoordinationMessage& m) const { return st_.assignment && st_.assignment->task == m.task; }

    void clear_task_state() {
        st_.assignment.reset();
        st_.plan.clear();
        st_.roster.clear();
        st_.meetingPoint.reset();
        st_.currentTarget.reset();
        st_.nextIndex = 1;
        st_.requestSent = st_.delivered = st_.connectIssued = st_.assembledNoted = false;
        st_.pendingDelivery.reset();
        st_.dest.reset();
        st_.stand.reset();
        st_.readyToConnect = st_.deliveredSent = false;
        st_.phase = BuilderPhase::Free;
    }

    void receive(const CoordinationMessage& m) {
        switch (m.type) {
            case MessageType::Assign:
                if (mine(m)) return;
                clear_task_state();
                st_.assignment = TaskAssignment{c_.name, m.task, m.req};
                st_.plan = m.plan;
                st_.roster = m.roster;
                st_.phase = BuilderPhase::Obtaining;
                st_.failStreak = 0;
                break;
            case MessageType::Cancel:
            case MessageType::TaskSubmitted:
                if (mine(m)) clear_task_state();
                break;
            case MessageType::DeliverRequest:
                if (!mine(m)) return;
                st_.pendingDelivery = m;
                st_.deliveredSent = st_.readyToConnect = false;
                if (st_.phase == BuilderPhase::AwaitingTurn) st_.phase = BuilderPhase::Delivering;
                break;
            case MessageType::Delivered:
                if (mine(m) && st_.phase == BuilderPhase::MasterCollecting && st_.nextIndex < st_.roster.size() &&
                    m.from == st_.roster[st_.nextIndex])
                    st_.delivered = true;
                break;
            case MessageType::ReadyToConnect:
                if (mine(m)) st_.readyToConnect = true;
                break;
            case MessageType::ConnectDone:
                break;
        }
    }

    void begin_reset() {
        if (st_.assignment) {
            send(MessageType::Cancel, kOperatorName, st_.assignment->task);
            out_.notes.push_back("reset:" + st_.assignment->task);
        }
        clear_task_state();
        st_.resetting = true;
        st_.resetAttempts = 0;
        st_.failStreak = 0;
    }

    bool is_master() const { return st_.assignment && assemble::is_master(*st_.assignment); }

    // The single anchored block of the wanted type, if that is all we hold.
    std::optional<Vec2> own_block() const {
        if (!st_.assignment || c_.attachments.size() != 1) return std::nullopt;
        const auto& [offset, entry] = *c_.attachments.blocks().begin();
        if (!entry.anchored || entry.type != st_.assignment->req.type) return std::nullopt;
        return offset;
    }

    void ineffective() { ++st_.failStreak; }

    std::optional<ActionRequest> obtaining() {
        if (own_block()) {
            st_.phase = is_master() ? BuilderPhase::MasterCollecting
                                    : (st_.pendingDelivery ? BuilderPhase::Delivering : BuilderPhase::AwaitingTurn);
            return std::nullopt;
        }
        if (!c_.attachments.empty()) {
            const auto anchors = c_.attachments.anchors();
            if (raw_.terrain_at({}) == Terrain::Goal || anchors.empty()) return wander(c_, st_.clearTarget, cfg_);
            return ActionRequest::detach(*direction_of(anchors.front()));
        }
        const BlockType want = st_.assignment->req.type;
        const auto disp = find_nearest(
            *c_.map, c_.virtualPos, [&](const MapPercept& p) { return p.has(ThingKind::Dispenser, want); },
            pass_cells(c_));
        if (!disp) return wander(c_, st_.clearTarget, cfg_);
        const Vec2 rel = *disp - c_.virtualPos;
        if (manhattan(rel) == 1) {
            const Direction dir = *direction_of(rel);
            if (auto type = block_at(raw_, rel)) {
                if (*type == want && !raw_.attached_at(rel) && !has_thing(raw_, rel, ThingKind::Entity))
                    return ActionRequest::attach(dir);
                ineffective();
                return ActionRequest::skip();
            }
            if (has_thing(raw_, rel, ThingKind::Entity)) {
                ineffective();
                return ActionRequest::skip();
            }
            return ActionRequest::request(dir);
        }
        return navigate(c_, *disp, st_.clearTarget, cfg_, true).action;
    }

    std::optional<ActionRequest> awaiting() {
        if (!own_block()) {
            st_.phase = BuilderPhase::Obtaining;
            return std::nullopt;
        }
        if (st_.pendingDelivery) {
            st_.phase = BuilderPhase::Delivering;
            return std::nullopt;
        }
        return wander(c_, st_.clearTarget, cfg_);
    }

    // Frame of the master, translated into ours.
    std::optional<Vec2> to_master_frame() const {
        const auto& m = *st_.pendingDelivery;
        auto it = c_.identified.find(m.from);
        if (it == c_.identified.end()) return std::nullopt;
        return it->second;
    }

    std::optional<Vec2> choose_stand(Vec2 dest, Vec2 t) const {
        const auto& m = *st_.pendingDelivery;
        std::set<Vec2> forbidden{m.master + t};
        for (const auto& s : m.structure) forbidden.insert(s.offset + t);
        for (const auto& r : st_.plan) forbidden.insert(m.master + r.pos + t);
        const auto pass = pass_cells(c_);
        std::optional<Vec2> best;
        int bestDist = 0;
        for (Direction d : kDirections) {
            const Vec2 cand = dest + unit(d);
            if (forbidden.count(cand)) continue;
            int dist = 0;
            if (cand != c_.virtualPos) {
                if (!traversable(*c_.map, cand, false, pass)) continue;
                auto bd = bfs_distance(*c_.map, c_.virtualPos, cand, pass);
                if (!bd) continue;
                dist = *bd;
            }
            if (!best || dist < bestDist || (dist == bestDist && cand < *best)) {
                best = cand;
                bestDist = dist;
            }
        }
        return best;
    }

    std::optional<ActionRequest> delivering() {
        const auto block = own_block();
        if (!block) {
            st_.phase = BuilderPhase::Obtaining;
            return std::nullopt;
        }
        const auto t = to_master_frame();
        if (!t) {
            ineffective();
            return ActionRequest::skip();
        }
        const Vec2 dest = st_.pendingDelivery->dest + *t;
        st_.dest = dest;
        st_.stand = choose_stand(dest, *t);
        if (!st_.stand) {
            ineffective();
            return wander(c_, st_.clearTarget, cfg_);
        }
        if (c_.virtualPos != *st_.stand) return navigate(c_, *st_.stand, st_.clearTarget, cfg_).action;

        const Vec2 want = dest - c_.virtualPos;
        if (*block == want) {
            if (!st_.deliveredSent) {
                send(MessageType::Delivered, st_.pendingDelivery->from, st_.assignment->task);
                st_.deliveredSent = true;
            }
            st_.phase = BuilderPhase::Connecting;
            return ActionRequest::skip();
        }
        if (auto r = rotate_block(c_, *block, want)) return *r;
        ineffective();
        return ActionRequest::skip();
    }

    std::optional<ActionRequest> connecting() {
        const auto& req = *st_.pendingDelivery;
        if (raw_.lastAction && raw_.lastAction->type == ActionType::Connect && raw_.lastActionResult == ActionResult::Success) {
            send(MessageType::ConnectDone, req.from, st_.assignment->task);
            const auto anchors = c_.attachments.anchors();
            st_.phase = BuilderPhase::SubmittingSupport;
            if (anchors.empty()) return ActionRequest::skip();
            return ActionRequest::detach(*direction_of(anchors.front()));
        }
        const auto block = own_block();
        if (!block || !st_.dest || *block != *st_.dest - c_.virtualPos) {
            st_.phase = BuilderPhase::Delivering;
            st_.deliveredSent = false;
            st_.readyToConnect = false;
            return std::nullopt;
        }
        if (!st_.readyToConnect) return ActionRequest::skip();
        const auto t = to_master_frame();
        auto id = ids_.find(req.from);
        if (!t || id == ids_.end()) {
            ineffective();
            return ActionRequest::skip();
        }
        for (const auto& s : req.structure) out_.gained.push_back({s.offset + *t - c_.virtualPos, s.type});
        return ActionRequest::connect(id->second, *block);
    }

    bool meeting_point_usable(Vec2 mp) const {
        const auto pass = pass_cells(c_);
        if (c_.map->terrain_at(mp) != CellTerrain::Goal) return false;
        if (mp != c_.virtualPos && !traversable(*c_.map, mp, false, pass)) return false;
        for (const auto& r : st_.plan) {
            const Vec2 q = mp + r.pos;
            if (c_.map->at(q) && !traversable(*c_.map, q, false, pass)) return false;
        }
        return true;
    }

    std::optional<ActionRequest> collecting() {
        const bool started = st_.nextIndex > 1 || st_.requestSent;
        if (!started) {
            const auto block = own_block();
            if (!block) {
                st_.phase = BuilderPhase::Obtaining;
                return std::nullopt;
            }
            if (st_.meetingPoint && c_.virtualPos != *st_.meetingPoint && !meeting_point_usable(*st_.meetingPoint))
                st_.meetingPoint.reset();
            if (!st_.meetingPoint)
                st_.meetingPoint = choose_meeting_point(*c_.map, c_.virtualPos, st_.plan, pass_cells(c_));
            if (!st_.meetingPoint) return wander(c_, st_.clearTarget, cfg_);
            if (c_.virtualPos != *st_.meetingPoint) {
                const auto nav = navigate(c_, *st_.meetingPoint, st_.clearTarget, cfg_);
                if (!shortest_path(*c_.map, c_.virtualPos, *st_.meetingPoint, pass_cells(c_)))
                    st_.meetingPoint.reset();
                return nav.action;
            }
            if (*block != Vec2{0, 1}) {
                if (auto r = rotate_block(c_, *block, {0, 1})) return *r;
                ineffective();
                return ActionRequest::skip();
            }
            if (st_.plan.size() == 1) {
                st_.phase = BuilderPhase::MasterSubmitting;
                return std::nullopt;
            }
        } else if (!structure_intact()) {
            begin_reset();
            return std::nullopt;
        }

        const std::size_t i = st_.nextIndex;
        if (i >= st_.plan.size()) {
            st_.phase = BuilderPhase::MasterSubmitting;
            return std::nullopt;
        }
        const Requirement& want = st_.plan[i];
        const Vec2 joint = joint_for(i);
        if (!st_.requestSent) {
            CoordinationMessage m;
            m.type = MessageType::DeliverRequest;
            m.from = c_.name;
            m.to = st_.roster[i];
            m.task = st_.assignment->task;
            m.dest = *st_.meetingPoint + want.pos;
            m.master = *st_.meetingPoint;
            m.structure.push_back({*st_.meetingPoint + joint, c_.attachments.blocks().at(joint).type});
            for (const auto& [o, e] : c_.attachments.blocks())
                if (o != joint) m.structure.push_back({*st_.meetingPoint + o, e.type});
            out_.outbox.push_back(std::move(m));
            st_.requestSent = true;
            return ActionRequest::skip();
        }
        if (!st_.delivered) return ActionRequest::skip();
        if (!st_.connectIssued) {
            if (block_at(raw_, want.pos) == want.type && raw_.attached_at(want.pos)) {
                send(MessageType::ReadyToConnect, st_.roster[i], st_.assignment->task);
                st_.connectIssued = true;
            } else {
                ineffective();
            }
            return ActionRequest::skip();
        }
        if (raw_.lastAction && raw_.lastAction->type == ActionType::Connect &&
            raw_.lastActionResult == ActionResult::Success && c_.attachments.holds(want.pos)) {
            ++st_.nextIndex;
            st_.requestSent = st_.delivered = st_.connectIssued = false;
            return std::nullopt;
        }
        auto id = ids_.find(st_.roster[i]);
        if (id == ids_.end()) {
            ineffective();
            return ActionRequest::skip();
        }
        out_.gained.push_back({want.pos, want.type});
        return ActionRequest::connect(id->second, joint);
    }

    // Earliest plan entry adjacent to entry i; the plan order guarantees one exists.
    Vec2 joint_for(std::size_t i) const {
        for (std::size_t j = 0; j < i; ++j)
            if (manhattan(st_.plan[j].pos, st_.plan[i].pos) == 1) return st_.plan[j].pos;
        return st_.plan[0].pos;
    }

    bool structure_intact() const {
        if (!st_.meetingPoint || c_.virtualPos != *st_.meetingPoint) return false;
        for (std::size_t j = 0; j < st_.nextIndex && j < st_.plan.size(); ++j) {
            auto it = c_.attachments.blocks().find(st_.plan[j].pos);
            if (it == c_.attachments.blocks().end() || it->second.type != st_.plan[j].type) return false;
        }
        return true;
    }

    std::optional<ActionRequest> submitting() {
        const std::string task = st_.assignment->task;
        if (raw_.lastAction && raw_.lastAction->type == ActionType::Submit &&
            raw_.lastActionResult == ActionResult::Success) {
            for (const auto& member : st_.roster)
                if (member != c_.name) send(MessageType::TaskSubmitted, member, task);
            send(MessageType::TaskSubmitted, kOperatorName, task);
            clear_task_state();
            return std::nullopt;
        }
        st_.nextIndex = st_.plan.size();
        if (!structure_intact()) {
            begin_reset();
            return std::nullopt;
        }
        if (!st_.assembledNoted) {
            out_.notes.push_back("assembled:" + task);
            st_.assembledNoted = true;
        }
        return ActionRequest::submit(task);
    }

    const AgentContainer& c_;
    const RawPerceptSet& raw_;
    BuilderState& st_;
    const SimConfig& cfg_;
    const std::map<std::string, EntityId>& ids_;
    Decision out_;
};

}  // namespace

Decision builder_decide(const AgentContainer& c, BuilderState& state,
                        const std::vector<CoordinationMessage>& inbox, const DecisionContext& ctx) {
    return Builder(c, state, ctx).decide(inbox);
}

// ---------------------------------------------------------------------------
// Attacker

ActionRequest attacker_decide(const AgentContainer& c, AttackerState& st, const SimConfig& config) {
    const RawPerceptSet& raw = c.raw;
    if (raw.disabled) {
        st.strikeTarget.reset();
        return ActionRequest::skip();
    }
    const auto enemy_at = [&](Vec2 rel) {
        for (const Thing& t : raw.things_at(rel))
            if (t.kind == ThingKind::Entity && t.detail != raw.team) return true;
        return false;
    };
    const auto strikable = [&](Vec2 rel) {
        if (rel == Vec2{} || !raw.in_vision(rel) || !block_at(raw, rel) || !raw.attached_at(rel)) return false;
        for (Direction d : kDirections)
            if (enemy_at(rel + unit(d))) return true;
        return false;
    };

    if (st.strikeTarget) {
        const Vec2 rel = st.strikeTarget->cell - c.virtualPos;
        if (raw.lastActionResult != ActionResult::Success) st.strikeTarget->consecutive = 0;
        if (strikable(rel) && raw.energy >= config.clearEnergy) {
            ++st.strikeTarget->consecutive;
            return ActionRequest::clear(rel);
        }
        st.strikeTarget.reset();
        st.phase = AttackerPhase::MonitoringGoal;
    }

    if (raw.energy >= config.clearEnergy) {
        std::optional<std::tuple<int, Vec2, Vec2>> best;  // (distance, enemy, block)
        for (const auto& pt : raw.things) {
            if (pt.thing.kind != ThingKind::Entity || pt.thing.detail == raw.team) continue;
            if (raw.terrain_at(pt.rel) != Terrain::Goal) continue;
            for (Direction d : kDirections) {
                const Vec2 b = pt.rel + unit(d);
                if (b == Vec2{} || !raw.in_vision(b) || !block_at(raw, b) || !raw.attached_at(b)) continue;
                const std::tuple<int, Vec2, Vec2> key{manhattan(pt.rel), pt.rel, b};
                if (!best || key < *best) best = key;
            }
        }
        if (best) {
            const Vec2 b = std::get<2>(*best);
            st.strikeTarget = StrikeTarget{c.virtualPos + b, 1};
            st.phase = AttackerPhase::Striking;
            return ActionRequest::clear(b);
        }
    }

    PassCells pass;
    for (Vec2 o : c.attachments.offsets()) pass.push_back(c.virtualPos + o);
    const auto goal = find_nearest(
        *c.map, c.virtualPos, [](const MapPercept& p) { return p.terrain == CellTerrain::Goal; }, pass);
    if (!goal) {
        st.phase = AttackerPhase::Exploring;
        return wander(c, st.clearTarget, config);
    }
    st.phase = AttackerPhase::MonitoringGoal;
    if (raw.terrain_at({}) == Terrain::Goal) return ActionRequest::skip();
    return navigate(c, *goal, st.clearTarget, config).action;
}

}  // namespace assemble
