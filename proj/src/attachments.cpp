#include "assemble/attachments.h"

#include <algorithm>

#include "assemble/error.h"

namespace assemble {

std::vector<Vec2> AttachmentModel::offsets() const {
    std::vector<Vec2> out;
    for (const auto& [o, _] : blocks_) out.push_back(o);
    return out;
}

std::vector<Vec2> AttachmentModel::anchors() const {
    std::vector<Vec2> out;
    for (const auto& [o, e] : blocks_)
        if (e.anchored) out.push_back(o);
    return out;
}

std::vector<std::pair<Vec2, BlockType>> AttachmentModel::items() const {
    std::vector<std::pair<Vec2, BlockType>> out;
    for (const auto& [o, e] : blocks_) out.emplace_back(o, e.type);
    return out;
}

void AttachmentModel::add(Vec2 offset, BlockType type, bool anchored) {
    if (blocks_.count(offset))
        throw Error(ErrorCode::InconsistentUpdate,
                    "attachment model already holds a block at (" + std::to_string(offset.x) + "," +
                        std::to_string(offset.y) + ")");
    blocks_[offset] = Entry{type, anchored, {}};
}

void AttachmentModel::link(Vec2 a, Vec2 b) {
    if (a == b || !blocks_.count(a) || !blocks_.count(b)) return;
    blocks_[a].links.insert(b);
    blocks_[b].links.insert(a);
}

std::vector<Vec2> AttachmentModel::prune() {
    std::set<Vec2> reach;
    std::vector<Vec2> frontier = anchors();
    reach.insert(frontier.begin(), frontier.end());
    while (!frontier.empty()) {
        const Vec2 cur = frontier.back();
        frontier.pop_back();
        for (Vec2 n : blocks_.at(cur).links)
            if (blocks_.count(n) && reach.insert(n).second) frontier.push_back(n);
    }
    std::vector<Vec2> removed;
    for (auto it = blocks_.begin(); it != blocks_.end();) {
        if (reach.count(it->first)) {
            ++it;
        } else {
            removed.push_back(it->first);
            it = blocks_.erase(it);
        }
    }
    for (auto& [_, e] : blocks_)
        std::erase_if(e.links, [&](Vec2 l) { return !blocks_.count(l); });
    return removed;
}

namespace {

std::optional<BlockType> block_type_at(const RawPerceptSet& raw, Vec2 rel) {
    for (const Thing& t : raw.things_at(rel))
        if (t.kind == ThingKind::Block) return t.detail;
    return std::nullopt;
}

}  // namespace

void AttachmentModel::on_action(const ActionRequest& action, ActionResult result,
                                const RawPerceptSet& after, const std::vector<GainedBlock>& gained,
                                const std::vector<TaskView>& tasks) {
    if (result != ActionResult::Success) return;
    switch (action.type) {
        case ActionType::Attach: {
            const Vec2 o = unit(action.dir);
            // Success means the block there was free, so anything we had there is gone
            // (destroyed earlier in the same step and replaced).
            if (blocks_.erase(o)) prune();
            add(o, block_type_at(after, o).value_or(-1), true);
            break;
        }
        case ActionType::Detach: {
            auto it = blocks_.find(unit(action.dir));
            if (it == blocks_.end()) return;
            it->second.anchored = false;
            prune();
            break;
        }
        case ActionType::Rotate:
            rotate(action.rotation);
            break;
        case ActionType::Connect: {
            if (!blocks_.count(action.offset)) return;
            for (const GainedBlock& g : gained)
                if (!blocks_.count(g.offset)) blocks_[g.offset] = Entry{g.type, false, {}};
            if (gained.empty()) return;
            link(action.offset, gained.front().offset);
            for (std::size_t i = 0; i < gained.size(); ++i)
                for (std::size_t j = i + 1; j < gained.size(); ++j)
                    if (manhattan(gained[i].offset, gained[j].offset) == 1)
                        link(gained[i].offset, gained[j].offset);
            break;
        }
        case ActionType::Submit: {
            // The requirement cells are consumed; another holder's block may already
            // have moved into one of them, so the attached flags alone cannot tell.
            const TaskView* task = nullptr;
            for (const auto* list : {&tasks, &after.tasks})
                for (const TaskView& t : *list)
                    if (!task && t.name == action.task) task = &t;
            if (!task) return;
            for (const Requirement& r : task->requirements) blocks_.erase(r.pos);
            prune();
            break;
        }
        default:
            break;
    }
}

std::vector<Vec2> AttachmentModel::refresh(const RawPerceptSet& raw) {
    if (raw.disabled) {
        auto removed = offsets();
        blocks_.clear();
        return removed;
    }
    std::vector<Vec2> removed;
    for (auto it = blocks_.begin(); it != blocks_.end();) {
        if (raw.attached_at(it->first)) {
            ++it;
        } else {
            removed.push_back(it->first);
            it = blocks_.erase(it);
        }
    }
    for (auto& [_, e] : blocks_)
        for (Vec2 r : removed) e.links.erase(r);
    auto orphans = prune();
    removed.insert(removed.end(), orphans.begin(), orphans.end());
    std::sort(removed.begin(), removed.end());
    return removed;
}

void AttachmentModel::rotate(Rotation r) {
    std::map<Vec2, Entry> next;
    for (const auto& [o, e] : blocks_) {
        Entry moved{e.type, e.anchored, {}};
        for (Vec2 l : e.links) moved.links.insert(assemble::rotate(l, r));
        next[assemble::rotate(o, r)] = std::move(moved);
    }
    blocks_ = std::move(next);
}

namespace {

// Whether the cell at `rel` would stop one of our pieces from entering it.
bool obstructs(const AttachmentModel& model, const RawPerceptSet& raw, Vec2 rel) {
    if (raw.terrain_at(rel) == Terrain::Obstacle) return true;
    if (model.holds(rel)) return false;
    for (const Thing& t : raw.things_at(rel))
        if (t.kind != ThingKind::Dispenser) return true;
    return false;
}

}  // namespace

std::set<Direction> blocked_moves(const AttachmentModel& model, const RawPerceptSet& raw) {
    std::set<Direction> out;
    for (Direction d : kDirections) {
        bool blocked = obstructs(model, raw, unit(d));
        for (Vec2 o : model.offsets()) blocked = blocked || obstructs(model, raw, o + unit(d));
        if (blocked) out.insert(d);
    }
    return out;
}

std::set<Rotation> blocked_rotations(const AttachmentModel& model, const RawPerceptSet& raw) {
    std::set<Rotation> out;
    for (Rotation r : {Rotation::Cw, Rotation::Ccw})
        for (Vec2 o : model.offsets())
            if (obstructs(model, raw, rotate(o, r))) out.insert(r);
    return out;
}

}  // namespace assemble
