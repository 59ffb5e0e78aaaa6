#pragma once

#include <map>
#include <set>
#include <vector>

#include "assemble/actions.h"
#include "assemble/percepts.h"

namespace assemble {

// A block that becomes ours through a successful connect. The first entry is the
// partner block joined to our own connecting block.
struct GainedBlock {
    Vec2 offset;
    BlockType type = 0;
    bool operator==(const GainedBlock&) const = default;
};

// The agent's belief about the blocks it holds, in its own frame. Blocks held
// directly are anchors; the rest hang off them through connect links.
class AttachmentModel {
public:
    struct Entry {
        BlockType type = 0;
        bool anchored = false;
        std::set<Vec2> links;
        bool operator==(const Entry&) const = default;
    };

    const std::map<Vec2, Entry>& blocks() const { return blocks_; }
    bool empty() const { return blocks_.empty(); }
    std::size_t size() const { return blocks_.size(); }
    bool holds(Vec2 offset) const { return blocks_.count(offset) > 0; }
    std::vector<Vec2> offsets() const;
    std::vector<Vec2> anchors() const;
    std::vector<std::pair<Vec2, BlockType>> items() const;

    // `after` is the percept set of the following step; it supplies block types.
    // `tasks` (the list seen when acting) resolves what a submit consumed.
    void on_action(const ActionRequest& action, ActionResult result, const RawPerceptSet& after,
                   const std::vector<GainedBlock>& gained = {}, const std::vector<TaskView>& tasks = {});
    // Drops blocks whose attached flag has disappeared (and anything no longer
    // linked to an anchor). A disabled agent holds nothing.
    std::vector<Vec2> refresh(const RawPerceptSet& raw);

    void rotate(Rotation r);
    void clear() { blocks_.clear(); }

    bool operator==(const AttachmentModel&) const = default;

private:
    void add(Vec2 offset, BlockType type, bool anchored);
    void link(Vec2 a, Vec2 b);
    std::vector<Vec2> prune();

    std::map<Vec2, Entry> blocks_;
};

std::set<Direction> blocked_moves(const AttachmentModel& model, const RawPerceptSet& raw);
std::set<Rotation> blocked_rotations(const AttachmentModel& model, const RawPerceptSet& raw);

}  // namespace assemble
