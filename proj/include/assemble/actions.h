#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include "assemble/geometry.h"

namespace assemble {

using EntityId = int;
using BlockId = int;
using BlockType = int;

enum class ActionType : std::uint8_t {
    Skip,
    Move,
    Rotate,
    Attach,
    Detach,
    Connect,
    Request,
    Clear,
    Submit,
};

// One entity's intent for one step. Only the fields relevant to `type` are meaningful.
struct ActionRequest {
    ActionType type = ActionType::Skip;
    Direction dir = Direction::N;     // move, attach, detach, request
    Rotation rotation = Rotation::Cw;  // rotate
    EntityId partner = -1;             // connect
    Vec2 offset;                       // connect (own block), clear (target)
    std::string task;                  // submit

    static ActionRequest skip() { return {}; }
    static ActionRequest move(Direction d) { return {.type = ActionType::Move, .dir = d}; }
    static ActionRequest rotate(Rotation r) { return {.type = ActionType::Rotate, .rotation = r}; }
    static ActionRequest attach(Direction d) { return {.type = ActionType::Attach, .dir = d}; }
    static ActionRequest detach(Direction d) { return {.type = ActionType::Detach, .dir = d}; }
    static ActionRequest request(Direction d) { return {.type = ActionType::Request, .dir = d}; }
    static ActionRequest connect(EntityId partner, Vec2 ownBlock) {
        return {.type = ActionType::Connect, .partner = partner, .offset = ownBlock};
    }
    static ActionRequest clear(Vec2 target) { return {.type = ActionType::Clear, .offset = target}; }
    static ActionRequest submit(std::string task) {
        return {.type = ActionType::Submit, .task = std::move(task)};
    }

    bool operator==(const ActionRequest& o) const;
};

enum class ActionResult : std::uint8_t {
    Success,
    FailedBlocked,
    FailedPartner,
    FailedTarget,
    FailedResources,
    FailedDeadline,
    FailedInvalid,
};

std::string_view to_string(ActionType t);
std::string_view to_string(ActionResult r);
ActionResult parse_action_result(std::string_view s);
// Compact textual form, e.g. "move(n)", "connect(3,0,1)", "submit(task2)".
std::string to_string(const ActionRequest& a);
ActionRequest parse_action(std::string_view s);

}  // namespace assemble
