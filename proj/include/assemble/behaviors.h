#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "assemble/config.h"
#include "assemble/pipeline.h"
#include "assemble/task_plan.h"

namespace assemble {

enum class MessageType : std::uint8_t {
    Assign,
    Cancel,
    DeliverRequest,
    Delivered,
    ReadyToConnect,
    ConnectDone,
    TaskSubmitted,
};

std::string_view to_string(MessageType t);
MessageType parse_message_type(std::string_view s);

inline const std::string kOperatorName = "operator";

struct CoordinationMessage {
    MessageType type = MessageType::Assign;
    std::string from;
    std::string to;
    std::string task;
    // Assign
    Requirement req;
    OrderedPlan plan;
    std::vector<std::string> roster;  // agent per plan entry
    // DeliverRequest: cells in the master's frame; structure[0] is the block the
    // delivered one will be connected to.
    Vec2 dest;
    Vec2 master;  // where the master stands
    std::vector<GainedBlock> structure;

    bool operator==(const CoordinationMessage&) const = default;
};

// Step-boundary delivery in (sender, type) order.
void sort_for_delivery(std::vector<CoordinationMessage>& messages);

struct DecisionContext {
    const SimConfig& config;
    const std::map<std::string, EntityId>& entityIds;  // teammates' engine ids for connect
};

enum class BuilderPhase : std::uint8_t {
    Free,
    Obtaining,
    AwaitingTurn,
    Delivering,
    Connecting,
    SubmittingSupport,
    MasterCollecting,
    MasterSubmitting,
};

std::string_view to_string(BuilderPhase p);

struct BuilderState {
    BuilderPhase phase = BuilderPhase::Free;
    std::optional<TaskAssignment> assignment;
    OrderedPlan plan;
    std::vector<std::string> roster;
    std::optional<VirtualPosition> meetingPoint;  // master frame
    std::optional<VirtualPosition> currentTarget;
    int failStreak = 0;

    bool resetting = false;
    int resetAttempts = 0;
    // Master bookkeeping.
    std::size_t nextIndex = 1;  // plan entry being collected
    bool requestSent = false;
    bool delivered = false;
    bool connectIssued = false;
    bool assembledNoted = false;
    // Slave bookkeeping (own frame).
    std::optional<CoordinationMessage> pendingDelivery;
    std::optional<Vec2> dest;
    std::optional<Vec2> stand;
    bool readyToConnect = false;
    bool deliveredSent = false;
    // Getting unstuck.
    std::optional<Vec2> clearTarget;  // virtual frame
};

struct Decision {
    ActionRequest action;
    std::vector<CoordinationMessage> outbox;
    std::vector<GainedBlock> gained;  // blocks a successful connect would bring in
    std::vector<std::string> notes;   // "assembled:<task>", "reset:<task>"
};

Decision builder_decide(const AgentContainer& c, BuilderState& state,
                        const std::vector<CoordinationMessage>& inbox, const DecisionContext& ctx);

// Nearest reachable goal cell whose requirement cells are free or unknown, weighted
// towards the dispensers of the blocks still to be delivered. Empty when no goal is known.
std::optional<VirtualPosition> choose_meeting_point(const MapModel& model, VirtualPosition from,
                                                    const OrderedPlan& plan, const PassCells& pass = {});

// move(dir) when possible, else the first quarter-turn of the shortest rotation
// sequence (clockwise first) that frees `dir`; empty when neither works.
std::optional<ActionRequest> move_with_rotation(const AgentContainer& c, Direction dir);

// Clear at an obstacle when the agent is caged inside its vision; `hold` keeps the
// target (virtual frame) across calls.
std::optional<ActionRequest> unstuck_decide(const AgentContainer& c, std::optional<Vec2>& hold,
                                            const SimConfig& config);

enum class AttackerPhase : std::uint8_t { Exploring, MonitoringGoal, Striking };

std::string_view to_string(AttackerPhase p);

struct StrikeTarget {
    Vec2 cell;  // virtual frame
    int consecutive = 0;
    bool operator==(const StrikeTarget&) const = default;
};

struct AttackerState {
    AttackerPhase phase = AttackerPhase::Exploring;
    std::optional<StrikeTarget> strikeTarget;
    std::optional<Vec2> clearTarget;
};

ActionRequest attacker_decide(const AgentContainer& c, AttackerState& state, const SimConfig& config);

}  // namespace assemble
