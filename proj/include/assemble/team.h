#pragma once

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "assemble/behaviors.h"

namespace assemble {

// Team-level bookkeeping about tasks: assigned, cancelled, assembled, reset.
struct TaskEvent {
    int step = 0;
    int team = 0;
    std::string kind;
    std::string task;
    std::vector<std::string> agents;
    std::string detail;
    bool operator==(const TaskEvent&) const = default;
};

// Forms sub-teams, hands out tasks and withdraws them when they lapse.
class Operator {
public:
    explicit Operator(int team) : team_(team) {}

    std::vector<CoordinationMessage> step(int step, const std::vector<std::shared_ptr<const AgentContainer>>& builders,
                                          const std::vector<CoordinationMessage>& inbox, const SimConfig& config,
                                          std::vector<TaskEvent>& events);
    const std::vector<TaskAssignment>& assignments() const { return assignments_; }

private:
    void cancel(int step, const std::string& task, const std::string& cause, std::vector<CoordinationMessage>& out,
                std::vector<TaskEvent>& events);

    int team_;
    std::vector<TaskAssignment> assignments_;
};

struct AgentSlot {
    std::string name;
    EntityId entity = 0;
    Role role = Role::Idle;
    BuilderState builder;
    AttackerState attacker;
};

struct TeamDecisions {
    std::vector<ActionRequest> actions;  // per slot
    std::vector<CoordinationMessage> sent;
    std::vector<TaskEvent> taskEvents;
};

// One team's agents, their percept pipeline, operator and mailbox.
class TeamController {
public:
    TeamController(int team, std::vector<AgentSlot> slots, const SimConfig& config);

    int team() const { return team_; }
    const std::vector<AgentSlot>& slots() const { return slots_; }
    PerceptPipeline& pipeline() { return pipeline_; }
    const PerceptPipeline& pipeline() const { return pipeline_; }

    // Ingests one step of percepts; returns new identifications.
    std::vector<IdentificationEvent> ingest(const PerceptBatch& batch);
    TeamDecisions decide(int step);

private:
    int team_;
    const SimConfig& config_;
    std::vector<AgentSlot> slots_;
    std::map<std::string, EntityId> ids_;
    PerceptPipeline pipeline_;
    Operator operator_;
    std::vector<CoordinationMessage> mailbox_;  // delivered at the next step boundary
};

}  // namespace assemble
