#pragma once

#include <functional>
#include <string>
#include <vector>

#include "assemble/percepts.h"
#include "assemble/world.h"

namespace assemble {

// Requirements in an order in which each block touches the agent or an earlier block.
using OrderedPlan = std::vector<Requirement>;

struct TaskAssignment {
    std::string agent;
    std::string task;
    Requirement req;
    bool operator==(const TaskAssignment&) const = default;
};

// East, then west, then south from the current requirement; when that scan is
// exhausted, resume from the most recent requirement that still has an open
// neighbour. Throws Error(Unplannable).
OrderedPlan plan_requirements(const std::vector<Requirement>& reqs);

using IdentifiedFn = std::function<bool(const std::string&, const std::string&)>;

// Repeatedly extracts a maximum clique of the identification graph; among equal
// sizes the lexicographically smallest member list wins.
std::vector<std::vector<std::string>> form_subteams(std::vector<std::string> freeAgents,
                                                    const IdentifiedFn& identified);

// `taken` names tasks already being worked on by some sub-team.
std::vector<TaskAssignment> assign_tasks(const std::vector<std::vector<std::string>>& subteams,
                                         const std::vector<TaskView>& tasks, int step, int minSlack,
                                         std::vector<std::string> taken = {});

struct MonitorResult {
    std::vector<TaskAssignment> kept;
    std::vector<TaskAssignment> cancelled;
};

// Tasks missing from `tasks` count as expired.
MonitorResult monitor_assignments(const std::vector<TaskAssignment>& assignments,
                                  const std::vector<TaskView>& tasks, int step);

inline bool is_master(const TaskAssignment& a) { return a.req.pos == Vec2{0, 1}; }

}  // namespace assemble
