#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "assemble/behaviors.h"
#include "assemble/config.h"
#include "assemble/percepts.h"
#include "assemble/pipeline.h"
#include "assemble/team.h"
#include "assemble/world.h"

namespace assemble {

inline constexpr int kTraceVersion = 1;

struct TraceHeader {
    int version = kTraceVersion;
    SimConfig config;
    WorldState world;  // state before step 0
    bool operator==(const TraceHeader&) const = default;
};

struct AgentRecord {
    std::string name;
    RawPerceptSet percept;
    VirtualPosition virtualPos;
    std::vector<std::pair<Vec2, BlockType>> attachments;  // the agent's own model
    ActionRequest action;
    ActionResult result = ActionResult::Success;
    std::string phase;
    bool operator==(const AgentRecord&) const = default;
};

struct TeamIdentification {
    int team = 0;
    IdentificationEvent event;
    bool operator==(const TeamIdentification&) const = default;
};

struct StepRecord {
    int step = 0;
    std::vector<AgentRecord> agents;  // entity id order
    std::vector<CoordinationMessage> messages;
    std::vector<TeamIdentification> identifications;
    std::vector<TaskEvent> taskEvents;
    std::vector<WorldEvent> events;
    std::vector<int> scores;  // after the step
    bool operator==(const StepRecord&) const = default;
};

struct ReplayTrace {
    TraceHeader header;
    std::vector<StepRecord> steps;
    bool operator==(const ReplayTrace&) const = default;
};

nlohmann::json world_to_json(const WorldState& w);
WorldState world_from_json(const nlohmann::json& j);

nlohmann::json header_to_json(const TraceHeader& h);
TraceHeader header_from_json(const nlohmann::json& j);
// Percepts omit the task list and last action, which live elsewhere in the record.
nlohmann::json step_to_json(const StepRecord& s);
StepRecord step_from_json(const nlohmann::json& j, const TraceHeader& header, const StepRecord* previous);

void write_trace(std::ostream& out, const ReplayTrace& trace);
std::string trace_to_string(const ReplayTrace& trace);
ReplayTrace read_trace(std::istream& in);
ReplayTrace load_trace(const std::filesystem::path& path);
void save_trace(const std::filesystem::path& path, const ReplayTrace& trace);

}  // namespace assemble
