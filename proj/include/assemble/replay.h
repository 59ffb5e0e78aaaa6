#pragma once

#include <optional>
#include <string>
#include <vector>

#include "assemble/trace.h"

namespace assemble {

// World state at the start of `step`, rebuilt by applying the recorded actions to
// the header world. Throws Error(StepOutOfRange).
WorldState world_at(const ReplayTrace& trace, int step);

// Every agent container of `agent`'s team as it was when `step` was decided,
// rebuilt from the recorded percepts. Throws Error(UnknownAgent) / Error(StepOutOfRange).
std::shared_ptr<const AgentContainer> container_at(const ReplayTrace& trace, int step, const std::string& agent);

struct ValidationReport {
    int stepsChecked = 0;
    std::vector<std::string> mismatches;
    bool ok() const { return mismatches.empty(); }
};

// Re-simulates the recorded actions and compares percepts, results, events and scores.
ValidationReport validate_trace(const ReplayTrace& trace, std::size_t maxMismatches = 20);

// Text frame of the ground truth (no agent) or of one agent's map model.
std::string render(const ReplayTrace& trace, int step, const std::optional<std::string>& agent = std::nullopt);

}  // namespace assemble
