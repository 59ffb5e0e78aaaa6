#pragma once

#include <map>
#include <memory>
#include <optional>
#include <vector>

#include "assemble/team.h"
#include "assemble/trace.h"

namespace assemble {

// A match advanced one lockstep iteration at a time: engine percepts, pipeline
// update, decisions (operator included), apply_step, trace append.
class Match {
public:
    // Without a world, one is generated from the config.
    explicit Match(SimConfig config, std::optional<WorldState> world = std::nullopt);

    const SimConfig& config() const { return config_; }
    const WorldState& world() const { return world_; }
    const ReplayTrace& trace() const { return trace_; }
    std::size_t team_count() const { return teams_.size(); }
    TeamController& team(int t) { return *teams_.at(static_cast<std::size_t>(t)); }
    const TeamController& team(int t) const { return *teams_.at(static_cast<std::size_t>(t)); }

    bool finished() const { return static_cast<int>(trace_.steps.size()) >= config_.maxSteps; }
    // Entities listed in `overrides` take that action instead of their own decision.
    const StepRecord& step(const std::map<EntityId, ActionRequest>& overrides = {});
    void run();

private:
    SimConfig config_;
    WorldState world_;
    ReplayTrace trace_;
    std::vector<std::unique_ptr<TeamController>> teams_;
    std::vector<std::optional<ActionRequest>> lastAction_;
    std::vector<std::optional<ActionResult>> lastResult_;
};

ReplayTrace run_match(const SimConfig& config, std::optional<WorldState> world = std::nullopt);

}  // namespace assemble
