#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "assemble/trace.h"

namespace assemble {

struct FailedSubmission {
    std::string task;
    std::string cause;  // "deadline", "rejected" or "unsubmitted"
    bool operator==(const FailedSubmission&) const = default;
};

// One team's statistics over one match. Task-timing fields stay empty when the
// team submitted nothing.
struct TeamMetrics {
    std::string team;
    int score = 0;
    int usedAttachments = 0;
    int obtainedAttachments = 0;
    int connectionsMade = 0;
    int submittedTasks = 0;
    std::vector<FailedSubmission> failedSubmissions;
    std::optional<int> firstTaskStartTime;
    std::optional<double> avgTaskReqSize;
    std::optional<double> avgCompletionPerReq;
    std::optional<double> avgAttachToConnect;
    std::optional<double> avgLastConnectToSubmit;
    int opponentRejectedSubmissions = 0;
};

struct MetricsReport {
    std::vector<TeamMetrics> teams;
};

MetricsReport compute_metrics(const ReplayTrace& trace);

std::string format_table(const MetricsReport& report);
nlohmann::json metrics_to_json(const MetricsReport& report);

}  // namespace assemble
