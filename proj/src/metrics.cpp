#include "assemble/metrics.h"

#include <algorithm>
#include <cstdio>
#include <map>
#include <set>
#include <sstream>

#include "assemble/error.h"

namespace assemble {

namespace {

std::optional<double> mean(const std::vector<double>& v) {
    if (v.empty()) return std::nullopt;
    double s = 0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
}

struct TeamLog {
    std::map<BlockId, std::vector<int>> attachSteps;
    std::map<BlockId, std::vector<int>> connectSteps;
    std::vector<const WorldEvent*> submits;
};

}  // namespace

MetricsReport compute_metrics(const ReplayTrace& trace) {
    const auto& header = trace.header;
    const auto teamCount = header.world.scores.size();
    std::map<EntityId, int> teamOf;
    for (const auto& e : header.world.entities) teamOf[e.id] = e.team;

    MetricsReport report;
    report.teams.resize(teamCount);
    std::vector<TeamLog> logs(teamCount);
    for (std::size_t t = 0; t < teamCount; ++t)
        report.teams[t].team = t < header.config.teams.size() ? header.config.teams[t] : std::to_string(t);

    const auto team_index = [&](int t) {
        if (t < 0 || static_cast<std::size_t>(t) >= teamCount)
            throw Error(ErrorCode::MalformedTrace, "event names an unknown team");
        return static_cast<std::size_t>(t);
    };

    std::vector<std::set<std::string>> assembled(teamCount);
    std::map<std::string, int> deadlines;
    // Per task, the worst outcome of a submit attempt.
    std::map<std::pair<int, std::string>, std::string> attempts;
    for (const auto& s : trace.steps) {
        for (const auto& tv : s.agents.empty() ? std::vector<TaskView>{} : s.agents.front().percept.tasks)
            deadlines[tv.name] = tv.deadline;
        for (std::size_t i = 0; i < s.agents.size(); ++i) {
            const auto& a = s.agents[i];
            if (a.action.type != ActionType::Submit || a.result == ActionResult::Success) continue;
            const int team = teamOf.at(static_cast<EntityId>(i));
            auto& cause = attempts[{team, a.action.task}];
            if (cause != "deadline") cause = a.result == ActionResult::FailedDeadline ? "deadline" : "rejected";
        }
        for (const auto& te : s.taskEvents)
            if (te.kind == "assembled") assembled[team_index(te.team)].insert(te.task);
        for (const auto& e : s.events) {
            switch (e.kind) {
                case EventKind::Attached: {
                    auto& m = report.teams[team_index(e.team)];
                    ++m.obtainedAttachments;
                    logs[team_index(e.team)].attachSteps[e.blocks.at(0)].push_back(e.step);
                    break;
                }
                case EventKind::Connected: {
                    const auto t = team_index(e.team);
                    ++report.teams[t].connectionsMade;
                    for (BlockId b : e.blocks) logs[t].connectSteps[b].push_back(e.step);
                    break;
                }
                case EventKind::Submitted: {
                    const auto t = team_index(e.team);
                    ++report.teams[t].submittedTasks;
                    report.teams[t].usedAttachments += static_cast<int>(e.blocks.size());
                    logs[t].submits.push_back(&e);
                    break;
                }
                case EventKind::ClearTriggered: {
                    const bool rejected = std::any_of(e.victims.begin(), e.victims.end(), [&](const Victim& v) {
                        return teamOf.at(v.entity) != e.team && v.onGoal && v.attachments > 0;
                    });
                    if (rejected) ++report.teams[team_index(e.team)].opponentRejectedSubmissions;
                    break;
                }
                default: break;
            }
        }
    }

    const int lastStep = trace.steps.empty() ? header.world.step - 1 : trace.steps.back().step;
    for (std::size_t t = 0; t < teamCount; ++t) {
        auto& m = report.teams[t];
        const auto& log = logs[t];
        m.score = trace.steps.empty() ? header.world.scores[t] : trace.steps.back().scores.at(t);

        std::set<std::string> submittedNames;
        std::vector<double> sizes, completion, attachToConnect, lastToSubmit;
        for (const WorldEvent* sub : log.submits) {
            submittedNames.insert(sub->task);
            sizes.push_back(static_cast<double>(sub->blocks.size()));
            std::optional<int> firstAttach, lastConnect;
            for (BlockId b : sub->blocks) {
                auto a = log.attachSteps.find(b);
                if (a == log.attachSteps.end()) continue;
                const int attach = *std::max_element(a->second.begin(), a->second.end());
                const int earliest = *std::min_element(a->second.begin(), a->second.end());
                firstAttach = firstAttach ? std::min(*firstAttach, earliest) : earliest;
                if (auto c = log.connectSteps.find(b); c != log.connectSteps.end()) {
                    std::optional<int> joined;
                    for (int step : c->second)
                        if (step >= attach && step <= sub->step && (!joined || step < *joined)) joined = step;
                    if (joined) attachToConnect.push_back(static_cast<double>(*joined - attach));
                    for (int step : c->second)
                        if (step <= sub->step && (!lastConnect || step > *lastConnect)) lastConnect = step;
                }
            }
            if (firstAttach) {
                if (!m.firstTaskStartTime) m.firstTaskStartTime = *firstAttach;
                completion.push_back(static_cast<double>(sub->step - *firstAttach) /
                                     static_cast<double>(sub->blocks.size()));
            }
            if (lastConnect) lastToSubmit.push_back(static_cast<double>(sub->step - *lastConnect));
        }
        m.avgTaskReqSize = mean(sizes);
        m.avgCompletionPerReq = mean(completion);
        m.avgAttachToConnect = mean(attachToConnect);
        m.avgLastConnectToSubmit = mean(lastToSubmit);

        for (const auto& task : assembled[t]) {
            if (submittedNames.count(task)) continue;
            std::string cause = "unsubmitted";
            if (auto a = attempts.find({static_cast<int>(t), task}); a != attempts.end()) cause = a->second;
            else if (auto d = deadlines.find(task); d != deadlines.end() && d->second < lastStep)
                cause = "deadline";
            m.failedSubmissions.push_back({task, cause});
        }
    }
    return report;
}

namespace {

std::string cell(const std::optional<double>& v) {
    if (!v) return "-";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4g", *v);
    return buf;
}

}  // namespace

std::string format_table(const MetricsReport& report) {
    std::vector<std::pair<std::string, std::vector<std::string>>> rows;
    const auto row = [&](const std::string& label, auto value) {
        std::vector<std::string> cells;
        for (const auto& t : report.teams) cells.push_back(value(t));
        rows.emplace_back(label, std::move(cells));
    };
    row("Team", [](const TeamMetrics& t) { return t.team; });
    row("Score", [](const TeamMetrics& t) { return std::to_string(t.score); });
    row("Attachment Utilization (Used/Obtained)", [](const TeamMetrics& t) {
        return std::to_string(t.usedAttachments) + " / " + std::to_string(t.obtainedAttachments);
    });
    row("Number of Connections Made", [](const TeamMetrics& t) { return std::to_string(t.connectionsMade); });
    row("Submitted Tasks", [](const TeamMetrics& t) { return std::to_string(t.submittedTasks); });
    row("Failed Submissions", [](const TeamMetrics& t) {
        std::string s = std::to_string(t.failedSubmissions.size());
        if (!t.failedSubmissions.empty()) {
            std::map<std::string, int> causes;
            for (const auto& f : t.failedSubmissions) ++causes[f.cause];
            s += " (";
            bool first = true;
            for (const auto& [c, n] : causes) {
                s += (first ? "" : ", ") + c + " " + std::to_string(n);
                first = false;
            }
            s += ")";
        }
        return s;
    });
    row("First Task Start Time", [](const TeamMetrics& t) {
        return t.firstTaskStartTime ? std::to_string(*t.firstTaskStartTime) : std::string("-");
    });
    row("Avg. Task Requirement Size", [](const TeamMetrics& t) { return cell(t.avgTaskReqSize); });
    row("Avg. Task Completion Time (Per Req.)", [](const TeamMetrics& t) { return cell(t.avgCompletionPerReq); });
    row("Avg. Attach to Connect Time", [](const TeamMetrics& t) { return cell(t.avgAttachToConnect); });
    row("Avg. Last Connect to Submit Time", [](const TeamMetrics& t) { return cell(t.avgLastConnectToSubmit); });
    row("Opponent Rejected Submissions",
        [](const TeamMetrics& t) { return std::to_string(t.opponentRejectedSubmissions); });

    std::size_t labelWidth = 0;
    std::vector<std::size_t> widths(report.teams.size(), 0);
    for (const auto& [label, cells] : rows) {
        labelWidth = std::max(labelWidth, label.size());
        for (std::size_t i = 0; i < cells.size(); ++i) widths[i] = std::max(widths[i], cells[i].size());
    }
    std::ostringstream out;
    for (const auto& [label, cells] : rows) {
        out << label << std::string(labelWidth - label.size(), ' ');
        for (std::size_t i = 0; i < cells.size(); ++i)
            out << " | " << cells[i] << std::string(widths[i] - cells[i].size(), ' ');
        out << '\n';
    }
    return out.str();
}

nlohmann::json metrics_to_json(const MetricsReport& report) {
    using nlohmann::json;
    const auto opt = [](const auto& v) { return v ? json(*v) : json(nullptr); };
    json teams = json::array();
    for (const auto& t : report.teams) {
        json failed = json::array();
        for (const auto& f : t.failedSubmissions) failed.push_back({{"task", f.task}, {"cause", f.cause}});
        teams.push_back({{"team", t.team},
                         {"score", t.score},
                         {"attachmentUtilization", {{"used", t.usedAttachments}, {"obtained", t.obtainedAttachments}}},
                         {"connectionsMade", t.connectionsMade},
                         {"submittedTasks", t.submittedTasks},
                         {"failedSubmissions", t.failedSubmissions.size()},
                         {"failedSubmissionDetails", failed},
                         {"firstTaskStartTime", opt(t.firstTaskStartTime)},
                         {"avgTaskReqSize", opt(t.avgTaskReqSize)},
                         {"avgCompletionPerReq", opt(t.avgCompletionPerReq)},
                         {"avgAttachToConnect", opt(t.avgAttachToConnect)},
                         {"avgLastConnectToSubmit", opt(t.avgLastConnectToSubmit)},
                         {"opponentRejectedSubmissions", t.opponentRejectedSubmissions}});
    }
    return {{"teams", teams}};
}

}  // namespace assemble
