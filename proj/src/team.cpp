#include "assemble/team.h"

#include <algorithm>
#include <set>

namespace assemble {

void Operator::cancel(int step, const std::string& task, const std::string& cause,
                      std::vector<CoordinationMessage>& out, std::vector<TaskEvent>& events) {
    std::vector<std::string> members;
    for (const auto& a : assignments_)
        if (a.task == task) members.push_back(a.agent);
    if (members.empty()) return;
    for (const auto& m : members) {
        CoordinationMessage msg;
        msg.type = MessageType::Cancel;
        msg.from = kOperatorName;
        msg.to = m;
        msg.task = task;
        out.push_back(std::move(msg));
    }
    std::erase_if(assignments_, [&](const TaskAssignment& a) { return a.task == task; });
    events.push_back({step, team_, "cancelled", task, members, cause});
}

std::vector<CoordinationMessage> Operator::step(int step,
                                                const std::vector<std::shared_ptr<const AgentContainer>>& builders,
                                                const std::vector<CoordinationMessage>& inbox,
                                                const SimConfig& config, std::vector<TaskEvent>& events) {
    std::vector<CoordinationMessage> out;
    if (builders.empty()) return out;

    for (const auto& m : inbox) {
        if (m.type == MessageType::Cancel) cancel(step, m.task, "reset", out, events);
        if (m.type == MessageType::TaskSubmitted)
            std::erase_if(assignments_, [&](const TaskAssignment& a) { return a.task == m.task; });
    }

    const auto& tasks = builders.front()->raw.tasks;
    const auto monitored = monitor_assignments(assignments_, tasks, step);
    std::set<std::string> lapsed;
    for (const auto& a : monitored.cancelled) lapsed.insert(a.task);
    for (const auto& t : lapsed) {
        auto it = std::find_if(tasks.begin(), tasks.end(), [&](const TaskView& v) { return v.name == t; });
        cancel(step, t, it != tasks.end() && it->submitted ? "submitted" : "expired", out, events);
    }

    std::map<std::string, const AgentContainer*> byName;
    for (const auto& c : builders) byName[c->name] = c.get();
    std::vector<std::string> freeAgents;
    for (const auto& [name, c] : byName)
        if (std::none_of(assignments_.begin(), assignments_.end(),
                         [&](const TaskAssignment& a) { return a.agent == name; }))
            freeAgents.push_back(name);
    if (freeAgents.empty()) return out;

    const auto identified = [&](const std::string& a, const std::string& b) {
        return byName.at(a)->identified.count(b) > 0;
    };
    std::vector<std::string> taken;
    for (const auto& a : assignments_) taken.push_back(a.task);
    const auto fresh = assign_tasks(form_subteams(freeAgents, identified), tasks, step, config.minSlack, taken);

    std::map<std::string, std::vector<TaskAssignment>> byTask;
    for (const auto& a : fresh) byTask[a.task].push_back(a);
    for (const auto& [task, group] : byTask) {
        std::vector<std::string> roster;
        OrderedPlan plan;
        for (const auto& a : group) {
            roster.push_back(a.agent);
            plan.push_back(a.req);
        }
        for (const auto& a : group) {
            CoordinationMessage msg;
            msg.type = MessageType::Assign;
            msg.from = kOperatorName;
            msg.to = a.agent;
            msg.task = task;
            msg.req = a.req;
            msg.plan = plan;
            msg.roster = roster;
            out.push_back(std::move(msg));
            assignments_.push_back(a);
        }
        events.push_back({step, team_, "assigned", task, roster, ""});
    }
    return out;
}

namespace {

std::vector<std::string> names_of(const std::vector<AgentSlot>& slots) {
    std::vector<std::string> out;
    for (const auto& s : slots) out.push_back(s.name);
    return out;
}

}  // namespace

TeamController::TeamController(int team, std::vector<AgentSlot> slots, const SimConfig& config)
    : team_(team), config_(config), slots_(std::move(slots)), pipeline_(names_of(slots_)), operator_(team) {
    for (const auto& s : slots_) ids_[s.name] = s.entity;
}

std::vector<IdentificationEvent> TeamController::ingest(const PerceptBatch& batch) {
    std::vector<IdentificationEvent> found;
    pipeline_.ingest(batch, [&](std::vector<AgentWorkspace*>& agents, int step) {
        found = synchronize_team(agents, step);
    });
    return found;
}

TeamDecisions TeamController::decide(int step) {
    TeamDecisions out;
    auto inbox = std::move(mailbox_);
    mailbox_.clear();
    sort_for_delivery(inbox);

    std::vector<std::shared_ptr<const AgentContainer>> containers;
    std::vector<std::shared_ptr<const AgentContainer>> builders;
    for (const auto& s : slots_) {
        containers.push_back(pipeline_.get_container(s.name, step));
        if (s.role == Role::Builder) builders.push_back(containers.back());
    }

    const auto inbox_for = [&](const std::string& name) {
        std::vector<CoordinationMessage> mine;
        for (const auto& m : inbox)
            if (m.to == name) mine.push_back(m);
        return mine;
    };

    auto sent = operator_.step(step, builders, inbox_for(kOperatorName), config_, out.taskEvents);
    const DecisionContext ctx{config_, ids_};
    for (std::size_t i = 0; i < slots_.size(); ++i) {
        AgentSlot& s = slots_[i];
        const AgentContainer& c = *containers[i];
        switch (s.role) {
            case Role::Builder: {
                Decision d = builder_decide(c, s.builder, inbox_for(s.name), ctx);
                pipeline_.register_gained(s.name, d.gained);
                for (const auto& note : d.notes) {
                    const auto colon = note.find(':');
                    out.taskEvents.push_back(
                        {step, team_, note.substr(0, colon), note.substr(colon + 1), {s.name}, ""});
                }
                sent.insert(sent.end(), d.outbox.begin(), d.outbox.end());
                out.actions.push_back(d.action);
                break;
            }
            case Role::Attacker:
                out.actions.push_back(attacker_decide(c, s.attacker, config_));
                break;
            case Role::Idle:
                out.actions.push_back(ActionRequest::skip());
                break;
        }
    }
    mailbox_ = sent;
    out.sent = std::move(sent);
    return out;
}

}  // namespace assemble
