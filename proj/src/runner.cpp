#include "assemble/runner.h"

#include <algorithm>

#include "assemble/error.h"

namespace assemble {

Match::Match(SimConfig config, std::optional<WorldState> world) : config_(std::move(config)) {
    config_.validate();
    world_ = world ? std::move(*world) : generate_world(config_);
    trace_.header = {kTraceVersion, config_, world_};

    const int teams = static_cast<int>(world_.scores.size());
    std::vector<std::vector<AgentSlot>> slots(static_cast<std::size_t>(teams));
    for (const auto& e : world_.entities) {
        auto& list = slots.at(static_cast<std::size_t>(e.team));
        AgentSlot s;
        s.name = e.name;
        s.entity = e.id;
        const auto index = list.size();
        s.role = index < config_.roles.size() ? config_.roles[index] : Role::Idle;
        list.push_back(std::move(s));
    }
    for (int t = 0; t < teams; ++t)
        teams_.push_back(std::make_unique<TeamController>(t, std::move(slots[static_cast<std::size_t>(t)]), config_));
    lastAction_.resize(world_.entities.size());
    lastResult_.resize(world_.entities.size());
}

const StepRecord& Match::step(const std::map<EntityId, ActionRequest>& overrides) {
    const std::size_t n = world_.entities.size();
    for (const auto& [id, _] : overrides)
        if (id < 0 || static_cast<std::size_t>(id) >= n) throw Error(ErrorCode::MalformedActions, "unknown entity");

    StepRecord rec;
    rec.step = world_.step;
    rec.agents.resize(n);
    std::vector<PerceptBatch> batches(teams_.size());
    for (std::size_t i = 0; i < n; ++i) {
        const auto& e = world_.entities[i];
        auto p = compute_percepts(world_, config_, e.id, lastAction_[i], lastResult_[i]);
        rec.agents[i].name = e.name;
        rec.agents[i].percept = p;
        batches.at(static_cast<std::size_t>(e.team)).emplace_back(e.name, std::move(p));
    }

    std::vector<ActionRequest> actions(n, ActionRequest::skip());
    for (std::size_t t = 0; t < teams_.size(); ++t) {
        auto& team = *teams_[t];
        for (auto& ev : team.ingest(batches[t])) rec.identifications.push_back({static_cast<int>(t), std::move(ev)});
        if (team.slots().empty()) continue;
        const auto& slots = team.slots();
        const bool scripted = std::all_of(slots.begin(), slots.end(),
                                          [&](const AgentSlot& s) { return overrides.count(s.entity) > 0; });
        std::vector<ActionRequest> chosen;
        if (!scripted) {
            auto d = team.decide(rec.step);
            chosen = std::move(d.actions);
            rec.messages.insert(rec.messages.end(), d.sent.begin(), d.sent.end());
            rec.taskEvents.insert(rec.taskEvents.end(), d.taskEvents.begin(), d.taskEvents.end());
        }
        for (std::size_t k = 0; k < slots.size(); ++k) {
            const auto id = static_cast<std::size_t>(slots[k].entity);
            const auto o = overrides.find(slots[k].entity);
            actions[id] = o != overrides.end() ? o->second : chosen[k];
            const auto c = team.pipeline().get_container(slots[k].name, rec.step);
            auto& a = rec.agents[id];
            a.virtualPos = c->virtualPos;
            a.attachments = c->attachments.items();
            switch (slots[k].role) {
                case Role::Builder: a.phase = std::string(to_string(slots[k].builder.phase)); break;
                case Role::Attacker: a.phase = std::string(to_string(slots[k].attacker.phase)); break;
                case Role::Idle: a.phase = "idle"; break;
            }
            if (o != overrides.end()) a.phase = "scripted";
        }
    }

    auto outcome = apply_step(world_, config_, actions);
    for (std::size_t i = 0; i < n; ++i) {
        rec.agents[i].action = actions[i];
        rec.agents[i].result = outcome.results[i];
        lastAction_[i] = actions[i];
        lastResult_[i] = outcome.results[i];
    }
    rec.events = std::move(outcome.events);
    rec.scores = world_.scores;
    trace_.steps.push_back(std::move(rec));
    return trace_.steps.back();
}

void Match::run() {
    while (!finished()) step();
}

ReplayTrace run_match(const SimConfig& config, std::optional<WorldState> world) {
    Match m(config, std::move(world));
    m.run();
    return m.trace();
}

}  // namespace assemble
