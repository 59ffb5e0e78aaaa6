#include "assemble/pipeline.h"

#include <algorithm>
#include <cassert>
#include <utility>

#include "assemble/error.h"

namespace assemble {

void on_identified(AgentWorkspace& a, AgentWorkspace& b, TranslationVector bToA) {
    a.identified[b.name] = bToA;
    b.identified[a.name] = -bToA;
    const auto fromA = a.map.snapshot();
    const auto fromB = b.map.snapshot();
    a.map.merge_remote(fromB, bToA);
    b.map.merge_remote(fromA, -bToA);
}

std::vector<IdentificationEvent> synchronize_team(std::vector<AgentWorkspace*>& agents, int step) {
    std::map<std::string, AgentWorkspace*> byName;
    std::vector<SightingReport> reports;
    for (AgentWorkspace* w : agents) {
        byName[w->name] = w;
        for (const auto& t : w->raw.things)
            if (t.thing.kind == ThingKind::Entity && t.thing.detail == w->raw.team)
                reports.push_back({w->name, step, t.rel});
    }
    const auto known = [&](const std::string& a, const std::string& b) {
        return byName.at(a)->identified.count(b) > 0;
    };

    std::vector<IdentificationEvent> events;
    for (const auto& pair : pair_reports(reports, known).pairs) {
        AgentWorkspace& a = *byName.at(pair.a.reporter);
        AgentWorkspace& b = *byName.at(pair.b.reporter);
        const TranslationVector t = compute_translation(a.virtualPos, pair.a.offset, b.virtualPos);
        on_identified(a, b, t);
        events.push_back({step, a.name, b.name, t});
    }

    for (const auto& [name, sender] : byName) {
        if (sender->identified.empty()) continue;
        std::vector<MapPercept> fresh;
        for (auto& c : sender->map.cells_seen_at(step))
            if (c.source == name) fresh.push_back(std::move(c));
        for (const auto& [peer, toSender] : sender->identified) {
            auto it = byName.find(peer);
            if (it == byName.end()) continue;
            // toSender maps peer -> sender, so sender -> peer is its negation.
            it->second->map.merge_remote(fresh, -toSender);
        }
    }
    return events;
}

PerceptPipeline::PerceptPipeline(const std::vector<std::string>& agents)
    : names_(agents), gained_(agents.size()), parses_(agents.size(), 0) {
    for (const auto& n : agents) {
        AgentWorkspace w;
        w.name = n;
        w.map = MapModel(n);
        work_.push_back(std::move(w));
    }
}

std::size_t PerceptPipeline::index_of(const std::string& agent) const {
    auto it = std::find(names_.begin(), names_.end(), agent);
    if (it == names_.end()) throw Error(ErrorCode::UnknownAgent, "no agent named '" + agent + "'");
    return static_cast<std::size_t>(it - names_.begin());
}

bool PerceptPipeline::poll_and_update(PerceptSource& source, const Hook& hook) {
    return ingest(source.poll(), hook);
}

bool PerceptPipeline::ingest(const PerceptBatch& batch, const Hook& hook) {
    if (batch.empty()) return false;
    const int step = batch.front().second.step;
    {
        std::lock_guard lock(mutex_);
        if (step <= readyStep_) return false;
    }

    std::vector<AgentWorkspace*> touched;
    for (const auto& [name, raw] : batch) {
        assert(raw.step == step);
        const std::size_t i = index_of(name);
        AgentWorkspace& w = work_[i];
        if (w.ingestedStep >= step) continue;
        ++parses_[i];
        const RawPerceptSet before = std::exchange(w.raw, raw);
        if (raw.lastAction && raw.lastActionResult) {
            const ActionRequest& a = *raw.lastAction;
            if (a.type == ActionType::Move && *raw.lastActionResult == ActionResult::Success)
                w.virtualPos += unit(a.dir);
            w.attachments.on_action(a, *raw.lastActionResult, raw, gained_[i], before.tasks);
        }
        gained_[i].clear();
        w.attachments.refresh(raw);
        w.map.update_from_percepts(raw, w.virtualPos);
        w.ingestedStep = step;
        touched.push_back(&w);
    }
    if (hook) hook(touched, step);

    std::vector<std::shared_ptr<const AgentContainer>> out(work_.size());
    for (std::size_t i = 0; i < work_.size(); ++i) {
        const AgentWorkspace& w = work_[i];
        auto c = std::make_shared<AgentContainer>();
        c->name = w.name;
        c->currentStep = w.ingestedStep;
        c->virtualPos = w.virtualPos;
        c->raw = w.raw;
        c->map = std::make_shared<const MapModel>(w.map);
        c->identified = w.identified;
        c->attachments = w.attachments;
        out[i] = std::move(c);
    }

    {
        std::lock_guard lock(mutex_);
        published_[step] = std::move(out);
        while (published_.size() > 2) published_.erase(published_.begin());
        readyStep_ = step;
    }
    ready_.notify_all();
    return true;
}

std::shared_ptr<const AgentContainer> PerceptPipeline::get_container(const std::string& agent, int step) const {
    const std::size_t i = index_of(agent);
    std::unique_lock lock(mutex_);
    ready_.wait(lock, [&] { return readyStep_ >= step; });
    auto it = published_.find(step);
    if (it == published_.end())
        throw Error(ErrorCode::StepOutOfRange, "step " + std::to_string(step) + " is no longer retained");
    return it->second[i];
}

std::shared_ptr<const AgentContainer> PerceptPipeline::latest(const std::string& agent) const {
    const std::size_t i = index_of(agent);
    std::lock_guard lock(mutex_);
    if (published_.empty()) return nullptr;
    return published_.rbegin()->second[i];
}

int PerceptPipeline::ready_step() const {
    std::lock_guard lock(mutex_);
    return readyStep_;
}

void PerceptPipeline::register_gained(const std::string& agent, std::vector<GainedBlock> gained) {
    gained_[index_of(agent)] = std::move(gained);
}

std::size_t PerceptPipeline::parse_count(const std::string& agent) const { return parses_[index_of(agent)]; }

}  // namespace assemble
