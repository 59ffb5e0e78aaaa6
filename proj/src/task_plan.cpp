#include "assemble/task_plan.h"

#include <algorithm>
#include <array>
#include <tuple>
#include <set>

#include "assemble/error.h"

namespace assemble {

OrderedPlan plan_requirements(const std::vector<Requirement>& reqs) {
    const auto find = [&](Vec2 p, const std::vector<bool>& used) -> int {
        for (std::size_t i = 0; i < reqs.size(); ++i)
            if (!used[i] && reqs[i].pos == p) return static_cast<int>(i);
        return -1;
    };
    std::vector<bool> used(reqs.size(), false);
    const int first = find({0, 1}, used);
    if (first < 0) throw Error(ErrorCode::Unplannable, "no requirement at (0,1)");

    OrderedPlan seq{reqs[static_cast<std::size_t>(first)]};
    used[static_cast<std::size_t>(first)] = true;
    std::size_t current = 0;  // index into seq
    const std::array<Vec2, 3> scan{Vec2{1, 0}, Vec2{-1, 0}, Vec2{0, 1}};

    auto next_from = [&](std::size_t at) -> int {
        for (Vec2 d : scan)
            if (int k = find(seq[at].pos + d, used); k >= 0) return k;
        return -1;
    };

    while (seq.size() < reqs.size()) {
        int k = next_from(current);
        if (k < 0) {
            for (std::size_t back = seq.size(); back-- > 0;)
                if ((k = next_from(back)) >= 0) break;
        }
        if (k < 0) throw Error(ErrorCode::Unplannable, "requirements are not connected by east/west/south steps");
        used[static_cast<std::size_t>(k)] = true;
        seq.push_back(reqs[static_cast<std::size_t>(k)]);
        current = seq.size() - 1;
    }
    return seq;
}

namespace {

// Bron-Kerbosch without pivoting; groups here are team-sized.
void best_clique(std::vector<std::string>& r, std::vector<std::string> p, std::vector<std::string> x,
                 const IdentifiedFn& adj, std::vector<std::string>& best) {
    if (p.empty() && x.empty()) {
        auto sorted = r;
        std::sort(sorted.begin(), sorted.end());
        if (sorted.size() > best.size() || (sorted.size() == best.size() && sorted < best)) best = sorted;
        return;
    }
    if (r.size() + p.size() < best.size()) return;
    while (!p.empty()) {
        const std::string v = p.front();
        std::vector<std::string> np, nx;
        for (const auto& u : p)
            if (u != v && adj(u, v)) np.push_back(u);
        for (const auto& u : x)
            if (adj(u, v)) nx.push_back(u);
        r.push_back(v);
        best_clique(r, np, nx, adj, best);
        r.pop_back();
        p.erase(p.begin());
        x.push_back(v);
    }
}

}  // namespace

std::vector<std::vector<std::string>> form_subteams(std::vector<std::string> freeAgents,
                                                    const IdentifiedFn& identified) {
    std::sort(freeAgents.begin(), freeAgents.end());
    freeAgents.erase(std::unique(freeAgents.begin(), freeAgents.end()), freeAgents.end());
    const IdentifiedFn adj = [&](const std::string& a, const std::string& b) {
        return identified && identified(a, b);
    };
    std::vector<std::vector<std::string>> teams;
    while (!freeAgents.empty()) {
        std::vector<std::string> r, best;
        best_clique(r, freeAgents, {}, adj, best);
        if (best.empty()) best = {freeAgents.front()};
        for (const auto& m : best) freeAgents.erase(std::find(freeAgents.begin(), freeAgents.end(), m));
        teams.push_back(std::move(best));
    }
    return teams;
}

std::vector<TaskAssignment> assign_tasks(const std::vector<std::vector<std::string>>& subteams,
                                         const std::vector<TaskView>& tasks, int step, int minSlack,
                                         std::vector<std::string> taken) {
    std::vector<TaskAssignment> out;
    for (const auto& team : subteams) {
        const TaskView* best = nullptr;
        OrderedPlan bestPlan;
        for (const TaskView& t : tasks) {
            if (t.submitted || t.requirements.empty() || t.requirements.size() > team.size()) continue;
            if (t.deadline - step < minSlack) continue;
            if (std::find(taken.begin(), taken.end(), t.name) != taken.end()) continue;
            if (best) {
                const auto key = [](const TaskView* v) {
                    return std::make_tuple(v->requirements.size(), v->deadline);
                };
                if (key(&t) < key(best) || (key(&t) == key(best) && t.name >= best->name)) continue;
            }
            OrderedPlan plan;
            try {
                plan = plan_requirements(t.requirements);
            } catch (const Error&) {
                continue;
            }
            best = &t;
            bestPlan = std::move(plan);
        }
        if (!best) continue;
        taken.push_back(best->name);
        auto members = team;
        std::sort(members.begin(), members.end());
        for (std::size_t i = 0; i < bestPlan.size(); ++i) out.push_back({members[i], best->name, bestPlan[i]});
    }
    return out;
}

MonitorResult monitor_assignments(const std::vector<TaskAssignment>& assignments,
                                  const std::vector<TaskView>& tasks, int step) {
    MonitorResult out;
    for (const auto& a : assignments) {
        auto it = std::find_if(tasks.begin(), tasks.end(), [&](const TaskView& t) { return t.name == a.task; });
        const bool dead = it == tasks.end() || it->deadline < step || it->submitted;
        (dead ? out.cancelled : out.kept).push_back(a);
    }
    return out;
}

}  // namespace assemble
