#include "assemble/map_model.h"

#include <algorithm>
#include <cmath>
#include <deque>
#include <queue>
#include <set>
#include <unordered_map>

namespace assemble {

CellTerrain to_cell_terrain(Terrain t) {
    switch (t) {
        case Terrain::Empty: return CellTerrain::Empty;
        case Terrain::Obstacle: return CellTerrain::Obstacle;
        case Terrain::Goal: return CellTerrain::Goal;
    }
    return CellTerrain::Unknown;
}

char cell_terrain_char(CellTerrain t) {
    switch (t) {
        case CellTerrain::Unknown: return '?';
        case CellTerrain::Empty: return '.';
        case CellTerrain::Obstacle: return '#';
        case CellTerrain::Goal: return 'G';
    }
    return '?';
}

bool MapPercept::has(ThingKind kind) const {
    return std::any_of(things.begin(), things.end(), [&](const Thing& t) { return t.kind == kind; });
}

bool MapPercept::has(ThingKind kind, int detail) const {
    return std::any_of(things.begin(), things.end(),
                       [&](const Thing& t) { return t.kind == kind && t.detail == detail; });
}

const MapPercept* MapModel::at(VirtualPosition p) const {
    auto it = cells_.find(p);
    return it == cells_.end() ? nullptr : &it->second;
}

CellTerrain MapModel::terrain_at(VirtualPosition p) const {
    const auto* c = at(p);
    return c ? c->terrain : CellTerrain::Unknown;
}

void MapModel::update_from_percepts(const RawPerceptSet& raw, VirtualPosition self) {
    for (const auto& [rel, terrain] : raw.terrain) {
        MapPercept& cell = cells_[self + rel];
        cell.pos = self + rel;
        cell.terrain = to_cell_terrain(terrain);
        cell.things.clear();
        cell.lastSeen = raw.step;
        cell.source = owner_;
    }
    for (const auto& t : raw.things) {
        auto it = cells_.find(self + t.rel);
        if (it != cells_.end()) it->second.things.push_back(t.thing);
    }
    // Percepts leave out the observer; the cell still holds it.
    if (auto it = cells_.find(self); it != cells_.end() && it->second.lastSeen == raw.step)
        it->second.things.push_back({ThingKind::Entity, raw.team});
    for (const auto& [rel, _] : raw.terrain) {
        auto& things = cells_[self + rel].things;
        std::sort(things.begin(), things.end());
    }
    currentStep_ = std::max(currentStep_, raw.step);
}

std::size_t MapModel::merge_remote(const std::vector<MapPercept>& remote, Vec2 translation) {
    std::size_t taken = 0;
    for (const MapPercept& r : remote) {
        const VirtualPosition p = r.pos + translation;
        auto it = cells_.find(p);
        if (it != cells_.end() && it->second.lastSeen >= r.lastSeen) continue;
        MapPercept copy = r;
        copy.pos = p;
        cells_[p] = std::move(copy);
        ++taken;
    }
    return taken;
}

std::vector<MapPercept> MapModel::snapshot() const {
    std::vector<MapPercept> out;
    out.reserve(cells_.size());
    for (const auto& [_, c] : cells_) out.push_back(c);
    return out;
}

std::vector<MapPercept> MapModel::cells_seen_at(int step) const {
    std::vector<MapPercept> out;
    for (const auto& [_, c] : cells_)
        if (c.lastSeen == step) out.push_back(c);
    return out;
}

// ---------------------------------------------------------------------------
// Navigation

namespace {

bool passes(const PassCells& pass, VirtualPosition p) {
    return std::find(pass.begin(), pass.end(), p) != pass.end();
}

bool thing_blocks(const MapPercept& c, int currentStep) {
    for (const Thing& t : c.things) {
        if (t.kind == ThingKind::Entity) {
            if (c.lastSeen >= currentStep) return true;
        } else {
            return true;
        }
    }
    return false;
}

}  // namespace

bool traversable(const MapModel& model, VirtualPosition p, bool destination, const PassCells& pass) {
    const MapPercept* c = model.at(p);
    if (!c || (c->terrain != CellTerrain::Empty && c->terrain != CellTerrain::Goal)) return false;
    if (destination || passes(pass, p)) return true;
    return !thing_blocks(*c, model.current_step());
}

std::optional<VirtualPosition> find_nearest(const MapModel& model, VirtualPosition from,
                                            const std::function<bool(const MapPercept&)>& match,
                                            const PassCells& pass) {
    std::unordered_map<Vec2, int, Vec2Hash> dist{{from, 0}};
    std::deque<Vec2> frontier{from};
    std::optional<VirtualPosition> best;
    int bestDist = 0;
    auto consider = [&](Vec2 p, int d) {
        const MapPercept* c = model.at(p);
        if (!c || !match(*c)) return;
        if (!best || d < bestDist || (d == bestDist && p < *best)) {
            best = p;
            bestDist = d;
        }
    };
    consider(from, 0);
    while (!frontier.empty()) {
        const Vec2 cur = frontier.front();
        frontier.pop_front();
        const int d = dist[cur];
        if (best && d >= bestDist) break;
        for (Direction dir : kDirections) {
            const Vec2 n = cur + unit(dir);
            if (dist.count(n)) continue;
            if (!traversable(model, n, true, pass)) continue;
            dist[n] = d + 1;
            consider(n, d + 1);
            if (traversable(model, n, false, pass)) frontier.push_back(n);
        }
    }
    return best;
}

std::optional<Path> shortest_path(const MapModel& model, VirtualPosition from, VirtualPosition to,
                                  const PassCells& pass) {
    if (from == to) return Path{};
    if (!traversable(model, to, true, pass)) return std::nullopt;

    struct Node {
        int f;
        int g;
        Vec2 pos;
        bool operator>(const Node& o) const {
            if (f != o.f) return f > o.f;
            if (g != o.g) return g < o.g;  // prefer deeper nodes on equal f
            return o.pos < pos;
        }
    };
    std::priority_queue<Node, std::vector<Node>, std::greater<>> open;
    std::unordered_map<Vec2, int, Vec2Hash> gScore{{from, 0}};
    std::unordered_map<Vec2, Direction, Vec2Hash> cameBy;
    open.push({manhattan(from, to), 0, from});
    while (!open.empty()) {
        const Node cur = open.top();
        open.pop();
        if (cur.g != gScore[cur.pos]) continue;
        if (cur.pos == to) {
            Path path;
            for (Vec2 p = to; p != from;) {
                const Direction d = cameBy.at(p);
                path.push_back(d);
                p = p - unit(d);
            }
            std::reverse(path.begin(), path.end());
            return path;
        }
        for (Direction d : kDirections) {
            const Vec2 n = cur.pos + unit(d);
            if (!traversable(model, n, n == to, pass)) continue;
            const int g = cur.g + 1;
            auto it = gScore.find(n);
            if (it != gScore.end() && it->second <= g) continue;
            gScore[n] = g;
            cameBy[n] = d;
            open.push({g + manhattan(n, to), g, n});
        }
    }
    return std::nullopt;
}

std::optional<int> bfs_distance(const MapModel& model, VirtualPosition from, VirtualPosition to,
                                const PassCells& pass) {
    if (from == to) return 0;
    std::unordered_map<Vec2, int, Vec2Hash> dist{{from, 0}};
    std::deque<Vec2> frontier{from};
    while (!frontier.empty()) {
        const Vec2 cur = frontier.front();
        frontier.pop_front();
        for (Direction d : kDirections) {
            const Vec2 n = cur + unit(d);
            if (dist.count(n) || !traversable(model, n, n == to, pass)) continue;
            dist[n] = dist[cur] + 1;
            if (n == to) return dist[n];
            frontier.push_back(n);
        }
    }
    return std::nullopt;
}

bool path_invalidated(const Path& path, const RawPerceptSet& raw, const std::vector<Vec2>& passRel) {
    if (path.empty()) return false;
    const Vec2 next = unit(path.front());
    if (!raw.in_vision(next)) return false;
    const Terrain t = raw.terrain_at(next);
    if (t == Terrain::Obstacle) return true;
    if (path.size() == 1) return false;
    if (std::find(passRel.begin(), passRel.end(), next) != passRel.end()) return false;
    return !raw.things_at(next).empty();
}

namespace {

int floor_div(int a, int b) { return a >= 0 ? a / b : -((-a + b - 1) / b); }

}  // namespace

ExploreChoice explore_direction(const MapModel& model, VirtualPosition from, int chunkSize,
                                const PassCells& pass) {
    ExploreChoice choice;
    if (model.size() == 0) {
        choice.dir = Direction::E;
        choice.mapComplete = true;
        return choice;
    }
    int minX = from.x, maxX = from.x, minY = from.y, maxY = from.y;
    for (const auto& [p, _] : model.cells()) {
        minX = std::min(minX, p.x);
        maxX = std::max(maxX, p.x);
        minY = std::min(minY, p.y);
        maxY = std::max(maxY, p.y);
    }
    const int cx0 = floor_div(minX, chunkSize) - 1, cx1 = floor_div(maxX, chunkSize) + 1;
    const int cy0 = floor_div(minY, chunkSize) - 1, cy1 = floor_div(maxY, chunkSize) + 1;

    struct Candidate {
        double dist;
        double cy, cx;
        int ix, iy;
    };
    std::vector<Candidate> candidates;
    const double half = (chunkSize - 1) / 2.0;
    for (int iy = cy0; iy <= cy1; ++iy)
        for (int ix = cx0; ix <= cx1; ++ix) {
            bool unknown = false;
            for (int y = 0; y < chunkSize && !unknown; ++y)
                for (int x = 0; x < chunkSize && !unknown; ++x)
                    unknown = !model.at({ix * chunkSize + x, iy * chunkSize + y});
            if (!unknown) continue;
            const double cx = ix * chunkSize + half, cy = iy * chunkSize + half;
            candidates.push_back({std::hypot(cx - from.x, cy - from.y), cy, cx, ix, iy});
        }
    if (candidates.empty()) {
        choice.dir = Direction::E;
        choice.mapComplete = true;
        return choice;
    }
    std::sort(candidates.begin(), candidates.end(), [](const Candidate& a, const Candidate& b) {
        if (a.dist != b.dist) return a.dist < b.dist;
        if (a.cy != b.cy) return a.cy < b.cy;
        return a.cx < b.cx;
    });

    // Distances from `from` over traversable known cells.
    std::unordered_map<Vec2, int, Vec2Hash> dist{{from, 0}};
    std::deque<Vec2> frontier{from};
    while (!frontier.empty()) {
        const Vec2 cur = frontier.front();
        frontier.pop_front();
        for (Direction d : kDirections) {
            const Vec2 n = cur + unit(d);
            if (dist.count(n) || !traversable(model, n, false, pass)) continue;
            dist[n] = dist[cur] + 1;
            frontier.push_back(n);
        }
    }

    // Best frontier cell per chunk: reachable cells bordering an unknown cell of it.
    std::map<std::pair<int, int>, std::pair<int, Vec2>> frontierOf;  // (iy, ix) -> (dist, cell)
    for (const auto& [p, d] : dist)
        for (Direction dir : kDirections) {
            const Vec2 n = p + unit(dir);
            if (model.at(n)) continue;
            const std::pair<int, int> key{floor_div(n.y, chunkSize), floor_div(n.x, chunkSize)};
            auto it = frontierOf.find(key);
            if (it == frontierOf.end() || std::make_pair(d, p) < it->second) frontierOf[key] = {d, p};
        }
    for (const Candidate& c : candidates) {
        auto it = frontierOf.find({c.iy, c.ix});
        if (it == frontierOf.end()) continue;
        const Vec2 best = it->second.second;
        if (best == from) {
            for (Direction dir : kDirections) {
                const Vec2 n = from + unit(dir);
                if (!model.at(n) && floor_div(n.x, chunkSize) == c.ix && floor_div(n.y, chunkSize) == c.iy) {
                    choice.dir = dir;
                    return choice;
                }
            }
        }
        if (auto path = shortest_path(model, from, best, pass); path && !path->empty()) {
            choice.dir = path->front();
            return choice;
        }
    }
    // Whatever is left cannot be reached: as far as this agent can tell, it is done.
    choice.dir = Direction::E;
    choice.mapComplete = true;
    return choice;
}

}  // namespace assemble
