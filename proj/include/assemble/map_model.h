#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "assemble/geometry.h"
#include "assemble/percepts.h"

namespace assemble {

// An agent's own coordinates: origin at the cell it started the match on.
using VirtualPosition = Vec2;

enum class CellTerrain : std::uint8_t { Unknown, Empty, Obstacle, Goal };

CellTerrain to_cell_terrain(Terrain t);
char cell_terrain_char(CellTerrain t);

// Everything known about one cell, stamped with the step it was observed.
struct MapPercept {
    VirtualPosition pos;
    CellTerrain terrain = CellTerrain::Unknown;
    std::vector<Thing> things;  // sorted
    int lastSeen = -1;
    std::string source;  // agent whose perception produced this content

    bool has(ThingKind kind) const;
    bool has(ThingKind kind, int detail) const;
    bool operator==(const MapPercept&) const = default;
};

class MapModel {
public:
    explicit MapModel(std::string owner = {}) : owner_(std::move(owner)) {}

    const std::string& owner() const { return owner_; }
    const MapPercept* at(VirtualPosition p) const;
    CellTerrain terrain_at(VirtualPosition p) const;
    const std::map<VirtualPosition, MapPercept>& cells() const { return cells_; }
    std::size_t size() const { return cells_.size(); }
    // Latest step at which the owner itself perceived anything.
    int current_step() const { return currentStep_; }

    // Overwrites every cell of the vision diamond centred on `self`.
    void update_from_percepts(const RawPerceptSet& raw, VirtualPosition self);
    // Maps `remote` (expressed in the sender's frame) through `translation` into this frame.
    // Per cell, the newer observation wins; ties keep local content. Returns the
    // number of cells taken from the remote side.
    std::size_t merge_remote(const std::vector<MapPercept>& remote, Vec2 translation);
    std::vector<MapPercept> snapshot() const;
    std::vector<MapPercept> cells_seen_at(int step) const;

    bool operator==(const MapModel&) const = default;

private:
    std::string owner_;
    std::map<VirtualPosition, MapPercept> cells_;
    int currentStep_ = -1;
};

using Path = std::vector<Direction>;

// Cells (virtual frame) whose things never block the querying agent: its own
// attachments.
using PassCells = std::vector<VirtualPosition>;

// Terrain empty or goal, and no blocking thing unless `destination`. Unknown cells
// are never traversable. Entities only block while they are in current view.
bool traversable(const MapModel& model, VirtualPosition p, bool destination = false,
                 const PassCells& pass = {});

std::optional<VirtualPosition> find_nearest(const MapModel& model, VirtualPosition from,
                                            const std::function<bool(const MapPercept&)>& match,
                                            const PassCells& pass = {});

// A* with the Manhattan heuristic over the known map.
std::optional<Path> shortest_path(const MapModel& model, VirtualPosition from, VirtualPosition to,
                                  const PassCells& pass = {});

// Path length by breadth-first search over the same traversability rule.
std::optional<int> bfs_distance(const MapModel& model, VirtualPosition from, VirtualPosition to,
                                const PassCells& pass = {});

// True iff the first step of `path` is blocked according to the immediate percepts.
// `passRel` lists cells (relative to the agent) occupied by its own attachments.
bool path_invalidated(const Path& path, const RawPerceptSet& raw, const std::vector<Vec2>& passRel = {});

struct ExploreChoice {
    std::optional<Direction> dir;
    bool mapComplete = false;  // no reachable unknown chunk; dir holds the fallback (E)
};

ExploreChoice explore_direction(const MapModel& model, VirtualPosition from, int chunkSize,
                                const PassCells& pass = {});

}  // namespace assemble
