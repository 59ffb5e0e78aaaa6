#pragma once

#include <functional>
#include <string>
#include <vector>

#include "assemble/geometry.h"

namespace assemble {

struct SightingReport {
    std::string reporter;
    int step = 0;
    Vec2 offset;  // where the reporter sees a teammate, relative to itself
    bool operator==(const SightingReport&) const = default;
};

// Maps a point in B's frame into A's frame: q -> q + T.
using TranslationVector = Vec2;

struct SightingPair {
    SightingReport a;
    SightingReport b;
};

struct PairingResult {
    std::vector<SightingPair> pairs;
    std::vector<SightingReport> aborted;
};

// Pairs reports whose offsets are exact opposites. An offset value reported more
// than once on either side makes the whole group ambiguous; those reports are
// aborted. `known` says whether two agents are already identified.
PairingResult pair_reports(std::vector<SightingReport> reports,
                           const std::function<bool(const std::string&, const std::string&)>& known = {});

// T(B->A) from A's position, A's sighting offset of B, and B's position.
inline TranslationVector compute_translation(Vec2 aPos, Vec2 aOffset, Vec2 bPos) {
    return aPos + aOffset - bPos;
}

}  // namespace assemble
