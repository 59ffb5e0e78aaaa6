#include "assemble/identify.h"

#include <algorithm>
#include <map>

namespace assemble {

PairingResult pair_reports(std::vector<SightingReport> reports,
                           const std::function<bool(const std::string&, const std::string&)>& known) {
    std::sort(reports.begin(), reports.end(), [](const SightingReport& x, const SightingReport& y) {
        return std::tie(x.reporter, x.offset) < std::tie(y.reporter, y.offset);
    });
    std::map<Vec2, std::vector<SightingReport>> byOffset;
    for (const auto& r : reports) byOffset[r.offset].push_back(r);

    PairingResult out;
    for (const auto& [offset, group] : byOffset) {
        const Vec2 mirror{-offset.x, -offset.y};
        if (!(offset < mirror)) continue;  // visit each {o, -o} once
        auto it = byOffset.find(mirror);
        if (it == byOffset.end()) continue;
        const auto& other = it->second;
        if (group.size() != 1 || other.size() != 1) {
            out.aborted.insert(out.aborted.end(), group.begin(), group.end());
            out.aborted.insert(out.aborted.end(), other.begin(), other.end());
            continue;
        }
        SightingReport a = group.front(), b = other.front();
        if (a.reporter == b.reporter) continue;
        if (b.reporter < a.reporter) std::swap(a, b);
        if (known && known(a.reporter, b.reporter)) continue;
        out.pairs.push_back({a, b});
    }
    std::sort(out.pairs.begin(), out.pairs.end(), [](const SightingPair& x, const SightingPair& y) {
        return std::tie(x.a.reporter, x.b.reporter) < std::tie(y.a.reporter, y.b.reporter);
    });
    return out;
}

}  // namespace assemble
