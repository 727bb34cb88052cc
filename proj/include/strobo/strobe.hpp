#pragma once

#include <cmath>
#include <optional>
#include <vector>

#include "strobo/image.hpp"
#include "strobo/moments.hpp"

namespace strobo {

// One tracked subject observation: the frame it came from, its statistics,
// and its full-resolution mask.
struct TrackEntry {
    long frame_index = 0;
    BlobStats stats;
    BinaryMask mask;
};

// Temporally ordered subject track. frame_index strictly increases and
// every mask is nonempty.
struct Track {
    std::vector<TrackEntry> entries;
};

struct StrobeSelection {
    std::vector<long> chosen;  // frame indices, temporal order
    double d_min_used = 0.0;
    bool short_of_target = false;

    std::size_t count() const { return chosen.size(); }
};

// Greedy scan in temporal order: accept an entry iff its centroid is at
// least d_min away from every centroid accepted so far. The first entry is
// always accepted.
inline StrobeSelection select_frames_greedy(const Track& track, double d_min) {
    if (!(d_min > 0.0)) throw InvalidArgument("d_min must be positive");
    StrobeSelection sel;
    sel.d_min_used = d_min;
    std::vector<std::pair<double, double>> accepted;
    for (const TrackEntry& e : track.entries) {
        bool ok = true;
        for (const auto& [cx, cy] : accepted) {
            const double dx = e.stats.cx - cx;
            const double dy = e.stats.cy - cy;
            if (std::sqrt(dx * dx + dy * dy) < d_min) {
                ok = false;
                break;
            }
        }
        if (ok) {
            sel.chosen.push_back(e.frame_index);
            accepted.emplace_back(e.stats.cx, e.stats.cy);
        }
    }
    return sel;
}

// Bisect d_min over [1, frame diagonal] — the selection count is
// non-increasing in d_min — and keep the selection whose count lands in
// [n_min, n_max] at the largest probed spacing. A track that cannot yield
// n_min separated strobes even at d_min = 1 comes back flagged short.
inline StrobeSelection tune_spacing_for_count(const Track& track, int n_min, int n_max) {
    if (n_min < 1 || n_min > n_max) throw InvalidArgument("need 1 <= n_min <= n_max");

    StrobeSelection at_one = select_frames_greedy(track, 1.0);
    if (static_cast<int>(at_one.count()) < n_min) {
        at_one.short_of_target = true;
        return at_one;
    }

    double diagonal = 1.0;
    if (!track.entries.empty()) {
        const BinaryMask& m = track.entries.front().mask;
        diagonal = std::sqrt(static_cast<double>(m.width) * m.width +
                             static_cast<double>(m.height) * m.height);
    }

    std::optional<StrobeSelection> best;
    if (static_cast<int>(at_one.count()) <= n_max) best = at_one;

    double lo = 1.0;   // count(lo) >= n_min
    double hi = std::max(diagonal, 2.0);
    for (int iter = 0; iter < 32; ++iter) {
        const double mid = 0.5 * (lo + hi);
        StrobeSelection s = select_frames_greedy(track, mid);
        if (static_cast<int>(s.count()) >= n_min) {
            lo = mid;
            if (static_cast<int>(s.count()) <= n_max && (!best || mid > best->d_min_used))
                best = std::move(s);
        } else {
            hi = mid;
        }
    }
    if (best) return *best;
    // The count jumped over [n_min, n_max] entirely; fall back to the
    // largest spacing that still reaches n_min.
    return select_frames_greedy(track, lo);
}

// Paint the chosen frames' masked pixels over the background, in temporal
// order: where strobes overlap, the later one wins (the most recent
// position reads as "front"). frames[i] and masks[i] belong to
// selection.chosen[i].
inline Frame composite(const Frame& background, const StrobeSelection& selection,
                       const std::vector<Frame>& frames, const std::vector<BinaryMask>& masks) {
    if (frames.size() != selection.chosen.size() || masks.size() != selection.chosen.size())
        throw MissingFrame("composite needs one frame and mask per selected index");
    Frame out = background;
    for (std::size_t i = 0; i < frames.size(); ++i) {
        const Frame& f = frames[i];
        const BinaryMask& m = masks[i];
        if (!f.same_dims(background) || m.width != background.width ||
            m.height != background.height)
            throw DimensionMismatch("composite inputs differ in size");
        for (int y = 0; y < m.height; ++y)
            for (int x = 0; x < m.width; ++x)
                if (m.get(x, y)) out.set(x, y, f.at(x, y));
    }
    out.frame_index = 0;
    out.timestamp_s = 0.0;
    return out;
}

}  // namespace strobo
