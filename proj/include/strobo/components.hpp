#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <vector>

#include "strobo/image.hpp"

namespace strobo {

struct ComponentInfo {
    int label = 0;  // 1-based label in the final labels image
    long long area = 0;
    int min_x = 0, min_y = 0, max_x = 0, max_y = 0;
    long first_bit = 0;  // row-major index of the first pixel, scan order
};

struct ComponentLabeling {
    int width = 0;
    int height = 0;
    std::vector<std::int32_t> labels;      // 0 = background
    std::vector<ComponentInfo> components;  // sorted: area desc, then bbox top-left
};

// Two-pass 8-connected labeling with union-find. Components are relabeled
// 1..K in output order: area descending, ties by bounding-box top-left
// corner in row-major order (then by first pixel, which is unique).
inline ComponentLabeling connected_components(const BinaryMask& mask) {
    ComponentLabeling out;
    out.width = mask.width;
    out.height = mask.height;
    out.labels.assign(static_cast<std::size_t>(mask.width) * mask.height, 0);

    std::vector<std::int32_t> parent(1, 0);
    auto find = [&](std::int32_t a) {
        while (parent[a] != a) {
            parent[a] = parent[parent[a]];
            a = parent[a];
        }
        return a;
    };
    auto unite = [&](std::int32_t a, std::int32_t b) {
        a = find(a);
        b = find(b);
        if (a != b) parent[std::max(a, b)] = std::min(a, b);
    };

    const int w = mask.width;
    for (int y = 0; y < mask.height; ++y) {
        for (int x = 0; x < w; ++x) {
            if (!mask.get(x, y)) continue;
            const std::size_t i = static_cast<std::size_t>(y) * w + x;
            std::int32_t label = 0;
            // previously visited 8-neighbors: W, NW, N, NE
            const std::int32_t neighbors[4] = {
                x > 0 ? out.labels[i - 1] : 0,
                x > 0 && y > 0 ? out.labels[i - w - 1] : 0,
                y > 0 ? out.labels[i - w] : 0,
                x + 1 < w && y > 0 ? out.labels[i - w + 1] : 0,
            };
            for (std::int32_t n : neighbors) {
                if (n == 0) continue;
                if (label == 0)
                    label = n;
                else
                    unite(label, n);
            }
            if (label == 0) {
                label = static_cast<std::int32_t>(parent.size());
                parent.push_back(label);
            }
            out.labels[i] = label;
        }
    }

    // Resolve provisional labels and gather stats.
    std::vector<ComponentInfo> info(parent.size());
    std::vector<bool> seen(parent.size(), false);
    for (int y = 0; y < mask.height; ++y) {
        for (int x = 0; x < w; ++x) {
            const std::size_t i = static_cast<std::size_t>(y) * w + x;
            if (out.labels[i] == 0) continue;
            const std::int32_t root = find(out.labels[i]);
            out.labels[i] = root;
            ComponentInfo& c = info[static_cast<std::size_t>(root)];
            if (!seen[static_cast<std::size_t>(root)]) {
                seen[static_cast<std::size_t>(root)] = true;
                c.min_x = c.max_x = x;
                c.min_y = c.max_y = y;
                c.first_bit = static_cast<long>(i);
            } else {
                c.min_x = std::min(c.min_x, x);
                c.max_x = std::max(c.max_x, x);
                c.min_y = std::min(c.min_y, y);
                c.max_y = std::max(c.max_y, y);
            }
            ++c.area;
        }
    }

    std::vector<std::int32_t> roots;
    for (std::size_t r = 1; r < parent.size(); ++r)
        if (seen[r]) roots.push_back(static_cast<std::int32_t>(r));
    std::sort(roots.begin(), roots.end(), [&](std::int32_t a, std::int32_t b) {
        const ComponentInfo& ca = info[static_cast<std::size_t>(a)];
        const ComponentInfo& cb = info[static_cast<std::size_t>(b)];
        if (ca.area != cb.area) return ca.area > cb.area;
        if (ca.min_y != cb.min_y) return ca.min_y < cb.min_y;
        if (ca.min_x != cb.min_x) return ca.min_x < cb.min_x;
        return ca.first_bit < cb.first_bit;
    });

    std::vector<std::int32_t> remap(parent.size(), 0);
    for (std::size_t k = 0; k < roots.size(); ++k) {
        const std::int32_t final_label = static_cast<std::int32_t>(k + 1);
        remap[static_cast<std::size_t>(roots[k])] = final_label;
        ComponentInfo c = info[static_cast<std::size_t>(roots[k])];
        c.label = final_label;
        out.components.push_back(c);
    }
    for (std::int32_t& l : out.labels)
        if (l) l = remap[static_cast<std::size_t>(l)];
    return out;
}

inline BinaryMask extract_component(const ComponentLabeling& labeling, int label) {
    BinaryMask out(labeling.width, labeling.height);
    for (int y = 0; y < labeling.height; ++y)
        for (int x = 0; x < labeling.width; ++x)
            if (labeling.labels[static_cast<std::size_t>(y) * labeling.width + x] == label)
                out.set(x, y, true);
    return out;
}

// The single-subject assumption: keep only the largest component, and only
// if it is big enough to be a subject rather than noise.
inline std::optional<BinaryMask> largest_blob(const BinaryMask& mask, long long min_area) {
    const ComponentLabeling labeling = connected_components(mask);
    if (labeling.components.empty() || labeling.components.front().area < min_area)
        return std::nullopt;
    return extract_component(labeling, labeling.components.front().label);
}

}  // namespace strobo
