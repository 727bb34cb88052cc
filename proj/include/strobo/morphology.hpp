#pragma once

#include <string>

#include "strobo/image.hpp"

namespace strobo {

enum class MorphOp { kErode, kDilate, kOpen, kClose };

// Square structuring element of side 2*radius+1. Out-of-bounds neighbors
// count as background for both erode and dilate, which clears a border
// band under erosion; blobs touching the border lose pixels accordingly.

inline BinaryMask erode(const BinaryMask& m, int radius) {
    if (radius < 1) throw InvalidArgument("morphology radius must be >= 1");
    BinaryMask out(m.width, m.height);
    for (int y = 0; y < m.height; ++y) {
        for (int x = 0; x < m.width; ++x) {
            if (!m.get(x, y)) continue;
            if (x - radius < 0 || y - radius < 0 || x + radius >= m.width || y + radius >= m.height)
                continue;  // out-of-bounds neighbor is background
            bool all = true;
            for (int dy = -radius; all && dy <= radius; ++dy)
                for (int dx = -radius; dx <= radius; ++dx)
                    if (!m.get(x + dx, y + dy)) {
                        all = false;
                        break;
                    }
            if (all) out.set(x, y, true);
        }
    }
    return out;
}

inline BinaryMask dilate(const BinaryMask& m, int radius) {
    if (radius < 1) throw InvalidArgument("morphology radius must be >= 1");
    BinaryMask out(m.width, m.height);
    for (int y = 0; y < m.height; ++y) {
        for (int x = 0; x < m.width; ++x) {
            const int x0 = x - radius < 0 ? 0 : x - radius;
            const int y0 = y - radius < 0 ? 0 : y - radius;
            const int x1 = x + radius >= m.width ? m.width - 1 : x + radius;
            const int y1 = y + radius >= m.height ? m.height - 1 : y + radius;
            bool any = false;
            for (int sy = y0; !any && sy <= y1; ++sy)
                for (int sx = x0; sx <= x1; ++sx)
                    if (m.get(sx, sy)) {
                        any = true;
                        break;
                    }
            if (any) out.set(x, y, true);
        }
    }
    return out;
}

inline BinaryMask open(const BinaryMask& m, int radius) { return dilate(erode(m, radius), radius); }

inline BinaryMask close(const BinaryMask& m, int radius) { return erode(dilate(m, radius), radius); }

inline BinaryMask morphology(const BinaryMask& m, MorphOp op, int radius) {
    switch (op) {
        case MorphOp::kErode:
            return erode(m, radius);
        case MorphOp::kDilate:
            return dilate(m, radius);
        case MorphOp::kOpen:
            return open(m, radius);
        case MorphOp::kClose:
            return close(m, radius);
    }
    throw InvalidArgument("unknown morphology op");
}

}  // namespace strobo
