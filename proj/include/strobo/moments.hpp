#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>

#include "strobo/image.hpp"

namespace strobo {

// Raw moments accumulate exactly in integers; central moments are a second
// pass in doubles around the centroid. Coordinates are bit indices
// (x = column, y = row), top-left origin, no half-pixel centering.
struct Moments {
    long long m00 = 0;  // area
    long long m10 = 0;
    long long m01 = 0;
    double mu20 = 0.0;
    double mu02 = 0.0;
    double mu11 = 0.0;

    double centroid_x() const { return static_cast<double>(m10) / static_cast<double>(m00); }
    double centroid_y() const { return static_cast<double>(m01) / static_cast<double>(m00); }
};

inline Moments compute_moments(const BinaryMask& mask) {
    Moments m;
    for (int y = 0; y < mask.height; ++y) {
        for (int x = 0; x < mask.width; ++x) {
            if (!mask.get(x, y)) continue;
            ++m.m00;
            m.m10 += x;
            m.m01 += y;
        }
    }
    if (m.m00 == 0) throw EmptyMask("moments of an empty mask");
    const double cx = m.centroid_x();
    const double cy = m.centroid_y();
    for (int y = 0; y < mask.height; ++y) {
        for (int x = 0; x < mask.width; ++x) {
            if (!mask.get(x, y)) continue;
            const double dx = x - cx;
            const double dy = y - cy;
            m.mu20 += dx * dx;
            m.mu02 += dy * dy;
            m.mu11 += dx * dy;
        }
    }
    return m;
}

// Per-frame subject statistics: where the blob is and when.
struct BlobStats {
    long frame_index = 0;
    double timestamp_s = 0.0;
    long long area = 0;
    double cx = 0.0, cy = 0.0;
    double mu20 = 0.0, mu02 = 0.0, mu11 = 0.0;
    int min_x = 0, min_y = 0, max_x = 0, max_y = 0;

    double bbox_diagonal() const {
        const double w = max_x - min_x + 1;
        const double h = max_y - min_y + 1;
        return std::sqrt(w * w + h * h);
    }
};

inline BlobStats blob_stats(const BinaryMask& mask, long frame_index, double timestamp_s) {
    const Moments m = compute_moments(mask);
    BlobStats s;
    s.frame_index = frame_index;
    s.timestamp_s = timestamp_s;
    s.area = m.m00;
    s.cx = m.centroid_x();
    s.cy = m.centroid_y();
    s.mu20 = m.mu20;
    s.mu02 = m.mu02;
    s.mu11 = m.mu11;
    bool first = true;
    for (int y = 0; y < mask.height; ++y) {
        for (int x = 0; x < mask.width; ++x) {
            if (!mask.get(x, y)) continue;
            if (first) {
                s.min_x = s.max_x = x;
                s.min_y = s.max_y = y;
                first = false;
            } else {
                s.min_x = std::min(s.min_x, x);
                s.max_x = std::max(s.max_x, x);
                s.min_y = std::min(s.min_y, y);
                s.max_y = std::max(s.max_y, y);
            }
        }
    }
    return s;
}

}  // namespace strobo
