#pragma once

#include <array>
#include <cmath>
#include <cstdint>

#include "strobo/image.hpp"

namespace strobo {

// Mean absolute channel difference, rounded to nearest. Cheaper than the
// Euclidean norm and ordering-equivalent for threshold selection.
inline GrayImage diff_magnitude(const Frame& frame, const Frame& background) {
    if (!frame.same_dims(background)) throw DimensionMismatch("diff inputs differ in size");
    GrayImage out(frame.width, frame.height);
    const std::size_t n = static_cast<std::size_t>(frame.width) * frame.height;
    for (std::size_t i = 0; i < n; ++i) {
        const int dr = std::abs(frame.pixels[i * 3] - background.pixels[i * 3]);
        const int dg = std::abs(frame.pixels[i * 3 + 1] - background.pixels[i * 3 + 1]);
        const int db = std::abs(frame.pixels[i * 3 + 2] - background.pixels[i * 3 + 2]);
        const long v = std::lround((dr + dg + db) / 3.0);
        out.values[i] = static_cast<std::uint8_t>(v > 255 ? 255 : v);
    }
    return out;
}

struct Histogram256 {
    std::array<std::uint64_t, 256> counts{};

    std::uint64_t total() const {
        std::uint64_t n = 0;
        for (std::uint64_t c : counts) n += c;
        return n;
    }
};

inline Histogram256 histogram(const GrayImage& g) {
    Histogram256 h;
    for (std::uint8_t v : g.values) ++h.counts[v];
    return h;
}

namespace detail {

// Between-class variance for the split {values < t} / {values >= t},
// computed from exact integer sums so that independently accumulated
// routes produce bit-identical scores:
//   w0 w1 (mu0 - mu1)^2 = (s0 w1 - s1 w0)^2 / (w0 w1).
inline long double otsu_score(std::uint64_t w0, std::uint64_t s0, std::uint64_t w1,
                              std::uint64_t s1) {
    if (w0 == 0 || w1 == 0) return 0.0L;
    const __int128 diff = static_cast<__int128>(s0) * w1 - static_cast<__int128>(s1) * w0;
    const long double d = static_cast<long double>(diff);
    return d * d / (static_cast<long double>(w0) * static_cast<long double>(w1));
}

}  // namespace detail

// Otsu's threshold: the t in [0,255] maximizing between-class variance,
// ties broken by the smallest t. A histogram with all its mass in a single
// bin flattens the objective, so that case returns bin+1 (everything below
// the threshold, empty foreground).
inline int otsu_threshold(const Histogram256& hist) {
    const std::uint64_t total = hist.total();
    if (total == 0) throw EmptyHistogram("histogram has no mass");

    int nonzero_bins = 0;
    int single_bin = 0;
    for (int v = 0; v < 256; ++v) {
        if (hist.counts[v]) {
            ++nonzero_bins;
            single_bin = v;
        }
    }
    if (nonzero_bins == 1) return single_bin + 1;

    std::uint64_t total_sum = 0;
    for (int v = 0; v < 256; ++v) total_sum += hist.counts[v] * static_cast<std::uint64_t>(v);

    int best_t = 0;
    long double best_score = -1.0L;
    std::uint64_t w0 = 0, s0 = 0;
    for (int t = 0; t < 256; ++t) {
        // class 0 holds values < t
        if (t > 0) {
            w0 += hist.counts[t - 1];
            s0 += hist.counts[t - 1] * static_cast<std::uint64_t>(t - 1);
        }
        const long double score = detail::otsu_score(w0, s0, total - w0, total_sum - s0);
        if (score > best_score) {
            best_score = score;
            best_t = t;
        }
    }
    return best_t;
}

// Bit set iff value >= t; t is clamped to [0,255] first, so a requested
// t > 255 still admits pixels at full intensity.
inline BinaryMask apply_threshold(const GrayImage& g, int t) {
    if (t < 0) t = 0;
    if (t > 255) t = 255;
    BinaryMask out(g.width, g.height);
    for (int y = 0; y < g.height; ++y)
        for (int x = 0; x < g.width; ++x)
            if (g.at(x, y) >= t) out.set(x, y, true);
    return out;
}

}  // namespace strobo
