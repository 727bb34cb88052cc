#pragma once

#include <array>
#include <bit>
#include <cstdint>
#include <vector>

#include "strobo/errors.hpp"

namespace strobo {

using Rgb = std::array<std::uint8_t, 3>;

// 8-bit RGB raster, row-major, 3 bytes per pixel. Frames are immutable
// values once produced by a reader; copying is cheap enough at the sizes
// this pipeline works with.
struct Frame {
    int width = 0;
    int height = 0;
    long frame_index = 0;
    double timestamp_s = 0.0;
    std::vector<std::uint8_t> pixels;  // width * height * 3

    Frame() = default;
    Frame(int w, int h) : width(w), height(h), pixels(static_cast<std::size_t>(w) * h * 3, 0) {
        if (w <= 0 || h <= 0) throw InvalidArgument("Frame dimensions must be positive");
    }

    std::size_t offset(int x, int y) const { return (static_cast<std::size_t>(y) * width + x) * 3; }

    Rgb at(int x, int y) const {
        const std::size_t o = offset(x, y);
        return {pixels[o], pixels[o + 1], pixels[o + 2]};
    }
    void set(int x, int y, Rgb c) {
        const std::size_t o = offset(x, y);
        pixels[o] = c[0];
        pixels[o + 1] = c[1];
        pixels[o + 2] = c[2];
    }

    bool same_dims(const Frame& other) const { return width == other.width && height == other.height; }
};

// Single-channel 8-bit image (difference magnitudes, debug renderings).
struct GrayImage {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> values;  // width * height

    GrayImage() = default;
    GrayImage(int w, int h) : width(w), height(h), values(static_cast<std::size_t>(w) * h, 0) {
        if (w <= 0 || h <= 0) throw InvalidArgument("GrayImage dimensions must be positive");
    }

    std::uint8_t at(int x, int y) const { return values[static_cast<std::size_t>(y) * width + x]; }
    void set(int x, int y, std::uint8_t v) { values[static_cast<std::size_t>(y) * width + x] = v; }
};

// Packed 1-bit-per-pixel bitmap, row-major; bit i covers pixel
// (i % width, i / width). Unused tail bits of the last word stay zero so
// word-wise equality and popcount need no masking.
struct BinaryMask {
    int width = 0;
    int height = 0;
    std::vector<std::uint64_t> words;

    BinaryMask() = default;
    BinaryMask(int w, int h)
        : width(w), height(h), words((static_cast<std::size_t>(w) * h + 63) / 64, 0) {
        if (w <= 0 || h <= 0) throw InvalidArgument("BinaryMask dimensions must be positive");
    }

    std::size_t bit_index(int x, int y) const { return static_cast<std::size_t>(y) * width + x; }

    bool get(int x, int y) const {
        const std::size_t i = bit_index(x, y);
        return (words[i >> 6] >> (i & 63)) & 1u;
    }
    void set(int x, int y, bool v) {
        const std::size_t i = bit_index(x, y);
        if (v)
            words[i >> 6] |= std::uint64_t{1} << (i & 63);
        else
            words[i >> 6] &= ~(std::uint64_t{1} << (i & 63));
    }

    long long popcount() const {
        long long n = 0;
        for (std::uint64_t w : words) n += std::popcount(w);
        return n;
    }

    bool empty() const {
        for (std::uint64_t w : words)
            if (w) return false;
        return true;
    }

    BinaryMask complement() const {
        BinaryMask out(width, height);
        for (std::size_t i = 0; i < words.size(); ++i) out.words[i] = ~words[i];
        out.clear_tail();
        return out;
    }

    bool same_dims(const BinaryMask& other) const {
        return width == other.width && height == other.height;
    }

    friend bool operator==(const BinaryMask& a, const BinaryMask& b) {
        return a.width == b.width && a.height == b.height && a.words == b.words;
    }

    void clear_tail() {
        const std::size_t n = static_cast<std::size_t>(width) * height;
        if (n & 63) words.back() &= (std::uint64_t{1} << (n & 63)) - 1;
    }
};

inline long long mask_intersection_count(const BinaryMask& a, const BinaryMask& b) {
    if (!a.same_dims(b)) throw DimensionMismatch("mask dimensions differ");
    long long n = 0;
    for (std::size_t i = 0; i < a.words.size(); ++i) n += std::popcount(a.words[i] & b.words[i]);
    return n;
}

// Intersection-over-union; two empty masks count as identical (1.0).
inline double mask_iou(const BinaryMask& a, const BinaryMask& b) {
    const long long inter = mask_intersection_count(a, b);
    const long long uni = a.popcount() + b.popcount() - inter;
    if (uni == 0) return 1.0;
    return static_cast<double>(inter) / static_cast<double>(uni);
}

}  // namespace strobo
