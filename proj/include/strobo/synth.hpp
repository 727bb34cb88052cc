#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <string>

#include "strobo/color.hpp"
#include "strobo/image.hpp"

namespace strobo {

enum class BackgroundKind { kFlat, kGradient, kChecker };
enum class TrajectoryKind { kLinear, kParabolic };

// Deterministic synthetic scene: a rigid disk moving over a static
// background, with optional sensor-like Gaussian noise. Every quantity is
// exact, so the scene doubles as ground truth for the whole pipeline.
struct SceneSpec {
    int width = 320;
    int height = 240;
    int n_frames = 125;

    BackgroundKind background = BackgroundKind::kGradient;
    Rgb color0{32, 40, 48};    // flat color / gradient left / checker even cells
    Rgb color1{96, 112, 128};  // gradient right / checker odd cells
    int checker_cell = 16;

    int disk_radius = 12;
    Rgb disk_color{220, 60, 60};

    TrajectoryKind trajectory = TrajectoryKind::kLinear;
    double start_x = 20.0, start_y = 120.0;
    double vel_x = 2.0, vel_y = 0.0;    // px/frame
    double accel_x = 0.0, accel_y = 0.0;  // px/frame^2, parabolic only

    double noise_sigma = 0.0;
    std::uint64_t seed = 0;

    std::array<double, 2> center(int k) const {
        const double t = static_cast<double>(k);
        double x = start_x + vel_x * t;
        double y = start_y + vel_y * t;
        if (trajectory == TrajectoryKind::kParabolic) {
            x += 0.5 * accel_x * t * t;
            y += 0.5 * accel_y * t * t;
        }
        return {x, y};
    }

    // The disk must stay fully inside the frame for every frame.
    void validate() const {
        if (width <= 0 || height <= 0 || n_frames <= 0)
            throw InvalidArgument("scene dimensions and frame count must be positive");
        if (disk_radius < 2) throw InvalidArgument("disk radius must be >= 2");
        if (checker_cell < 1) throw InvalidArgument("checker cell must be >= 1");
        if (noise_sigma < 0) throw InvalidArgument("noise sigma must be >= 0");
        for (int k = 0; k < n_frames; ++k) {
            const auto [cx, cy] = center(k);
            if (cx - disk_radius < 0 || cy - disk_radius < 0 || cx + disk_radius > width - 1 ||
                cy + disk_radius > height - 1)
                throw InvalidArgument("disk leaves the frame at index " + std::to_string(k));
        }
    }
};

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Counter-based Gaussian noise keyed by (seed, frame, pixel, channel):
// any sample is reproducible in isolation, so frames render identically
// regardless of order.
inline double gaussian_noise(std::uint64_t seed, int frame, int x, int y, int channel) {
    std::uint64_t h = splitmix64(seed ^ 0x5bf03635d1d4e463ULL);
    h = splitmix64(h ^ static_cast<std::uint64_t>(frame));
    h = splitmix64(h ^ (static_cast<std::uint64_t>(static_cast<std::uint32_t>(y)) << 32 |
                        static_cast<std::uint32_t>(x)));
    h = splitmix64(h ^ static_cast<std::uint64_t>(channel));
    const double u1 = (static_cast<double>(h >> 32) + 0.5) / 4294967296.0;  // (0,1)
    const double u2 = (static_cast<double>(h & 0xffffffffULL) + 0.5) / 4294967296.0;
    constexpr double two_pi = 6.283185307179586476925286766559;
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(two_pi * u2);
}

}  // namespace detail

inline Rgb scene_background_color(const SceneSpec& spec, int x, int y) {
    switch (spec.background) {
        case BackgroundKind::kFlat:
            return spec.color0;
        case BackgroundKind::kGradient: {
            const double t = spec.width > 1 ? static_cast<double>(x) / (spec.width - 1) : 0.0;
            Rgb c;
            for (int i = 0; i < 3; ++i)
                c[i] = round_to_u8(spec.color0[i] + (spec.color1[i] - spec.color0[i]) * t);
            return c;
        }
        case BackgroundKind::kChecker:
            return ((x / spec.checker_cell + y / spec.checker_cell) % 2 == 0) ? spec.color0
                                                                              : spec.color1;
    }
    throw InvalidArgument("unknown background kind");
}

// A pixel belongs to the disk iff its center is within disk_radius of the
// disk center. Exact, antialiasing-free, shared with ground_truth_mask.
inline bool scene_disk_covers(const SceneSpec& spec, int k, int x, int y) {
    const auto [cx, cy] = spec.center(k);
    const double dx = x - cx;
    const double dy = y - cy;
    return dx * dx + dy * dy <= static_cast<double>(spec.disk_radius) * spec.disk_radius;
}

// The clean background plate: what the scene looks like with no disk and
// no noise.
inline Frame true_background(const SceneSpec& spec) {
    Frame f(spec.width, spec.height);
    for (int y = 0; y < spec.height; ++y)
        for (int x = 0; x < spec.width; ++x) f.set(x, y, scene_background_color(spec, x, y));
    return f;
}

inline Frame render_frame(const SceneSpec& spec, int k) {
    if (k < 0 || k >= spec.n_frames) throw IndexOutOfRange("frame index out of range");
    Frame f(spec.width, spec.height);
    f.frame_index = k;
    for (int y = 0; y < spec.height; ++y) {
        for (int x = 0; x < spec.width; ++x) {
            Rgb base = scene_disk_covers(spec, k, x, y) ? spec.disk_color
                                                        : scene_background_color(spec, x, y);
            if (spec.noise_sigma > 0) {
                for (int c = 0; c < 3; ++c)
                    base[c] = round_to_u8(
                        base[c] + spec.noise_sigma * detail::gaussian_noise(spec.seed, k, x, y, c));
            }
            f.set(x, y, base);
        }
    }
    return f;
}

inline BinaryMask ground_truth_mask(const SceneSpec& spec, int k) {
    if (k < 0 || k >= spec.n_frames) throw IndexOutOfRange("frame index out of range");
    BinaryMask m(spec.width, spec.height);
    for (int y = 0; y < spec.height; ++y)
        for (int x = 0; x < spec.width; ++x)
            if (scene_disk_covers(spec, k, x, y)) m.set(x, y, true);
    return m;
}

}  // namespace strobo
