#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <vector>

#include "strobo/color.hpp"
#include "strobo/image.hpp"

namespace strobo {

using Vec3 = std::array<double, 3>;

inline Vec3 to_vec3(Rgb c) {
    return {static_cast<double>(c[0]), static_cast<double>(c[1]), static_cast<double>(c[2])};
}

inline double squared_distance(const Vec3& a, const Vec3& b) {
    const double d0 = a[0] - b[0];
    const double d1 = a[1] - b[1];
    const double d2 = a[2] - b[2];
    return d0 * d0 + d1 * d1 + d2 * d2;
}

// One Gaussian mode of a per-pixel mixture: isotropic in RGB, a single
// shared variance for the three channels.
struct GmmComponent {
    double weight = 0.0;
    Vec3 mean{0.0, 0.0, 0.0};
    double variance = 0.0;
};

struct ModelParams {
    // Learning rate; 1/alpha is the history length in frames. The mixture
    // bootstraps its first sample at weight 1, so 1/alpha must be well
    // under the clip length or a subject present in frame 0 stays anchored
    // in the background estimate. 0.02 (history 50) suits the ~125-frame
    // clips this pipeline targets; lower it for long recordings.
    double alpha = 0.02;
    int m_max = 4;               // component cap per pixel
    double sigma0_sq = 225.0;    // variance of a freshly created component
    double match_thresh = 9.0;   // squared-Mahalanobis gate for sample ownership (3 sigma)
    double c_t = 0.05 * 0.02;    // complexity-reduction prior weight, default 0.05 * alpha
    double c_f = 0.1;            // maximum total weight the foreground may hold
    double c_thr = 1e-5;         // background density acceptance threshold
    double sigma_min_sq = 4.0;   // variance clamp, keeps modes from collapsing
    double sigma_max_sq = 5.0 * 225.0;  // variance clamp, 5 * sigma0_sq

    void validate() const {
        if (!(alpha > 0.0 && alpha < 1.0)) throw InvalidArgument("alpha must be in (0,1)");
        if (m_max < 1) throw InvalidArgument("m_max must be >= 1");
        if (!(sigma0_sq > 0.0)) throw InvalidArgument("sigma0_sq must be positive");
        if (!(match_thresh > 0.0)) throw InvalidArgument("match_thresh must be positive");
        if (!(c_t > 0.0)) throw InvalidArgument("c_t must be positive");
        if (!(c_f > 0.0 && c_f < 1.0)) throw InvalidArgument("c_f must be in (0,1)");
        if (!(c_thr > 0.0)) throw InvalidArgument("c_thr must be positive");
        if (!(sigma_min_sq > 0.0) || sigma_max_sq < sigma_min_sq)
            throw InvalidArgument("bad variance clamps");
    }
};

// Mixture of at most m_max components, kept sorted by weight descending
// with weights renormalized to sum 1 after every update.
struct PixelMixture {
    std::vector<GmmComponent> components;
};

enum class PixelClass { kBackground, kForeground };

// 3-d isotropic Gaussian density.
inline double gaussian3(const Vec3& x, const Vec3& mean, double variance) {
    constexpr double two_pi = 2.0 * std::numbers::pi;
    const double norm = 1.0 / (two_pi * variance * std::sqrt(two_pi * variance));
    return norm * std::exp(-0.5 * squared_distance(x, mean) / variance);
}

// Full-scene density estimate: sum over every component, background and
// foreground alike.
inline double mixture_density(const PixelMixture& m, const Vec3& x) {
    double density = 0.0;
    for (const GmmComponent& c : m.components) density += c.weight * gaussian3(x, c.mean, c.variance);
    return density;
}

// Background components are the heaviest prefix whose cumulative weight
// reaches 1 - c_f; the pixel is background when their density at the sample
// exceeds c_thr. An empty mixture has zero density and classifies
// foreground.
inline PixelClass classify_pixel(const PixelMixture& m, const Vec3& x, const ModelParams& p) {
    if (m.components.empty()) return PixelClass::kForeground;
    const double need = 1.0 - p.c_f;
    double cumulative = 0.0;
    double density = 0.0;
    for (const GmmComponent& c : m.components) {
        cumulative += c.weight;
        density += c.weight * gaussian3(x, c.mean, c.variance);
        if (cumulative >= need) break;
    }
    return density > p.c_thr ? PixelClass::kBackground : PixelClass::kForeground;
}

// Online recursive update. A component matches if its squared distance to
// the sample is below match_thresh * variance; among matches the heaviest
// component owns the sample. All weights take the decay + ownership step,
// the owner's mean and variance move toward the sample, and an unmatched
// sample spawns a new component (evicting the lightest when at capacity).
// Returns the classification of the pre-update mixture, so the decision
// never sees the sample it is judging.
inline bool update_pixel(PixelMixture& m, const Vec3& x, const ModelParams& p) {
    const bool is_foreground = classify_pixel(m, x, p) == PixelClass::kForeground;

    // Components are weight-sorted, so the first match is the owner
    // (ties resolve to the lowest index).
    int owner = -1;
    double owner_dist_sq = 0.0;
    for (int i = 0; i < static_cast<int>(m.components.size()); ++i) {
        const double d2 = squared_distance(x, m.components[i].mean);
        if (d2 < p.match_thresh * m.components[i].variance) {
            owner = i;
            owner_dist_sq = d2;
            break;
        }
    }

    for (int i = 0; i < static_cast<int>(m.components.size()); ++i) {
        const double o = i == owner ? 1.0 : 0.0;
        m.components[i].weight += p.alpha * (o - m.components[i].weight) - p.alpha * p.c_t;
    }

    // Cull dead components; the owner always survives (its weight step is
    // strictly positive for c_t < 1).
    if (owner >= 0) {
        GmmComponent& own = m.components[static_cast<std::size_t>(owner)];
        const double k = p.alpha / own.weight;
        for (int c = 0; c < 3; ++c) own.mean[c] += k * (x[c] - own.mean[c]);
        own.variance += k * (owner_dist_sq / 3.0 - own.variance);
        own.variance = std::clamp(own.variance, p.sigma_min_sq, p.sigma_max_sq);
        std::erase_if(m.components, [](const GmmComponent& c) { return c.weight <= 0.0; });
    } else {
        std::erase_if(m.components, [](const GmmComponent& c) { return c.weight <= 0.0; });
        GmmComponent fresh{p.alpha, x, p.sigma0_sq};
        if (static_cast<int>(m.components.size()) < p.m_max)
            m.components.push_back(fresh);
        else
            m.components.back() = fresh;  // weights stay sorted under uniform decay
    }

    double total = 0.0;
    for (const GmmComponent& c : m.components) total += c.weight;
    for (GmmComponent& c : m.components) c.weight /= total;

    std::stable_sort(m.components.begin(), m.components.end(),
                     [](const GmmComponent& a, const GmmComponent& b) { return a.weight > b.weight; });
    return is_foreground;
}

// Per-pixel mixtures over a (usually downscaled) frame grid.
struct BackgroundModel {
    int width = 0;
    int height = 0;
    ModelParams params;
    long frames_seen = 0;
    std::vector<PixelMixture> grid;
};

inline BackgroundModel init_model(int width, int height, const ModelParams& params) {
    if (width <= 0 || height <= 0) throw InvalidArgument("model dimensions must be positive");
    params.validate();
    BackgroundModel model;
    model.width = width;
    model.height = height;
    model.params = params;
    model.grid.resize(static_cast<std::size_t>(width) * height);
    return model;
}

// Classify-then-update every pixel. The mask holds the pre-update
// foreground decisions; a fresh model therefore reports its first frame
// as all-foreground. Pixels are independent, so iteration order does not
// affect the result.
inline BinaryMask process_frame(BackgroundModel& model, const Frame& frame) {
    if (frame.width != model.width || frame.height != model.height)
        throw DimensionMismatch("frame does not match model dimensions");
    BinaryMask mask(model.width, model.height);
    for (int y = 0; y < model.height; ++y) {
        for (int x = 0; x < model.width; ++x) {
            PixelMixture& mix = model.grid[static_cast<std::size_t>(y) * model.width + x];
            if (update_pixel(mix, to_vec3(frame.at(x, y)), model.params)) mask.set(x, y, true);
        }
    }
    ++model.frames_seen;
    return mask;
}

// The learned scene: per pixel, the mean of the heaviest component. Pixels
// whose mixture is still empty render black.
inline Frame background_image(const BackgroundModel& model) {
    if (model.frames_seen == 0) throw ModelEmpty("no frames processed yet");
    Frame out(model.width, model.height);
    for (int y = 0; y < model.height; ++y) {
        for (int x = 0; x < model.width; ++x) {
            const PixelMixture& mix = model.grid[static_cast<std::size_t>(y) * model.width + x];
            if (mix.components.empty()) continue;
            const Vec3& mean = mix.components.front().mean;
            out.set(x, y, {round_to_u8(mean[0]), round_to_u8(mean[1]), round_to_u8(mean[2])});
        }
    }
    return out;
}

}  // namespace strobo
