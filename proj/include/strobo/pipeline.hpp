#pragma once

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "strobo/components.hpp"
#include "strobo/frame_source.hpp"
#include "strobo/gmm.hpp"
#include "strobo/mask_ops.hpp"
#include "strobo/morphology.hpp"
#include "strobo/scale.hpp"
#include "strobo/strobe.hpp"

namespace strobo {

enum class ThresholdMode { kOtsu, kFixed };
enum class SelectionMode { kTargetRange, kFixedDmin, kAutoDmin };

// Everything the two-pass pipeline needs, validated up front so no stage
// can fail on a bad parameter halfway through a long input.
struct PipelineConfig {
    std::string input;
    std::string output = "strobe.png";
    double fps_override = 0.0;  // 0 = take the source's rate
    int downscale = 1;
    ModelParams model;

    ThresholdMode threshold_mode = ThresholdMode::kOtsu;
    int threshold_fixed = 128;
    int morph_open_radius = 1;   // 0 disables the stage
    int morph_close_radius = 2;  // 0 disables the stage
    double min_area_frac = 0.001;

    SelectionMode selection_mode = SelectionMode::kTargetRange;
    double d_min = 0.0;  // kFixedDmin only
    int target_min = 5;
    int target_max = 10;

    std::string debug_dir;  // empty = no debug artifacts
    std::uint64_t seed = 0;

    void validate() const {
        if (input.empty()) throw InvalidArgument("no input given");
        if (output.empty()) throw InvalidArgument("no output path given");
        if (fps_override < 0) throw InvalidArgument("fps must be positive");
        if (downscale < 1) throw InvalidArgument("downscale factor must be >= 1");
        model.validate();
        if (threshold_fixed < 0 || threshold_fixed > 256)
            throw InvalidArgument("fixed threshold must be in [0,256]");
        if (morph_open_radius < 0 || morph_close_radius < 0)
            throw InvalidArgument("morphology radii must be >= 0");
        if (min_area_frac < 0 || min_area_frac > 1)
            throw InvalidArgument("min-area fraction must be in [0,1]");
        if (selection_mode == SelectionMode::kFixedDmin && !(d_min > 0))
            throw InvalidArgument("dmin must be positive");
        if (selection_mode == SelectionMode::kTargetRange &&
            (target_min < 1 || target_min > target_max))
            throw InvalidArgument("target range needs 1 <= min <= max");
    }
};

struct PassTimings {
    long frames = 0;
    double model_seconds = 0.0;
    double segment_seconds = 0.0;
};

struct PipelineResult {
    int exit_code = 0;  // 0 ok, 3 no motion
    Frame background;   // model resolution
    Track track;
    StrobeSelection selection;
    Frame composite;  // full resolution, valid when exit_code == 0
    PassTimings timings;
};

// diff -> threshold -> open -> close -> largest blob, all at model
// resolution. Returns nothing when no component reaches the area floor.
inline std::optional<BinaryMask> segment_subject(const Frame& frame_small, const Frame& bg_small,
                                                 const PipelineConfig& cfg) {
    const GrayImage diff = diff_magnitude(frame_small, bg_small);
    const int t = cfg.threshold_mode == ThresholdMode::kOtsu ? otsu_threshold(histogram(diff))
                                                             : cfg.threshold_fixed;
    BinaryMask mask = apply_threshold(diff, t);
    if (cfg.morph_open_radius > 0) mask = open(mask, cfg.morph_open_radius);
    if (cfg.morph_close_radius > 0) mask = close(mask, cfg.morph_close_radius);
    const long long min_area = std::llround(
        cfg.min_area_frac * static_cast<double>(frame_small.width) * frame_small.height);
    return largest_blob(mask, min_area);
}

// Pass 1: stream every frame through the mixture model at model resolution.
inline BackgroundModel run_background_pass(FrameSource& src, const PipelineConfig& cfg,
                                           PassTimings* timings = nullptr) {
    const auto t0 = std::chrono::steady_clock::now();
    const int mw = (src.width() + cfg.downscale - 1) / cfg.downscale;
    const int mh = (src.height() + cfg.downscale - 1) / cfg.downscale;
    BackgroundModel model = init_model(mw, mh, cfg.model);
    long frames = 0;
    while (auto frame = src.next()) {
        process_frame(model, downscale_box(*frame, cfg.downscale));
        ++frames;
    }
    if (frames == 0) throw NoFramesFound("input contains no frames: " + cfg.input);
    if (timings) {
        timings->frames = frames;
        timings->model_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    }
    return model;
}

namespace detail {

inline std::string debug_path(const std::string& dir, const std::string& name) {
    return (std::filesystem::path(dir) / name).string();
}

inline std::string mask_filename(long frame_index) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "mask_%05ld.png", frame_index);
    return buf;
}

}  // namespace detail

// Pass 2: segment every frame against the learned background, keep the
// single-subject masks upscaled to full resolution, and package their
// statistics as the subject track.
inline Track run_segmentation_pass(FrameSource& src, const Frame& bg_small,
                                   const PipelineConfig& cfg, PassTimings* timings = nullptr) {
    const auto t0 = std::chrono::steady_clock::now();
    src.reset();
    Track track;
    std::ofstream blobs_csv;
    if (!cfg.debug_dir.empty()) {
        blobs_csv.open(detail::debug_path(cfg.debug_dir, "blobs.csv"));
        blobs_csv << "frame,timestamp,area,cx,cy,mu20,mu02,mu11\n";
    }
    const int full_w = src.width();
    const int full_h = src.height();
    while (auto frame = src.next()) {
        const Frame small = downscale_box(*frame, cfg.downscale);
        std::optional<BinaryMask> subject = segment_subject(small, bg_small, cfg);
        if (!cfg.debug_dir.empty()) {
            const std::string path =
                detail::debug_path(cfg.debug_dir, detail::mask_filename(frame->frame_index));
            write_mask_png(subject ? *subject : BinaryMask(bg_small.width, bg_small.height), path);
        }
        if (!subject) continue;
        BinaryMask full = upscale_nearest(*subject, cfg.downscale, full_w, full_h);
        BlobStats stats = blob_stats(full, frame->frame_index, frame->timestamp_s);
        if (blobs_csv.is_open()) {
            char line[256];
            std::snprintf(line, sizeof line, "%ld,%.6f,%lld,%.6f,%.6f,%.6f,%.6f,%.6f\n",
                          stats.frame_index, stats.timestamp_s, stats.area, stats.cx, stats.cy,
                          stats.mu20, stats.mu02, stats.mu11);
            blobs_csv << line;
        }
        track.entries.push_back({frame->frame_index, std::move(stats), std::move(full)});
    }
    if (timings)
        timings->segment_seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return track;
}

inline StrobeSelection select_strobes(const Track& track, const PipelineConfig& cfg) {
    switch (cfg.selection_mode) {
        case SelectionMode::kTargetRange:
            return tune_spacing_for_count(track, cfg.target_min, cfg.target_max);
        case SelectionMode::kFixedDmin:
            return select_frames_greedy(track, cfg.d_min);
        case SelectionMode::kAutoDmin: {
            double mean_diag = 0.0;
            for (const TrackEntry& e : track.entries) mean_diag += e.stats.bbox_diagonal();
            mean_diag /= static_cast<double>(track.entries.size());
            return select_frames_greedy(track, 1.5 * mean_diag);
        }
    }
    throw InvalidArgument("unknown selection mode");
}

// Final partial pass: pull the chosen frames back out of the source at
// full resolution.
inline std::vector<Frame> collect_selected_frames(FrameSource& src,
                                                  const StrobeSelection& selection) {
    src.reset();
    std::set<long> wanted(selection.chosen.begin(), selection.chosen.end());
    std::vector<Frame> frames;
    while (!wanted.empty()) {
        auto frame = src.next();
        if (!frame) throw MissingFrame("selected frame never appeared in the input");
        if (wanted.erase(frame->frame_index)) frames.push_back(std::move(*frame));
    }
    return frames;
}

// Serializes the effective configuration with the same keys the config
// file and command line use, so a debug run can be replayed exactly.
inline void write_effective_config(const PipelineConfig& cfg, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw IoFailure("cannot write config echo: " + path);
    out << "# effective configuration\n";
    out << "input=" << cfg.input << '\n';
    out << "output=" << cfg.output << '\n';
    out << "fps=" << cfg.fps_override << '\n';
    out << "downscale=" << cfg.downscale << '\n';
    out << "alpha=" << cfg.model.alpha << '\n';
    out << "components=" << cfg.model.m_max << '\n';
    out << "sigma0=" << std::sqrt(cfg.model.sigma0_sq) << '\n';
    out << "match-thresh=" << cfg.model.match_thresh << '\n';
    out << "ct=" << cfg.model.c_t << '\n';
    out << "cf=" << cfg.model.c_f << '\n';
    out << "cthr=" << cfg.model.c_thr << '\n';
    if (cfg.threshold_mode == ThresholdMode::kOtsu)
        out << "threshold=otsu\n";
    else
        out << "threshold=fixed:" << cfg.threshold_fixed << '\n';
    out << "morph-open=" << cfg.morph_open_radius << '\n';
    out << "morph-close=" << cfg.morph_close_radius << '\n';
    out << "min-area=" << cfg.min_area_frac << '\n';
    switch (cfg.selection_mode) {
        case SelectionMode::kTargetRange:
            out << "target=" << cfg.target_min << ':' << cfg.target_max << '\n';
            break;
        case SelectionMode::kFixedDmin:
            out << "dmin=" << cfg.d_min << '\n';
            break;
        case SelectionMode::kAutoDmin:
            out << "dmin=auto\n";
            break;
    }
    out << "debug-dir=" << cfg.debug_dir << '\n';
    out << "seed=" << cfg.seed << '\n';
}

// The whole show: model the background over the full input, segment and
// track the subject, pick spatially separated strobes, composite them over
// the learned background, write the result. Returns exit code 3 (and
// writes no composite) when no subject was ever tracked.
inline PipelineResult run_strobe_pipeline(const PipelineConfig& cfg) {
    cfg.validate();
    PipelineResult result;

    if (!cfg.debug_dir.empty()) {
        std::filesystem::create_directories(cfg.debug_dir);
        write_effective_config(cfg, detail::debug_path(cfg.debug_dir, "config.txt"));
    }

    auto src = open_frame_source(cfg.input, cfg.fps_override);

    BackgroundModel model = run_background_pass(*src, cfg, &result.timings);
    result.background = background_image(model);
    if (!cfg.debug_dir.empty())
        write_png(result.background, detail::debug_path(cfg.debug_dir, "background.png"));

    result.track = run_segmentation_pass(*src, result.background, cfg, &result.timings);
    if (result.track.entries.empty()) {
        result.exit_code = 3;
        return result;
    }

    result.selection = select_strobes(result.track, cfg);
    if (!cfg.debug_dir.empty()) {
        std::ofstream sel(detail::debug_path(cfg.debug_dir, "selection.txt"));
        sel << "# d_min_used=" << result.selection.d_min_used
            << " short=" << (result.selection.short_of_target ? 1 : 0) << '\n';
        for (long idx : result.selection.chosen)
            for (const TrackEntry& e : result.track.entries)
                if (e.frame_index == idx) {
                    char line[128];
                    std::snprintf(line, sizeof line, "%ld %.3f %.3f\n", idx, e.stats.cx,
                                  e.stats.cy);
                    sel << line;
                }
    }

    std::vector<Frame> frames = collect_selected_frames(*src, result.selection);
    std::vector<BinaryMask> masks;
    for (long idx : result.selection.chosen)
        for (const TrackEntry& e : result.track.entries)
            if (e.frame_index == idx) masks.push_back(e.mask);

    const Frame bg_full =
        upscale_nearest(result.background, cfg.downscale, src->width(), src->height());
    result.composite = composite(bg_full, result.selection, frames, masks);
    write_image(result.composite, cfg.output);
    return result;
}

}  // namespace strobo
