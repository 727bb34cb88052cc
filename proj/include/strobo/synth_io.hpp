#pragma once

#include <fstream>
#include <string>

#include "strobo/frame_source.hpp"
#include "strobo/image_io.hpp"
#include "strobo/synth.hpp"
#include "strobo/y4m.hpp"

namespace strobo {

// Renders the scene into a Y4M file (4:2:0, so colors pass through the
// chroma subsample and are not bit-exact against render_frame).
inline void write_scene_y4m(const SceneSpec& spec, const std::string& path, int fps_num = 25,
                            int fps_den = 1) {
    spec.validate();
    if (spec.width % 2 != 0 || spec.height % 2 != 0)
        throw InvalidArgument("Y4M output needs even scene dimensions");
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoFailure("cannot open for writing: " + path);
    VideoHeader h;
    h.width = spec.width;
    h.height = spec.height;
    h.fps_num = fps_num;
    h.fps_den = fps_den;
    h.interlace_tag = "Ip";
    write_y4m_header(out, h);
    for (int k = 0; k < spec.n_frames; ++k)
        write_y4m_planes(out, yuv420_from_frame(render_frame(spec, k)));
}

// Renders the scene as an image sequence; the pattern picks the format by
// extension (PPM keeps the pixels bit-exact, PNG too).
inline void write_scene_images(const SceneSpec& spec, const std::string& pattern) {
    spec.validate();
    const auto p = detail::SequencePattern::parse(pattern);
    for (int k = 0; k < spec.n_frames; ++k) write_image(render_frame(spec, k), p.format(k));
}

// Ground-truth masks as 0/255 grayscale PNGs.
inline void write_scene_masks(const SceneSpec& spec, const std::string& pattern) {
    spec.validate();
    const auto p = detail::SequencePattern::parse(pattern);
    for (int k = 0; k < spec.n_frames; ++k) write_mask_png(ground_truth_mask(spec, k), p.format(k));
}

}  // namespace strobo
