#pragma once

#include "strobo/color.hpp"
#include "strobo/image.hpp"

namespace strobo {

// Box downscale by an integer factor. Output is ceil(w/f) x ceil(h/f);
// trailing partial blocks average over the pixels actually present.
inline Frame downscale_box(const Frame& in, int factor) {
    if (factor <= 0) throw InvalidArgument("downscale factor must be >= 1");
    if (factor == 1) return in;
    const int ow = (in.width + factor - 1) / factor;
    const int oh = (in.height + factor - 1) / factor;
    Frame out(ow, oh);
    out.frame_index = in.frame_index;
    out.timestamp_s = in.timestamp_s;
    for (int oy = 0; oy < oh; ++oy) {
        const int y0 = oy * factor;
        const int y1 = std::min(y0 + factor, in.height);
        for (int ox = 0; ox < ow; ++ox) {
            const int x0 = ox * factor;
            const int x1 = std::min(x0 + factor, in.width);
            long sum[3] = {0, 0, 0};
            for (int y = y0; y < y1; ++y) {
                const std::uint8_t* p = in.pixels.data() + in.offset(x0, y);
                for (int x = x0; x < x1; ++x) {
                    sum[0] += p[0];
                    sum[1] += p[1];
                    sum[2] += p[2];
                    p += 3;
                }
            }
            const double n = static_cast<double>(y1 - y0) * (x1 - x0);
            out.set(ox, oy,
                    {round_to_u8(sum[0] / n), round_to_u8(sum[1] / n), round_to_u8(sum[2] / n)});
        }
    }
    return out;
}

// Nearest-neighbor upscale to explicit output dimensions: out(x,y) takes
// in(x/factor, y/factor). The input must be the box-downscale of an
// (out_w x out_h) image by `factor`, i.e. ceil(out/factor) == in size.
inline Frame upscale_nearest(const Frame& in, int factor, int out_w, int out_h) {
    if (factor <= 0) throw InvalidArgument("upscale factor must be >= 1");
    if ((out_w + factor - 1) / factor != in.width || (out_h + factor - 1) / factor != in.height)
        throw DimensionMismatch("upscale target does not match source grid");
    if (factor == 1) return in;
    Frame out(out_w, out_h);
    out.frame_index = in.frame_index;
    out.timestamp_s = in.timestamp_s;
    for (int y = 0; y < out_h; ++y)
        for (int x = 0; x < out_w; ++x) out.set(x, y, in.at(x / factor, y / factor));
    return out;
}

inline BinaryMask upscale_nearest(const BinaryMask& in, int factor, int out_w, int out_h) {
    if (factor <= 0) throw InvalidArgument("upscale factor must be >= 1");
    if ((out_w + factor - 1) / factor != in.width || (out_h + factor - 1) / factor != in.height)
        throw DimensionMismatch("upscale target does not match source grid");
    if (factor == 1) return in;
    BinaryMask out(out_w, out_h);
    for (int y = 0; y < out_h; ++y)
        for (int x = 0; x < out_w; ++x)
            if (in.get(x / factor, y / factor)) out.set(x, y, true);
    return out;
}

}  // namespace strobo
