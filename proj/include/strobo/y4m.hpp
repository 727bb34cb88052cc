#pragma once

#include <istream>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "strobo/color.hpp"
#include "strobo/image.hpp"

namespace strobo {

// YUV4MPEG2 header. Only the 4:2:0 family is supported; the three siting
// variants (jpeg/mpeg2/paldv) are carried but treated identically, since
// this pipeline never resamples chroma with subpixel accuracy.
struct VideoHeader {
    int width = 0;
    int height = 0;
    int fps_num = 25;
    int fps_den = 1;
    std::string chroma_tag = "420jpeg";  // without the leading 'C'
    std::string interlace_tag;           // full token, e.g. "Ip"; carried, not interpreted

    double fps() const { return static_cast<double>(fps_num) / fps_den; }
    double timestamp(long frame_index) const {
        return static_cast<double>(frame_index) * fps_den / fps_num;
    }
};

// Planar 4:2:0 frame: full-res luma, quarter-res chroma.
struct Yuv420Frame {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> y;   // width * height
    std::vector<std::uint8_t> cb;  // (width/2) * (height/2)
    std::vector<std::uint8_t> cr;

    Yuv420Frame() = default;
    Yuv420Frame(int w, int h)
        : width(w),
          height(h),
          y(static_cast<std::size_t>(w) * h),
          cb(static_cast<std::size_t>(w / 2) * (h / 2)),
          cr(static_cast<std::size_t>(w / 2) * (h / 2)) {}
};

namespace detail {

inline std::string read_line_bounded(std::istream& in, std::size_t max_len) {
    std::string line;
    for (std::size_t i = 0; i < max_len; ++i) {
        const int c = in.get();
        if (c == EOF) throw MalformedHeader("unexpected end of stream in header line");
        if (c == '\n') return line;
        line.push_back(static_cast<char>(c));
    }
    throw MalformedHeader("header line exceeds " + std::to_string(max_len) + " bytes");
}

inline int parse_positive_int(const std::string& s, const char* what) {
    if (s.empty()) throw MalformedHeader(std::string("empty ") + what + " token");
    long v = 0;
    for (char c : s) {
        if (c < '0' || c > '9') throw MalformedHeader(std::string("bad ") + what + " token: " + s);
        v = v * 10 + (c - '0');
        if (v > 1 << 26) throw MalformedHeader(std::string(what) + " out of range: " + s);
    }
    if (v <= 0) throw MalformedHeader(std::string(what) + " must be positive: " + s);
    return static_cast<int>(v);
}

}  // namespace detail

// Parses the "YUV4MPEG2 ..." header line. Unknown parameter tokens are
// ignored; a missing C token defaults to 420jpeg (the common convention,
// and what phone cameras produce).
inline VideoHeader parse_y4m_header(std::istream& in) {
    const std::string line = detail::read_line_bounded(in, 4096);
    const std::string magic = "YUV4MPEG2";
    if (line.compare(0, magic.size(), magic) != 0) throw MalformedHeader("bad Y4M magic");

    VideoHeader h;
    bool have_w = false, have_h = false;
    std::size_t pos = magic.size();
    while (pos < line.size()) {
        if (line[pos] != ' ') throw MalformedHeader("expected space between header tokens");
        ++pos;
        std::size_t end = line.find(' ', pos);
        if (end == std::string::npos) end = line.size();
        const std::string tok = line.substr(pos, end - pos);
        pos = end;
        if (tok.empty()) continue;
        const std::string val = tok.substr(1);
        switch (tok[0]) {
            case 'W':
                h.width = detail::parse_positive_int(val, "width");
                have_w = true;
                break;
            case 'H':
                h.height = detail::parse_positive_int(val, "height");
                have_h = true;
                break;
            case 'F': {
                const std::size_t colon = val.find(':');
                if (colon == std::string::npos) throw MalformedHeader("bad F token: " + tok);
                h.fps_num = detail::parse_positive_int(val.substr(0, colon), "fps numerator");
                h.fps_den = detail::parse_positive_int(val.substr(colon + 1), "fps denominator");
                break;
            }
            case 'C':
                if (val != "420" && val != "420jpeg" && val != "420mpeg2" && val != "420paldv")
                    throw UnsupportedChroma("unsupported chroma sampling: " + tok);
                h.chroma_tag = val;
                break;
            case 'I':
                h.interlace_tag = tok;
                break;
            default:
                break;  // A (aspect), X (extensions), anything else: ignored
        }
    }
    if (!have_w || !have_h) throw MalformedHeader("header missing W or H");
    if (h.width % 2 != 0 || h.height % 2 != 0)
        throw MalformedHeader("4:2:0 requires even frame dimensions");
    return h;
}

// Reads one frame's planes. Returns nullopt on clean end-of-stream (EOF
// exactly at a frame boundary).
inline std::optional<Yuv420Frame> read_y4m_planes(std::istream& in, const VideoHeader& h) {
    const int first = in.get();
    if (first == EOF) return std::nullopt;

    // FRAME marker line; parameters after "FRAME" are ignored up to newline.
    std::string marker(1, static_cast<char>(first));
    while (marker.size() < 5) {
        const int c = in.get();
        if (c == EOF) throw MissingFrameMarker("stream ends inside FRAME marker");
        marker.push_back(static_cast<char>(c));
    }
    if (marker != "FRAME") throw MissingFrameMarker("expected FRAME marker, got: " + marker);
    for (;;) {
        const int c = in.get();
        if (c == EOF) throw MissingFrameMarker("stream ends inside FRAME parameter line");
        if (c == '\n') break;
    }

    Yuv420Frame f(h.width, h.height);
    auto read_plane = [&](std::vector<std::uint8_t>& plane, const char* name) {
        in.read(reinterpret_cast<char*>(plane.data()), static_cast<std::streamsize>(plane.size()));
        if (static_cast<std::size_t>(in.gcount()) != plane.size())
            throw TruncatedFrame(std::string("stream ends inside ") + name + " plane");
    };
    read_plane(f.y, "Y");
    read_plane(f.cb, "Cb");
    read_plane(f.cr, "Cr");
    return f;
}

// 4:2:0 to RGB with nearest-neighbor chroma upsampling: each chroma sample
// covers its 2x2 luma block.
inline Frame frame_from_yuv420(const Yuv420Frame& f) {
    Frame out(f.width, f.height);
    const int cw = f.width / 2;
    for (int y = 0; y < f.height; ++y) {
        const std::size_t crow = static_cast<std::size_t>(y / 2) * cw;
        for (int x = 0; x < f.width; ++x) {
            const std::size_t ci = crow + x / 2;
            out.set(x, y,
                    yuv_to_rgb(f.y[static_cast<std::size_t>(y) * f.width + x], f.cb[ci], f.cr[ci]));
        }
    }
    return out;
}

// Reads one frame and converts to RGB.
inline std::optional<Frame> read_y4m_frame(std::istream& in, const VideoHeader& h) {
    auto planes = read_y4m_planes(in, h);
    if (!planes) return std::nullopt;
    return frame_from_yuv420(*planes);
}

// RGB to 4:2:0: per-pixel inverse matrix, then 2x2 chroma averaging.
inline Yuv420Frame yuv420_from_frame(const Frame& in) {
    if (in.width % 2 != 0 || in.height % 2 != 0)
        throw InvalidArgument("4:2:0 conversion requires even frame dimensions");
    Yuv420Frame out(in.width, in.height);
    std::vector<std::uint8_t> cb_full(static_cast<std::size_t>(in.width) * in.height);
    std::vector<std::uint8_t> cr_full(cb_full.size());
    for (int y = 0; y < in.height; ++y) {
        for (int x = 0; x < in.width; ++x) {
            const Rgb c = in.at(x, y);
            const auto yuv = rgb_to_yuv(c[0], c[1], c[2]);
            const std::size_t i = static_cast<std::size_t>(y) * in.width + x;
            out.y[i] = yuv[0];
            cb_full[i] = yuv[1];
            cr_full[i] = yuv[2];
        }
    }
    const int cw = in.width / 2;
    const int ch = in.height / 2;
    for (int cy = 0; cy < ch; ++cy) {
        for (int cx = 0; cx < cw; ++cx) {
            const std::size_t i0 = static_cast<std::size_t>(2 * cy) * in.width + 2 * cx;
            const std::size_t i1 = i0 + in.width;
            const int sum_cb = cb_full[i0] + cb_full[i0 + 1] + cb_full[i1] + cb_full[i1 + 1];
            const int sum_cr = cr_full[i0] + cr_full[i0 + 1] + cr_full[i1] + cr_full[i1 + 1];
            out.cb[static_cast<std::size_t>(cy) * cw + cx] = round_to_u8(sum_cb / 4.0);
            out.cr[static_cast<std::size_t>(cy) * cw + cx] = round_to_u8(sum_cr / 4.0);
        }
    }
    return out;
}

inline void write_y4m_header(std::ostream& out, const VideoHeader& h) {
    out << "YUV4MPEG2 W" << h.width << " H" << h.height << " F" << h.fps_num << ':' << h.fps_den;
    if (!h.interlace_tag.empty()) out << ' ' << h.interlace_tag;
    out << " C" << h.chroma_tag << '\n';
    if (!out) throw IoFailure("failed writing Y4M header");
}

inline void write_y4m_planes(std::ostream& out, const Yuv420Frame& f) {
    out << "FRAME\n";
    out.write(reinterpret_cast<const char*>(f.y.data()), static_cast<std::streamsize>(f.y.size()));
    out.write(reinterpret_cast<const char*>(f.cb.data()),
              static_cast<std::streamsize>(f.cb.size()));
    out.write(reinterpret_cast<const char*>(f.cr.data()),
              static_cast<std::streamsize>(f.cr.size()));
    if (!out) throw IoFailure("failed writing Y4M frame");
}

}  // namespace strobo
