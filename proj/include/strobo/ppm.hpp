#pragma once

#include <fstream>
#include <istream>
#include <ostream>
#include <string>

#include "strobo/image.hpp"

namespace strobo {

namespace detail {

// PPM header fields are separated by whitespace; '#' starts a comment that
// runs to end of line.
inline int ppm_next_int(std::istream& in) {
    int c = in.get();
    while (c == ' ' || c == '\t' || c == '\r' || c == '\n' || c == '#') {
        if (c == '#') {
            while (c != EOF && c != '\n') c = in.get();
        }
        c = in.get();
    }
    if (c == EOF) throw IoFailure("unexpected EOF in PPM header");
    long v = 0;
    bool any = false;
    while (c >= '0' && c <= '9') {
        v = v * 10 + (c - '0');
        if (v > 1 << 26) throw IoFailure("PPM header value out of range");
        any = true;
        c = in.get();
    }
    if (!any) throw IoFailure("expected integer in PPM header");
    in.unget();
    return static_cast<int>(v);
}

}  // namespace detail

inline void write_ppm(const Frame& f, std::ostream& out) {
    out << "P6\n" << f.width << ' ' << f.height << "\n255\n";
    out.write(reinterpret_cast<const char*>(f.pixels.data()),
              static_cast<std::streamsize>(f.pixels.size()));
    if (!out) throw IoFailure("failed writing PPM data");
}

inline void write_ppm(const Frame& f, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoFailure("cannot open for writing: " + path);
    write_ppm(f, out);
}

inline Frame read_ppm(std::istream& in) {
    char m0 = 0, m1 = 0;
    in.get(m0);
    in.get(m1);
    if (!in || m0 != 'P' || m1 != '6')
        throw UnsupportedPixelFormat("not a binary PPM (P6) stream");
    const int w = detail::ppm_next_int(in);
    const int h = detail::ppm_next_int(in);
    const int maxval = detail::ppm_next_int(in);
    if (w <= 0 || h <= 0) throw IoFailure("bad PPM dimensions");
    if (maxval != 255) throw UnsupportedPixelFormat("PPM maxval must be 255");
    in.get();  // single whitespace byte before raster
    Frame f(w, h);
    in.read(reinterpret_cast<char*>(f.pixels.data()),
            static_cast<std::streamsize>(f.pixels.size()));
    if (static_cast<std::size_t>(in.gcount()) != f.pixels.size())
        throw IoFailure("PPM pixel data truncated");
    return f;
}

inline Frame read_ppm(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoFailure("cannot open: " + path);
    return read_ppm(in);
}

}  // namespace strobo
