#pragma once

#include <png.h>

#include <csetjmp>
#include <cstdio>
#include <string>
#include <vector>

#include "strobo/image.hpp"

namespace strobo {

namespace detail {

struct FileCloser {
    std::FILE* fp = nullptr;
    ~FileCloser() {
        if (fp) std::fclose(fp);
    }
};

}  // namespace detail

// Reads an 8-bit PNG as RGB. Palette and grayscale images are expanded,
// an alpha channel is dropped, 16-bit depth is rejected.
inline Frame read_png(const std::string& path) {
    detail::FileCloser file{std::fopen(path.c_str(), "rb")};
    if (!file.fp) throw IoFailure("cannot open: " + path);

    png_byte sig[8];
    if (std::fread(sig, 1, 8, file.fp) != 8 || png_sig_cmp(sig, 0, 8))
        throw UnsupportedPixelFormat("not a PNG file: " + path);

    png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    png_infop info = png ? png_create_info_struct(png) : nullptr;
    if (!png || !info) {
        png_destroy_read_struct(&png, &info, nullptr);
        throw IoFailure("libpng init failed");
    }

    Frame frame;
    std::vector<png_bytep> rows;
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_read_struct(&png, &info, nullptr);
        throw IoFailure("PNG decode failed: " + path);
    }

    png_init_io(png, file.fp);
    png_set_sig_bytes(png, 8);
    png_read_info(png, info);

    const png_byte bit_depth = png_get_bit_depth(png, info);
    const png_byte color_type = png_get_color_type(png, info);
    if (bit_depth == 16) {
        png_destroy_read_struct(&png, &info, nullptr);
        throw UnsupportedPixelFormat("16-bit PNG is not supported: " + path);
    }
    if (color_type == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(png);
    if (color_type == PNG_COLOR_TYPE_GRAY || color_type == PNG_COLOR_TYPE_GRAY_ALPHA) {
        if (bit_depth < 8) png_set_expand_gray_1_2_4_to_8(png);
        png_set_gray_to_rgb(png);
    }
    if (png_get_valid(png, info, PNG_INFO_tRNS)) png_set_tRNS_to_alpha(png);
    png_set_strip_alpha(png);
    png_set_interlace_handling(png);
    png_read_update_info(png, info);

    const int w = static_cast<int>(png_get_image_width(png, info));
    const int h = static_cast<int>(png_get_image_height(png, info));
    if (png_get_channels(png, info) != 3) {
        png_destroy_read_struct(&png, &info, nullptr);
        throw UnsupportedPixelFormat("PNG did not decode to RGB: " + path);
    }

    frame = Frame(w, h);
    rows.resize(h);
    for (int y = 0; y < h; ++y) rows[y] = frame.pixels.data() + frame.offset(0, y);
    png_read_image(png, rows.data());
    png_read_end(png, nullptr);
    png_destroy_read_struct(&png, &info, nullptr);
    return frame;
}

namespace detail {

inline void write_png_rows(const std::string& path, int width, int height, int color_type,
                           std::vector<png_bytep>& rows) {
    FileCloser file{std::fopen(path.c_str(), "wb")};
    if (!file.fp) throw IoFailure("cannot open for writing: " + path);

    png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    png_infop info = png ? png_create_info_struct(png) : nullptr;
    if (!png || !info) {
        png_destroy_write_struct(&png, &info);
        throw IoFailure("libpng init failed");
    }
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_write_struct(&png, &info);
        throw IoFailure("PNG encode failed: " + path);
    }
    png_init_io(png, file.fp);
    png_set_IHDR(png, info, static_cast<png_uint_32>(width), static_cast<png_uint_32>(height), 8,
                 color_type, PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT,
                 PNG_FILTER_TYPE_DEFAULT);
    png_write_info(png, info);
    png_write_image(png, rows.data());
    png_write_end(png, nullptr);
    png_destroy_write_struct(&png, &info);
}

}  // namespace detail

// 8-bit truecolor, non-interlaced. Lossless: write-then-read restores the
// pixel buffer bit-exactly.
inline void write_png(const Frame& f, const std::string& path) {
    std::vector<png_bytep> rows(f.height);
    for (int y = 0; y < f.height; ++y)
        rows[y] = const_cast<png_bytep>(f.pixels.data() + f.offset(0, y));
    detail::write_png_rows(path, f.width, f.height, PNG_COLOR_TYPE_RGB, rows);
}

inline void write_gray_png(const GrayImage& g, const std::string& path) {
    std::vector<png_bytep> rows(g.height);
    for (int y = 0; y < g.height; ++y)
        rows[y] =
            const_cast<png_bytep>(g.values.data() + static_cast<std::size_t>(y) * g.width);
    detail::write_png_rows(path, g.width, g.height, PNG_COLOR_TYPE_GRAY, rows);
}

// Debug rendering of a mask: 0 background, 255 foreground.
inline void write_mask_png(const BinaryMask& m, const std::string& path) {
    GrayImage g(m.width, m.height);
    for (int y = 0; y < m.height; ++y)
        for (int x = 0; x < m.width; ++x) g.set(x, y, m.get(x, y) ? 255 : 0);
    write_gray_png(g, path);
}

}  // namespace strobo
