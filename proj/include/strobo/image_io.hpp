#pragma once

#include <string>

#include "strobo/image.hpp"
#include "strobo/png_io.hpp"
#include "strobo/ppm.hpp"

namespace strobo {

enum class ImageFormat { kPpm, kPng };

inline ImageFormat image_format_from_path(const std::string& path) {
    const auto dot = path.rfind('.');
    std::string ext = dot == std::string::npos ? "" : path.substr(dot + 1);
    for (char& c : ext) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    if (ext == "ppm") return ImageFormat::kPpm;
    if (ext == "png") return ImageFormat::kPng;
    throw UnsupportedPixelFormat("cannot infer image format from path: " + path);
}

inline void write_image(const Frame& f, const std::string& path, ImageFormat format) {
    if (format == ImageFormat::kPpm)
        write_ppm(f, path);
    else
        write_png(f, path);
}

inline void write_image(const Frame& f, const std::string& path) {
    write_image(f, path, image_format_from_path(path));
}

inline Frame read_image(const std::string& path, ImageFormat format) {
    return format == ImageFormat::kPpm ? read_ppm(path) : read_png(path);
}

inline Frame read_image(const std::string& path) {
    return read_image(path, image_format_from_path(path));
}

}  // namespace strobo
