#pragma once

#include <array>
#include <cmath>
#include <cstdint>

#include "strobo/image.hpp"

namespace strobo {

// One rounding rule everywhere a pixel value is produced: round half away
// from zero, then clamp to [0,255]. std::lround already rounds half away
// from zero.
inline std::uint8_t round_to_u8(double v) {
    long r = std::lround(v);
    if (r < 0) r = 0;
    if (r > 255) r = 255;
    return static_cast<std::uint8_t>(r);
}

namespace bt601 {
// Limited-range BT.601: Y in [16,235], Cb/Cr in [16,240] nominal.
// Kr + Kg + Kb = 1.
inline constexpr double kKr = 0.299;
inline constexpr double kKb = 0.114;
inline constexpr double kKg = 1.0 - kKr - kKb;
inline constexpr double kLumaScale = 219.0;    // (235 - 16)
inline constexpr double kChromaScale = 224.0;  // (240 - 16)
}  // namespace bt601

// Limited-range BT.601 to RGB. Out-of-nominal inputs are not special-cased;
// the result is clamped after conversion.
inline Rgb yuv_to_rgb(std::uint8_t y, std::uint8_t u, std::uint8_t v) {
    using namespace bt601;
    const double yf = (y - 16.0) / kLumaScale;
    const double db = (u - 128.0) / kChromaScale;  // (B' - Y') / (2 (1 - Kb))
    const double dr = (v - 128.0) / kChromaScale;  // (R' - Y') / (2 (1 - Kr))
    const double r = yf + 2.0 * (1.0 - kKr) * dr;
    const double b = yf + 2.0 * (1.0 - kKb) * db;
    const double g = (yf - kKr * r - kKb * b) / kKg;
    return {round_to_u8(255.0 * r), round_to_u8(255.0 * g), round_to_u8(255.0 * b)};
}

// Exact inverse matrix of yuv_to_rgb (up to 8-bit rounding).
inline std::array<std::uint8_t, 3> rgb_to_yuv(std::uint8_t r, std::uint8_t g, std::uint8_t b) {
    using namespace bt601;
    const double rf = r / 255.0;
    const double gf = g / 255.0;
    const double bf = b / 255.0;
    const double yf = kKr * rf + kKg * gf + kKb * bf;
    const double y = 16.0 + kLumaScale * yf;
    const double cb = 128.0 + kChromaScale * (bf - yf) / (2.0 * (1.0 - kKb));
    const double cr = 128.0 + kChromaScale * (rf - yf) / (2.0 * (1.0 - kKr));
    return {round_to_u8(y), round_to_u8(cb), round_to_u8(cr)};
}

}  // namespace strobo
