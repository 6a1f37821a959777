#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace tsrkit {

// 8-bit RGB image, row-major, channels interleaved.
struct Image {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> pixels;

    Image() = default;
    Image(int w, int h) : width(w), height(h), pixels(static_cast<std::size_t>(w) * h * 3, 0) {}

    std::uint8_t& at(int x, int y, int channel) {
        return pixels[(static_cast<std::size_t>(y) * width + x) * 3 + channel];
    }
    std::uint8_t at(int x, int y, int channel) const {
        return pixels[(static_cast<std::size_t>(y) * width + x) * 3 + channel];
    }

    bool operator==(const Image&) const = default;
};

// Decodes binary (P6) portable pixmaps. Header comments (# to end of line)
// are honored. Throws unsupported_magic for any other magic, Error with
// malformed_line for header syntax problems or non-positive dimensions,
// unsupported_maxval when maxval != 255, truncated when pixel data is short.
// Bytes beyond the pixel payload are ignored.
Image decode_ppm(std::span<const std::uint8_t> bytes);

// Emits "P6\n<w> <h>\n255\n" followed by the raw pixel bytes. A decode of
// the result reproduces the pixel array exactly.
std::vector<std::uint8_t> encode_ppm(const Image& image);

} // namespace tsrkit
