#pragma once

#include <string_view>
#include <vector>

#include "tsrkit/bbox.hpp"
#include "tsrkit/image.hpp"
#include "tsrkit/tensor.hpp"

namespace tsrkit {

enum class ColorSpace { rgb, hsv };
enum class ResizeMode { letterbox, stretch };

const char* color_space_name(ColorSpace color_space);
const char* resize_mode_name(ResizeMode mode);

// Both throw malformed_line for names other than rgb/hsv and
// letterbox/stretch.
ColorSpace color_space_from_name(std::string_view name);
ResizeMode resize_mode_from_name(std::string_view name);

// Floating-point HSV image, interleaved (h, s, v) per pixel with
// h in [0, 360) and s, v in [0, 1].
struct HsvImage {
    int width = 0;
    int height = 0;
    std::vector<float> data;

    HsvImage() = default;
    HsvImage(int w, int h)
        : width(w), height(h), data(static_cast<std::size_t>(w) * h * 3, 0.0f) {}

    float& at(int x, int y, int channel) {
        return data[(static_cast<std::size_t>(y) * width + x) * 3 + channel];
    }
    float at(int x, int y, int channel) const {
        return data[(static_cast<std::size_t>(y) * width + x) * 3 + channel];
    }
};

// Hue is 0 whenever saturation is 0 (grays), so the mapping is total.
HsvImage rgb_to_hsv(const Image& image);

// Inverse mapping with rounding to 8 bits; a round trip through both
// directions moves each channel by at most one step.
Image hsv_to_rgb(const HsvImage& image);

// Maps source-image coordinates into resized-image coordinates:
// x' = x * scale_x + offset_x, y' = y * scale_y + offset_y.
struct AffineTransform {
    double scale_x = 1.0;
    double scale_y = 1.0;
    double offset_x = 0.0;
    double offset_y = 0.0;

    BBox apply(const BBox& box) const;
    AffineTransform inverse() const;
};

struct ResizeResult {
    Image image;
    AffineTransform transform; // source coords -> resized coords
};

Image bilinear_resize(const Image& image, int target_width, int target_height);

// Scales by min(tw/w, th/h) keeping the aspect ratio, centers the content,
// and fills the border with gray (128, 128, 128).
ResizeResult letterbox_resize(const Image& image, int target_width, int target_height);

// Plain bilinear stretch to the target size (transform has zero offsets).
ResizeResult stretch_resize(const Image& image, int target_width, int target_height);

ResizeResult resize_for_network(const Image& image, int target_width, int target_height,
                                ResizeMode mode);

// CHW float tensor. RGB: 3 channels scaled by 1/255. HSV: h/360, s, v, so
// every channel lies in [0, 1].
Tensor image_to_tensor(const Image& image, ColorSpace color_space);

} // namespace tsrkit
