#include "tsrkit/preprocess.hpp"

#include <algorithm>
#include <cmath>

#include "tsrkit/errors.hpp"

namespace tsrkit {

const char* color_space_name(ColorSpace color_space) {
    return color_space == ColorSpace::hsv ? "hsv" : "rgb";
}

const char* resize_mode_name(ResizeMode mode) {
    return mode == ResizeMode::stretch ? "stretch" : "letterbox";
}

ColorSpace color_space_from_name(std::string_view name) {
    if (name == "rgb") return ColorSpace::rgb;
    if (name == "hsv") return ColorSpace::hsv;
    throw Error(Errc::malformed_line, "color space '" + std::string(name) + "' is not rgb or hsv");
}

ResizeMode resize_mode_from_name(std::string_view name) {
    if (name == "letterbox") return ResizeMode::letterbox;
    if (name == "stretch") return ResizeMode::stretch;
    throw Error(Errc::malformed_line,
                "resize mode '" + std::string(name) + "' is not letterbox or stretch");
}

HsvImage rgb_to_hsv(const Image& image) {
    HsvImage out(image.width, image.height);
    for (int y = 0; y < image.height; ++y) {
        for (int x = 0; x < image.width; ++x) {
            const float r = image.at(x, y, 0) / 255.0f;
            const float g = image.at(x, y, 1) / 255.0f;
            const float b = image.at(x, y, 2) / 255.0f;
            const float v = std::max({r, g, b});
            const float lo = std::min({r, g, b});
            const float delta = v - lo;

            float h = 0.0f;
            float s = 0.0f;
            if (delta > 0.0f) {
                s = delta / v;
                if (v == r) h = 60.0f * ((g - b) / delta);
                else if (v == g) h = 60.0f * ((b - r) / delta + 2.0f);
                else h = 60.0f * ((r - g) / delta + 4.0f);
                if (h < 0.0f) h += 360.0f;
                if (h >= 360.0f) h -= 360.0f;
            }
            out.at(x, y, 0) = h;
            out.at(x, y, 1) = s;
            out.at(x, y, 2) = v;
        }
    }
    return out;
}

Image hsv_to_rgb(const HsvImage& image) {
    Image out(image.width, image.height);
    for (int y = 0; y < image.height; ++y) {
        for (int x = 0; x < image.width; ++x) {
            const float h = image.at(x, y, 0);
            const float s = image.at(x, y, 1);
            const float v = image.at(x, y, 2);

            const float c = v * s;
            const float hp = h / 60.0f;
            const float fx = c * (1.0f - std::fabs(std::fmod(hp, 2.0f) - 1.0f));
            float r = 0.0f, g = 0.0f, b = 0.0f;
            if (hp < 1.0f) { r = c; g = fx; }
            else if (hp < 2.0f) { r = fx; g = c; }
            else if (hp < 3.0f) { g = c; b = fx; }
            else if (hp < 4.0f) { g = fx; b = c; }
            else if (hp < 5.0f) { r = fx; b = c; }
            else { r = c; b = fx; }

            const float m = v - c;
            out.at(x, y, 0) = static_cast<std::uint8_t>(std::lround(255.0f * std::clamp(r + m, 0.0f, 1.0f)));
            out.at(x, y, 1) = static_cast<std::uint8_t>(std::lround(255.0f * std::clamp(g + m, 0.0f, 1.0f)));
            out.at(x, y, 2) = static_cast<std::uint8_t>(std::lround(255.0f * std::clamp(b + m, 0.0f, 1.0f)));
        }
    }
    return out;
}

BBox AffineTransform::apply(const BBox& box) const {
    return {box.left * scale_x + offset_x, box.top * scale_y + offset_y,
            box.right * scale_x + offset_x, box.bottom * scale_y + offset_y};
}

AffineTransform AffineTransform::inverse() const {
    return {1.0 / scale_x, 1.0 / scale_y, -offset_x / scale_x, -offset_y / scale_y};
}

Image bilinear_resize(const Image& image, int target_width, int target_height) {
    if (target_width <= 0 || target_height <= 0)
        throw Error(Errc::shape_mismatch, "resize target must be positive");

    Image out(target_width, target_height);
    const double sx = static_cast<double>(image.width) / target_width;
    const double sy = static_cast<double>(image.height) / target_height;
    for (int y = 0; y < target_height; ++y) {
        // Pixel centers align: output center (y + 0.5) maps to input
        // (y + 0.5) * sy.
        double fy = (y + 0.5) * sy - 0.5;
        fy = std::clamp(fy, 0.0, static_cast<double>(image.height - 1));
        const int y0 = static_cast<int>(fy);
        const int y1 = std::min(y0 + 1, image.height - 1);
        const double wy = fy - y0;
        for (int x = 0; x < target_width; ++x) {
            double fx = (x + 0.5) * sx - 0.5;
            fx = std::clamp(fx, 0.0, static_cast<double>(image.width - 1));
            const int x0 = static_cast<int>(fx);
            const int x1 = std::min(x0 + 1, image.width - 1);
            const double wx = fx - x0;
            for (int c = 0; c < 3; ++c) {
                const double top = image.at(x0, y0, c) * (1.0 - wx) + image.at(x1, y0, c) * wx;
                const double bot = image.at(x0, y1, c) * (1.0 - wx) + image.at(x1, y1, c) * wx;
                out.at(x, y, c) = static_cast<std::uint8_t>(
                    std::clamp(std::lround(top * (1.0 - wy) + bot * wy), 0l, 255l));
            }
        }
    }
    return out;
}

ResizeResult letterbox_resize(const Image& image, int target_width, int target_height) {
    const double scale = std::min(static_cast<double>(target_width) / image.width,
                                  static_cast<double>(target_height) / image.height);
    const int content_w = std::max(1, static_cast<int>(std::lround(image.width * scale)));
    const int content_h = std::max(1, static_cast<int>(std::lround(image.height * scale)));
    const int off_x = (target_width - content_w) / 2;
    const int off_y = (target_height - content_h) / 2;

    Image canvas(target_width, target_height);
    std::fill(canvas.pixels.begin(), canvas.pixels.end(), std::uint8_t{128});

    Image content = bilinear_resize(image, content_w, content_h);
    for (int y = 0; y < content_h; ++y)
        for (int x = 0; x < content_w; ++x)
            for (int c = 0; c < 3; ++c) canvas.at(off_x + x, off_y + y, c) = content.at(x, y, c);

    return {std::move(canvas),
            {scale, scale, static_cast<double>(off_x), static_cast<double>(off_y)}};
}

ResizeResult stretch_resize(const Image& image, int target_width, int target_height) {
    Image out = bilinear_resize(image, target_width, target_height);
    return {std::move(out),
            {static_cast<double>(target_width) / image.width,
             static_cast<double>(target_height) / image.height, 0.0, 0.0}};
}

ResizeResult resize_for_network(const Image& image, int target_width, int target_height,
                                ResizeMode mode) {
    if (mode == ResizeMode::letterbox) return letterbox_resize(image, target_width, target_height);
    return stretch_resize(image, target_width, target_height);
}

Tensor image_to_tensor(const Image& image, ColorSpace color_space) {
    Tensor t(3, image.height, image.width);
    if (color_space == ColorSpace::rgb) {
        for (int c = 0; c < 3; ++c) {
            float* dst = t.channel(c);
            for (int y = 0; y < image.height; ++y)
                for (int x = 0; x < image.width; ++x)
                    *dst++ = image.at(x, y, c) / 255.0f;
        }
    } else {
        const HsvImage hsv = rgb_to_hsv(image);
        for (int y = 0; y < image.height; ++y) {
            for (int x = 0; x < image.width; ++x) {
                t.at(0, y, x) = hsv.at(x, y, 0) / 360.0f;
                t.at(1, y, x) = hsv.at(x, y, 1);
                t.at(2, y, x) = hsv.at(x, y, 2);
            }
        }
    }
    return t;
}

} // namespace tsrkit
