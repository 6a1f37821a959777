#include "tsrkit/augment.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace tsrkit {

Image to_grayscale(const Image& image) {
    Image out(image.width, image.height);
    for (int y = 0; y < image.height; ++y) {
        for (int x = 0; x < image.width; ++x) {
            const double luma = 0.299 * image.at(x, y, 0) + 0.587 * image.at(x, y, 1) +
                                0.114 * image.at(x, y, 2);
            const auto v = static_cast<std::uint8_t>(std::clamp(std::lround(luma), 0l, 255l));
            out.at(x, y, 0) = v;
            out.at(x, y, 1) = v;
            out.at(x, y, 2) = v;
        }
    }
    return out;
}

Image flip_horizontal(const Image& image) {
    Image out(image.width, image.height);
    for (int y = 0; y < image.height; ++y)
        for (int x = 0; x < image.width; ++x)
            for (int c = 0; c < 3; ++c) out.at(x, y, c) = image.at(image.width - 1 - x, y, c);
    return out;
}

Image flip_vertical(const Image& image) {
    Image out(image.width, image.height);
    for (int y = 0; y < image.height; ++y)
        for (int x = 0; x < image.width; ++x)
            for (int c = 0; c < 3; ++c) out.at(x, y, c) = image.at(x, image.height - 1 - y, c);
    return out;
}

BBox flip_box_horizontal(const BBox& box, int image_width) {
    return {image_width - box.right, box.top, image_width - box.left, box.bottom};
}

BBox flip_box_vertical(const BBox& box, int image_height) {
    return {box.left, image_height - box.bottom, box.right, image_height - box.top};
}

CroppedSample crop_exact(const Image& image, std::span<const BBox> boxes, double fraction_x,
                         double fraction_y, double anchor_x, double anchor_y) {
    fraction_x = std::clamp(fraction_x, 0.0, kMaxCropFraction);
    fraction_y = std::clamp(fraction_y, 0.0, kMaxCropFraction);
    anchor_x = std::clamp(anchor_x, 0.0, 1.0);
    anchor_y = std::clamp(anchor_y, 0.0, 1.0);

    const int remove_x = static_cast<int>(std::lround(image.width * fraction_x));
    const int remove_y = static_cast<int>(std::lround(image.height * fraction_y));
    const int x0 = static_cast<int>(std::lround(remove_x * anchor_x));
    const int y0 = static_cast<int>(std::lround(remove_y * anchor_y));
    const int new_w = image.width - remove_x;
    const int new_h = image.height - remove_y;

    CroppedSample out;
    out.image = Image(new_w, new_h);
    for (int y = 0; y < new_h; ++y)
        for (int x = 0; x < new_w; ++x)
            for (int c = 0; c < 3; ++c) out.image.at(x, y, c) = image.at(x0 + x, y0 + y, c);

    for (std::size_t i = 0; i < boxes.size(); ++i) {
        const BBox& b = boxes[i];
        BBox clipped{std::max(b.left, static_cast<double>(x0)),
                     std::max(b.top, static_cast<double>(y0)),
                     std::min(b.right, static_cast<double>(x0 + new_w)),
                     std::min(b.bottom, static_cast<double>(y0 + new_h))};
        if (clipped.left >= clipped.right || clipped.top >= clipped.bottom) continue;
        if (b.area() <= 0.0 || clipped.area() / b.area() < kMinBoxAreaRatio) continue;
        out.boxes.push_back({clipped.left - x0, clipped.top - y0, clipped.right - x0,
                             clipped.bottom - y0});
        out.kept.push_back(i);
    }
    return out;
}

// 53-bit uniform in [0, 1); identical across platforms for a given seed.
static double unit_draw(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

AugmentedSample augment(const Image& image, std::span<const BBox> boxes,
                        const AugmentationConfig& config) {
    std::mt19937_64 rng(config.seed);

    AugmentedSample out;
    out.image = image;
    out.boxes.assign(boxes.begin(), boxes.end());
    out.kept.resize(boxes.size());
    for (std::size_t i = 0; i < boxes.size(); ++i) out.kept[i] = i;

    if (config.grayscale.enabled && unit_draw(rng) < config.grayscale.probability)
        out.image = to_grayscale(out.image);

    if (config.crop.enabled && unit_draw(rng) < config.crop.probability) {
        const double fraction_x = unit_draw(rng) * kMaxCropFraction;
        const double fraction_y = unit_draw(rng) * kMaxCropFraction;
        const double anchor_x = unit_draw(rng);
        const double anchor_y = unit_draw(rng);
        CroppedSample cropped =
            crop_exact(out.image, out.boxes, fraction_x, fraction_y, anchor_x, anchor_y);
        std::vector<std::size_t> kept;
        kept.reserve(cropped.kept.size());
        for (std::size_t idx : cropped.kept) kept.push_back(out.kept[idx]);
        out.image = std::move(cropped.image);
        out.boxes = std::move(cropped.boxes);
        out.kept = std::move(kept);
    }

    if (config.vertical_flip.enabled && unit_draw(rng) < config.vertical_flip.probability) {
        out.image = flip_vertical(out.image);
        for (BBox& b : out.boxes) b = flip_box_vertical(b, out.image.height);
    }

    if (config.horizontal_flip.enabled && unit_draw(rng) < config.horizontal_flip.probability) {
        out.image = flip_horizontal(out.image);
        for (BBox& b : out.boxes) b = flip_box_horizontal(b, out.image.width);
    }

    return out;
}

} // namespace tsrkit
