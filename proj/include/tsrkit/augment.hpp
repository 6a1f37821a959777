#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "tsrkit/bbox.hpp"
#include "tsrkit/image.hpp"

namespace tsrkit {

// Luma grayscale (BT.601: 0.299 R + 0.587 G + 0.114 B), replicated to all
// three channels. Boxes are unaffected.
Image to_grayscale(const Image& image);

Image flip_horizontal(const Image& image);
Image flip_vertical(const Image& image);

BBox flip_box_horizontal(const BBox& box, int image_width);
BBox flip_box_vertical(const BBox& box, int image_height);

struct CroppedSample {
    Image image;
    std::vector<BBox> boxes;        // clipped to the crop, shifted to its origin
    std::vector<std::size_t> kept;  // indices into the input boxes
};

// Removes fraction_x of the width and fraction_y of the height (each at
// most 0.25); anchor_x / anchor_y in [0, 1] place the removed margin (0 =
// all removed on the right/bottom, 1 = all on the left/top). Boxes retaining
// less than 20% of their original area are dropped.
CroppedSample crop_exact(const Image& image, std::span<const BBox> boxes,
                         double fraction_x, double fraction_y,
                         double anchor_x, double anchor_y);

inline constexpr double kMaxCropFraction = 0.25;
inline constexpr double kMinBoxAreaRatio = 0.2;

struct AugmentationOp {
    bool enabled = false;
    double probability = 0.5;
};

// Operations are considered in a fixed order: grayscale, crop, vertical
// flip, horizontal flip. For each enabled op one uniform draw decides
// whether it fires; a firing crop draws four more (fraction_x, fraction_y,
// anchor_x, anchor_y). All randomness comes from the seeded generator, so a
// given seed reproduces the same sample everywhere.
struct AugmentationConfig {
    AugmentationOp grayscale;
    AugmentationOp crop;
    AugmentationOp vertical_flip;
    AugmentationOp horizontal_flip;
    std::uint64_t seed = 0;
};

struct AugmentedSample {
    Image image;
    std::vector<BBox> boxes;
    std::vector<std::size_t> kept; // indices into the input boxes
};

AugmentedSample augment(const Image& image, std::span<const BBox> boxes,
                        const AugmentationConfig& config);

} // namespace tsrkit
