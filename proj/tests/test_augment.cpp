#include <doctest.h>

#include <vector>

#include "support/fixtures.hpp"
#include "tsrkit/augment.hpp"

using namespace tsrkit;

TEST_CASE("grayscale uses the luma weights") {
    const Image red = fixtures::solid_image(2, 2, 255, 0, 0);
    const Image gray = to_grayscale(red);
    // 0.299 * 255 = 76.245 -> 76 in every channel.
    CHECK(gray.at(0, 0, 0) == 76);
    CHECK(gray.at(0, 0, 1) == 76);
    CHECK(gray.at(0, 0, 2) == 76);

    const Image green = fixtures::solid_image(1, 1, 0, 255, 0);
    CHECK(to_grayscale(green).at(0, 0, 0) == 150); // 0.587 * 255 = 149.685

    // Already-gray images are fixed points.
    const Image neutral = fixtures::solid_image(3, 3, 90, 90, 90);
    CHECK(to_grayscale(neutral) == neutral);
}

TEST_CASE("flips are involutions on pixels and boxes") {
    const Image img = fixtures::noise_image(10, 7, 3);
    CHECK(flip_horizontal(flip_horizontal(img)) == img);
    CHECK(flip_vertical(flip_vertical(img)) == img);

    // Pixel relocation: (0, 0) moves to (width-1, 0).
    const Image flipped = flip_horizontal(img);
    CHECK(flipped.at(9, 0, 0) == img.at(0, 0, 0));
    CHECK(flipped.at(0, 3, 1) == img.at(9, 3, 1));

    const BBox box{10, 20, 60, 70};
    const BBox h = flip_box_horizontal(box, 100);
    CHECK(h == BBox{40, 20, 90, 70});
    CHECK(flip_box_horizontal(h, 100) == box);

    const BBox v = flip_box_vertical(box, 100);
    CHECK(v == BBox{10, 30, 60, 80});
    CHECK(flip_box_vertical(v, 100) == box);
}

TEST_CASE("exact crop arithmetic") {
    const Image img = fixtures::noise_image(100, 100, 8);
    const std::vector<BBox> boxes = {{50, 10, 90, 20}, {5, 5, 20, 15}};

    // Remove 25% of the width, all of it on the right (anchor 0).
    const CroppedSample out = crop_exact(img, boxes, 0.25, 0.0, 0.0, 0.0);
    CHECK(out.image.width == 75);
    CHECK(out.image.height == 100);

    // Pixels shift by the crop origin (here none: left edge retained).
    CHECK(out.image.at(0, 0, 0) == img.at(0, 0, 0));
    CHECK(out.image.at(74, 99, 2) == img.at(74, 99, 2));

    // First box clips from 40x10 to 25x10: area ratio 0.625, kept.
    REQUIRE(out.boxes.size() == 2);
    REQUIRE(out.kept.size() == 2);
    CHECK(out.boxes[0] == BBox{50, 10, 75, 20});
    CHECK(out.kept[0] == 0);
    CHECK(out.boxes[1] == BBox{5, 5, 20, 15});
    CHECK(out.kept[1] == 1);
}

TEST_CASE("crop drops boxes that lose more than 80% of their area") {
    const Image img = fixtures::noise_image(100, 100, 9);
    // 20x10 box; after cropping to width 75 it retains 3x10 = 15%.
    const std::vector<BBox> boxes = {{72, 10, 92, 20}, {0, 0, 10, 10}};
    const CroppedSample out = crop_exact(img, boxes, 0.25, 0.0, 0.0, 0.0);
    REQUIRE(out.kept.size() == 1);
    CHECK(out.kept[0] == 1);
    CHECK(out.boxes[0] == BBox{0, 0, 10, 10});

    // Retaining exactly 20% sits on the keep side of the boundary: a 25-wide
    // box clipped to 5 wide keeps ratio 0.2; one more pixel lost drops it.
    const std::vector<BBox> boundary = {{70, 0, 95, 10}, {71, 0, 96, 10}};
    const CroppedSample edge = crop_exact(img, boundary, 0.25, 0.0, 0.0, 0.0);
    REQUIRE(edge.kept.size() == 1);
    CHECK(edge.kept[0] == 0);
    CHECK(edge.boxes[0] == BBox{70, 0, 75, 10});
}

TEST_CASE("crop anchor places the removed margin") {
    const Image img = fixtures::noise_image(80, 60, 10);
    // anchor_x = 1: everything removed from the left.
    const CroppedSample out = crop_exact(img, {}, 0.25, 0.25, 1.0, 1.0);
    CHECK(out.image.width == 60);
    CHECK(out.image.height == 45);
    CHECK(out.image.at(0, 0, 0) == img.at(20, 15, 0));
    CHECK(out.image.at(59, 44, 2) == img.at(79, 59, 2));
}

TEST_CASE("crop fractions cap at a quarter per axis") {
    const Image img = fixtures::noise_image(100, 100, 11);
    const CroppedSample out = crop_exact(img, {}, 0.9, 0.0, 0.0, 0.0);
    CHECK(out.image.width == 75); // clamped to kMaxCropFraction
    CHECK(out.image.height == 100);
}

TEST_CASE("augmentation is a pure function of the seed") {
    const Image img = fixtures::noise_image(64, 48, 12);
    const std::vector<BBox> boxes = {{10, 10, 30, 30}, {40, 20, 60, 40}};

    AugmentationConfig config;
    config.grayscale = {true, 0.5};
    config.crop = {true, 0.5};
    config.vertical_flip = {true, 0.5};
    config.horizontal_flip = {true, 0.5};
    config.seed = 99;

    const AugmentedSample a = augment(img, boxes, config);
    const AugmentedSample b = augment(img, boxes, config);
    CHECK(a.image == b.image);
    CHECK(a.boxes == b.boxes);
    CHECK(a.kept == b.kept);

    // Some seed in a small range produces a different sample; all ops at
    // probability 0.5 cannot be invariant across every draw.
    bool any_difference = false;
    for (std::uint64_t seed = 0; seed < 16 && !any_difference; ++seed) {
        AugmentationConfig other = config;
        other.seed = seed;
        const AugmentedSample c = augment(img, boxes, other);
        any_difference = !(c.image == a.image) || c.boxes != a.boxes;
    }
    CHECK(any_difference);
}

TEST_CASE("probability zero never fires and probability one always fires") {
    const Image img = fixtures::noise_image(32, 32, 13);
    const std::vector<BBox> boxes = {{4, 4, 20, 20}};

    AugmentationConfig never;
    never.grayscale = {true, 0.0};
    never.horizontal_flip = {true, 0.0};
    for (std::uint64_t seed = 0; seed < 8; ++seed) {
        never.seed = seed;
        const AugmentedSample out = augment(img, boxes, never);
        CHECK(out.image == img);
        CHECK(out.boxes == boxes);
    }

    AugmentationConfig always;
    always.grayscale = {true, 1.0};
    for (std::uint64_t seed = 0; seed < 8; ++seed) {
        always.seed = seed;
        const AugmentedSample out = augment(img, boxes, always);
        CHECK(out.image == to_grayscale(img));
        CHECK(out.boxes == boxes);
    }
}

TEST_CASE("disabled ops do not consume randomness") {
    const Image img = fixtures::noise_image(40, 40, 14);
    const std::vector<BBox> boxes = {{8, 8, 24, 24}};

    // Only the horizontal flip is enabled; adding disabled ops ahead of it
    // must not change which way the draw falls.
    AugmentationConfig lone;
    lone.horizontal_flip = {true, 0.5};
    lone.seed = 5;

    AugmentationConfig padded = lone;
    padded.grayscale = {false, 0.5};
    padded.crop = {false, 0.99};
    padded.vertical_flip = {false, 0.01};

    const AugmentedSample a = augment(img, boxes, lone);
    const AugmentedSample b = augment(img, boxes, padded);
    CHECK(a.image == b.image);
    CHECK(a.boxes == b.boxes);
}

TEST_CASE("a firing flip transforms image and boxes together") {
    const Image img = fixtures::noise_image(50, 30, 15);
    const std::vector<BBox> boxes = {{5, 5, 15, 25}};
    AugmentationConfig config;
    config.horizontal_flip = {true, 1.0};
    config.seed = 1;
    const AugmentedSample out = augment(img, boxes, config);
    CHECK(out.image == flip_horizontal(img));
    REQUIRE(out.boxes.size() == 1);
    CHECK(out.boxes[0] == flip_box_horizontal(boxes[0], 50));
    CHECK(out.kept == std::vector<std::size_t>{0});
}

TEST_CASE("cropping never grows a box") {
    std::mt19937_64 rng(16);
    const Image img = fixtures::noise_image(60, 60, 17);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<BBox> boxes;
        for (int i = 0; i < 4; ++i) boxes.push_back(fixtures::random_int_box(rng, 60));

        AugmentationConfig config;
        config.crop = {true, 1.0};
        config.seed = rng();
        const AugmentedSample out = augment(img, boxes, config);
        REQUIRE(out.boxes.size() == out.kept.size());
        for (std::size_t i = 0; i < out.boxes.size(); ++i) {
            CHECK(out.boxes[i].area() <= boxes[out.kept[i]].area());
            CHECK(out.boxes[i].left >= 0);
            CHECK(out.boxes[i].top >= 0);
            CHECK(out.boxes[i].right <= out.image.width);
            CHECK(out.boxes[i].bottom <= out.image.height);
        }
    }
}
