#pragma once

#include <vector>

#include "tsrkit/bbox.hpp"
#include "tsrkit/image.hpp"
#include "tsrkit/model.hpp"
#include "tsrkit/preprocess.hpp"

namespace tsrkit {

struct PreprocessConfig {
    int target_width = 0;  // 0 = the model's input width
    int target_height = 0; // 0 = the model's input height
    ColorSpace color_space = ColorSpace::rgb;
    ResizeMode resize_mode = ResizeMode::letterbox;
};

struct DetectionThresholds {
    double confidence = 0.5;
    double nms_iou = 0.7;
    bool class_aware_nms = true;
};

// Full single-image pipeline: resize to the network input size, normalize,
// forward + decode, apply non-maximum suppression in network coordinates,
// map boxes back through the inverse resize transform into source-image
// pixel coordinates (clipped to the source extent). When the model's class
// universe is the 43 raw sign classes, labels are remapped to superclasses
// and detections without one are dropped; other universes pass through.
std::vector<Detection> run_detection(const Image& image, const Model& model,
                                     const PreprocessConfig& preprocess,
                                     const DetectionThresholds& thresholds);

} // namespace tsrkit
