#include "tsrkit/detector.hpp"

#include <algorithm>

#include "tsrkit/superclass.hpp"

namespace tsrkit {

std::vector<Detection> run_detection(const Image& image, const Model& model,
                                     const PreprocessConfig& preprocess,
                                     const DetectionThresholds& thresholds) {
    const NetworkSpec& spec = model.spec();
    const int target_w = preprocess.target_width > 0 ? preprocess.target_width : spec.input_width;
    const int target_h =
        preprocess.target_height > 0 ? preprocess.target_height : spec.input_height;
    ResizeResult resized = resize_for_network(image, target_w, target_h, preprocess.resize_mode);
    Tensor input = image_to_tensor(resized.image, preprocess.color_space);

    std::vector<Detection> detections = model.forward(input, thresholds.confidence);
    detections = nms(std::move(detections), thresholds.nms_iou, thresholds.class_aware_nms);

    const AffineTransform back = resized.transform.inverse();
    for (Detection& det : detections) {
        det.box = back.apply(det.box);
        det.box.left = std::clamp(det.box.left, 0.0, static_cast<double>(image.width));
        det.box.right = std::clamp(det.box.right, 0.0, static_cast<double>(image.width));
        det.box.top = std::clamp(det.box.top, 0.0, static_cast<double>(image.height));
        det.box.bottom = std::clamp(det.box.bottom, 0.0, static_cast<double>(image.height));
    }

    const bool raw_sign_universe =
        model.has_region() && model.region().num_classes == kRawClassCount;
    if (raw_sign_universe) {
        std::vector<Detection> remapped;
        remapped.reserve(detections.size());
        for (Detection& det : detections) {
            if (auto sc = remap_to_superclass(det.class_id)) {
                det.class_id = static_cast<int>(*sc);
                remapped.push_back(det);
            }
        }
        detections = std::move(remapped);
    }
    return detections;
}

} // namespace tsrkit
