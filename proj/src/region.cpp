#include "tsrkit/region.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "tsrkit/errors.hpp"
#include "tsrkit/ops.hpp"

namespace tsrkit {

std::vector<Detection> region_decode(const Tensor& feature, const RegionLayer& region,
                                     int net_width, int net_height, double conf_threshold) {
    const int num_anchors = static_cast<int>(region.anchors.size());
    const int block = 5 + region.num_classes;
    if (feature.channels != num_anchors * block)
        throw Error(Errc::shape_mismatch,
                    "region feature has " + std::to_string(feature.channels) +
                        " channels, expected " + std::to_string(num_anchors * block));

    const double stride_x = static_cast<double>(net_width) / feature.width;
    const double stride_y = static_cast<double>(net_height) / feature.height;

    std::vector<Detection> detections;
    std::vector<float> probs(region.num_classes);
    for (int cy = 0; cy < feature.height; ++cy) {
        for (int cx = 0; cx < feature.width; ++cx) {
            for (int a = 0; a < num_anchors; ++a) {
                const int base = a * block;
                const double tx = feature.at(base + 0, cy, cx);
                const double ty = feature.at(base + 1, cy, cx);
                const double tw = feature.at(base + 2, cy, cx);
                const double th = feature.at(base + 3, cy, cx);
                const double to = feature.at(base + 4, cy, cx);

                for (int c = 0; c < region.num_classes; ++c)
                    probs[c] = feature.at(base + 5 + c, cy, cx);
                softmax_inplace(probs);
                const auto best = std::max_element(probs.begin(), probs.end());
                const int best_class = static_cast<int>(best - probs.begin());

                const double confidence = sigmoid(to) * *best;
                if (confidence < conf_threshold) continue;

                const double center_x = (cx + sigmoid(tx)) * stride_x;
                const double center_y = (cy + sigmoid(ty)) * stride_y;
                const double w = region.anchors[a].first * std::exp(tw) * stride_x;
                const double h = region.anchors[a].second * std::exp(th) * stride_y;

                Detection det;
                det.box.left = std::clamp(center_x - 0.5 * w, 0.0, double(net_width));
                det.box.right = std::clamp(center_x + 0.5 * w, 0.0, double(net_width));
                det.box.top = std::clamp(center_y - 0.5 * h, 0.0, double(net_height));
                det.box.bottom = std::clamp(center_y + 0.5 * h, 0.0, double(net_height));
                det.class_id = best_class;
                det.confidence = confidence;
                detections.push_back(det);
            }
        }
    }
    return detections;
}

} // namespace tsrkit
