#pragma once

#include <vector>

#include "tsrkit/bbox.hpp"
#include "tsrkit/network.hpp"
#include "tsrkit/tensor.hpp"

namespace tsrkit {

// Decodes a region feature map (channels = anchors * (5 + classes), each
// anchor block ordered tx, ty, tw, th, to, class logits) into detections in
// network-input pixel coordinates:
//   center = (cell + sigmoid(t)) * stride, size = anchor * exp(t) * stride,
//   confidence = sigmoid(to) * max softmax(class logits).
// stride = net_width / feature_width. Boxes are clipped to
// [0, net_width] x [0, net_height]. Detections with confidence >=
// conf_threshold are returned in scan order (row, column, anchor); the class
// is the softmax argmax (smallest index on ties).
std::vector<Detection> region_decode(const Tensor& feature, const RegionLayer& region,
                                     int net_width, int net_height,
                                     double conf_threshold);

} // namespace tsrkit
