#pragma once

#include <vector>

namespace tsrkit {

// Axis-aligned box, pixel coordinates, left <= right and top <= bottom.
struct BBox {
    double left = 0.0;
    double top = 0.0;
    double right = 0.0;
    double bottom = 0.0;

    double width() const { return right - left; }
    double height() const { return bottom - top; }
    double area() const { return width() * height(); }
    double center_x() const { return 0.5 * (left + right); }
    double center_y() const { return 0.5 * (top + bottom); }
    bool valid() const { return left <= right && top <= bottom; }

    bool operator==(const BBox&) const = default;
};

// Intersection over union in [0, 1]. Degenerate union yields 0.
double iou(const BBox& a, const BBox& b);

enum class AnchorLabel { object, not_object, ignore };

// Training assignment rule for an anchor given its best IoU against ground
// truth: above 0.7 is a positive, below 0.3 a negative, the band between
// contributes no gradient.
AnchorLabel label_anchor(double best_iou);

struct Detection {
    BBox box;
    int class_id = 0;
    double confidence = 0.0;

    bool operator==(const Detection&) const = default;
};

// Greedy non-maximum suppression. Candidates are visited in order of
// descending confidence (ties broken by smaller left, then smaller top, so
// the result is a deterministic function of the input set); a candidate is
// suppressed when its IoU with an already kept box exceeds iou_threshold.
// With class_aware set, only boxes of the same class suppress each other.
// The returned boxes keep the visiting order.
std::vector<Detection> nms(std::vector<Detection> detections,
                           double iou_threshold = 0.7,
                           bool class_aware = true);

} // namespace tsrkit
