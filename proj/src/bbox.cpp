#include "tsrkit/bbox.hpp"

#include <algorithm>
#include <numeric>

namespace tsrkit {

double iou(const BBox& a, const BBox& b) {
    const double iw = std::min(a.right, b.right) - std::max(a.left, b.left);
    const double ih = std::min(a.bottom, b.bottom) - std::max(a.top, b.top);
    if (iw <= 0.0 || ih <= 0.0) return 0.0;
    const double inter = iw * ih;
    const double uni = a.area() + b.area() - inter;
    if (uni <= 0.0) return 0.0;
    return inter / uni;
}

AnchorLabel label_anchor(double best_iou) {
    if (best_iou > 0.7) return AnchorLabel::object;
    if (best_iou < 0.3) return AnchorLabel::not_object;
    return AnchorLabel::ignore;
}

std::vector<Detection> nms(std::vector<Detection> detections, double iou_threshold,
                           bool class_aware) {
    std::vector<std::size_t> order(detections.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        const Detection& da = detections[a];
        const Detection& db = detections[b];
        if (da.confidence != db.confidence) return da.confidence > db.confidence;
        if (da.box.left != db.box.left) return da.box.left < db.box.left;
        return da.box.top < db.box.top;
    });

    std::vector<Detection> kept;
    kept.reserve(detections.size());
    for (std::size_t idx : order) {
        const Detection& cand = detections[idx];
        bool suppressed = false;
        for (const Detection& k : kept) {
            if (class_aware && k.class_id != cand.class_id) continue;
            if (iou(k.box, cand.box) > iou_threshold) {
                suppressed = true;
                break;
            }
        }
        if (!suppressed) kept.push_back(cand);
    }
    return kept;
}

} // namespace tsrkit
