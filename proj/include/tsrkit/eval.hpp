#pragma once

#include <string>
#include <utility>
#include <vector>

#include "tsrkit/bbox.hpp"
#include "tsrkit/jsonl.hpp"

namespace tsrkit {

struct GroundTruthBox {
    std::string image;
    BBox box;
    int class_id = 0;
};

// Outcome of matching one class's detections on one image: per detection a
// true-positive flag (in the order the detections were given).
struct MatchResult {
    std::vector<bool> is_tp;
    int matched_gt = 0;
};

// Greedy matching protocol: detections in descending confidence (ties by
// smaller left, then top) each claim the unmatched ground-truth box of
// highest IoU when that IoU >= iou_threshold; everything else is a false
// positive. is_tp follows the input detection order.
MatchResult match_detections(const std::vector<Detection>& detections,
                             const std::vector<BBox>& ground_truth,
                             double iou_threshold);

// One globally ranked detection of a single class.
struct RankedDetection {
    double confidence = 0.0;
    bool is_tp = false;
};

// All-points interpolated average precision: precision is replaced by its
// running maximum from the right, and the envelope is integrated over
// recall. Throws no_ground_truth when gt_count is 0.
double average_precision(std::vector<RankedDetection> ranked, long gt_count);

struct ClassReport {
    std::string name;
    double ap = 0.0;
    double recall_at_conf = 0.0;
    long gt_count = 0;
    long det_count = 0;
    // (recall, precision) after each ranked detection; raw curve, not the
    // interpolated envelope. Kept out of the JSON/CSV serializations.
    std::vector<std::pair<double, double>> pr_curve;
};

struct EvalReport {
    std::vector<ClassReport> classes; // only classes with ground truth
    double map = 0.0;                 // mean of the reported per-class APs
    double conf_for_accuracy = 0.0;   // threshold used for recall_at_conf

    std::string to_json() const;
    std::string to_csv() const;
};

// Dataset-level evaluation over superclass ids 0..3. Matching runs per
// image and class; ranking for AP is global. recall_at_conf counts matched
// detections with confidence >= conf_threshold against the class's ground
// truth. Detections naming an image absent from the ground-truth image set
// throw image_set_mismatch; an empty ground truth throws no_ground_truth.
EvalReport evaluate(const std::vector<ImageDetection>& detections,
                    const std::vector<GroundTruthBox>& ground_truth,
                    double iou_threshold = 0.5, double conf_threshold = 0.5);

} // namespace tsrkit
