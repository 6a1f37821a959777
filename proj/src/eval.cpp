#include "tsrkit/eval.hpp"

#include <algorithm>
#include <cstdio>
#include <map>
#include <numeric>
#include <set>

#include <json.hpp>

#include "tsrkit/errors.hpp"
#include "tsrkit/superclass.hpp"

namespace tsrkit {

MatchResult match_detections(const std::vector<Detection>& detections,
                             const std::vector<BBox>& ground_truth, double iou_threshold) {
    std::vector<std::size_t> order(detections.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        const Detection& da = detections[a];
        const Detection& db = detections[b];
        if (da.confidence != db.confidence) return da.confidence > db.confidence;
        if (da.box.left != db.box.left) return da.box.left < db.box.left;
        return da.box.top < db.box.top;
    });

    MatchResult result;
    result.is_tp.assign(detections.size(), false);
    std::vector<bool> gt_taken(ground_truth.size(), false);
    for (std::size_t idx : order) {
        double best_iou = 0.0;
        int best_gt = -1;
        for (std::size_t g = 0; g < ground_truth.size(); ++g) {
            if (gt_taken[g]) continue;
            const double overlap = iou(detections[idx].box, ground_truth[g]);
            if (overlap > best_iou) {
                best_iou = overlap;
                best_gt = static_cast<int>(g);
            }
        }
        if (best_gt >= 0 && best_iou >= iou_threshold) {
            gt_taken[best_gt] = true;
            result.is_tp[idx] = true;
            ++result.matched_gt;
        }
    }
    return result;
}

double average_precision(std::vector<RankedDetection> ranked, long gt_count) {
    if (gt_count <= 0)
        throw Error(Errc::no_ground_truth, "average precision needs at least one ground-truth box");
    if (ranked.empty()) return 0.0;

    std::stable_sort(ranked.begin(), ranked.end(),
                     [](const RankedDetection& a, const RankedDetection& b) {
                         return a.confidence > b.confidence;
                     });

    const std::size_t n = ranked.size();
    std::vector<double> precision(n), recall(n);
    long tp = 0;
    for (std::size_t i = 0; i < n; ++i) {
        if (ranked[i].is_tp) ++tp;
        precision[i] = static_cast<double>(tp) / static_cast<double>(i + 1);
        recall[i] = static_cast<double>(tp) / static_cast<double>(gt_count);
    }

    // All-points interpolation: precision becomes its running maximum from
    // the right, then the envelope is integrated over recall.
    for (std::size_t i = n - 1; i-- > 0;) precision[i] = std::max(precision[i], precision[i + 1]);

    double ap = 0.0;
    double prev_recall = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        ap += (recall[i] - prev_recall) * precision[i];
        prev_recall = recall[i];
    }
    return ap;
}

EvalReport evaluate(const std::vector<ImageDetection>& detections,
                    const std::vector<GroundTruthBox>& ground_truth, double iou_threshold,
                    double conf_threshold) {
    if (ground_truth.empty())
        throw Error(Errc::no_ground_truth, "ground truth is empty");

    std::set<std::string> known_images;
    for (const GroundTruthBox& gt : ground_truth) known_images.insert(gt.image);
    for (const ImageDetection& det : detections)
        if (!known_images.contains(det.image))
            throw Error(Errc::image_set_mismatch,
                        "detection references image '" + det.image +
                            "' absent from the ground truth");

    struct Scored {
        double confidence;
        double left, top;
        std::string image;
        bool is_tp;
    };

    EvalReport report;
    report.conf_for_accuracy = conf_threshold;

    for (int cls = 0; cls < kSuperClassCount; ++cls) {
        // Bucket this class's boxes per image.
        std::map<std::string, std::vector<Detection>> dets_by_image;
        for (const ImageDetection& det : detections)
            if (det.detection.class_id == cls) dets_by_image[det.image].push_back(det.detection);
        std::map<std::string, std::vector<BBox>> gt_by_image;
        long gt_count = 0;
        for (const GroundTruthBox& gt : ground_truth) {
            if (gt.class_id != cls) continue;
            gt_by_image[gt.image].push_back(gt.box);
            ++gt_count;
        }
        if (gt_count == 0) continue;

        // Matching is per image; the ranking for AP is global.
        std::vector<Scored> scored;
        long tp_above_conf = 0;
        for (const auto& [image, dets] : dets_by_image) {
            auto git = gt_by_image.find(image);
            static const std::vector<BBox> no_boxes;
            const std::vector<BBox>& gts = git == gt_by_image.end() ? no_boxes : git->second;
            const MatchResult match = match_detections(dets, gts, iou_threshold);
            for (std::size_t i = 0; i < dets.size(); ++i) {
                scored.push_back({dets[i].confidence, dets[i].box.left, dets[i].box.top, image,
                                  match.is_tp[i]});
                if (match.is_tp[i] && dets[i].confidence >= conf_threshold) ++tp_above_conf;
            }
        }
        std::sort(scored.begin(), scored.end(), [](const Scored& a, const Scored& b) {
            if (a.confidence != b.confidence) return a.confidence > b.confidence;
            if (a.image != b.image) return a.image < b.image;
            if (a.left != b.left) return a.left < b.left;
            return a.top < b.top;
        });

        std::vector<RankedDetection> ranked;
        ranked.reserve(scored.size());
        for (const Scored& s : scored) ranked.push_back({s.confidence, s.is_tp});

        ClassReport cr;
        cr.name = superclass_name(static_cast<SuperClass>(cls));
        cr.gt_count = gt_count;
        cr.det_count = static_cast<long>(scored.size());
        long tp = 0;
        for (std::size_t i = 0; i < ranked.size(); ++i) {
            if (ranked[i].is_tp) ++tp;
            cr.pr_curve.emplace_back(static_cast<double>(tp) / static_cast<double>(gt_count),
                                     static_cast<double>(tp) / static_cast<double>(i + 1));
        }
        cr.ap = average_precision(std::move(ranked), gt_count);
        cr.recall_at_conf = static_cast<double>(tp_above_conf) / static_cast<double>(gt_count);
        report.classes.push_back(std::move(cr));
    }

    double sum = 0.0;
    for (const ClassReport& cr : report.classes) sum += cr.ap;
    report.map = report.classes.empty() ? 0.0 : sum / static_cast<double>(report.classes.size());
    return report;
}

std::string EvalReport::to_json() const {
    nlohmann::json j;
    j["classes"] = nlohmann::json::array();
    for (const ClassReport& cr : classes) {
        nlohmann::json c;
        c["name"] = cr.name;
        c["ap"] = cr.ap;
        c["recall_at_conf"] = cr.recall_at_conf;
        c["gt_count"] = cr.gt_count;
        j["classes"].push_back(c);
    }
    j["map"] = map;
    j["conf_for_accuracy"] = conf_for_accuracy;
    return j.dump();
}

std::string EvalReport::to_csv() const {
    std::string out = "name,ap,recall_at_conf,gt_count\n";
    char buf[160];
    for (const ClassReport& cr : classes) {
        std::snprintf(buf, sizeof(buf), "%s,%.6f,%.6f,%ld\n", cr.name.c_str(), cr.ap,
                      cr.recall_at_conf, cr.gt_count);
        out += buf;
    }
    std::snprintf(buf, sizeof(buf), "mAP,%.6f,,\n", map);
    out += buf;
    return out;
}

} // namespace tsrkit
