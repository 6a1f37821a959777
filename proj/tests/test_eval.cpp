#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "support/fixtures.hpp"
#include "support/oracles.hpp"
#include "tsrkit/errors.hpp"
#include "tsrkit/eval.hpp"
#include "tsrkit/superclass.hpp"

using namespace tsrkit;

namespace {

ImageDetection image_det(const std::string& image, double left, double top, double right,
                         double bottom, int cls, double conf) {
    return {image, {{left, top, right, bottom}, cls, conf}};
}

GroundTruthBox gt(const std::string& image, double left, double top, double right, double bottom,
                  int cls) {
    return {image, {left, top, right, bottom}, cls};
}

}  // namespace

TEST_CASE("matching claims the best box once") {
    const std::vector<BBox> truth = {{0, 0, 10, 10}};

    SUBCASE("an overlap at the threshold is a true positive") {
        // iou = 0.6 against the single truth box.
        const std::vector<Detection> dets = {{{0, 0, 10, 6}, 0, 0.9}};
        const MatchResult res = match_detections(dets, truth, 0.6);
        CHECK(res.is_tp == std::vector<bool>{true});
        CHECK(res.matched_gt == 1);
        CHECK(match_detections(dets, truth, 0.61).is_tp == std::vector<bool>{false});
    }

    SUBCASE("a duplicate detection of a claimed box is a false positive") {
        const std::vector<Detection> dets = {{{0, 0, 10, 10}, 0, 0.8},
                                             {{1, 1, 11, 11}, 0, 0.9}};
        const MatchResult res = match_detections(dets, truth, 0.5);
        // The higher-confidence detection claims the box first.
        CHECK(res.is_tp == std::vector<bool>{false, true});
        CHECK(res.matched_gt == 1);
    }

    SUBCASE("each detection takes its highest-overlap unclaimed box") {
        const std::vector<BBox> two = {{0, 0, 10, 10}, {8, 0, 18, 10}};
        const std::vector<Detection> dets = {{{7, 0, 17, 10}, 0, 0.9},
                                             {{1, 0, 11, 10}, 0, 0.8}};
        const MatchResult res = match_detections(dets, two, 0.5);
        CHECK(res.is_tp == std::vector<bool>{true, true});
        CHECK(res.matched_gt == 2);
    }

    SUBCASE("empty inputs") {
        CHECK(match_detections({}, truth, 0.5).is_tp.empty());
        const std::vector<Detection> dets = {{{0, 0, 10, 10}, 0, 0.9}};
        const MatchResult res = match_detections(dets, {}, 0.5);
        CHECK(res.is_tp == std::vector<bool>{false});
    }
}

TEST_CASE("average precision of the published example") {
    // Ranked [TP, FP, TP] against two ground-truth boxes:
    // precision envelope gives (1 + 2/3) / 2 = 5/6.
    const std::vector<RankedDetection> ranked = {{0.9, true}, {0.8, false}, {0.7, true}};
    CHECK(std::abs(average_precision(ranked, 2) - 5.0 / 6.0) <= 1e-9);
}

TEST_CASE("average precision edge cases") {
    CHECK(average_precision({}, 3) == 0.0);
    CHECK(average_precision({{0.9, true}}, 1) == 1.0);
    CHECK(average_precision({{0.9, false}, {0.8, false}}, 2) == 0.0);
    CHECK_THROWS_AS(average_precision({{0.9, true}}, 0), Error);

    // A perfect ranking is exactly 1.
    std::vector<RankedDetection> perfect;
    for (int i = 0; i < 6; ++i) perfect.push_back({0.9 - 0.1 * i, true});
    CHECK(average_precision(perfect, 6) == 1.0);
}

TEST_CASE("appending a false positive at the bottom never changes ap") {
    std::mt19937_64 rng(600);
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<RankedDetection> ranked;
        const int n = 1 + static_cast<int>(rng() % 10);
        long gt_count = 0;
        double conf = 0.99;
        for (int i = 0; i < n; ++i) {
            const bool tp = (rng() % 2) != 0;
            ranked.push_back({conf, tp});
            conf -= 0.01;
            if (tp) ++gt_count;
        }
        gt_count = std::max(gt_count, 1l);
        const double base = average_precision(ranked, gt_count);

        auto with_fp = ranked;
        with_fp.push_back({conf - 0.01, false});
        CHECK(average_precision(with_fp, gt_count) == doctest::Approx(base).epsilon(1e-12));

        // Appending a true positive at the bottom can only help.
        auto with_tp = ranked;
        with_tp.push_back({conf - 0.01, true});
        CHECK(average_precision(with_tp, gt_count + 1) + 1e-12 >=
              average_precision(ranked, gt_count + 1));
    }
}

TEST_CASE("average precision agrees with the per-recall-level formulation") {
    std::mt19937_64 rng(601);
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<RankedDetection> ranked;
        const int n = static_cast<int>(rng() % 12);
        int tp = 0;
        for (int i = 0; i < n; ++i) {
            const bool is_tp = (rng() % 3) != 0;
            ranked.push_back({fixtures::uniform(rng, 0.1, 0.99), is_tp});
            tp += is_tp;
        }
        const long gt_count = tp + static_cast<long>(rng() % 4) + (tp == 0 ? 1 : 0);
        const double got = average_precision(ranked, gt_count);
        const double want = oracles::brute_ap(ranked, gt_count);
        CHECK(std::abs(got - want) <= 1e-9);
    }
}

TEST_CASE("evaluate reproduces the worked 5/6 example") {
    const std::vector<GroundTruthBox> truth = {gt("a.ppm", 0, 0, 10, 10, 0),
                                               gt("a.ppm", 20, 0, 30, 10, 0)};
    const std::vector<ImageDetection> dets = {
        image_det("a.ppm", 0, 0, 10, 10, 0, 0.9),   // TP
        image_det("a.ppm", 40, 0, 50, 10, 0, 0.8),  // FP
        image_det("a.ppm", 20, 0, 30, 10, 0, 0.7),  // TP
    };

    const EvalReport report = evaluate(dets, truth, 0.5, 0.5);
    REQUIRE(report.classes.size() == 1);
    const ClassReport& cls = report.classes[0];
    CHECK(cls.name == "prohibitory");
    CHECK(std::abs(cls.ap - 5.0 / 6.0) <= 1e-9);
    CHECK(std::abs(report.map - 5.0 / 6.0) <= 1e-9);
    CHECK(cls.gt_count == 2);
    CHECK(cls.det_count == 3);
    CHECK(cls.recall_at_conf == 1.0); // both TPs have confidence >= 0.5
    CHECK(report.conf_for_accuracy == 0.5);

    // The raw curve walks (recall, precision) rank by rank.
    REQUIRE(cls.pr_curve.size() == 3);
    CHECK(cls.pr_curve[0] == std::pair<double, double>{0.5, 1.0});
    CHECK(cls.pr_curve[1] == std::pair<double, double>{0.5, 0.5});
    CHECK(cls.pr_curve[2] == std::pair<double, double>{1.0, 2.0 / 3.0});
}

TEST_CASE("a perfect detector scores exactly one") {
    std::vector<GroundTruthBox> truth;
    std::vector<ImageDetection> dets;
    for (int img = 0; img < 3; ++img) {
        const std::string name = "img" + std::to_string(img) + ".ppm";
        for (int cls = 0; cls < 4; ++cls) {
            const double x = 20.0 * cls;
            truth.push_back(gt(name, x, 0, x + 10, 10, cls));
            dets.push_back(image_det(name, x, 0, x + 10, 10, cls, 0.9));
        }
    }
    const EvalReport report = evaluate(dets, truth, 0.5, 0.5);
    REQUIRE(report.classes.size() == 4);
    for (const auto& cls : report.classes) {
        CHECK(cls.ap == 1.0);
        CHECK(cls.recall_at_conf == 1.0);
    }
    CHECK(report.map == 1.0);
}

TEST_CASE("evaluate failure modes") {
    const std::vector<GroundTruthBox> truth = {gt("a.ppm", 0, 0, 10, 10, 0)};

    CHECK_THROWS_AS(evaluate({}, {}, 0.5, 0.5), Error);
    try {
        evaluate({image_det("b.ppm", 0, 0, 10, 10, 0, 0.9)}, truth, 0.5, 0.5);
        FAIL("expected image_set_mismatch");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::image_set_mismatch);
        CHECK(std::string(e.what()).find("b.ppm") != std::string::npos);
    }
}

TEST_CASE("classes without ground truth are not reported") {
    const std::vector<GroundTruthBox> truth = {gt("a.ppm", 0, 0, 10, 10, 2)};
    const std::vector<ImageDetection> dets = {
        image_det("a.ppm", 0, 0, 10, 10, 2, 0.9),
        image_det("a.ppm", 30, 0, 40, 10, 1, 0.8), // no class-1 ground truth anywhere
    };
    const EvalReport report = evaluate(dets, truth, 0.5, 0.5);
    REQUIRE(report.classes.size() == 1);
    CHECK(report.classes[0].name == "danger");
    CHECK(report.classes[0].ap == 1.0);
    CHECK(report.map == 1.0);
}

TEST_CASE("an empty detection set scores zero everywhere") {
    const std::vector<GroundTruthBox> truth = {gt("a.ppm", 0, 0, 10, 10, 0),
                                               gt("b.ppm", 0, 0, 10, 10, 3)};
    const EvalReport report = evaluate({}, truth, 0.5, 0.5);
    REQUIRE(report.classes.size() == 2);
    for (const auto& cls : report.classes) {
        CHECK(cls.ap == 0.0);
        CHECK(cls.recall_at_conf == 0.0);
        CHECK(cls.det_count == 0);
        CHECK(cls.pr_curve.empty());
    }
    CHECK(report.map == 0.0);
}

TEST_CASE("recall at confidence ignores low-confidence true positives") {
    const std::vector<GroundTruthBox> truth = {gt("a.ppm", 0, 0, 10, 10, 0),
                                               gt("a.ppm", 20, 0, 30, 10, 0)};
    const std::vector<ImageDetection> dets = {
        image_det("a.ppm", 0, 0, 10, 10, 0, 0.9),
        image_det("a.ppm", 20, 0, 30, 10, 0, 0.2), // matched, but below conf 0.5
    };
    const EvalReport report = evaluate(dets, truth, 0.5, 0.5);
    REQUIRE(report.classes.size() == 1);
    CHECK(report.classes[0].ap == 1.0); // ranking does not care about the threshold
    CHECK(report.classes[0].recall_at_conf == 0.5);
}

TEST_CASE("evaluate agrees with an independent evaluator on random datasets") {
    std::mt19937_64 rng(602);
    for (int trial = 0; trial < 50; ++trial) {
        const int image_count = 1 + static_cast<int>(rng() % 4);
        std::vector<std::string> images;
        for (int i = 0; i < image_count; ++i)
            images.push_back("img" + std::to_string(i) + ".ppm");

        std::vector<GroundTruthBox> truth;
        const int gt_count = 1 + static_cast<int>(rng() % 10);
        for (int i = 0; i < gt_count; ++i) {
            GroundTruthBox g;
            g.image = images[rng() % images.size()];
            g.box = fixtures::random_int_box(rng, 40);
            g.class_id = static_cast<int>(rng() % 4);
            truth.push_back(g);
        }

        // Detections may only reference images the ground truth knows about.
        std::vector<std::string> gt_images;
        for (const GroundTruthBox& g : truth)
            if (std::find(gt_images.begin(), gt_images.end(), g.image) == gt_images.end())
                gt_images.push_back(g.image);

        std::vector<ImageDetection> dets;
        const int det_count = static_cast<int>(rng() % 16);
        for (int i = 0; i < det_count; ++i) {
            ImageDetection d;
            d.image = gt_images[rng() % gt_images.size()];
            d.detection.box = fixtures::random_int_box(rng, 40);
            d.detection.class_id = static_cast<int>(rng() % 4);
            d.detection.confidence = fixtures::uniform(rng, 0.05, 0.99);
            dets.push_back(d);
        }

        const EvalReport got = evaluate(dets, truth, 0.5, 0.5);
        const oracles::BruteEvalResult want = oracles::brute_evaluate(dets, truth, 0.5, 0.5);

        CHECK(std::abs(got.map - want.map) <= 1e-9);
        for (const auto& cls : got.classes) {
            int cls_id = -1;
            for (int c = 0; c < 4; ++c)
                if (superclass_name(static_cast<SuperClass>(c)) == cls.name) cls_id = c;
            REQUIRE(cls_id >= 0);
            CHECK(want.per_class[cls_id].has_gt);
            CHECK(std::abs(cls.ap - want.per_class[cls_id].ap) <= 1e-9);
            CHECK(std::abs(cls.recall_at_conf - want.per_class[cls_id].recall_at_conf) <= 1e-9);
        }
        int reported = 0;
        for (int c = 0; c < 4; ++c) reported += want.per_class[c].has_gt;
        CHECK(static_cast<int>(got.classes.size()) == reported);
    }
}

TEST_CASE("report serializations are stable") {
    const std::vector<GroundTruthBox> truth = {gt("a.ppm", 0, 0, 10, 10, 0),
                                               gt("a.ppm", 20, 0, 30, 10, 0)};
    const std::vector<ImageDetection> dets = {
        image_det("a.ppm", 0, 0, 10, 10, 0, 0.9),
        image_det("a.ppm", 40, 0, 50, 10, 0, 0.8),
        image_det("a.ppm", 20, 0, 30, 10, 0, 0.7),
    };
    const EvalReport report = evaluate(dets, truth, 0.5, 0.5);

    CHECK(report.to_json() ==
          R"({"classes":[{"ap":0.8333333333333333,"gt_count":2,"name":"prohibitory","recall_at_conf":1.0}],"conf_for_accuracy":0.5,"map":0.8333333333333333})");
    CHECK(report.to_csv() == "name,ap,recall_at_conf,gt_count\n"
                             "prohibitory,0.833333,1.000000,2\n"
                             "mAP,0.833333,,\n");
}
