#include <algorithm>
#include <atomic>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <mutex>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "tsrkit/annotations.hpp"
#include "tsrkit/augment.hpp"
#include "tsrkit/bench.hpp"
#include "tsrkit/detector.hpp"
#include "tsrkit/errors.hpp"
#include "tsrkit/eval.hpp"
#include "tsrkit/image.hpp"
#include "tsrkit/io.hpp"
#include "tsrkit/jsonl.hpp"
#include "tsrkit/log.hpp"
#include "tsrkit/model.hpp"
#include "tsrkit/pipeline_config.hpp"
#include "tsrkit/superclass.hpp"
#include "tsrkit/tracker.hpp"

namespace fs = std::filesystem;
using namespace tsrkit;

namespace {

// Exit codes: 0 success, 1 usage, 2 bad data or format, 3 internal error.
constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitInternal = 3;

std::string read_input_or_stdin(const std::string& path) {
    if (path == "-") {
        std::ostringstream buf;
        buf << std::cin.rdbuf();
        return buf.str();
    }
    return read_file_text(path);
}

void write_output_or_stdout(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
        std::fwrite(text.data(), 1, text.size(), stdout);
        return;
    }
    write_file_text(path, text);
}

std::vector<fs::path> list_ppm_files(const fs::path& dir) {
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(dir))
        if (entry.is_regular_file() && entry.path().extension() == ".ppm")
            files.push_back(entry.path());
    std::sort(files.begin(), files.end());
    if (files.empty())
        throw Error(Errc::empty_source, "no .ppm files in " + dir.string());
    return files;
}

std::vector<GroundTruthBox> remapped_ground_truth(const std::string& gt_text) {
    std::vector<GroundTruthBox> out;
    for (const AnnotationRecord& rec : parse_annotations(gt_text))
        if (auto sc = remap_to_superclass(rec.raw_class_id))
            out.push_back({rec.image, rec.box, static_cast<int>(*sc)});
    return out;
}

int cmd_dataset_stats(const std::string& gt_path, const std::string& format) {
    const auto records = parse_annotations(read_file_text(gt_path));
    const ClassHistogram hist = class_histogram(records);

    if (format == "csv") {
        std::string out = "class_id,count,bucket\n";
        for (const auto& [cls, count] : hist.counts) {
            out += std::to_string(cls) + "," + std::to_string(count) + "," +
                   presence_bucket_name(hist.buckets.at(cls)) + "\n";
        }
        write_output_or_stdout("", out);
    } else {
        nlohmann::json j;
        j["classes"] = nlohmann::json::array();
        for (const auto& [cls, count] : hist.counts) {
            nlohmann::json c;
            c["class_id"] = cls;
            c["count"] = count;
            c["bucket"] = presence_bucket_name(hist.buckets.at(cls));
            j["classes"].push_back(c);
        }
        for (int sc = 0; sc < kSuperClassCount; ++sc)
            j["superclass_counts"][superclass_name(static_cast<SuperClass>(sc))] =
                hist.superclass_counts[sc];
        write_output_or_stdout("", j.dump() + "\n");
    }
    return kExitOk;
}

int cmd_dataset_remap(const std::string& gt_path, const std::string& output) {
    const auto records = parse_annotations(read_file_text(gt_path));
    std::vector<AnnotationRecord> remapped;
    long dropped = 0;
    for (const AnnotationRecord& rec : records) {
        if (auto sc = remap_to_superclass(rec.raw_class_id)) {
            AnnotationRecord out = rec;
            out.raw_class_id = static_cast<int>(*sc);
            remapped.push_back(std::move(out));
        } else {
            ++dropped;
        }
    }
    log_info("remapped " + std::to_string(remapped.size()) + " records, dropped " +
             std::to_string(dropped) + " outside the four groups");
    write_output_or_stdout(output, serialize_annotations(remapped));
    return kExitOk;
}

struct DetectOptions {
    std::string model_cfg;
    std::string weights;
    std::string input;
    std::string output;
    std::string config; // pipeline configuration JSON, optional
    double conf = 0.5;
    double nms_iou = 0.7;
    std::string color_space = "rgb";
    std::string resize = "letterbox";
    std::uint64_t seed = 0;
    int threads = 1;
    // Which flags were given explicitly; explicit flags override --config.
    bool conf_given = false;
    bool nms_given = false;
    bool color_space_given = false;
    bool resize_given = false;
    bool seed_given = false;
};

int cmd_detect(const DetectOptions& opt) {
    const Model model = Model::load(opt.model_cfg, opt.weights);

    PipelineConfig pipeline;
    if (!opt.config.empty()) pipeline = load_pipeline_config(opt.config);
    if (opt.conf_given || opt.config.empty()) pipeline.thresholds.confidence = opt.conf;
    if (opt.nms_given || opt.config.empty()) pipeline.thresholds.nms_iou = opt.nms_iou;
    if (opt.color_space_given || opt.config.empty())
        pipeline.preprocess.color_space = color_space_from_name(opt.color_space);
    if (opt.resize_given || opt.config.empty())
        pipeline.preprocess.resize_mode = resize_mode_from_name(opt.resize);
    if (opt.seed_given) pipeline.augmentation.seed = opt.seed;

    const AugmentationConfig& aug = pipeline.augmentation;
    const bool augmented = aug.grayscale.enabled || aug.crop.enabled ||
                           aug.vertical_flip.enabled || aug.horizontal_flip.enabled;

    std::vector<fs::path> files;
    if (fs::is_directory(opt.input)) {
        files = list_ppm_files(opt.input);
    } else {
        files.push_back(opt.input);
    }

    std::vector<std::string> per_image(files.size());
    auto process = [&](std::size_t i) {
        Image img = decode_ppm(read_file_bytes(files[i]));
        if (augmented) {
            // Frame index enters the seed so a frame's sample is independent
            // of scheduling order.
            AugmentationConfig frame_aug = aug;
            frame_aug.seed = aug.seed + i;
            img = augment(img, {}, frame_aug).image;
        }
        const auto detections =
            run_detection(img, model, pipeline.preprocess, pipeline.thresholds);
        std::string block;
        for (const Detection& det : detections)
            block += detection_to_jsonl({files[i].filename().string(), det}) + "\n";
        per_image[i] = std::move(block);
    };

    const int threads = std::max(1, opt.threads);
    if (threads == 1 || files.size() <= 1) {
        for (std::size_t i = 0; i < files.size(); ++i) process(i);
    } else {
        // Results land in per_image slots, so output order stays the input
        // order regardless of scheduling.
        std::vector<std::thread> pool;
        std::atomic<std::size_t> next{0};
        std::atomic<bool> failed{false};
        std::string error;
        std::mutex error_mutex;
        for (int t = 0; t < threads; ++t) {
            pool.emplace_back([&] {
                while (true) {
                    const std::size_t i = next.fetch_add(1);
                    if (i >= files.size() || failed.load()) return;
                    try {
                        process(i);
                    } catch (const std::exception& e) {
                        std::lock_guard<std::mutex> lock(error_mutex);
                        error = e.what();
                        failed.store(true);
                        return;
                    }
                }
            });
        }
        for (std::thread& th : pool) th.join();
        if (failed.load()) throw Error(Errc::io_error, error);
    }

    std::string out;
    for (const std::string& block : per_image) out += block;
    write_output_or_stdout(opt.output, out);
    return kExitOk;
}

struct TrackOptions {
    std::string dets;
    std::string output;
    TrackerConfig config;
};

int cmd_track(const TrackOptions& opt) {
    const auto detections = detections_from_jsonl(read_input_or_stdin(opt.dets));
    const auto frames = group_by_image(detections);

    Tracker tracker(opt.config);
    std::string out;
    int frame_number = 0;
    for (const auto& [image, dets] : frames) {
        ++frame_number; // frames are numbered from 1 in the order images appear
        const auto& tracks = tracker.step(dets);
        for (const Track& track : tracks) out += track_to_jsonl(frame_number, track) + "\n";
    }
    write_output_or_stdout(opt.output, out);
    return kExitOk;
}

int cmd_eval(const std::string& gt_path, const std::string& dets_path, double iou_threshold,
             double conf_threshold, const std::string& format) {
    const auto ground_truth = remapped_ground_truth(read_file_text(gt_path));
    const auto detections = detections_from_jsonl(read_input_or_stdin(dets_path));
    const EvalReport report = evaluate(detections, ground_truth, iou_threshold, conf_threshold);
    if (format == "csv") {
        write_output_or_stdout("", report.to_csv());
    } else {
        write_output_or_stdout("", report.to_json() + "\n");
    }
    return kExitOk;
}

struct BenchOptions {
    std::string model_cfg;
    std::string weights;
    std::string input;
    std::string host = "local";
    int warmup = 10;
    int threads = 1;
    double conf = 0.5;
    double nms_iou = 0.7;
    std::string color_space = "rgb";
    std::string resize = "letterbox";
    bool include_decode = false;
};

int cmd_bench(const BenchOptions& opt) {
    const Model model = Model::load(opt.model_cfg, opt.weights);
    PreprocessConfig pre;
    pre.color_space = color_space_from_name(opt.color_space);
    pre.resize_mode = resize_mode_from_name(opt.resize);
    const DetectionThresholds thresholds{opt.conf, opt.nms_iou, true};

    const auto files = list_ppm_files(opt.input);
    const std::string model_name = fs::path(opt.model_cfg).stem().string();

    BenchReport report;
    if (opt.include_decode) {
        std::vector<std::vector<std::uint8_t>> raw;
        raw.reserve(files.size());
        for (const auto& f : files) raw.push_back(read_file_bytes(f));
        report = run_benchmark(model_name, opt.host, static_cast<long>(raw.size()), opt.warmup,
                               opt.threads, [&](long i) {
                                   const Image img = decode_ppm(raw[i]);
                                   run_detection(img, model, pre, thresholds);
                               });
    } else {
        std::vector<Image> frames;
        frames.reserve(files.size());
        for (const auto& f : files) frames.push_back(decode_ppm(read_file_bytes(f)));
        report = run_benchmark(model_name, opt.host, static_cast<long>(frames.size()), opt.warmup,
                               opt.threads,
                               [&](long i) { run_detection(frames[i], model, pre, thresholds); });
    }
    write_output_or_stdout("", report.to_json() + "\n");
    return kExitOk;
}

int cmd_weights_inspect(const std::string& cfg_path, const std::string& weights_path) {
    const NetworkSpec spec = parse_network_spec(read_file_text(cfg_path));

    WeightsHeader header;
    if (!weights_path.empty()) {
        const auto bytes = read_file_bytes(weights_path);
        const WeightStore store = load_weights(bytes, spec);
        header = store.header;
    }

    char buf[160];
    std::string out;
    std::snprintf(buf, sizeof(buf), "version %d.%d.%d  seen %lld\n", header.major, header.minor,
                  header.revision, static_cast<long long>(header.seen));
    out += buf;

    const auto extents = describe_weights(spec, header);
    const auto shapes = trace_shapes(spec);
    out += "layer  bytes                block\n";
    for (const WeightExtent& e : extents) {
        std::snprintf(buf, sizeof(buf), "%5d  %10zu..%-10zu %s\n", e.layer_index, e.begin, e.end,
                      e.what.c_str());
        out += buf;
    }
    std::snprintf(buf, sizeof(buf), "total %zu bytes, %.4g flops\n",
                  extents.empty() ? 0 : extents.back().end, count_flops(spec));
    out += buf;

    out += "\nshapes\n";
    for (std::size_t i = 0; i < spec.layers.size(); ++i) {
        std::snprintf(buf, sizeof(buf), "%5zu  %s\n", i,
                      describe_layer(spec.layers[i], shapes[i]).c_str());
        out += buf;
    }
    write_output_or_stdout("", out);
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"traffic sign detection toolkit"};
    app.require_subcommand(1);

    // dataset-stats
    std::string stats_gt, stats_format = "csv";
    auto* stats = app.add_subcommand("dataset-stats", "class histogram of an annotation file");
    stats->add_option("--gt", stats_gt, "annotation file")->required();
    stats->add_option("--format", stats_format, "csv or json")
        ->check(CLI::IsMember({"csv", "json"}));

    // dataset-remap
    std::string remap_gt, remap_output;
    auto* remap = app.add_subcommand("dataset-remap",
                                     "rewrite annotations with superclass ids, dropping the rest");
    remap->add_option("--gt", remap_gt, "annotation file")->required();
    remap->add_option("--output", remap_output, "output file (default stdout)");

    // detect
    DetectOptions det;
    auto* detect = app.add_subcommand("detect", "run detection, one JSON line per detection");
    detect->add_option("--model-cfg", det.model_cfg, "network description")->required();
    detect->add_option("--weights", det.weights, "binary weights")->required();
    detect->add_option("--input", det.input, ".ppm file or directory of .ppm files")->required();
    detect->add_option("--output", det.output, "output file (default stdout)");
    detect->add_option("--config", det.config,
                       "pipeline configuration JSON; explicit flags override it");
    auto* det_conf = detect->add_option("--conf", det.conf, "confidence threshold");
    auto* det_nms = detect->add_option("--nms", det.nms_iou, "NMS IoU threshold");
    auto* det_cs = detect->add_option("--color-space", det.color_space, "rgb or hsv")
                       ->check(CLI::IsMember({"rgb", "hsv"}));
    auto* det_rs = detect->add_option("--resize", det.resize, "letterbox or stretch")
                       ->check(CLI::IsMember({"letterbox", "stretch"}));
    auto* det_seed = detect->add_option(
        "--seed", det.seed, "augmentation seed; frame index is added per frame");
    detect->add_option("--threads", det.threads, "worker threads");

    // track
    TrackOptions trk;
    auto* track = app.add_subcommand("track", "track detections across frames, one JSON line per "
                                              "live track per frame");
    track->add_option("--dets", trk.dets, "detection JSONL file, or - for stdin")->required();
    track->add_option("--output", trk.output, "output file (default stdout)");
    track->add_option("--min-iou", trk.config.min_iou, "association IoU threshold");
    track->add_option("--confirm-hits", trk.config.confirm_hits,
                      "consecutive hits to confirm a track");
    track->add_option("--max-misses", trk.config.max_misses, "consecutive misses until removal");
    track->add_option("--q", trk.config.kalman.q, "process noise");
    track->add_option("--r", trk.config.kalman.r, "measurement noise");
    track->add_option("--v0", trk.config.kalman.v0, "initial velocity variance");

    // eval
    std::string eval_gt, eval_dets, eval_format = "json";
    double eval_iou = 0.5, eval_conf = 0.5;
    auto* eval = app.add_subcommand("eval", "precision/recall report against ground truth");
    eval->add_option("--gt", eval_gt, "annotation file")->required();
    eval->add_option("--dets", eval_dets, "detection JSONL file, or - for stdin")->required();
    eval->add_option("--iou", eval_iou, "match IoU threshold");
    eval->add_option("--conf", eval_conf, "confidence threshold for recall_at_conf");
    eval->add_option("--format", eval_format, "json or csv")
        ->check(CLI::IsMember({"json", "csv"}));

    // bench
    BenchOptions ben;
    auto* bench = app.add_subcommand("bench", "throughput and latency percentiles");
    bench->add_option("--model-cfg", ben.model_cfg, "network description")->required();
    bench->add_option("--weights", ben.weights, "binary weights")->required();
    bench->add_option("--input", ben.input, "directory of .ppm frames")->required();
    bench->add_option("--warmup", ben.warmup, "untimed warmup iterations");
    bench->add_option("--threads", ben.threads, "worker threads");
    bench->add_option("--host", ben.host, "host label for the report");
    bench->add_option("--conf", ben.conf, "confidence threshold");
    bench->add_option("--nms", ben.nms_iou, "NMS IoU threshold");
    bench->add_option("--color-space", ben.color_space, "rgb or hsv")
        ->check(CLI::IsMember({"rgb", "hsv"}));
    bench->add_option("--resize", ben.resize, "letterbox or stretch")
        ->check(CLI::IsMember({"letterbox", "stretch"}));
    bench->add_flag("--include-decode", ben.include_decode, "time image decoding per frame");

    // weights-inspect
    std::string wi_cfg, wi_weights;
    auto* inspect = app.add_subcommand("weights-inspect",
                                       "header fields, parameter byte extents, layer shapes");
    inspect->add_option("--model-cfg", wi_cfg, "network description")->required();
    inspect->add_option("--weights", wi_weights, "binary weights (validates the byte count)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << e.what() << "\n";
        std::cerr << app.help() << "\n";
        return kExitUsage;
    }

    det.conf_given = det_conf->count() > 0;
    det.nms_given = det_nms->count() > 0;
    det.color_space_given = det_cs->count() > 0;
    det.resize_given = det_rs->count() > 0;
    det.seed_given = det_seed->count() > 0;

    try {
        if (stats->parsed()) return cmd_dataset_stats(stats_gt, stats_format);
        if (remap->parsed()) return cmd_dataset_remap(remap_gt, remap_output);
        if (detect->parsed()) return cmd_detect(det);
        if (track->parsed()) return cmd_track(trk);
        if (eval->parsed()) return cmd_eval(eval_gt, eval_dets, eval_iou, eval_conf, eval_format);
        if (bench->parsed()) return cmd_bench(ben);
        if (inspect->parsed()) return cmd_weights_inspect(wi_cfg, wi_weights);
    } catch (const Error& e) {
        log_error(e.what());
        return kExitData;
    } catch (const std::exception& e) {
        log_error(e.what());
        return kExitInternal;
    }
    return kExitUsage;
}
