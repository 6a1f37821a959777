#include "tsrkit/pipeline_config.hpp"

#include <json.hpp>

#include "tsrkit/errors.hpp"
#include "tsrkit/io.hpp"

namespace tsrkit {

namespace {

using nlohmann::json;

const json* find(const json& parent, const char* key) {
    auto it = parent.find(key);
    return it == parent.end() ? nullptr : &*it;
}

double read_number(const json& parent, const char* key, double fallback) {
    const json* v = find(parent, key);
    if (!v) return fallback;
    if (!v->is_number())
        throw Error(Errc::malformed_line, std::string(key) + " must be a number");
    return v->get<double>();
}

long read_integer(const json& parent, const char* key, long fallback) {
    const json* v = find(parent, key);
    if (!v) return fallback;
    if (!v->is_number_integer())
        throw Error(Errc::malformed_line, std::string(key) + " must be an integer");
    return v->get<long>();
}

bool read_flag(const json& parent, const char* key, bool fallback) {
    const json* v = find(parent, key);
    if (!v) return fallback;
    if (!v->is_boolean())
        throw Error(Errc::malformed_line, std::string(key) + " must be a boolean");
    return v->get<bool>();
}

std::string read_string(const json& parent, const char* key, std::string fallback) {
    const json* v = find(parent, key);
    if (!v) return fallback;
    if (!v->is_string())
        throw Error(Errc::malformed_line, std::string(key) + " must be a string");
    return v->get<std::string>();
}

const json* read_section(const json& parent, const char* key) {
    const json* v = find(parent, key);
    if (v && !v->is_object())
        throw Error(Errc::malformed_line, std::string(key) + " must be an object");
    return v;
}

void read_op(const json& parent, const char* key, AugmentationOp& op) {
    const json* section = read_section(parent, key);
    if (!section) return;
    op.enabled = read_flag(*section, "enabled", op.enabled);
    op.probability = read_number(*section, "probability", op.probability);
    if (op.probability < 0.0 || op.probability > 1.0)
        throw Error(Errc::out_of_range,
                    std::string(key) + " probability " + std::to_string(op.probability) +
                        " outside [0, 1]");
}

json op_to_json(const AugmentationOp& op) {
    return json{{"enabled", op.enabled}, {"probability", op.probability}};
}

} // namespace

PipelineConfig parse_pipeline_config(const std::string& json_text) {
    json doc = json::parse(json_text, nullptr, false);
    if (doc.is_discarded())
        throw Error(Errc::malformed_line, "pipeline config is not valid JSON");
    if (!doc.is_object())
        throw Error(Errc::malformed_line, "pipeline config must be a JSON object");

    PipelineConfig config;

    if (const json* pre = read_section(doc, "preprocess")) {
        config.preprocess.target_width =
            static_cast<int>(read_integer(*pre, "target_width", config.preprocess.target_width));
        config.preprocess.target_height =
            static_cast<int>(read_integer(*pre, "target_height", config.preprocess.target_height));
        if (config.preprocess.target_width < 0 || config.preprocess.target_height < 0)
            throw Error(Errc::out_of_range, "target sizes must be non-negative");
        config.preprocess.color_space = color_space_from_name(
            read_string(*pre, "color_space", color_space_name(config.preprocess.color_space)));
        config.preprocess.resize_mode = resize_mode_from_name(
            read_string(*pre, "resize_mode", resize_mode_name(config.preprocess.resize_mode)));
    }

    if (const json* aug = read_section(doc, "augmentation")) {
        read_op(*aug, "grayscale", config.augmentation.grayscale);
        read_op(*aug, "crop", config.augmentation.crop);
        read_op(*aug, "vertical_flip", config.augmentation.vertical_flip);
        read_op(*aug, "horizontal_flip", config.augmentation.horizontal_flip);
        config.augmentation.seed = static_cast<std::uint64_t>(
            read_integer(*aug, "seed", static_cast<long>(config.augmentation.seed)));
    }

    if (const json* thr = read_section(doc, "thresholds")) {
        config.thresholds.confidence =
            read_number(*thr, "confidence", config.thresholds.confidence);
        config.thresholds.nms_iou = read_number(*thr, "nms_iou", config.thresholds.nms_iou);
        config.thresholds.class_aware_nms =
            read_flag(*thr, "class_aware_nms", config.thresholds.class_aware_nms);
    }

    if (const json* sched = read_section(doc, "schedule")) {
        config.schedule.initial_lr =
            read_number(*sched, "initial_lr", config.schedule.initial_lr);
        config.schedule.decay_factor =
            read_number(*sched, "decay_factor", config.schedule.decay_factor);
        config.schedule.decay_period =
            read_integer(*sched, "decay_period", config.schedule.decay_period);
        if (config.schedule.initial_lr <= 0.0)
            throw Error(Errc::out_of_range, "initial_lr must be positive");
        if (config.schedule.decay_factor <= 0.0 || config.schedule.decay_factor >= 1.0)
            throw Error(Errc::out_of_range, "decay_factor must lie in (0, 1)");
        if (config.schedule.decay_period < 1)
            throw Error(Errc::out_of_range, "decay_period must be at least 1");
    }

    return config;
}

PipelineConfig load_pipeline_config(const std::filesystem::path& path) {
    return parse_pipeline_config(read_file_text(path));
}

std::string pipeline_config_to_json(const PipelineConfig& config) {
    json doc;
    doc["preprocess"] = {
        {"target_width", config.preprocess.target_width},
        {"target_height", config.preprocess.target_height},
        {"color_space", color_space_name(config.preprocess.color_space)},
        {"resize_mode", resize_mode_name(config.preprocess.resize_mode)},
    };
    doc["augmentation"] = {
        {"grayscale", op_to_json(config.augmentation.grayscale)},
        {"crop", op_to_json(config.augmentation.crop)},
        {"vertical_flip", op_to_json(config.augmentation.vertical_flip)},
        {"horizontal_flip", op_to_json(config.augmentation.horizontal_flip)},
        {"seed", config.augmentation.seed},
    };
    doc["thresholds"] = {
        {"confidence", config.thresholds.confidence},
        {"nms_iou", config.thresholds.nms_iou},
        {"class_aware_nms", config.thresholds.class_aware_nms},
    };
    doc["schedule"] = {
        {"initial_lr", config.schedule.initial_lr},
        {"decay_factor", config.schedule.decay_factor},
        {"decay_period", config.schedule.decay_period},
    };
    return doc.dump();
}

} // namespace tsrkit
