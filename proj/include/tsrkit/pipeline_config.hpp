#pragma once

#include <filesystem>
#include <string>

#include "tsrkit/augment.hpp"
#include "tsrkit/detector.hpp"
#include "tsrkit/schedule.hpp"

namespace tsrkit {

// One document configuring every deterministic pipeline stage. The JSON
// form mirrors the structs field for field; absent sections and fields keep
// their defaults.
struct PipelineConfig {
    PreprocessConfig preprocess;
    AugmentationConfig augmentation;
    DetectionThresholds thresholds;
    TrainingSchedule schedule;
};

// Throws malformed_line for syntax or type errors and out_of_range for
// values outside their documented ranges (probabilities, decay parameters,
// target sizes).
PipelineConfig parse_pipeline_config(const std::string& json_text);

PipelineConfig load_pipeline_config(const std::filesystem::path& path);

// Full document with every field present, alphabetically keyed.
std::string pipeline_config_to_json(const PipelineConfig& config);

} // namespace tsrkit
