#pragma once

#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "tsrkit/bbox.hpp"
#include "tsrkit/tracker.hpp"

namespace tsrkit {

// One detection attributed to a named image, the unit of the JSON-lines
// stream the CLI stages exchange.
struct ImageDetection {
    std::string image;
    Detection detection;

    bool operator==(const ImageDetection&) const = default;
};

// {"image": ..., "class": ..., "left": ..., "top": ..., "right": ...,
//  "bottom": ..., "confidence": ...} with keys in alphabetical order and
// shortest-round-trip numbers, so output is byte-deterministic. class is
// the superclass name for ids 0..3 and the decimal id otherwise.
std::string detection_to_jsonl(const ImageDetection& det);

// Parses one line; throws malformed_line with the given 1-based line number
// on JSON errors, missing keys, or an unknown class name.
ImageDetection detection_from_jsonl(std::string_view line, int line_number);

std::string detections_to_jsonl(const std::vector<ImageDetection>& dets);
std::vector<ImageDetection> detections_from_jsonl(std::string_view text);

// Groups by image name, preserving first-appearance order of images and
// line order within each image.
std::vector<std::pair<std::string, std::vector<Detection>>>
group_by_image(const std::vector<ImageDetection>& dets);

// {"box": {...}, "class": ..., "frame": ..., "status": ..., "track_id": ...}
std::string track_to_jsonl(int frame, const Track& track);

} // namespace tsrkit
