#include "tsrkit/jsonl.hpp"

#include <algorithm>

#include <json.hpp>

#include "tsrkit/errors.hpp"
#include "tsrkit/superclass.hpp"

namespace tsrkit {

using nlohmann::json;

// Superclass ids travel as their names; other ids (networks with a
// different class universe) as plain numbers.
static json class_field(int class_id) {
    if (class_id >= 0 && class_id < kSuperClassCount)
        return superclass_name(static_cast<SuperClass>(class_id));
    return class_id;
}

static int parse_class_field(const json& value, int line_number) {
    if (value.is_number_integer()) return value.get<int>();
    if (value.is_string()) {
        if (auto sc = superclass_from_name(value.get<std::string>()))
            return static_cast<int>(*sc);
        throw Error(Errc::malformed_line, "line " + std::to_string(line_number) +
                                              ": unknown class '" + value.get<std::string>() +
                                              "'");
    }
    throw Error(Errc::malformed_line,
                "line " + std::to_string(line_number) + ": class must be a name or an id");
}

std::string detection_to_jsonl(const ImageDetection& det) {
    json j;
    j["image"] = det.image;
    j["class"] = class_field(det.detection.class_id);
    j["left"] = det.detection.box.left;
    j["top"] = det.detection.box.top;
    j["right"] = det.detection.box.right;
    j["bottom"] = det.detection.box.bottom;
    j["confidence"] = det.detection.confidence;
    return j.dump();
}

ImageDetection detection_from_jsonl(std::string_view line, int line_number) {
    json j = json::parse(line, nullptr, false);
    if (j.is_discarded() || !j.is_object())
        throw Error(Errc::malformed_line,
                    "line " + std::to_string(line_number) + ": not a JSON object");

    for (const char* key : {"image", "class", "left", "top", "right", "bottom", "confidence"})
        if (!j.contains(key))
            throw Error(Errc::malformed_line,
                        "line " + std::to_string(line_number) + ": missing key '" + key + "'");

    ImageDetection det;
    try {
        det.image = j["image"].get<std::string>();
        det.detection.box.left = j["left"].get<double>();
        det.detection.box.top = j["top"].get<double>();
        det.detection.box.right = j["right"].get<double>();
        det.detection.box.bottom = j["bottom"].get<double>();
        det.detection.confidence = j["confidence"].get<double>();
    } catch (const json::exception& e) {
        throw Error(Errc::malformed_line,
                    "line " + std::to_string(line_number) + ": " + e.what());
    }
    det.detection.class_id = parse_class_field(j["class"], line_number);
    return det;
}

std::string detections_to_jsonl(const std::vector<ImageDetection>& dets) {
    std::string out;
    for (const ImageDetection& det : dets) {
        out += detection_to_jsonl(det);
        out += '\n';
    }
    return out;
}

std::vector<ImageDetection> detections_from_jsonl(std::string_view text) {
    std::vector<ImageDetection> dets;
    int line_number = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t eol = text.find('\n', pos);
        std::string_view line = text.substr(pos, eol == std::string_view::npos ? text.size() - pos
                                                                               : eol - pos);
        pos = eol == std::string_view::npos ? text.size() + 1 : eol + 1;
        ++line_number;
        while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) line.remove_suffix(1);
        if (line.empty()) continue;
        dets.push_back(detection_from_jsonl(line, line_number));
    }
    return dets;
}

std::vector<std::pair<std::string, std::vector<Detection>>>
group_by_image(const std::vector<ImageDetection>& dets) {
    std::vector<std::pair<std::string, std::vector<Detection>>> groups;
    for (const ImageDetection& det : dets) {
        auto it = std::find_if(groups.begin(), groups.end(),
                               [&](const auto& g) { return g.first == det.image; });
        if (it == groups.end()) {
            groups.emplace_back(det.image, std::vector<Detection>{det.detection});
        } else {
            it->second.push_back(det.detection);
        }
    }
    return groups;
}

std::string track_to_jsonl(int frame, const Track& track) {
    const BBox box = track.box();
    json j;
    j["frame"] = frame;
    j["track_id"] = track.id;
    j["status"] = track_status_name(track.status);
    j["class"] = class_field(track.class_id);
    j["box"] = {{"left", box.left}, {"top", box.top}, {"right", box.right},
                {"bottom", box.bottom}};
    return j.dump();
}

} // namespace tsrkit
