#pragma once

#include <array>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "tsrkit/bbox.hpp"

namespace tsrkit {

// One ground-truth line: "image;left;top;right;bottom;classId" with integer
// pixel coordinates and a raw class id in 0..42.
struct AnnotationRecord {
    std::string image;
    BBox box;
    int raw_class_id = 0;

    bool operator==(const AnnotationRecord&) const = default;
};

// Parses the semicolon-separated annotation format. Blank lines are
// skipped; a trailing CR is tolerated. Errors carry the 1-based line
// number: malformed_line (field count or non-integer field), invalid_box
// (left >= right or top >= bottom), invalid_class (id outside 0..42).
std::vector<AnnotationRecord> parse_annotations(std::string_view text);

// Inverse of parse_annotations: one "image;l;t;r;b;class\n" line per record,
// image names verbatim, coordinates printed as integers when integral.
std::string serialize_annotations(std::span<const AnnotationRecord> records);

enum class PresenceBucket { low, moderate, high };

const char* presence_bucket_name(PresenceBucket bucket);

// Per-class counts over a set of records plus derived views: counts per
// superclass (unmapped raw ids excluded) and a presence bucket per seen raw
// class (low < 20 <= moderate <= 60 < high).
struct ClassHistogram {
    std::map<int, long> counts;
    std::array<long, 4> superclass_counts{};
    std::map<int, PresenceBucket> buckets;
};

ClassHistogram class_histogram(std::span<const AnnotationRecord> records);

PresenceBucket presence_bucket(long count);

} // namespace tsrkit
