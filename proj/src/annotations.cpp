#include "tsrkit/annotations.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>

#include "tsrkit/errors.hpp"
#include "tsrkit/superclass.hpp"

namespace tsrkit {

static long parse_int_field(std::string_view field, int line_number) {
    long value = 0;
    const char* begin = field.data();
    const char* end = begin + field.size();
    auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc() || ptr != end)
        throw Error(Errc::malformed_line,
                    "line " + std::to_string(line_number) + ": '" + std::string(field) +
                        "' is not an integer");
    return value;
}

static std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
        s.remove_suffix(1);
    return s;
}

std::vector<AnnotationRecord> parse_annotations(std::string_view text) {
    std::vector<AnnotationRecord> records;
    int line_number = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t eol = text.find('\n', pos);
        std::string_view line = text.substr(pos, eol == std::string_view::npos ? text.size() - pos
                                                                               : eol - pos);
        pos = eol == std::string_view::npos ? text.size() + 1 : eol + 1;
        ++line_number;

        line = trim(line);
        if (line.empty()) continue;

        std::vector<std::string_view> fields;
        std::size_t start = 0;
        while (true) {
            std::size_t sep = line.find(';', start);
            if (sep == std::string_view::npos) {
                fields.push_back(trim(line.substr(start)));
                break;
            }
            fields.push_back(trim(line.substr(start, sep - start)));
            start = sep + 1;
        }
        if (fields.size() != 6)
            throw Error(Errc::malformed_line,
                        "line " + std::to_string(line_number) + ": expected 6 fields, got " +
                            std::to_string(fields.size()));

        AnnotationRecord rec;
        rec.image = std::string(fields[0]);
        rec.box.left = static_cast<double>(parse_int_field(fields[1], line_number));
        rec.box.top = static_cast<double>(parse_int_field(fields[2], line_number));
        rec.box.right = static_cast<double>(parse_int_field(fields[3], line_number));
        rec.box.bottom = static_cast<double>(parse_int_field(fields[4], line_number));
        long cls = parse_int_field(fields[5], line_number);

        if (rec.box.left < 0 || rec.box.top < 0 || rec.box.right < 0 || rec.box.bottom < 0)
            throw Error(Errc::invalid_box,
                        "line " + std::to_string(line_number) + ": negative coordinate");
        if (!(rec.box.left < rec.box.right) || !(rec.box.top < rec.box.bottom))
            throw Error(Errc::invalid_box,
                        "line " + std::to_string(line_number) + ": box has no positive extent");
        if (cls < 0 || cls >= kRawClassCount)
            throw Error(Errc::invalid_class,
                        "line " + std::to_string(line_number) + ": class " +
                            std::to_string(cls) + " outside 0..42");
        rec.raw_class_id = static_cast<int>(cls);
        records.push_back(std::move(rec));
    }
    return records;
}

static std::string format_coord(double v) {
    if (v == std::floor(v) && std::abs(v) < 1e15)
        return std::to_string(static_cast<long long>(v));
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

std::string serialize_annotations(std::span<const AnnotationRecord> records) {
    std::string out;
    for (const AnnotationRecord& rec : records) {
        out += rec.image;
        out += ';';
        out += format_coord(rec.box.left);
        out += ';';
        out += format_coord(rec.box.top);
        out += ';';
        out += format_coord(rec.box.right);
        out += ';';
        out += format_coord(rec.box.bottom);
        out += ';';
        out += std::to_string(rec.raw_class_id);
        out += '\n';
    }
    return out;
}

const char* presence_bucket_name(PresenceBucket bucket) {
    switch (bucket) {
        case PresenceBucket::low: return "low";
        case PresenceBucket::moderate: return "moderate";
        case PresenceBucket::high: return "high";
    }
    return "?";
}

PresenceBucket presence_bucket(long count) {
    if (count < 20) return PresenceBucket::low;
    if (count <= 60) return PresenceBucket::moderate;
    return PresenceBucket::high;
}

ClassHistogram class_histogram(std::span<const AnnotationRecord> records) {
    ClassHistogram hist;
    for (const AnnotationRecord& rec : records) {
        ++hist.counts[rec.raw_class_id];
        if (auto sc = remap_to_superclass(rec.raw_class_id))
            ++hist.superclass_counts[static_cast<int>(*sc)];
    }
    for (const auto& [cls, count] : hist.counts) hist.buckets[cls] = presence_bucket(count);
    return hist;
}

} // namespace tsrkit
