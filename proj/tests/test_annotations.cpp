#include <doctest.h>

#include <optional>
#include <string>
#include <vector>

#include "tsrkit/annotations.hpp"
#include "tsrkit/errors.hpp"

using namespace tsrkit;

namespace {

std::optional<Errc> error_code_of(const std::string& text) {
    try {
        parse_annotations(text);
    } catch (const Error& e) {
        return e.code();
    }
    return std::nullopt;
}

std::string error_message_of(const std::string& text) {
    try {
        parse_annotations(text);
    } catch (const Error& e) {
        return e.what();
    }
    return {};
}

}  // namespace

TEST_CASE("annotation lines parse into records") {
    const auto recs = parse_annotations("00001.ppm;774;411;815;446;11\n"
                                        "00001.ppm;983;388;1024;432;40\n"
                                        "00002.ppm;386;494;442;552;38\n");
    REQUIRE(recs.size() == 3);
    CHECK(recs[0].image == "00001.ppm");
    CHECK(recs[0].box == BBox{774, 411, 815, 446});
    CHECK(recs[0].raw_class_id == 11);
    CHECK(recs[2].image == "00002.ppm");
    CHECK(recs[2].raw_class_id == 38);
}

TEST_CASE("blank lines and CRLF endings are tolerated") {
    const auto recs = parse_annotations("a.ppm;0;0;5;5;3\r\n\n\nb.ppm;1;1;4;4;14\r\n");
    REQUIRE(recs.size() == 2);
    CHECK(recs[0].image == "a.ppm");
    CHECK(recs[1].raw_class_id == 14);
}

TEST_CASE("parse errors carry the 1-based line number") {
    // Wrong field count on line 2.
    CHECK(error_code_of("a.ppm;0;0;5;5;3\na.ppm;0;0;5;5\n") == Errc::malformed_line);
    CHECK(error_message_of("a.ppm;0;0;5;5;3\na.ppm;0;0;5;5\n").find("line 2") != std::string::npos);

    // Non-integer coordinate.
    CHECK(error_code_of("a.ppm;0;x;5;5;3\n") == Errc::malformed_line);

    // Degenerate extent: right must exceed left, bottom must exceed top.
    CHECK(error_code_of("a.ppm;5;0;5;5;3\n") == Errc::invalid_box);
    CHECK(error_code_of("a.ppm;0;5;5;5;3\n") == Errc::invalid_box);
    CHECK(error_code_of("a.ppm;6;0;5;5;3\n") == Errc::invalid_box);

    // Negative coordinates are rejected before the extent check.
    CHECK(error_code_of("a.ppm;-1;0;5;5;3\n") == Errc::invalid_box);
    CHECK(error_message_of("a.ppm;0;0;5;5;3\nb.ppm;-2;0;5;5;3\n").find("line 2") !=
          std::string::npos);

    // Raw class id outside 0..42.
    CHECK(error_code_of("a.ppm;0;0;5;5;43\n") == Errc::invalid_class);
    CHECK(error_code_of("a.ppm;0;0;5;5;-1\n") == Errc::invalid_class);
}

TEST_CASE("serialize and parse round trip") {
    const std::string text = "img_a.ppm;10;20;30;40;2\nimg_b.ppm;5;6;7;8;14\n";
    const auto recs = parse_annotations(text);
    CHECK(serialize_annotations(recs) == text);
}

TEST_CASE("presence buckets split at 20 and 60") {
    CHECK(presence_bucket(1) == PresenceBucket::low);
    CHECK(presence_bucket(19) == PresenceBucket::low);
    CHECK(presence_bucket(20) == PresenceBucket::moderate);
    CHECK(presence_bucket(60) == PresenceBucket::moderate);
    CHECK(presence_bucket(61) == PresenceBucket::high);
    CHECK(std::string(presence_bucket_name(PresenceBucket::low)) == "low");
    CHECK(std::string(presence_bucket_name(PresenceBucket::moderate)) == "moderate");
    CHECK(std::string(presence_bucket_name(PresenceBucket::high)) == "high");
}

TEST_CASE("class histogram counts, buckets, and superclass totals") {
    std::vector<AnnotationRecord> recs;
    auto add = [&](int cls, int n) {
        for (int i = 0; i < n; ++i)
            recs.push_back({"img.ppm", {0.0, 0.0, 10.0 + i, 11.0 + i}, cls});
    };
    add(3, 20);  // prohibitory, exactly at the moderate lower bound
    add(1, 19);  // prohibitory, low
    add(40, 61); // mandatory, high
    add(14, 5);  // stop
    add(6, 2);   // carries no superclass

    const auto hist = class_histogram(recs);
    CHECK(hist.counts.at(3) == 20);
    CHECK(hist.counts.at(1) == 19);
    CHECK(hist.counts.at(40) == 61);
    CHECK(hist.counts.at(14) == 5);
    CHECK(hist.counts.at(6) == 2);
    CHECK(hist.counts.size() == 5);

    CHECK(hist.buckets.at(3) == PresenceBucket::moderate);
    CHECK(hist.buckets.at(1) == PresenceBucket::low);
    CHECK(hist.buckets.at(40) == PresenceBucket::high);
    CHECK(hist.buckets.at(14) == PresenceBucket::low);

    CHECK(hist.superclass_counts[0] == 39); // classes 3 and 1
    CHECK(hist.superclass_counts[1] == 61); // class 40
    CHECK(hist.superclass_counts[2] == 0);
    CHECK(hist.superclass_counts[3] == 5);  // class 14
}
