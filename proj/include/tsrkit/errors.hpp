#pragma once

#include <stdexcept>
#include <string>

namespace tsrkit {

enum class Errc {
    malformed_line,
    invalid_box,
    invalid_class,
    unsupported_magic,
    unsupported_maxval,
    truncated,
    out_of_range,
    unknown_section,
    missing_field,
    shape_mismatch,
    bad_header,
    size_mismatch,
    no_ground_truth,
    image_set_mismatch,
    empty_source,
    io_error,
};

inline const char* errc_name(Errc code) {
    switch (code) {
        case Errc::malformed_line: return "malformed line";
        case Errc::invalid_box: return "invalid box";
        case Errc::invalid_class: return "invalid class";
        case Errc::unsupported_magic: return "unsupported magic";
        case Errc::unsupported_maxval: return "unsupported maxval";
        case Errc::truncated: return "truncated";
        case Errc::out_of_range: return "out of range";
        case Errc::unknown_section: return "unknown section";
        case Errc::missing_field: return "missing field";
        case Errc::shape_mismatch: return "shape mismatch";
        case Errc::bad_header: return "bad header";
        case Errc::size_mismatch: return "size mismatch";
        case Errc::no_ground_truth: return "no ground truth";
        case Errc::image_set_mismatch: return "image set mismatch";
        case Errc::empty_source: return "empty source";
        case Errc::io_error: return "io error";
    }
    return "error";
}

// All recoverable failures in the library throw this type. The code
// identifies the failure class; what() carries the human-readable context
// (line numbers, offending values, expected vs actual sizes).
class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& message)
        : std::runtime_error(std::string(errc_name(code)) + ": " + message), code_(code) {}

    Errc code() const noexcept { return code_; }

private:
    Errc code_;
};

} // namespace tsrkit
