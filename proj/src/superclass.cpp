#include "tsrkit/superclass.hpp"

#include <string>

#include "tsrkit/errors.hpp"

namespace tsrkit {

const char* superclass_name(SuperClass sc) {
    switch (sc) {
        case SuperClass::prohibitory: return "prohibitory";
        case SuperClass::mandatory: return "mandatory";
        case SuperClass::danger: return "danger";
        case SuperClass::stop: return "stop";
    }
    return "?";
}

std::optional<SuperClass> superclass_from_name(std::string_view name) {
    if (name == "prohibitory") return SuperClass::prohibitory;
    if (name == "mandatory") return SuperClass::mandatory;
    if (name == "danger") return SuperClass::danger;
    if (name == "stop") return SuperClass::stop;
    return std::nullopt;
}

std::optional<SuperClass> remap_to_superclass(int raw_class_id) {
    if (raw_class_id < 0 || raw_class_id >= kRawClassCount)
        throw Error(Errc::out_of_range,
                    "raw class id " + std::to_string(raw_class_id) + " outside 0..42");

    switch (raw_class_id) {
        // Speed limits and overtaking bans.
        case 0: case 1: case 2: case 3: case 4: case 5:
        case 7: case 8: case 9: case 10: case 15: case 16:
            return SuperClass::prohibitory;
        // Blue direction arrows and passing sides.
        case 33: case 34: case 35: case 36: case 37:
        case 38: case 39: case 40:
            return SuperClass::mandatory;
        // Red-bordered triangles.
        case 11: case 18: case 19: case 20: case 21: case 22:
        case 23: case 24: case 25: case 26: case 27: case 28:
        case 29: case 30: case 31:
            return SuperClass::danger;
        case 14:
            return SuperClass::stop;
        // 6, 12, 13, 17, 32, 41, 42: shapes outside the four groups.
        default:
            return std::nullopt;
    }
}

} // namespace tsrkit
