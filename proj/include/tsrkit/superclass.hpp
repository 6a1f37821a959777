#pragma once

#include <optional>
#include <string_view>

namespace tsrkit {

// Coarse detection categories. The numeric values are the class ids used
// throughout detection output, evaluation, and tracking.
enum class SuperClass : int {
    prohibitory = 0,
    mandatory = 1,
    danger = 2,
    stop = 3,
};

inline constexpr int kSuperClassCount = 4;
inline constexpr int kRawClassCount = 43;

const char* superclass_name(SuperClass sc);

// Name (case-sensitive, as printed by superclass_name) to enum value.
std::optional<SuperClass> superclass_from_name(std::string_view name);

// Maps a raw dataset class id (0..42) onto its superclass. Ids that belong
// to none of the four groups map to nullopt and are dropped by consumers.
// Throws Error(out_of_range) for ids outside 0..42.
std::optional<SuperClass> remap_to_superclass(int raw_class_id);

} // namespace tsrkit
