#pragma once

#include <array>
#include <optional>
#include <string_view>

namespace ricci {

// Geometry classes of locally homogeneous closed 4-manifolds with trivial
// isotropy whose Ricci flow exists for all positive time. A2 subcases i-iii,
// A9i and A10 are not handled (no all-time diagonal ODE system for them here).
enum class ClassId {
    A1,
    A2iv,
    A3,
    A4,
    A5,
    A6,
    A7i,
    A7ii,
    A8,
    A9ii,
};

inline constexpr std::array<ClassId, 10> all_class_ids = {
    ClassId::A1,  ClassId::A2iv, ClassId::A3,   ClassId::A4, ClassId::A5,
    ClassId::A6,  ClassId::A7i,  ClassId::A7ii, ClassId::A8, ClassId::A9ii,
};

std::string_view to_string(ClassId id);
std::optional<ClassId> parse_class_id(std::string_view text);

}  // namespace ricci
