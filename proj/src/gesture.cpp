#include "semg/gesture.hpp"

#include <array>

#include "semg/errors.hpp"

namespace semg {

namespace {
const std::array<std::string, kGestureCount> kNames = {
    "One", "Two", "Three", "Four", "Five",
    "Sorry", "Bold", "Confident", "Key", "Win"};
const std::array<std::string, 2> kTypeNames = {"Static", "Dynamic"};
}  // namespace

GestureType gesture_type(GestureId id) {
  return static_cast<int>(id) < kGesturesPerType ? GestureType::Static
                                                 : GestureType::Dynamic;
}

const std::string& gesture_name(GestureId id) {
  return kNames.at(static_cast<std::size_t>(id));
}

GestureId gesture_from_name(const std::string& name) {
  for (int i = 0; i < kGestureCount; ++i) {
    if (kNames[static_cast<std::size_t>(i)] == name) return static_cast<GestureId>(i);
  }
  throw FormatError("unknown gesture name: '" + name + "'");
}

const std::string& gesture_type_name(GestureType type) {
  return kTypeNames.at(static_cast<std::size_t>(type));
}

GestureLabel GestureLabel::of(GestureId id) {
  return GestureLabel{id, semg::gesture_type(id)};
}

}  // namespace semg
