#pragma once

#include <string>

namespace semg {

// The ten signs, in table order. The first five are held postures, the
// last five require hand movement.
enum class GestureId : int {
  One = 0,
  Two = 1,
  Three = 2,
  Four = 3,
  Five = 4,
  Sorry = 5,
  Bold = 6,
  Confident = 7,
  Key = 8,
  Win = 9,
};

enum class GestureType : int { Static = 0, Dynamic = 1 };

inline constexpr int kGestureCount = 10;
inline constexpr int kGesturesPerType = 5;

GestureType gesture_type(GestureId id);

// Canonical case-sensitive name, e.g. "Confident".
const std::string& gesture_name(GestureId id);

// Inverse of gesture_name; throws FormatError on an unknown name.
GestureId gesture_from_name(const std::string& name);

const std::string& gesture_type_name(GestureType type);

struct GestureLabel {
  GestureId gesture_id{};
  GestureType gesture_type{};

  // gesture_type is always the canonical function of gesture_id.
  static GestureLabel of(GestureId id);

  bool operator==(const GestureLabel&) const = default;
};

}  // namespace semg
