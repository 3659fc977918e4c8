#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <string_view>

namespace egotwin {

/// Microseconds since the Unix epoch.
using Timestamp = std::uint64_t;

inline constexpr Timestamp kMicrosPerSecond = 1'000'000;

enum class AgentKind : std::uint8_t { human = 0, robot = 1 };

std::string_view to_string(AgentKind kind);

/// Wraps an angle into (-pi, pi].
template <typename Scalar>
Scalar wrap_angle(Scalar a) {
  constexpr Scalar pi = std::numbers::pi_v<Scalar>;
  constexpr Scalar two_pi = 2 * pi;
  a = std::fmod(a, two_pi);
  if (a <= -pi) a += two_pi;
  if (a > pi) a -= two_pi;
  return a;
}

/// Planar state (x, y, theta): world position in meters, heading in (-pi, pi].
struct AgentState {
  double x = 0.0;
  double y = 0.0;
  double theta = 0.0;

  friend bool operator==(const AgentState&, const AgentState&) = default;
};

}  // namespace egotwin
