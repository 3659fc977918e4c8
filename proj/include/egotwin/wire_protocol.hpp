#pragma once

// Binary framing between headset/robot clients and the fusion server.
//
//   +----------------+---------+------------------+
//   | length (u32le) | type u8 | payload          |
//   +----------------+---------+------------------+
//
// `length` counts the type byte plus the payload. All integers and IEEE-754
// doubles are little-endian. Quaternions are serialized (w, x, y, z).

#include <Eigen/Core>
#include <Eigen/Geometry>

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "egotwin/types.hpp"

namespace egotwin::wire {

enum class MsgType : std::uint8_t {
  headset_sample = 0x01,
  robot_sample = 0x02,
  prediction = 0x03,
  session_start = 0x10,
  session_end = 0x11,
  hello = 0x7F,
};

inline constexpr std::size_t kHeaderBytes = 4;
inline constexpr std::size_t kDefaultMaxFrameBytes = 64 * 1024;
/// Tolerance on unit-norm fields (quaternions, gaze) at encode and decode.
inline constexpr double kUnitNormTolerance = 1e-9;

struct Hello {};

struct SessionStart {
  std::uint32_t session_id = 0;
  AgentKind agent_kind = AgentKind::human;
  std::string label;  // corridor / variant label, at most 1024 bytes
};

struct SessionEnd {
  std::uint32_t session_id = 0;
  bool incomplete = false;  // set by the server when the client vanished
};

struct HeadsetSample {
  Timestamp timestamp_us = 0;
  std::uint32_t session_id = 0;
  Eigen::Vector3d position = Eigen::Vector3d::Zero();
  Eigen::Quaterniond orientation = Eigen::Quaterniond::Identity();
  Eigen::Vector3d gaze_local = Eigen::Vector3d::UnitX();
};

struct RobotSample {
  Timestamp timestamp_us = 0;
  std::uint32_t session_id = 0;
  Eigen::Vector3d position = Eigen::Vector3d::Zero();
  Eigen::Quaterniond orientation = Eigen::Quaterniond::Identity();
  double linear_speed = 0.0;
  double yaw_rate = 0.0;
};

struct Prediction {
  Timestamp timestamp_us = 0;  // grid time of the last observed frame
  std::uint32_t session_id = 0;
  std::vector<AgentState> states;
};

using Message = std::variant<Hello, SessionStart, SessionEnd, HeadsetSample, RobotSample, Prediction>;

bool operator==(const Hello&, const Hello&);
bool operator==(const SessionStart&, const SessionStart&);
bool operator==(const SessionEnd&, const SessionEnd&);
bool operator==(const HeadsetSample&, const HeadsetSample&);
bool operator==(const RobotSample&, const RobotSample&);
bool operator==(const Prediction&, const Prediction&);

MsgType type_of(const Message& m);

/// Thrown by encode() when a message violates its field invariants.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Thrown by decode() on malformed or hostile input. The connection that
/// produced the bytes is not recoverable; there is no resynchronization.
class ProtocolError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::vector<std::uint8_t> encode(const Message& m);
void encode_into(const Message& m, std::vector<std::uint8_t>& out);

struct Decoded {
  Message message;
  std::size_t consumed = 0;                  // bytes of the frame just decoded
  std::span<const std::uint8_t> remaining;  // unconsumed suffix of the input
};

/// The input is a strict prefix of a frame; nothing was consumed.
struct NeedMoreBytes {
  std::size_t have = 0;
  std::optional<std::size_t> frame_bytes;  // total size once the header is known
};

using DecodeResult = std::variant<Decoded, NeedMoreBytes>;

struct DecoderLimits {
  std::size_t max_frame_bytes = kDefaultMaxFrameBytes;
};

DecodeResult decode(std::span<const std::uint8_t> bytes, const DecoderLimits& limits = {});

/// Accumulates bytes from a stream transport and yields whole frames, keeping
/// the exact frame bytes alongside the decoded message.
class FrameAssembler {
 public:
  struct Frame {
    Message message;
    std::vector<std::uint8_t> bytes;
  };

  explicit FrameAssembler(DecoderLimits limits = {}) : limits_(limits) {}

  void feed(std::span<const std::uint8_t> chunk);
  /// Next complete frame, or nullopt if more bytes are needed. Throws ProtocolError.
  std::optional<Frame> next();
  std::size_t buffered() const { return buffer_.size() - offset_; }

 private:
  DecoderLimits limits_;
  std::vector<std::uint8_t> buffer_;
  std::size_t offset_ = 0;
};

}  // namespace egotwin::wire
