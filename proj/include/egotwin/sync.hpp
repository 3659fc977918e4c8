#pragma once

#include <Eigen/Core>
#include <Eigen/Geometry>

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "egotwin/types.hpp"
#include "egotwin/wire_protocol.hpp"

namespace egotwin {

inline constexpr Timestamp kDefaultAlignmentTolerance = 50'000;  // half a 10 Hz period
inline constexpr Timestamp kGridInterval10Hz = 100'000;
/// Gap runs longer than this split a session; shorter ones are bridged.
inline constexpr std::size_t kMaxBridgedGap = 3;

struct PoseSample {
  Timestamp t = 0;
  Eigen::Vector3d position = Eigen::Vector3d::Zero();
  Eigen::Quaterniond orientation = Eigen::Quaterniond::Identity();
};

struct GazeSample {
  Timestamp t = 0;
  Eigen::Vector3d direction_local = Eigen::Vector3d::UnitX();
};

struct OdometrySample {
  Timestamp t = 0;
  double linear_speed = 0.0;
  double yaw_rate = 0.0;
};

/// Out-of-order or duplicate timestamp. Not fatal to the session.
class OrderingError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class SessionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Sample whose timestamp is nearest to `target` within `tolerance`; ties go
/// to the earlier sample. `stream` must be sorted by strictly increasing t.
template <typename Sample>
const Sample* align_nearest(std::span<const Sample> stream, Timestamp target, Timestamp tolerance) {
  auto it = std::lower_bound(stream.begin(), stream.end(), target,
                             [](const Sample& s, Timestamp t) { return s.t < t; });
  const Sample* best = nullptr;
  Timestamp best_dist = 0;
  if (it != stream.begin()) {
    best = &*std::prev(it);
    best_dist = target - best->t;
  }
  if (it != stream.end()) {
    const Timestamp d = it->t - target;
    if (best == nullptr || d < best_dist) {
      best = &*it;
      best_dist = d;
    }
  }
  if (best == nullptr || best_dist > tolerance) return nullptr;
  return best;
}

/// One recording of one agent. Streams are append-only while recording and
/// immutable once end() has been called.
class Session {
 public:
  Session(std::uint32_t session_id, AgentKind kind, std::string label = {});

  std::uint32_t id() const { return id_; }
  AgentKind kind() const { return kind_; }
  const std::string& label() const { return label_; }

  void ingest(const wire::HeadsetSample& sample);
  void ingest(const wire::RobotSample& sample);
  void ingest_pose(const PoseSample& sample);
  void ingest_gaze(const GazeSample& sample);

  void end(bool incomplete = false);
  bool ended() const { return ended_; }
  bool incomplete() const { return incomplete_; }

  std::span<const PoseSample> poses() const { return poses_; }
  std::span<const GazeSample> gazes() const { return gazes_; }
  std::span<const OdometrySample> odometry() const { return odometry_; }

  std::optional<Timestamp> start_time() const;
  std::optional<Timestamp> end_time() const;
  std::size_t ordering_errors() const { return ordering_errors_; }

  wire::SessionStart start_message() const { return {id_, kind_, label_}; }

  /// The session as wire messages, SessionStart .. SessionEnd. Human sessions
  /// need matching pose/gaze timestamps to be representable.
  std::vector<wire::Message> to_messages() const;

 private:
  void require_open() const;
  template <typename Sample>
  void check_order(const std::vector<Sample>& stream, Timestamp t, const char* name);

  std::uint32_t id_;
  AgentKind kind_;
  std::string label_;
  std::vector<PoseSample> poses_;
  std::vector<GazeSample> gazes_;
  std::vector<OdometrySample> odometry_;
  bool ended_ = false;
  bool incomplete_ = false;
  std::size_t ordering_errors_ = 0;
};

struct AlignedFrame {
  Timestamp t = 0;
  AgentState state;
  Eigen::Vector3d position = Eigen::Vector3d::Zero();  // world position incl. height
  std::optional<Eigen::Vector3d> gaze_world;           // humans only
  std::optional<Timestamp> pose_source;
  std::optional<Timestamp> gaze_source;
  bool gap = false;              // mandatory stream missing; data carried forward
  bool heading_carried = false;  // degenerate heading, previous heading reused
};

struct ResampleStats {
  std::size_t gap_frames = 0;
  std::size_t heading_carried = 0;
  std::string diagnostic;
};

struct ResampleResult {
  std::vector<AlignedFrame> frames;
  ResampleStats stats;
};

struct AlignmentConfig {
  Timestamp interval = kGridInterval10Hz;
  Timestamp tolerance = kDefaultAlignmentTolerance;

  static AlignmentConfig at_rate(unsigned rate_hz, Timestamp tolerance = kDefaultAlignmentTolerance);
};

/// Uniform grid from the first to the last common timestamp of the mandatory
/// streams (pose; plus gaze for humans). Requires an ended session.
ResampleResult resample(const Session& session, const AlignmentConfig& config = {});

/// Incremental twin of resample() for live message streams. A grid point is
/// emitted as soon as a sample at or after it arrives, and the emitted frames
/// equal the batch result for the same accepted samples.
class StreamingAligner {
 public:
  StreamingAligner(AgentKind kind, AlignmentConfig config = {});

  /// Throws OrderingError (and counts it) for non-increasing timestamps.
  std::vector<AlignedFrame> push(const wire::HeadsetSample& sample);
  std::vector<AlignedFrame> push(const wire::RobotSample& sample);

  std::size_t ordering_errors() const { return ordering_errors_; }
  const ResampleStats& stats() const { return stats_; }

 private:
  struct Latest {
    PoseSample pose;
    std::optional<GazeSample> gaze;
  };
  std::vector<AlignedFrame> advance(const Latest& sample);

  AgentKind kind_;
  AlignmentConfig config_;
  std::optional<Latest> last_;
  std::optional<Timestamp> grid_start_;
  std::uint64_t next_index_ = 0;
  std::optional<AlignedFrame> prev_frame_;
  std::size_t ordering_errors_ = 0;
  ResampleStats stats_;
};

/// Builds the frame at grid time t from the matched samples (null when absent).
AlignedFrame make_aligned_frame(Timestamp t, AgentKind kind, const PoseSample* pose,
                                const GazeSample* gaze, const AlignedFrame* previous,
                                ResampleStats& stats);

/// Splits at gap runs longer than `max_bridged`, dropping those runs.
std::vector<std::vector<AlignedFrame>> split_on_long_gaps(std::span<const AlignedFrame> frames,
                                                          std::size_t max_bridged = kMaxBridgedGap);

// Session files hold the session's wire frames verbatim: SessionStart, the
// samples, SessionEnd.
std::vector<std::uint8_t> encode_session(const Session& session);
Session decode_session(std::span<const std::uint8_t> bytes);
void write_session_file(const std::filesystem::path& path, const Session& session);
Session read_session_file(const std::filesystem::path& path);
std::vector<std::uint8_t> read_file_bytes(const std::filesystem::path& path);
void write_file_bytes(const std::filesystem::path& path, std::span<const std::uint8_t> bytes);

}  // namespace egotwin
