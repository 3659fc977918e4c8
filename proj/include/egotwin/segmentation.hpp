#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string_view>
#include <vector>

#include "egotwin/sync.hpp"

namespace egotwin {

inline constexpr std::size_t kObservedFrames = 20;
inline constexpr std::size_t kHorizonFrames = 40;
inline constexpr std::size_t kDefaultStride = 10;

/// Which channels a window exposes. Gaze is stripped from anything but
/// pose_head_gaze when the window is built.
enum class FeatureConfig : std::uint8_t { pose_only = 0, pose_head_gaze = 1, robot_pose_only = 2 };

std::string_view to_string(FeatureConfig config);
FeatureConfig feature_config_from_string(std::string_view name);

class ConfigurationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct TrajectoryWindow {
  std::uint32_t session_id = 0;
  std::size_t start_index = 0;  // grid index of the first observed frame
  FeatureConfig config = FeatureConfig::pose_only;
  std::vector<AlignedFrame> observed;
  std::vector<AlignedFrame> future;
};

struct SegmentOptions {
  std::size_t observed = kObservedFrames;
  std::size_t horizon = kHorizonFrames;
  std::size_t stride = kDefaultStride;
};

/// Windows at every stride offset inside each gap-free run of `frames`.
std::vector<TrajectoryWindow> segment(std::span<const AlignedFrame> frames, std::uint32_t session_id,
                                      FeatureConfig config, const SegmentOptions& options = {});

/// Applies the structural channel mask of `config` to a frame copy.
AlignedFrame mask_frame(const AlignedFrame& frame, FeatureConfig config);

struct SplitRatios {
  double train = 0.8;
  double validation = 0.1;
  double test = 0.1;
};

struct DatasetSplit {
  std::vector<std::uint32_t> train;
  std::vector<std::uint32_t> validation;
  std::vector<std::uint32_t> test;
  SplitRatios ratios;
  std::uint64_t seed = 0;
};

/// Seeded shuffle then contiguous partition; validation and test sizes are
/// rounded to the nearest session and training takes the remainder.
DatasetSplit split_sessions(std::span<const std::uint32_t> session_ids, const SplitRatios& ratios,
                            std::uint64_t seed);

/// Fisher-Yates with an explicit bounded draw so the order is identical
/// across standard library implementations.
template <typename T>
void deterministic_shuffle(std::vector<T>& items, std::uint64_t seed);

std::uint64_t splitmix64(std::uint64_t& state);

template <typename T>
void deterministic_shuffle(std::vector<T>& items, std::uint64_t seed) {
  std::uint64_t state = seed;
  for (std::size_t i = items.size(); i > 1; --i) {
    const std::uint64_t bound = i;
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
    std::uint64_t r = 0;
    do {
      r = splitmix64(state);
    } while (r >= limit);
    std::swap(items[i - 1], items[static_cast<std::size_t>(r % bound)]);
  }
}

}  // namespace egotwin
