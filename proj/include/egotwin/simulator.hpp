#pragma once

// Synthetic corridor trials.
//
// Humans are kinematic unicycles that pure-pursue a lane-offset route through
// the corridor graph, pushed apart by a social-repulsion term. Head and gaze
// yaw are derived afterwards from the body heading a fixed lead time in the
// future, so head turns precede body turns and gaze precedes head. Robots
// follow filleted waypoint paths with an acceleration-limited speed profile.

#include <Eigen/Core>

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "egotwin/sync.hpp"

namespace egotwin {

class GenerationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed map or corpus file; the message names the offending location.
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct CorridorEdge {
  std::size_t a = 0;
  std::size_t b = 0;
  double width = 2.0;
};

struct Obstacle {
  Eigen::Vector2d center = Eigen::Vector2d::Zero();
  double radius = 0.3;
};

/// Axis-aligned corridors between junction nodes. A corridor covers its
/// centerline segment widened by half its width on every side.
struct CorridorMap {
  std::string name;
  std::vector<Eigen::Vector2d> nodes;
  std::vector<CorridorEdge> edges;
  std::vector<Obstacle> obstacles;
  std::vector<std::size_t> patrol_route;  // closed node loop for robot runs; may be empty

  /// Throws GenerationError on a violated invariant.
  void validate() const;
  bool contains(const Eigen::Vector2d& p, double margin = 0.0) const;
  /// Nearest point of the corridor union shrunk by `margin`.
  Eigen::Vector2d clamp_inside(const Eigen::Vector2d& p, double margin) const;
  std::vector<std::size_t> neighbors(std::size_t node) const;
  const CorridorEdge* edge_between(std::size_t a, std::size_t b) const;
};

CorridorMap parse_map(std::string_view json_text);
CorridorMap load_map(const std::filesystem::path& path);
std::string map_to_json(const CorridorMap& map);

/// A 3x3 grid of corridors with the outer ring as patrol route.
CorridorMap default_corridor_map();

struct HumanWalkerParams {
  double preferred_speed = 1.3;     // m/s
  double head_lead = 0.4;           // s, head yaw leads body heading
  double gaze_lead = 0.8;           // s, gaze yaw leads body heading
  double heading_noise_std = 0.04;  // rad, stationary std of steering wobble
  double speed_noise_std = 0.05;    // m/s
  double head_noise_std = 0.03;     // rad
  double gaze_noise_std = 0.05;     // rad
  double avoidance_radius = 1.0;    // m
  double lane_offset_mean = 0.3;    // m to the right of the centerline
  double lane_offset_std = 0.15;    // m
  double lookahead = 1.2;           // m, pure-pursuit distance
  double max_yaw_rate = 2.0;        // rad/s
  double corner_slowdown = 0.3;     // fractional speed drop at a full right angle
  double eye_height = 1.65;         // m
  double gaze_pitch = -0.15;        // rad, negative looks down
  double glance_rate = 0.0;         // 1/s, gaze excursions unrelated to the route
  std::optional<std::size_t> start_node;
  std::optional<std::size_t> first_target;
  std::uint64_t seed = 1;

  void validate() const;
};

struct RobotRunParams {
  std::vector<Eigen::Vector2d> waypoints;
  double cruise_speed = 0.9;        // m/s
  double max_accel = 0.5;           // m/s^2
  double max_yaw_rate = 0.6;        // rad/s
  double corner_radius = 0.8;       // m
  double position_noise_std = 0.0;  // m
  double mount_height = 0.9;        // m
  std::uint64_t seed = 1;

  void validate() const;
};

struct SessionClock {
  Timestamp start_us = 1'700'000'000'000'000ULL;
  Timestamp jitter_us = 0;  // uniform timestamp jitter on each sample
  unsigned rate_hz = 10;
};

Session simulate_human(const CorridorMap& map, const HumanWalkerParams& params, double duration_s,
                       const std::vector<HumanWalkerParams>& others = {}, std::uint32_t session_id = 1,
                       const SessionClock& clock = {});

/// Simulates walkers that share the corridor concurrently; one session each.
std::vector<Session> simulate_crowd(const CorridorMap& map, const std::vector<HumanWalkerParams>& walkers,
                                    double duration_s, std::uint32_t first_session_id = 1,
                                    const SessionClock& clock = {});

Session simulate_robot(const CorridorMap& map, const RobotRunParams& params, double duration_s,
                       std::uint32_t session_id = 1, const SessionClock& clock = {});

struct CorpusConfig {
  std::uint64_t seed = 2024;
  std::size_t human_sessions = 20;
  std::size_t robot_sessions = 10;
  double session_duration_s = 240.0;
  std::size_t walkers_per_group = 2;
  std::size_t map_variants = 3;
  double corner_jitter_m = 0.5;
  double width_jitter_m = 0.2;
  double speed_spread = 0.1;  // std of per-walker preferred speed around the template
  Timestamp timestamp_jitter_us = 2'000;
  HumanWalkerParams human;
  RobotRunParams robot;  // waypoints come from the map's patrol route
  std::string map_path;  // empty: built-in default map

  void validate() const;
};

CorpusConfig parse_corpus_config(std::string_view json_text);
std::string corpus_config_to_json(const CorpusConfig& config);

/// Perturbs node coordinates (per distinct x and y line, so corridors stay
/// axis-aligned) and widths.
CorridorMap make_map_variant(const CorridorMap& base, double corner_jitter, double width_jitter,
                             std::uint64_t seed);

struct GeneratedSession {
  Session session;
  std::size_t map_variant = 0;
};

struct Corpus {
  CorridorMap base_map;
  std::vector<CorridorMap> variants;
  std::vector<GeneratedSession> sessions;
};

/// Reproducible: the same config and map always produce identical sessions.
Corpus generate_corpus(const CorpusConfig& config, const CorridorMap& base_map);

}  // namespace egotwin
