#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "egotwin/predictors.hpp"
#include "egotwin/types.hpp"

namespace egotwin {

class MetricError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Euclidean (x, y) error at every step.
std::vector<double> displacement_curve(std::span<const AgentState> pred, std::span<const AgentState> truth);
double ade(std::span<const AgentState> pred, std::span<const AgentState> truth);
double fde(std::span<const AgentState> pred, std::span<const AgentState> truth);

inline constexpr double kBandwidthFloor = 1e-3;  // m
inline constexpr double kDensityFloor = 1e-300;

struct KdeOptions {
  std::optional<double> bandwidth;  // per dimension; Scott's rule when absent
  double bandwidth_floor = kBandwidthFloor;
  double density_floor = kDensityFloor;
};

struct KdeResult {
  double nll = 0.0;                 // mean over timesteps, nats
  std::size_t floored_steps = 0;    // timesteps where a bandwidth hit the floor
  std::size_t density_floored = 0;  // timesteps where the density hit its floor
};

/// Per-timestep 2-D product-Gaussian KDE over the samples' (x, y); NLL of the
/// truth averaged over timesteps. Scott's rule: h_d = K^(-1/6) * std_d (ddof 1).
KdeResult kde_nll(std::span<const std::vector<AgentState>> samples, std::span<const AgentState> truth,
                  const KdeOptions& options = {});

/// Log density of a 2-D product Gaussian kernel estimate at `point`.
double kde_log_density(std::span<const Eigen::Vector2d> samples, const Eigen::Vector2d& point, double hx, double hy);

struct EvalOptions {
  EnsembleOptions ensemble;
  KdeOptions kde;
  bool with_kde = true;
};

struct ConfigResult {
  std::string name;
  std::string predictor;
  double ade = 0.0;
  double fde = 0.0;
  double kde_nll = 0.0;
  std::size_t window_count = 0;
  std::vector<double> curve;         // mean displacement per horizon step
  double window_ade_variance = 0.0;  // population variance of per-window ADE
  double window_ade_std = 0.0;
  std::size_t kde_floored_steps = 0;
  std::size_t kde_density_floored = 0;
  double fde_ade_ratio() const { return fde / ade; }
};

/// Windows are reduced in order, so sums are reproducible.
ConfigResult evaluate(const Predictor& predictor, std::span<const TrajectoryWindow> windows,
                      const EvalOptions& options = {});

}  // namespace egotwin
