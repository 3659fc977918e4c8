#pragma once

// Trajectory predictors over 20-frame observed windows.
//
// Everything learned works in the body frame at the end of observation: the
// origin is the last observed position and the x axis is the walking
// direction over the last five frames. Features and targets are expressed
// there, which makes the learned map invariant to where and in which
// direction a window happens to lie.

#include <Eigen/Cholesky>
#include <Eigen/Core>

#include <cstdint>
#include <filesystem>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "egotwin/random.hpp"
#include "egotwin/segmentation.hpp"
#include "egotwin/types.hpp"

namespace egotwin {

inline constexpr std::size_t kPoseFeaturesPerFrame = 4;  // dx, dy, speed, heading delta
inline constexpr std::size_t kCueFeaturesPerFrame = 6;   // + head minus body, gaze minus body
inline constexpr std::size_t kOutputDimension = 2 * kHorizonFrames;

/// Frames used for the anchor heading and the constant-velocity estimate.
inline constexpr std::size_t kMotionFrames = 5;
/// Below this displacement (m) over kMotionFrames the anchor falls back to the pose yaw.
inline constexpr double kMinAnchorMotion = 0.01;
/// Below this per-frame displacement (m) a frame's motion heading is carried over.
inline constexpr double kMinStepMotion = 1e-3;

class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ModelFormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::size_t feature_dimension(FeatureConfig config);

/// True when a window built for `window_config` carries every channel `requested` reads.
bool features_compatible(FeatureConfig window_config, FeatureConfig requested);

/// Planar pose of the body frame in world coordinates.
struct BodyFrame {
  Eigen::Vector2d origin = Eigen::Vector2d::Zero();
  double heading = 0.0;

  Eigen::Vector2d to_body(const Eigen::Vector2d& world) const;
  Eigen::Vector2d to_world(const Eigen::Vector2d& body) const;
};

BodyFrame body_frame(std::span<const AlignedFrame> observed);

/// Walking direction of each frame from consecutive positions; frames that
/// barely move carry the previous direction, and leading ones take the first
/// defined direction (or the body frame heading when nothing moves).
std::vector<double> motion_headings(std::span<const AlignedFrame> observed, double fallback);

/// Throws ConfigurationError when the window does not carry the requested channels.
Eigen::VectorXd extract_features(const TrajectoryWindow& window, FeatureConfig config);

/// Future positions relative to the body frame, interleaved x0, y0, x1, y1, ...
Eigen::VectorXd future_targets(const TrajectoryWindow& window);

/// World-frame states from body-frame displacements; headings follow the
/// finite differences of consecutive predicted positions.
std::vector<AgentState> states_from_body(const TrajectoryWindow& window, const Eigen::VectorXd& body_xy);

/// Minimizer of ||X W - Y||^2 + lambda ||W||^2 via the normal equations.
template <typename DerivedX, typename DerivedY>
Eigen::Matrix<typename DerivedX::Scalar, Eigen::Dynamic, Eigen::Dynamic> solve_ridge(
    const Eigen::MatrixBase<DerivedX>& x, const Eigen::MatrixBase<DerivedY>& y, typename DerivedX::Scalar lambda) {
  using Scalar = typename DerivedX::Scalar;
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  if (!(lambda >= Scalar(0))) throw NumericError("ridge lambda must be >= 0");
  if (x.rows() != y.rows()) throw NumericError("ridge design and target row counts differ");
  Matrix normal = x.transpose() * x;
  normal.diagonal().array() += lambda;
  const Eigen::LDLT<Matrix> ldlt(normal);
  if (ldlt.info() != Eigen::Success || !ldlt.isPositive() || ldlt.rcond() < Scalar(1e-14)) {
    throw NumericError("ridge normal matrix is singular; use lambda > 0");
  }
  Matrix w = ldlt.solve(x.transpose() * y);
  if (!w.allFinite()) throw NumericError("ridge solution is not finite");
  return w;
}

struct RidgeModel {
  FeatureConfig config = FeatureConfig::pose_only;
  double lambda = 1e-3;
  std::size_t feature_dim = 0;       // raw feature count before dropping degenerate dims
  std::vector<std::uint32_t> kept;   // raw indices that survived standardization
  Eigen::VectorXd mean;              // over kept dims
  Eigen::VectorXd scale;             // std over kept dims, all > 0
  Eigen::MatrixXd weights;           // (kept + 1) x kOutputDimension, bias row last
  std::size_t training_windows = 0;
  std::vector<std::string> warnings;

  /// Standardized design row including the trailing bias entry.
  Eigen::VectorXd design_row(const Eigen::VectorXd& features) const;
  void check() const;
};

/// Dims with std below this are treated as constant and dropped.
inline constexpr double kDegenerateStd = 1e-12;

RidgeModel fit_ridge(std::span<const TrajectoryWindow> windows, FeatureConfig config, double lambda = 1e-3);

/// Fit on a precomputed standardized design; exposed for the solver checks.
struct RidgeProblem {
  Eigen::MatrixXd design;   // standardized features plus bias column
  Eigen::MatrixXd targets;  // kOutputDimension columns
  RidgeModel skeleton;      // normalization filled, weights empty
};
RidgeProblem build_ridge_problem(std::span<const TrajectoryWindow> windows, FeatureConfig config);

std::vector<AgentState> predict(const RidgeModel& model, const TrajectoryWindow& window);

std::vector<std::uint8_t> encode_model(const RidgeModel& model);
RidgeModel decode_model(std::span<const std::uint8_t> bytes);
void save_model(const std::filesystem::path& path, const RidgeModel& model);
RidgeModel load_model(const std::filesystem::path& path);

/// Common interface so evaluation does not care what produces the forecast.
class Predictor {
 public:
  virtual ~Predictor() = default;
  virtual std::string name() const = 0;
  virtual std::vector<AgentState> predict(const TrajectoryWindow& window) const = 0;
};

class ConstantVelocityPredictor final : public Predictor {
 public:
  std::string name() const override { return "constant_velocity"; }
  std::vector<AgentState> predict(const TrajectoryWindow& window) const override;
};

class RidgePredictor final : public Predictor {
 public:
  explicit RidgePredictor(RidgeModel model) : model_(std::move(model)) {}
  std::string name() const override;
  std::vector<AgentState> predict(const TrajectoryWindow& window) const override;
  const RidgeModel& model() const { return model_; }

 private:
  RidgeModel model_;
};

/// Returns the window's own future. Used to check the evaluation plumbing.
class TruthPredictor final : public Predictor {
 public:
  std::string name() const override { return "truth_oracle"; }
  std::vector<AgentState> predict(const TrajectoryWindow& window) const override;
};

std::vector<AgentState> constant_velocity_predict(const TrajectoryWindow& window);

struct EnsembleOptions {
  std::size_t count = 20;
  double sigma = 0.1;  // jitter std: m for offset, m/s for velocity error, rad for yaw channels
  std::uint64_t seed = 7;
};

/// Copy of the window shifted by a random offset, tilted by a random velocity
/// error and with head and gaze yaw rotated, each component N(0, sigma^2).
TrajectoryWindow jitter_window(const TrajectoryWindow& window, double sigma, Rng& rng);

/// `count` forecasts from independently jittered copies of the observed
/// window. The noise stream depends only on the seed and the window identity.
std::vector<std::vector<AgentState>> ensemble_sample(const Predictor& predictor, const TrajectoryWindow& window,
                                                     const EnsembleOptions& options);

}  // namespace egotwin
