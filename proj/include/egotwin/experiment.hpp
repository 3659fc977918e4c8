#pragma once

// Manifest-driven experiment pipeline shared by the command-line tool and the
// acceptance suite. Every output lives under the manifest's output directory
// and is a pure function of the manifest (plus an optional seed override).

#include <atomic>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "egotwin/fusion_service.hpp"
#include "egotwin/metrics.hpp"
#include "egotwin/report.hpp"
#include "egotwin/segmentation.hpp"
#include "egotwin/simulator.hpp"

namespace egotwin {

/// Invalid or inconsistent manifest; maps to the configuration exit code.
class ManifestError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A pipeline step ran before the outputs it depends on exist.
class MissingArtifact : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr int kManifestVersion = 1;

struct ServeSettings {
  std::string host = "127.0.0.1";
  std::uint16_t port = 7878;
  std::size_t cadence = kDefaultCadence;
  std::size_t max_clients = 64;
  std::size_t queue_limit = kDefaultQueueLimit;
  Timestamp tolerance_us = kDefaultAlignmentTolerance;
  double replay_rate_hz = 1000.0;  // 0 sends as fast as the socket allows
  std::size_t replay_sessions = 5;
};

struct ExperimentManifest {
  int version = kManifestVersion;
  std::string corpus_config = "corpus.json";  // relative to the manifest's directory
  std::string output_dir = "out";             // relative to the manifest's directory
  std::uint64_t split_seed = 11;
  SplitRatios split;
  std::vector<double> lambda_grid{1e-5, 1e-4, 1e-3, 1e-2, 1e-1};
  std::vector<FeatureConfig> feature_configs{FeatureConfig::pose_only, FeatureConfig::pose_head_gaze,
                                             FeatureConfig::robot_pose_only};
  std::size_t stride = kDefaultStride;
  EnsembleOptions ensemble;
  ServeSettings serve;

  std::filesystem::path base_dir;  // where relative paths resolve; not serialized

  void validate() const;
  std::filesystem::path resolve(const std::string& relative) const;
};

ExperimentManifest parse_manifest(std::string_view json_text, const std::filesystem::path& base_dir = {});
ExperimentManifest load_manifest(const std::filesystem::path& path);
std::string manifest_to_json(const ExperimentManifest& manifest);

/// Where each artifact lives under the output directory.
struct OutputLayout {
  std::filesystem::path root;

  explicit OutputLayout(const ExperimentManifest& m) : root(m.resolve(m.output_dir)) {}
  std::filesystem::path corpus_dir() const { return root / "corpus"; }
  std::filesystem::path sessions_dir() const { return corpus_dir() / "sessions"; }
  std::filesystem::path corpus_index() const { return corpus_dir() / "index.json"; }
  std::filesystem::path split_file() const { return root / "split.json"; }
  std::filesystem::path models_dir() const { return root / "models"; }
  std::filesystem::path model_file(FeatureConfig c) const { return models_dir() / (std::string(to_string(c)) + ".egm"); }
  std::filesystem::path selection_file() const { return models_dir() / "lambda_selection.json"; }
  std::filesystem::path reports_dir() const { return root / "reports"; }
  std::filesystem::path report_json() const { return reports_dir() / "report.json"; }
  std::filesystem::path serve_dir() const { return root / "serve"; }
  std::filesystem::path served_sessions_dir() const { return serve_dir() / "sessions"; }
  std::filesystem::path transcripts_dir() const { return serve_dir() / "transcripts"; }
};

struct CorpusEntry {
  std::uint32_t session_id = 0;
  AgentKind kind = AgentKind::human;
  std::size_t map_variant = 0;
  std::string label;
  std::string file;  // relative to the corpus directory
  std::size_t samples = 0;
};

struct SimulateResult {
  std::size_t human_sessions = 0;
  std::size_t robot_sessions = 0;
  std::uint64_t seed = 0;
  std::vector<CorpusEntry> entries;
};

SimulateResult run_simulate(const ExperimentManifest& manifest, std::optional<std::uint64_t> seed = {});
std::vector<CorpusEntry> load_corpus_index(const ExperimentManifest& manifest);
CorpusConfig load_corpus_config(const ExperimentManifest& manifest);

/// Human and robot sessions are split separately so every split holds both kinds.
struct ExperimentSplit {
  DatasetSplit human;
  DatasetSplit robot;
  std::uint64_t seed = 0;

  std::vector<std::uint32_t> train() const;
  std::vector<std::uint32_t> validation() const;
  std::vector<std::uint32_t> test() const;
};

ExperimentSplit make_split(const std::vector<CorpusEntry>& corpus, const SplitRatios& ratios, std::uint64_t seed);
ExperimentSplit run_split(const ExperimentManifest& manifest, std::optional<std::uint64_t> seed = {});
ExperimentSplit load_split(const ExperimentManifest& manifest);

AgentKind agent_for(FeatureConfig config);

/// Windows of `config` from the listed sessions, in session id order.
std::vector<TrajectoryWindow> load_windows(const ExperimentManifest& manifest, const std::vector<std::uint32_t>& ids,
                                           FeatureConfig config);

struct LambdaSelection {
  FeatureConfig config = FeatureConfig::pose_only;
  std::vector<double> lambdas;
  std::vector<double> validation_ade;
  double selected = 0.0;
  std::size_t train_windows = 0;
  std::size_t validation_windows = 0;
  std::vector<std::string> warnings;
};

std::vector<LambdaSelection> run_train(const ExperimentManifest& manifest);

struct EvalOverrides {
  bool oracle = false;                      // replace every predictor by the truth oracle
  std::optional<std::uint64_t> ensemble_seed;
};

/// Evaluates the test split, writes report.json, report.md and the plots.
EvalReport run_eval(const ExperimentManifest& manifest, const EvalOverrides& overrides = {});
/// Re-renders the markdown table and plots from an existing report.json.
EvalReport run_report(const ExperimentManifest& manifest);

/// Runs the fusion server until `stop` becomes true.
void run_serve(const ExperimentManifest& manifest, const std::atomic<bool>& stop, std::ostream* log,
               const std::function<void(std::uint16_t)>& on_ready = {});

struct ReplayCheck {
  std::uint32_t session_id = 0;
  AgentKind kind = AgentKind::human;
  std::size_t predictions = 0;
  std::size_t offline_predictions = 0;
  bool identical = false;
};

struct ReplayResult {
  std::vector<Transcript> transcripts;
  std::vector<ReplayCheck> checks;
  bool all_identical() const;
};

/// Sessions replayed: the test split, alternating human and robot, first N.
std::vector<std::uint32_t> replay_selection(const ExperimentManifest& manifest);

/// Replays sessions concurrently against a running server, writes transcripts
/// and checks them against the offline pipeline.
ReplayResult run_replay(const ExperimentManifest& manifest, const std::string& host, std::uint16_t port,
                        const std::vector<std::uint32_t>& session_ids);

/// Bitwise equality of prediction sequences.
bool predictions_identical(const std::vector<wire::Prediction>& a, const std::vector<wire::Prediction>& b);

}  // namespace egotwin
