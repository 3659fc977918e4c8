#pragma once

// Live fusion server and replay clients.
//
// Each connection gets a reader thread that reassembles frames into a bounded
// queue and a worker that handles them in order: handshake, session
// lifecycle, raw persistence, streaming alignment and periodic predictions
// sent back on the same socket. Models are shared read-only; the completed
// session registry is the only structure written by several connections.

#include <atomic>
#include <chrono>
#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <ostream>
#include <set>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "egotwin/predictors.hpp"
#include "egotwin/sync.hpp"
#include "egotwin/wire_protocol.hpp"

namespace egotwin {

class ServiceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr std::size_t kDefaultCadence = 5;
inline constexpr std::size_t kDefaultQueueLimit = 1000;

struct ServerConfig {
  std::string host = "127.0.0.1";
  std::uint16_t port = 0;  // 0 picks a free port
  AlignmentConfig alignment;
  std::filesystem::path human_model;
  std::filesystem::path robot_model;
  std::size_t cadence = kDefaultCadence;  // predict every N aligned frames once the buffer is full
  std::filesystem::path storage_dir = "sessions";
  std::size_t max_clients = 64;
  std::size_t queue_limit = kDefaultQueueLimit;  // frames buffered per connection before it is dropped
  std::chrono::microseconds frame_delay{0};     // artificial per-frame work, for backpressure tests

  void validate() const;
};

struct CompletedSession {
  std::uint32_t session_id = 0;
  AgentKind kind = AgentKind::human;
  std::filesystem::path file;
  bool incomplete = false;
  std::size_t samples = 0;
  std::size_t predictions = 0;
};

std::filesystem::path session_file_name(std::uint32_t session_id);

/// Thread-safe JSON-lines event log.
class EventLog {
 public:
  explicit EventLog(std::ostream* out = nullptr) : out_(out) {}
  void write(const std::string& event, const std::map<std::string, std::string>& fields = {});
  void write_raw(const std::string& line);

 private:
  std::ostream* out_;
  std::mutex mu_;
};

class FusionServer {
 public:
  /// Loads both model files; a missing or invalid model is fatal here.
  explicit FusionServer(ServerConfig config, std::ostream* log = nullptr);
  FusionServer(ServerConfig config, RidgeModel human_model, RidgeModel robot_model, std::ostream* log = nullptr);
  ~FusionServer();

  FusionServer(const FusionServer&) = delete;
  FusionServer& operator=(const FusionServer&) = delete;

  /// Binds and starts accepting. Throws ServiceError when the port is unavailable.
  void start();
  /// Closes the listener and every connection, then joins all threads.
  void stop();
  bool running() const { return running_.load(); }
  std::uint16_t port() const { return port_; }

  std::vector<CompletedSession> completed() const;
  std::size_t active_connections() const { return active_.load(); }

 private:
  struct Connection;
  void accept_loop();
  void reap_finished();
  void register_completed(const CompletedSession& session);
  bool claim_session(std::uint32_t id);
  void release_session(std::uint32_t id);
  void run_reader(const std::shared_ptr<Connection>& conn);
  void run_worker(const std::shared_ptr<Connection>& conn);

  ServerConfig config_;
  std::shared_ptr<const RidgeModel> human_model_;
  std::shared_ptr<const RidgeModel> robot_model_;
  EventLog log_;
  int listen_fd_ = -1;
  std::uint16_t port_ = 0;
  std::atomic<bool> running_{false};
  std::atomic<bool> stopping_{false};
  std::atomic<std::size_t> active_{0};
  std::uint64_t next_connection_id_ = 1;
  std::thread accept_thread_;
  mutable std::mutex connections_mu_;
  std::vector<std::shared_ptr<Connection>> connections_;
  mutable std::mutex registry_mu_;
  std::vector<CompletedSession> completed_;
  std::set<std::uint32_t> live_ids_;
};

/// Predictions the offline pipeline (batch resample, 20-frame windows at the
/// server's cadence, predict) produces for a persisted session.
std::vector<wire::Prediction> offline_predictions(const Session& session, const RidgeModel& model,
                                                  const AlignmentConfig& alignment = {},
                                                  std::size_t cadence = kDefaultCadence);

struct ClientOptions {
  std::string host = "127.0.0.1";
  std::uint16_t port = 0;
  double rate_hz = 10.0;  // <= 0 sends as fast as possible
  /// Stop after this many session frames (SessionStart counts) and drop the connection.
  std::optional<std::size_t> disconnect_after;
};

struct ReceivedPrediction {
  wire::Prediction message;
  std::int64_t receipt_us = 0;  // since the client connected
};

struct Transcript {
  std::uint32_t session_id = 0;
  AgentKind kind = AgentKind::human;
  std::vector<std::uint8_t> sent;          // every byte written, handshake included
  std::vector<std::uint8_t> session_sent;  // the session frames only
  std::size_t frames_sent = 0;
  std::vector<ReceivedPrediction> predictions;
  std::vector<std::string> unexpected;  // messages other than predictions after the handshake
  double wall_seconds = 0.0;
};

/// Replays a human session through the wire protocol.
Transcript headset_client(const ClientOptions& options, const Session& session);
/// Replays a robot session through the wire protocol.
Transcript robot_client(const ClientOptions& options, const Session& session);
/// Dispatches on the session kind.
Transcript replay_session(const ClientOptions& options, const Session& session);

std::string transcript_to_json(const Transcript& transcript);
Transcript transcript_from_json(std::string_view text);

}  // namespace egotwin
