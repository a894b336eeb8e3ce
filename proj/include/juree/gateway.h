//
// Copyright 2026 The JurEE Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//

// Real-time moderation gateway.
//
//   POST /v1/moderate                 score texts, return verdicts
//   GET  /v1/triage/next?limit=k      uncertain candidates awaiting review
//   POST /v1/triage/{id}/label        record a review decision
//   GET  /healthz                     200 when the backend is reachable
//   GET  /metricsz                    request counts, latency histogram,
//                                     per-class trigger counts
//
// Scoring goes through a RequestBatcher that coalesces concurrent requests
// into backend calls of at most max_batch texts.

#ifndef JUREE_GATEWAY_H_
#define JUREE_GATEWAY_H_

#include <array>
#include <atomic>
#include <chrono>
#include <condition_variable>
#include <cstdint>
#include <deque>
#include <exception>
#include <filesystem>
#include <future>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include "juree/corpus.h"
#include "juree/error.h"
#include "juree/scorer.h"
#include "juree/taxonomy.h"
#include "juree/triage.h"

namespace httplib {
class Server;
}

namespace juree {

// The batcher's queue is full.
class Overloaded : public Error {
 public:
  using Error::Error;
};

struct GatewayConfig {
  std::string taxonomy_path;  // empty: built-in default taxonomy
  std::string backend = "reference";
  std::string host = "127.0.0.1";
  int port = 8080;
  size_t max_batch = 128;
  double batch_window_ms = 2.0;
  size_t max_queue_depth = 4096;  // pending texts before 429
  size_t max_text_bytes = 8192;
  size_t threads = 32;
  std::string triage_queue_path;  // empty: triage endpoints return 404
  std::string dataset_path;       // review store, JSONL
  std::string bearer_token;       // empty: no auth

  // Keys as in the struct; unknown keys are rejected.
  static GatewayConfig FromJson(std::string_view json);
  // As FromJson; relative paths are resolved against the file's directory.
  static GatewayConfig LoadFile(const std::string& path);
};

struct BatcherOptions {
  size_t max_batch = 128;
  std::chrono::microseconds window{2000};
  size_t max_queue_depth = 4096;
};

// Coalesces texts from concurrent callers into backend calls. A worker
// thread takes up to max_batch pending texts, waits up to `window` for more
// when the batch is not full, calls the backend once and hands each caller
// its own slice, in order. A request larger than max_batch is spread over
// consecutive calls.
class RequestBatcher {
 public:
  RequestBatcher(std::shared_ptr<InferenceBackend> backend, BatcherOptions options);
  ~RequestBatcher();

  RequestBatcher(const RequestBatcher&) = delete;
  RequestBatcher& operator=(const RequestBatcher&) = delete;

  // Blocks until every text is scored. Throws Overloaded when accepting the
  // texts would exceed max_queue_depth, BackendError on backend failure.
  std::vector<ScoreVector> Score(std::vector<std::string> texts);

  uint64_t backend_calls() const { return backend_calls_.load(); }
  size_t queue_depth() const;

 private:
  struct Request {
    std::vector<std::string> texts;
    std::vector<ScoreVector> results;
    size_t taken = 0;
    size_t done = 0;
    std::exception_ptr error;
    std::promise<void> finished;
  };
  struct Slice {
    std::shared_ptr<Request> request;
    size_t offset;
    size_t count;
  };

  void Run();
  // Moves pending texts into the batch until it holds max_batch. Requires mu_.
  void TakeLocked(std::vector<Slice>& slices, size_t& batch_size);

  std::shared_ptr<InferenceBackend> backend_;
  BatcherOptions options_;
  mutable std::mutex mu_;
  std::condition_variable cv_;
  std::deque<std::shared_ptr<Request>> queue_;
  size_t pending_texts_ = 0;
  bool stopping_ = false;
  std::atomic<uint64_t> backend_calls_{0};
  std::thread worker_;
};

class ServiceMetrics {
 public:
  static constexpr std::array<double, 10> kBucketBoundsMs = {
      1, 2, 5, 10, 25, 50, 100, 250, 500, 1000};

  void RecordRequest(int status, double latency_ms);
  void RecordVerdict(Decision decision, Label trigger, Label chosen);
  std::string ToJson() const;
  uint64_t requests() const;

 private:
  mutable std::mutex mu_;
  uint64_t requests_ = 0;
  std::vector<std::pair<int, uint64_t>> by_status_;
  std::array<uint64_t, kBucketBoundsMs.size() + 1> buckets_{};
  double latency_sum_ms_ = 0.0;
  std::array<uint64_t, kNumClasses> triggers_{};
  std::array<uint64_t, kNumClasses> chosen_{};
  uint64_t unsafe_ = 0;
  uint64_t safe_ = 0;
};

// Review queue backed by files. Every label is persisted (dataset, then
// queue) before the call returns, so a crash loses no reviews.
class TriageStore {
 public:
  TriageStore(std::vector<TriageItem> items, Dataset dataset,
              std::filesystem::path queue_path = {},
              std::filesystem::path dataset_path = {});

  // Loads the queue; the dataset file is optional and starts empty.
  static std::unique_ptr<TriageStore> Open(const std::filesystem::path& queue_path,
                                           const std::filesystem::path& dataset_path);

  // Queued items ordered by (uncertainty desc, id asc), at most limit.
  std::vector<TriageItem> Next(size_t limit) const;

  // Throws NotFound for unknown ids and Conflict for already-labeled items.
  TriageItem Label(const std::string& id, juree::Label label,
                   const std::string& reviewer_id, std::string timestamp = "");

  Dataset dataset() const;
  std::vector<TriageItem> items() const;

 private:
  void PersistLocked() const;

  mutable std::mutex mu_;
  std::vector<TriageItem> items_;
  Dataset dataset_;
  std::filesystem::path queue_path_;
  std::filesystem::path dataset_path_;
};

struct HttpResult {
  int status = 200;
  std::string body;
};

// Transport-independent request handling; the HTTP layer only routes.
class ModerationService {
 public:
  ModerationService(GatewayConfig config, Taxonomy taxonomy,
                    std::shared_ptr<InferenceBackend> backend,
                    std::unique_ptr<TriageStore> triage = nullptr);

  // Builds the taxonomy, backend and triage store named by the config.
  static std::unique_ptr<ModerationService> FromConfig(const GatewayConfig& config);

  HttpResult Moderate(std::string_view body);
  HttpResult TriageNext(std::optional<std::string_view> limit);
  HttpResult TriageLabel(const std::string& id, std::string_view body);
  HttpResult Health();
  HttpResult Metrics() const;

  bool Authorized(std::string_view authorization_header) const;

  const GatewayConfig& config() const { return config_; }
  const RequestBatcher& batcher() const { return *batcher_; }
  TriageStore* triage() { return triage_.get(); }

 private:
  GatewayConfig config_;
  Taxonomy taxonomy_;
  std::shared_ptr<InferenceBackend> backend_;
  std::unique_ptr<RequestBatcher> batcher_;
  std::unique_ptr<TriageStore> triage_;
  ServiceMetrics metrics_;
};

// Response body for one moderated text, without latency.
std::string VerdictJson(const ScoreVector& scores, const Taxonomy& taxonomy,
                        const std::string& model);

class Gateway {
 public:
  explicit Gateway(std::shared_ptr<ModerationService> service);
  ~Gateway();

  // Binds and serves on a background thread. port 0 picks a free port.
  // Returns the bound port. Throws Error on bind failure.
  int Start(const std::string& host, int port);
  // Binds and serves on the calling thread until Stop().
  void Run(const std::string& host, int port);
  // Stops accepting connections and drains in-flight requests.
  void Stop();

 private:
  void Install();

  std::shared_ptr<ModerationService> service_;
  std::unique_ptr<httplib::Server> server_;
  std::thread thread_;
};

}  // namespace juree

#endif  // JUREE_GATEWAY_H_
