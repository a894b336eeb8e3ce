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

#include "juree/gateway.h"

#include <algorithm>
#include <charconv>
#include <set>
#include <utility>

#include "httplib.h"
#include "json.hpp"
#include "juree/util.h"

namespace juree {

namespace {

using ordered_json = nlohmann::ordered_json;
using Clock = std::chrono::steady_clock;

HttpResult ErrorResult(int status, std::string_view message) {
  ordered_json j;
  j["error"] = std::string(message);
  return {status, j.dump()};
}

ordered_json ScoresJson(const ScoreVector& scores) {
  ordered_json j = ordered_json::object();
  for (Label label : kCanonicalOrder) j[std::string(LabelName(label))] = scores[label];
  return j;
}

ordered_json VerdictObject(const ScoreVector& scores, const Taxonomy& taxonomy,
                           const std::string& model) {
  const BinaryVerdict bv = BinaryDecision(scores, taxonomy);
  const MulticlassVerdict mv = MulticlassDecision(scores, taxonomy);
  ordered_json j;
  j["scores"] = ScoresJson(scores);
  j["binary"] = {{"in_scope_prob", bv.in_scope_prob},
                 {"out_scope_prob", bv.out_scope_prob},
                 {"decision", DecisionName(bv.decision)},
                 {"trigger_class", LabelName(bv.trigger_class)}};
  j["multiclass"] = {{"chosen", LabelName(mv.chosen)}, {"margin", mv.margin}};
  j["model"] = model;
  return j;
}

}  // namespace

// ---------------------------------------------------------------- config

GatewayConfig GatewayConfig::FromJson(std::string_view json) {
  GatewayConfig c;
  ordered_json j;
  try {
    j = ordered_json::parse(json);
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument(std::string("gateway config is not JSON: ") + e.what());
  }
  if (!j.is_object()) throw InvalidArgument("gateway config must be an object");
  try {
    for (auto it = j.begin(); it != j.end(); ++it) {
      const std::string& key = it.key();
      const auto& v = it.value();
      if (key == "taxonomy") {
        c.taxonomy_path = v.get<std::string>();
      } else if (key == "backend") {
        c.backend = v.get<std::string>();
      } else if (key == "host") {
        c.host = v.get<std::string>();
      } else if (key == "port") {
        c.port = v.get<int>();
      } else if (key == "max_batch") {
        c.max_batch = v.get<size_t>();
      } else if (key == "batch_window_ms") {
        c.batch_window_ms = v.get<double>();
      } else if (key == "max_queue_depth") {
        c.max_queue_depth = v.get<size_t>();
      } else if (key == "max_text_bytes") {
        c.max_text_bytes = v.get<size_t>();
      } else if (key == "threads") {
        c.threads = v.get<size_t>();
      } else if (key == "triage_queue") {
        c.triage_queue_path = v.get<std::string>();
      } else if (key == "dataset") {
        c.dataset_path = v.get<std::string>();
      } else if (key == "bearer_token") {
        c.bearer_token = v.get<std::string>();
      } else {
        throw InvalidArgument("unknown gateway config key '" + key + "'");
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument(std::string("bad gateway config value: ") + e.what());
  }
  if (c.port < 0 || c.port > 65535) throw InvalidArgument("port out of range");
  if (c.max_batch == 0) throw InvalidArgument("max_batch must be positive");
  if (c.batch_window_ms < 0) throw InvalidArgument("batch_window_ms must be >= 0");
  if (c.max_queue_depth == 0) throw InvalidArgument("max_queue_depth must be positive");
  if (c.max_text_bytes == 0) throw InvalidArgument("max_text_bytes must be positive");
  if (c.threads == 0) throw InvalidArgument("threads must be positive");
  if (!c.triage_queue_path.empty() && c.dataset_path.empty()) {
    throw InvalidArgument("triage_queue requires a dataset path");
  }
  return c;
}

GatewayConfig GatewayConfig::LoadFile(const std::string& path) {
  GatewayConfig c = FromJson(ReadFile(path));
  // Relative file paths are relative to the config file.
  const std::filesystem::path base = std::filesystem::path(path).parent_path();
  for (std::string* p : {&c.taxonomy_path, &c.triage_queue_path, &c.dataset_path}) {
    if (!p->empty() && std::filesystem::path(*p).is_relative()) *p = (base / *p).string();
  }
  return c;
}

// ---------------------------------------------------------------- batcher

RequestBatcher::RequestBatcher(std::shared_ptr<InferenceBackend> backend,
                               BatcherOptions options)
    : backend_(std::move(backend)), options_(options) {
  if (!backend_) throw InvalidArgument("batcher needs a backend");
  if (options_.max_batch == 0) throw InvalidArgument("max_batch must be positive");
  if (backend_->concurrency() == ConcurrencyMode::kSerialized) {
    backend_ = std::make_shared<SerializedBackend>(backend_);
  }
  worker_ = std::thread([this] { Run(); });
}

RequestBatcher::~RequestBatcher() {
  {
    std::lock_guard<std::mutex> lock(mu_);
    stopping_ = true;
  }
  cv_.notify_all();
  worker_.join();
}

size_t RequestBatcher::queue_depth() const {
  std::lock_guard<std::mutex> lock(mu_);
  return pending_texts_;
}

std::vector<ScoreVector> RequestBatcher::Score(std::vector<std::string> texts) {
  if (texts.empty()) return {};
  auto request = std::make_shared<Request>();
  request->results.resize(texts.size());
  request->texts = std::move(texts);
  std::future<void> finished = request->finished.get_future();
  {
    std::lock_guard<std::mutex> lock(mu_);
    if (stopping_) throw Overloaded("batcher is shutting down");
    if (pending_texts_ + request->texts.size() > options_.max_queue_depth) {
      throw Overloaded("queue depth limit reached");
    }
    pending_texts_ += request->texts.size();
    queue_.push_back(request);
  }
  cv_.notify_all();
  finished.get();  // rethrows the backend error, if any
  return std::move(request->results);
}

void RequestBatcher::TakeLocked(std::vector<Slice>& slices, size_t& batch_size) {
  while (!queue_.empty() && batch_size < options_.max_batch) {
    std::shared_ptr<Request>& front = queue_.front();
    const size_t n = std::min(front->texts.size() - front->taken,
                              options_.max_batch - batch_size);
    slices.push_back({front, front->taken, n});
    front->taken += n;
    batch_size += n;
    pending_texts_ -= n;
    if (front->taken == front->texts.size()) queue_.pop_front();
  }
}

void RequestBatcher::Run() {
  std::unique_lock<std::mutex> lock(mu_);
  while (true) {
    cv_.wait(lock, [this] { return stopping_ || !queue_.empty(); });
    if (queue_.empty() && stopping_) return;

    std::vector<Slice> slices;
    size_t batch_size = 0;
    TakeLocked(slices, batch_size);
    if (batch_size < options_.max_batch && options_.window.count() > 0) {
      const auto deadline = Clock::now() + options_.window;
      while (batch_size < options_.max_batch && !stopping_) {
        if (!cv_.wait_until(lock, deadline, [this] { return stopping_ || !queue_.empty(); })) {
          break;
        }
        TakeLocked(slices, batch_size);
      }
    }
    lock.unlock();

    std::vector<std::string> batch;
    batch.reserve(batch_size);
    for (const Slice& s : slices) {
      for (size_t i = 0; i < s.count; ++i) batch.push_back(s.request->texts[s.offset + i]);
    }
    std::vector<ScoreVector> scores;
    std::exception_ptr error;
    try {
      backend_calls_.fetch_add(1);
      scores = backend_->Score(batch);
      if (scores.size() != batch.size()) {
        throw BackendError("backend returned " + std::to_string(scores.size()) +
                           " rows for " + std::to_string(batch.size()) + " texts");
      }
    } catch (...) {
      error = std::current_exception();
    }

    lock.lock();
    size_t pos = 0;
    std::vector<Request*> completed;
    for (const Slice& s : slices) {
      Request& r = *s.request;
      if (error) {
        if (!r.error) r.error = error;
      } else {
        for (size_t i = 0; i < s.count; ++i) r.results[s.offset + i] = scores[pos + i];
      }
      pos += s.count;
      r.done += s.count;
      if (r.done == r.texts.size()) completed.push_back(&r);
    }
    // The promise must end up holding the only reference to the error. The
    // caller may then free it, and no count drop is left on this thread.
    error = nullptr;
    for (Request* r : completed) {
      if (r->error) {
        r->finished.set_exception(std::exchange(r->error, nullptr));
      } else {
        r->finished.set_value();
      }
    }
  }
}

// ---------------------------------------------------------------- metrics

void ServiceMetrics::RecordRequest(int status, double latency_ms) {
  std::lock_guard<std::mutex> lock(mu_);
  ++requests_;
  auto it = std::find_if(by_status_.begin(), by_status_.end(),
                         [status](const auto& p) { return p.first == status; });
  if (it == by_status_.end()) {
    by_status_.emplace_back(status, 1);
    std::sort(by_status_.begin(), by_status_.end());
  } else {
    ++it->second;
  }
  size_t bucket = 0;
  while (bucket < kBucketBoundsMs.size() && latency_ms > kBucketBoundsMs[bucket]) ++bucket;
  ++buckets_[bucket];
  latency_sum_ms_ += latency_ms;
}

void ServiceMetrics::RecordVerdict(Decision decision, Label trigger, Label chosen) {
  std::lock_guard<std::mutex> lock(mu_);
  if (decision == Decision::kUnsafe) {
    ++unsafe_;
    ++triggers_[Index(trigger)];
  } else {
    ++safe_;
  }
  ++chosen_[Index(chosen)];
}

uint64_t ServiceMetrics::requests() const {
  std::lock_guard<std::mutex> lock(mu_);
  return requests_;
}

std::string ServiceMetrics::ToJson() const {
  std::lock_guard<std::mutex> lock(mu_);
  ordered_json j;
  j["requests_total"] = requests_;
  ordered_json status = ordered_json::object();
  for (const auto& [code, n] : by_status_) status[std::to_string(code)] = n;
  j["requests_by_status"] = std::move(status);
  ordered_json hist = ordered_json::array();
  for (size_t i = 0; i < buckets_.size(); ++i) {
    ordered_json b;
    if (i < kBucketBoundsMs.size()) {
      b["le_ms"] = kBucketBoundsMs[i];
    } else {
      b["le_ms"] = "+inf";
    }
    b["count"] = buckets_[i];
    hist.push_back(std::move(b));
  }
  j["latency_histogram"] = std::move(hist);
  j["latency_sum_ms"] = latency_sum_ms_;
  j["verdicts"] = {{"safe", safe_}, {"unsafe", unsafe_}};
  ordered_json triggers = ordered_json::object();
  ordered_json chosen = ordered_json::object();
  for (Label label : kCanonicalOrder) {
    if (label != Label::kBankingRelated) {
      triggers[std::string(LabelName(label))] = triggers_[Index(label)];
    }
    chosen[std::string(LabelName(label))] = chosen_[Index(label)];
  }
  j["trigger_counts"] = std::move(triggers);
  j["chosen_counts"] = std::move(chosen);
  return j.dump();
}

// ---------------------------------------------------------------- triage store

TriageStore::TriageStore(std::vector<TriageItem> items, Dataset dataset,
                         std::filesystem::path queue_path,
                         std::filesystem::path dataset_path)
    : items_(std::move(items)),
      dataset_(std::move(dataset)),
      queue_path_(std::move(queue_path)),
      dataset_path_(std::move(dataset_path)) {
  std::set<std::string> ids;
  for (const auto& item : items_) {
    if (!ids.insert(item.candidate_id).second) {
      throw InvalidArgument("duplicate triage item " + item.candidate_id);
    }
  }
}

std::unique_ptr<TriageStore> TriageStore::Open(const std::filesystem::path& queue_path,
                                               const std::filesystem::path& dataset_path) {
  std::vector<TriageItem> items = LoadTriageQueue(queue_path.string());
  Dataset dataset;
  if (std::filesystem::exists(dataset_path)) dataset = LoadDataset(dataset_path.string());
  return std::make_unique<TriageStore>(std::move(items), std::move(dataset), queue_path,
                                       dataset_path);
}

std::vector<TriageItem> TriageStore::Next(size_t limit) const {
  std::lock_guard<std::mutex> lock(mu_);
  std::vector<TriageItem> queued;
  for (const auto& item : items_) {
    if (item.status == TriageStatus::kQueued) queued.push_back(item);
  }
  std::sort(queued.begin(), queued.end(), TriageOrder);
  if (queued.size() > limit) queued.resize(limit);
  return queued;
}

TriageItem TriageStore::Label(const std::string& id, juree::Label label,
                              const std::string& reviewer_id, std::string timestamp) {
  if (reviewer_id.empty()) throw InvalidArgument("reviewer_id is required");
  std::lock_guard<std::mutex> lock(mu_);
  auto it = std::find_if(items_.begin(), items_.end(),
                         [&id](const TriageItem& item) { return item.candidate_id == id; });
  if (it == items_.end()) throw NotFound("unknown triage item " + id);
  if (it->status == TriageStatus::kLabeled) {
    throw Conflict("triage item " + id + " is already labeled");
  }
  if (timestamp.empty()) timestamp = UtcTimestamp();
  const ReviewDecision decision{id, label, reviewer_id, timestamp};
  Dataset next = CommitReview(dataset_, std::span<const Example>(&it->candidate, 1),
                              std::span<const ReviewDecision>(&decision, 1));
  TriageItem updated = *it;
  updated.status = TriageStatus::kLabeled;
  updated.resolution = TriageResolution{label, reviewer_id, timestamp};

  // Swap in the new state and roll it back if either file fails to write.
  const Dataset previous = std::exchange(dataset_, std::move(next));
  const TriageItem previous_item = std::exchange(*it, updated);
  try {
    PersistLocked();
  } catch (...) {
    dataset_ = previous;
    *it = previous_item;
    throw;
  }
  return updated;
}

void TriageStore::PersistLocked() const {
  if (!dataset_path_.empty()) WriteFileAtomic(dataset_path_, ToJsonl(dataset_));
  if (!queue_path_.empty()) WriteFileAtomic(queue_path_, TriageQueueToJsonl(items_));
}

Dataset TriageStore::dataset() const {
  std::lock_guard<std::mutex> lock(mu_);
  return dataset_;
}

std::vector<TriageItem> TriageStore::items() const {
  std::lock_guard<std::mutex> lock(mu_);
  return items_;
}

// ---------------------------------------------------------------- service

std::string VerdictJson(const ScoreVector& scores, const Taxonomy& taxonomy,
                        const std::string& model) {
  return VerdictObject(scores, taxonomy, model).dump();
}

ModerationService::ModerationService(GatewayConfig config, Taxonomy taxonomy,
                                     std::shared_ptr<InferenceBackend> backend,
                                     std::unique_ptr<TriageStore> triage)
    : config_(std::move(config)),
      taxonomy_(std::move(taxonomy)),
      backend_(std::move(backend)),
      triage_(std::move(triage)) {
  BatcherOptions options;
  options.max_batch = config_.max_batch;
  options.window = std::chrono::microseconds(
      static_cast<int64_t>(config_.batch_window_ms * 1000.0));
  options.max_queue_depth = config_.max_queue_depth;
  batcher_ = std::make_unique<RequestBatcher>(backend_, options);
}

std::unique_ptr<ModerationService> ModerationService::FromConfig(
    const GatewayConfig& config) {
  Taxonomy taxonomy = config.taxonomy_path.empty()
                          ? Taxonomy::Default()
                          : Taxonomy::LoadFile(config.taxonomy_path);
  std::shared_ptr<InferenceBackend> backend = MakeBackend(config.backend);
  std::unique_ptr<TriageStore> triage;
  if (!config.triage_queue_path.empty()) {
    triage = TriageStore::Open(config.triage_queue_path, config.dataset_path);
  }
  return std::make_unique<ModerationService>(config, std::move(taxonomy),
                                             std::move(backend), std::move(triage));
}

HttpResult ModerationService::Moderate(std::string_view body) {
  const auto start = Clock::now();
  auto finish = [&](HttpResult result) {
    const double ms =
        std::chrono::duration<double, std::milli>(Clock::now() - start).count();
    metrics_.RecordRequest(result.status, ms);
    return result;
  };

  std::vector<std::string> texts;
  {
    ordered_json req;
    try {
      req = ordered_json::parse(body);
    } catch (const nlohmann::json::exception&) {
      return finish(ErrorResult(400, "request body is not valid JSON"));
    }
    if (!req.is_object()) return finish(ErrorResult(400, "request must be a JSON object"));
    const bool has_text = req.contains("text");
    const bool has_texts = req.contains("texts");
    if (has_text == has_texts) {
      return finish(ErrorResult(400, "exactly one of 'text' or 'texts' is required"));
    }
    if (req.size() != 1) return finish(ErrorResult(400, "unexpected request fields"));
    if (has_text) {
      if (!req["text"].is_string()) return finish(ErrorResult(400, "'text' must be a string"));
      texts.push_back(req["text"].get<std::string>());
    } else {
      const auto& arr = req["texts"];
      if (!arr.is_array() || arr.empty()) {
        return finish(ErrorResult(400, "'texts' must be a non-empty array"));
      }
      for (const auto& t : arr) {
        if (!t.is_string()) return finish(ErrorResult(400, "'texts' must hold strings"));
        texts.push_back(t.get<std::string>());
      }
    }
  }
  for (size_t i = 0; i < texts.size(); ++i) {
    if (texts[i].empty()) {
      return finish(ErrorResult(400, "text " + std::to_string(i) + " is empty"));
    }
    if (texts[i].size() > config_.max_text_bytes) {
      return finish(ErrorResult(400, "text " + std::to_string(i) + " exceeds " +
                                         std::to_string(config_.max_text_bytes) + " bytes"));
    }
  }

  std::vector<ScoreVector> scores;
  try {
    scores = batcher_->Score(std::move(texts));
  } catch (const Overloaded& e) {
    return finish(ErrorResult(429, e.what()));
  } catch (const std::exception& e) {
    return finish(ErrorResult(503, std::string("backend failure: ") + e.what()));
  }

  const double latency_ms =
      std::chrono::duration<double, std::milli>(Clock::now() - start).count();
  const std::string model = backend_->Name();
  ordered_json results = ordered_json::array();
  for (const ScoreVector& s : scores) {
    ordered_json r = VerdictObject(s, taxonomy_, model);
    r["latency_ms"] = latency_ms;
    const BinaryVerdict bv = BinaryDecision(s, taxonomy_);
    metrics_.RecordVerdict(bv.decision, bv.trigger_class,
                           MulticlassDecision(s, taxonomy_).chosen);
    results.push_back(std::move(r));
  }
  ordered_json resp;
  resp["results"] = std::move(results);
  return finish({200, resp.dump()});
}

HttpResult ModerationService::TriageNext(std::optional<std::string_view> limit) {
  if (!triage_) return ErrorResult(404, "no triage queue loaded");
  size_t k = 20;
  if (limit) {
    const char* first = limit->data();
    const char* last = first + limit->size();
    auto [ptr, ec] = std::from_chars(first, last, k);
    if (ec != std::errc() || ptr != last || k == 0) {
      return ErrorResult(400, "limit must be a positive integer");
    }
  }
  ordered_json items = ordered_json::array();
  for (const TriageItem& item : triage_->Next(k)) {
    items.push_back(ordered_json::parse(TriageItemToJson(item)));
  }
  ordered_json resp;
  resp["items"] = std::move(items);
  return {200, resp.dump()};
}

HttpResult ModerationService::TriageLabel(const std::string& id, std::string_view body) {
  if (!triage_) return ErrorResult(404, "no triage queue loaded");
  ordered_json req;
  try {
    req = ordered_json::parse(body);
  } catch (const nlohmann::json::exception&) {
    return ErrorResult(400, "request body is not valid JSON");
  }
  if (!req.is_object() || !req.contains("label") || !req["label"].is_string() ||
      !req.contains("reviewer_id") || !req["reviewer_id"].is_string()) {
    return ErrorResult(400, "'label' and 'reviewer_id' strings are required");
  }
  const std::optional<Label> label = ParseLabel(req["label"].get<std::string>());
  if (!label) return ErrorResult(400, "unknown label '" + req["label"].get<std::string>() + "'");
  try {
    const TriageItem item =
        triage_->Label(id, *label, req["reviewer_id"].get<std::string>());
    return {200, TriageItemToJson(item)};
  } catch (const NotFound& e) {
    return ErrorResult(404, e.what());
  } catch (const Conflict& e) {
    return ErrorResult(409, e.what());
  } catch (const InvalidArgument& e) {
    return ErrorResult(400, e.what());
  } catch (const std::exception& e) {
    return ErrorResult(500, e.what());
  }
}

HttpResult ModerationService::Health() {
  HealthStatus status;
  try {
    status = backend_->Health();
  } catch (const std::exception& e) {
    status = {false, e.what()};
  }
  ordered_json j;
  j["status"] = status.ok ? "ok" : "unavailable";
  j["backend"] = backend_->Name();
  if (!status.ok) j["reason"] = status.reason;
  return {status.ok ? 200 : 503, j.dump()};
}

HttpResult ModerationService::Metrics() const {
  ordered_json j = ordered_json::parse(metrics_.ToJson());
  j["backend_calls"] = batcher_->backend_calls();
  j["queue_depth"] = batcher_->queue_depth();
  return {200, j.dump()};
}

bool ModerationService::Authorized(std::string_view header) const {
  if (config_.bearer_token.empty()) return true;
  return header == "Bearer " + config_.bearer_token;
}

// ---------------------------------------------------------------- http

Gateway::Gateway(std::shared_ptr<ModerationService> service)
    : service_(std::move(service)), server_(std::make_unique<httplib::Server>()) {
  Install();
}

Gateway::~Gateway() { Stop(); }

void Gateway::Install() {
  const size_t threads = service_->config().threads;
  server_->new_task_queue = [threads] { return new httplib::ThreadPool(threads); };
  // Headroom for the JSON envelope of a full batch of maximal texts.
  server_->set_payload_max_length(service_->config().max_text_bytes *
                                      service_->config().max_batch * 8 +
                                  (1 << 20));

  auto reply = [](httplib::Response& res, const HttpResult& r) {
    res.status = r.status;
    res.set_content(r.body, "application/json");
  };
  auto guarded = [this, reply](auto handler) {
    return [this, reply, handler](const httplib::Request& req, httplib::Response& res) {
      if (!service_->Authorized(req.get_header_value("Authorization"))) {
        reply(res, ErrorResult(401, "missing or invalid bearer token"));
        return;
      }
      reply(res, handler(req));
    };
  };

  server_->Post("/v1/moderate", guarded([this](const httplib::Request& req) {
                  return service_->Moderate(req.body);
                }));
  server_->Get("/v1/triage/next", guarded([this](const httplib::Request& req) {
                 std::optional<std::string> limit;
                 if (req.has_param("limit")) limit = req.get_param_value("limit");
                 return service_->TriageNext(limit ? std::optional<std::string_view>(*limit)
                                                   : std::nullopt);
               }));
  server_->Post(R"(/v1/triage/([^/]+)/label)", guarded([this](const httplib::Request& req) {
                  return service_->TriageLabel(req.matches[1].str(), req.body);
                }));
  server_->Get("/healthz", [this, reply](const httplib::Request&, httplib::Response& res) {
    reply(res, service_->Health());
  });
  server_->Get("/metricsz", [this, reply](const httplib::Request&, httplib::Response& res) {
    reply(res, service_->Metrics());
  });
  server_->set_exception_handler(
      [reply](const httplib::Request&, httplib::Response& res, std::exception_ptr ep) {
        std::string what = "internal error";
        try {
          std::rethrow_exception(ep);
        } catch (const std::exception& e) {
          what = e.what();
        } catch (...) {
        }
        reply(res, ErrorResult(500, what));
      });
}

int Gateway::Start(const std::string& host, int port) {
  int bound = port;
  if (port == 0) {
    bound = server_->bind_to_any_port(host);
    if (bound < 0) throw Error("cannot bind " + host + " on any port");
  } else if (!server_->bind_to_port(host, port)) {
    throw Error("cannot bind " + host + ":" + std::to_string(port));
  }
  thread_ = std::thread([this] { server_->listen_after_bind(); });
  server_->wait_until_ready();
  return bound;
}

void Gateway::Run(const std::string& host, int port) {
  if (!server_->bind_to_port(host, port)) {
    throw Error("cannot bind " + host + ":" + std::to_string(port));
  }
  server_->listen_after_bind();
}

void Gateway::Stop() {
  // stop() closes the listener; the pool joins in-flight handlers on exit.
  server_->stop();
  if (thread_.joinable()) thread_.join();
}

}  // namespace juree
