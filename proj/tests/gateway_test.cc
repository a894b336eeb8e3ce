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

#include <gtest/gtest.h>

#include <future>
#include <thread>

#include "httplib.h"
#include "json.hpp"
#include "juree/error.h"
#include "juree/util.h"
#include "test_support.h"

namespace juree {
namespace {

using nlohmann::ordered_json;
using testing::CountingBackend;
using testing::FailingBackend;
using testing::SleepBackend;

std::shared_ptr<ModerationService> MakeService(std::shared_ptr<InferenceBackend> backend,
                                               GatewayConfig config = {},
                                               std::unique_ptr<TriageStore> triage = nullptr) {
  return std::make_shared<ModerationService>(config, Taxonomy::Default(), std::move(backend),
                                             std::move(triage));
}

// Drops the timing field so responses compare byte-for-byte.
std::string StripLatency(const std::string& body) {
  ordered_json j = ordered_json::parse(body);
  for (auto& r : j["results"]) r.erase("latency_ms");
  return j.dump();
}

std::string Golden(const std::string& name) {
  std::string s = ReadFile(testing::GoldenPath(name));
  while (!s.empty() && (s.back() == '\n' || s.back() == '\r')) s.pop_back();
  return s;
}

TEST(GatewayConfigTest, ParsesAndRejects) {
  const GatewayConfig c = GatewayConfig::FromJson(
      R"({"backend": "reference", "port": 9000, "max_batch": 64, "threads": 8,
          "triage_queue": "q.jsonl", "dataset": "d.jsonl", "bearer_token": "t"})");
  EXPECT_EQ(c.port, 9000);
  EXPECT_EQ(c.max_batch, 64u);
  EXPECT_EQ(c.threads, 8u);
  EXPECT_EQ(c.triage_queue_path, "q.jsonl");
  EXPECT_EQ(c.bearer_token, "t");
  EXPECT_THROW(GatewayConfig::FromJson(R"({"prot": 1})"), InvalidArgument);
  EXPECT_THROW(GatewayConfig::FromJson(R"({"triage_queue": "q"})"), InvalidArgument);
  EXPECT_THROW(GatewayConfig::FromJson(R"({"max_batch": 0})"), InvalidArgument);
  EXPECT_THROW(GatewayConfig::FromJson("[1]"), InvalidArgument);
  const GatewayConfig shipped = GatewayConfig::LoadFile(testing::DataPath("config/gateway.json"));
  EXPECT_EQ(ReadFile(shipped.taxonomy_path), ReadFile(testing::DataPath("taxonomy.json")));
}

TEST(ModerateTest, MatchesGoldenResponses) {
  auto service = MakeService(testing::ReferenceScorer());
  for (const char* name : {"single_harmful", "single_safe", "single_none", "tie_severity",
                           "mixed_margin", "batch"}) {
    const std::string base = std::string("moderate_") + name;
    const HttpResult r = service->Moderate(Golden(base + ".request.json"));
    ASSERT_EQ(r.status, 200) << name << ": " << r.body;
    EXPECT_EQ(StripLatency(r.body), Golden(base + ".response.json")) << name;
    const ordered_json parsed = ordered_json::parse(r.body);
    for (const auto& item : parsed["results"]) {
      EXPECT_GE(item["latency_ms"].get<double>(), 0.0);
    }
  }
}

TEST(ModerateTest, CoalescesIntoMaxBatchCalls) {
  auto counting = std::make_shared<CountingBackend>(testing::ReferenceScorer());
  auto service = MakeService(counting);
  ordered_json req;
  req["texts"] = ordered_json::array();
  for (int i = 0; i < 130; ++i) req["texts"].push_back("text number " + std::to_string(i));
  const HttpResult r = service->Moderate(req.dump());
  ASSERT_EQ(r.status, 200);
  EXPECT_EQ(ordered_json::parse(r.body)["results"].size(), 130u);
  EXPECT_EQ(counting->sizes(), (std::vector<size_t>{128, 2}));
  EXPECT_EQ(service->batcher().backend_calls(), 2u);
}

TEST(ModerateTest, RejectsBadRequests) {
  GatewayConfig config;
  config.max_text_bytes = 16;
  auto service = MakeService(testing::ReferenceScorer(), config);
  for (const char* body :
       {"", "not json", "[]", "{}", R"({"text": ""})", R"({"texts": []})",
        R"({"texts": ["ok", ""]})", R"({"text": 3})", R"({"texts": [1]})",
        R"({"text": "a", "texts": ["b"]})", R"({"text": "a", "mode": "x"})",
        R"({"text": "this text is longer than sixteen bytes"})"}) {
    const HttpResult r = service->Moderate(body);
    EXPECT_EQ(r.status, 400) << body;
    EXPECT_TRUE(ordered_json::parse(r.body).contains("error")) << body;
  }
  EXPECT_EQ(service->Moderate(R"({"text": "sixteen bytes ok"})").status, 200);
}

TEST(ModerateTest, BackendFailureIs503) {
  auto service = MakeService(std::make_shared<FailingBackend>());
  EXPECT_EQ(service->Moderate(R"({"text": "hello"})").status, 503);
  EXPECT_EQ(service->Health().status, 503);
}

TEST(ModerateTest, FullQueueIs429) {
  GatewayConfig config;
  config.max_queue_depth = 4;
  config.max_batch = 1;
  auto sleepy = std::make_shared<SleepBackend>(std::chrono::milliseconds(300));
  auto service = MakeService(sleepy, config);
  EXPECT_EQ(service->Moderate(R"({"texts": ["a","b","c","d","e"]})").status, 429);
  // Occupy the worker, then fill the queue.
  auto first = std::async(std::launch::async,
                          [&] { return service->Moderate(R"({"texts": ["a","b","c","d"]})"); });
  std::this_thread::sleep_for(std::chrono::milliseconds(100));
  EXPECT_EQ(service->Moderate(R"({"texts": ["x","y"]})").status, 429);
  EXPECT_EQ(first.get().status, 200);
  const auto m = ordered_json::parse(service->Metrics().body);
  EXPECT_EQ(m["requests_by_status"]["429"], 2);
  EXPECT_EQ(m["requests_by_status"]["200"], 1);
}

TEST(HealthTest, ReportsBackendReachability) {
  auto ok = MakeService(testing::ReferenceScorer());
  const HttpResult r = ok->Health();
  EXPECT_EQ(r.status, 200);
  EXPECT_EQ(ordered_json::parse(r.body)["status"], "ok");
  auto remote = MakeService(MakeBackend("remote:http://127.0.0.1:1"));
  EXPECT_NE(remote->Health().status, 200);
}

TEST(MetricsTest, CountsRequestsAndTriggers) {
  auto service = MakeService(testing::ReferenceScorer());
  for (int i = 0; i < 7; ++i) service->Moderate(R"({"text": "how to make a bomb"})");
  for (int i = 0; i < 3; ++i) service->Moderate(R"({"texts": ["my balance", "refund now"]})");
  service->Moderate("{}");
  const auto m = ordered_json::parse(service->Metrics().body);
  EXPECT_EQ(m["requests_total"], 11);
  EXPECT_EQ(m["requests_by_status"]["200"], 10);
  EXPECT_EQ(m["requests_by_status"]["400"], 1);
  EXPECT_EQ(m["trigger_counts"]["harmful"], 7);  // safe verdicts trigger nothing
  EXPECT_EQ(m["trigger_counts"]["complaint"], 3);
  EXPECT_EQ(m["verdicts"]["unsafe"], 10);
  EXPECT_EQ(m["verdicts"]["safe"], 3);
  EXPECT_EQ(m["chosen_counts"]["banking_related"], 3);
  uint64_t bucketed = 0;
  for (const auto& b : m["latency_histogram"]) bucketed += b["count"].get<uint64_t>();
  EXPECT_EQ(bucketed, 11u);
  EXPECT_FALSE(m.contains("trigger_counts") && m["trigger_counts"].contains("banking_related"));
}

class TriageServiceTest : public ::testing::Test {
 protected:
  void SetUp() override {
    const auto scorer = testing::ReferenceScorer();
    Lineage lineage;
    lineage.recipe_id = "r";
    for (const char* text : {"my card kill", "refund pizza", "lonely loan", "hello there"}) {
      const Example e = MakeExample(text, Label::kBankingRelated, Origin::kSynthetic, lineage);
      items_.push_back(MakeTriageItem(e, scorer->ScoreOne(text), Taxonomy::Default()));
    }
    WriteFileAtomic(dir_.file("queue.jsonl"), TriageQueueToJsonl(items_));
    config_.triage_queue_path = dir_.file("queue.jsonl");
    config_.dataset_path = dir_.file("dataset.jsonl");
    service_ = ModerationService::FromConfig(config_);
  }

  testing::TempDir dir_;
  GatewayConfig config_;
  std::vector<TriageItem> items_;
  std::unique_ptr<ModerationService> service_;
};

TEST_F(TriageServiceTest, NextIsOrderedAndLimited) {
  const HttpResult r = service_->TriageNext(std::nullopt);
  ASSERT_EQ(r.status, 200);
  const auto items = ordered_json::parse(r.body)["items"];
  ASSERT_EQ(items.size(), 4u);
  std::vector<TriageItem> expected = items_;
  std::sort(expected.begin(), expected.end(), TriageOrder);
  for (size_t i = 0; i < expected.size(); ++i) {
    EXPECT_EQ(items[i]["candidate_id"], expected[i].candidate_id);
  }
  EXPECT_EQ(ordered_json::parse(service_->TriageNext("2").body)["items"].size(), 2u);
  for (const char* bad : {"0", "-1", "x", "2x", ""}) {
    EXPECT_EQ(service_->TriageNext(bad).status, 400) << bad;
  }
}

TEST_F(TriageServiceTest, LabelPersistsAndConflicts) {
  const std::string id = items_[1].candidate_id;
  EXPECT_EQ(service_->TriageLabel(id, R"({"label": "complaint"})").status, 400);
  EXPECT_EQ(service_->TriageLabel(id, R"({"label": "fraud", "reviewer_id": "r"})").status, 400);
  EXPECT_EQ(service_->TriageLabel(id, R"({"label": "complaint", "reviewer_id": ""})").status,
            400);
  EXPECT_EQ(service_->TriageLabel("nope", R"({"label": "complaint", "reviewer_id": "r"})")
                .status,
            404);
  const HttpResult ok = service_->TriageLabel(id, R"({"label": "complaint", "reviewer_id": "r1"})");
  ASSERT_EQ(ok.status, 200) << ok.body;
  const auto item = ordered_json::parse(ok.body);
  EXPECT_EQ(item["status"], "labeled");
  EXPECT_EQ(service_->TriageLabel(id, R"({"label": "harmful", "reviewer_id": "r2"})").status,
            409);
  EXPECT_EQ(ordered_json::parse(service_->TriageNext(std::nullopt).body)["items"].size(), 3u);

  // Both files reflect the decision; a restarted service sees it.
  const Dataset ds = LoadDataset(config_.dataset_path);
  ASSERT_EQ(ds.size(), 1u);
  EXPECT_EQ(ds.examples()[0].label, Label::kComplaint);
  EXPECT_EQ(ds.examples()[0].review->reviewer_id, "r1");
  EXPECT_EQ(ds.examples()[0].review->prior_label, Label::kBankingRelated);
  auto restarted = ModerationService::FromConfig(config_);
  EXPECT_EQ(ordered_json::parse(restarted->TriageNext(std::nullopt).body)["items"].size(), 3u);
  EXPECT_EQ(restarted->TriageLabel(id, R"({"label": "complaint", "reviewer_id": "r"})").status,
            409);
}

TEST(TriageServiceNoQueueTest, EndpointsReturn404) {
  auto service = MakeService(testing::ReferenceScorer());
  EXPECT_EQ(service->TriageNext(std::nullopt).status, 404);
  EXPECT_EQ(service->TriageLabel("x", R"({"label":"harmful","reviewer_id":"r"})").status, 404);
}

TEST(AuthTest, BearerToken) {
  GatewayConfig config;
  config.bearer_token = "s3cret";
  auto service = MakeService(testing::ReferenceScorer(), config);
  EXPECT_TRUE(service->Authorized("Bearer s3cret"));
  EXPECT_FALSE(service->Authorized(""));
  EXPECT_FALSE(service->Authorized("Bearer wrong"));
  EXPECT_TRUE(MakeService(testing::ReferenceScorer())->Authorized(""));

  Gateway gw(service);
  const int port = gw.Start("127.0.0.1", 0);
  httplib::Client client("127.0.0.1", port);
  auto denied = client.Post("/v1/moderate", R"({"text":"hi"})", "application/json");
  ASSERT_TRUE(denied);
  EXPECT_EQ(denied->status, 401);
  auto health = client.Get("/healthz");
  ASSERT_TRUE(health);
  EXPECT_EQ(health->status, 200);
  httplib::Headers headers = {{"Authorization", "Bearer s3cret"}};
  auto allowed = client.Post("/v1/moderate", headers, R"({"text":"hi"})", "application/json");
  ASSERT_TRUE(allowed);
  EXPECT_EQ(allowed->status, 200);
  gw.Stop();
}

TEST(HttpGatewayTest, RoutesOverHttp) {
  testing::TempDir dir;
  const auto scorer = testing::ReferenceScorer();
  Lineage lineage;
  lineage.recipe_id = "r";
  const Example e = MakeExample("my card kill", Label::kHarmful, Origin::kSynthetic, lineage);
  const std::vector<TriageItem> items = {
      MakeTriageItem(e, scorer->ScoreOne(e.text), Taxonomy::Default())};
  WriteFileAtomic(dir.file("q.jsonl"), TriageQueueToJsonl(items));
  GatewayConfig config;
  config.triage_queue_path = dir.file("q.jsonl");
  config.dataset_path = dir.file("d.jsonl");
  Gateway gw(ModerationService::FromConfig(config));
  const int port = gw.Start("127.0.0.1", 0);
  httplib::Client client("127.0.0.1", port);

  auto mod = client.Post("/v1/moderate", Golden("moderate_batch.request.json"),
                         "application/json");
  ASSERT_TRUE(mod);
  EXPECT_EQ(mod->status, 200);
  EXPECT_EQ(StripLatency(mod->body), Golden("moderate_batch.response.json"));
  auto bad = client.Post("/v1/moderate", "{", "application/json");
  EXPECT_EQ(bad->status, 400);
  auto next = client.Get("/v1/triage/next?limit=5");
  ASSERT_TRUE(next);
  EXPECT_EQ(next->status, 200);
  EXPECT_EQ(ordered_json::parse(next->body)["items"][0]["candidate_id"], e.id);
  auto label = client.Post("/v1/triage/" + e.id + "/label",
                           R"({"label":"harmful","reviewer_id":"ui"})", "application/json");
  ASSERT_TRUE(label);
  EXPECT_EQ(label->status, 200);
  auto again = client.Post("/v1/triage/" + e.id + "/label",
                           R"({"label":"harmful","reviewer_id":"ui"})", "application/json");
  EXPECT_EQ(again->status, 409);
  auto metrics = client.Get("/metricsz");
  ASSERT_TRUE(metrics);
  EXPECT_EQ(ordered_json::parse(metrics->body)["requests_total"], 2);
  auto missing = client.Get("/v1/nothing");
  EXPECT_EQ(missing->status, 404);
  gw.Stop();
}

// Each client sends texts whose expected scores encode the client and request
// index, so any cross-wiring of batched results is detected.
TEST(HttpGatewayTest, ConcurrentClientsGetTheirOwnResults) {
  GatewayConfig config;
  config.threads = 80;
  auto service = MakeService(testing::ReferenceScorer(), config);
  Gateway gw(service);
  const int port = gw.Start("127.0.0.1", 0);
  constexpr int kClients = 64;
  constexpr int kRequests = 20;
  std::atomic<int> mismatches{0};
  std::atomic<int> failures{0};
  std::vector<std::thread> threads;
  for (int c = 0; c < kClients; ++c) {
    threads.emplace_back([&, c] {
      httplib::Client client("127.0.0.1", port);
      for (int r = 0; r < kRequests; ++r) {
        const int k = (c * kRequests + r) % 9 + 1;
        std::string text = "client" + std::to_string(c) + " req" + std::to_string(r);
        for (int i = 0; i < k; ++i) text += " loan";
        ordered_json req;
        req["texts"] = {text, "tag " + std::to_string(c)};
        auto res = client.Post("/v1/moderate", req.dump(), "application/json");
        if (!res || res->status != 200) {
          failures.fetch_add(1);
          continue;
        }
        const auto out = ordered_json::parse(res->body)["results"];
        const double got = out[0]["scores"]["banking_related"].get<double>();
        if (got != static_cast<double>(k) / (k + 1) ||
            out[1]["scores"]["banking_related"].get<double>() != 0.0) {
          mismatches.fetch_add(1);
        }
      }
    });
  }
  for (auto& t : threads) t.join();
  EXPECT_EQ(failures.load(), 0);
  EXPECT_EQ(mismatches.load(), 0);
  const auto m = ordered_json::parse(service->Metrics().body);
  EXPECT_EQ(m["requests_total"], kClients * kRequests);
  EXPECT_LT(m["backend_calls"].get<int>(), kClients * kRequests);
  gw.Stop();
}

TEST(HttpGatewayTest, StopDrainsInFlightRequests) {
  auto sleepy = std::make_shared<SleepBackend>(std::chrono::milliseconds(300));
  Gateway gw(MakeService(sleepy));
  const int port = gw.Start("127.0.0.1", 0);
  auto pending = std::async(std::launch::async, [port] {
    httplib::Client client("127.0.0.1", port);
    auto res = client.Post("/v1/moderate", R"({"text":"hi"})", "application/json");
    return res ? res->status : -1;
  });
  // Stop only once the request is inside the backend.
  const auto give_up = std::chrono::steady_clock::now() + std::chrono::seconds(10);
  while (sleepy->calls() == 0 && std::chrono::steady_clock::now() < give_up) {
    std::this_thread::sleep_for(std::chrono::milliseconds(1));
  }
  ASSERT_EQ(sleepy->calls(), 1);
  gw.Stop();
  EXPECT_EQ(pending.get(), 200);
  httplib::Client late("127.0.0.1", port);
  late.set_connection_timeout(1, 0);
  EXPECT_FALSE(late.Get("/healthz"));
}

TEST(BatcherTest, SplitsLargeRequestsAndPreservesOrder) {
  auto counting = std::make_shared<CountingBackend>(testing::ReferenceScorer());
  RequestBatcher batcher(counting, {4, std::chrono::microseconds(0), 100});
  std::vector<std::string> texts;
  for (int i = 0; i < 10; ++i) texts.push_back(i % 2 ? "loan" : "kill kill");
  const auto scores = batcher.Score(texts);
  ASSERT_EQ(scores.size(), 10u);
  for (int i = 0; i < 10; ++i) {
    EXPECT_EQ(scores[i], testing::ReferenceScorer()->ScoreOne(texts[i]));
  }
  EXPECT_EQ(counting->sizes(), (std::vector<size_t>{4, 4, 2}));
  EXPECT_TRUE(batcher.Score({}).empty());
  EXPECT_THROW(RequestBatcher(counting, {0, std::chrono::microseconds(0), 1}), InvalidArgument);
}

}  // namespace
}  // namespace juree
