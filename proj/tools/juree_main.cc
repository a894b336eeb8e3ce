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

// juree: command-line entry points for the moderation toolkit.

#include <pthread.h>
#include <signal.h>

#include <cstdio>
#include <exception>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "juree/chat.h"
#include "juree/corpus.h"
#include "juree/evalkit.h"
#include "juree/filters.h"
#include "juree/foundry.h"
#include "juree/gateway.h"
#include "juree/judges.h"
#include "juree/scorer.h"
#include "juree/taxonomy.h"
#include "juree/triage.h"
#include "juree/util.h"

namespace juree {
namespace {

Taxonomy LoadTaxonomy(const std::string& path) {
  return path.empty() ? Taxonomy::Default() : Taxonomy::LoadFile(path);
}

void Emit(const std::string& out_path, const std::string& data) {
  if (out_path.empty() || out_path == "-") {
    std::cout << data;
  } else {
    WriteFileAtomic(out_path, data);
  }
}

std::shared_ptr<ChatClient> MakeChat(const std::string& audit_path) {
  std::shared_ptr<ChatClient> chat =
      std::make_shared<HttpChatClient>(HttpChatOptionsFromEnv());
  if (!audit_path.empty()) chat = std::make_shared<AuditingChatClient>(chat, audit_path);
  return chat;
}

int Serve(const std::string& config_path, std::optional<int> port) {
  GatewayConfig config = GatewayConfig::LoadFile(config_path);
  if (port) config.port = *port;

  // Route SIGINT/SIGTERM to a waiter thread so shutdown runs outside a
  // signal handler.
  sigset_t signals;
  sigemptyset(&signals);
  sigaddset(&signals, SIGINT);
  sigaddset(&signals, SIGTERM);
  pthread_sigmask(SIG_BLOCK, &signals, nullptr);

  auto service = std::shared_ptr<ModerationService>(ModerationService::FromConfig(config));
  Gateway gateway(service);
  const int bound = gateway.Start(config.host, config.port);
  std::cerr << "juree: serving on " << config.host << ":" << bound << "\n";
  int sig = 0;
  sigwait(&signals, &sig);
  std::cerr << "juree: signal " << sig << ", draining\n";
  gateway.Stop();
  return 0;
}

int Eval(const std::string& dataset_path, const std::string& backend_spec,
         const std::string& taxonomy_path, const std::string& json_out,
         const std::string& csv_out, size_t max_batch) {
  const Dataset dataset = LoadDataset(dataset_path);
  auto backend = MakeBackend(backend_spec);
  const Evaluation eval = Evaluate(*backend, dataset, LoadTaxonomy(taxonomy_path), max_batch);
  Emit(json_out, MetricsToJson(eval.metrics) + "\n");
  if (!csv_out.empty()) WriteFileAtomic(csv_out, MetricsToCsv(eval.metrics));
  return 0;
}

int Gen(const std::string& recipe_path, size_t n, std::optional<uint64_t> seed,
        const std::string& pool_path, const std::string& out, int max_calls,
        const std::string& audit_path) {
  GenerationRecipe recipe = LoadRecipe(recipe_path);
  if (seed) recipe.seed = *seed;
  const Dataset pool = pool_path.empty() ? Dataset() : LoadDataset(pool_path);
  auto chat = MakeChat(audit_path);
  GenerationOptions options;
  options.max_calls = max_calls;
  const GenerationResult result = GenerateCandidates(recipe, n, *chat, pool, options);
  Emit(out, CandidatesToJsonl(result.candidates));
  if (result.error) {
    std::cerr << "juree gen: " << *result.error << "\n";
    return 2;
  }
  return 0;
}

LabelJudge MakeJudge(const std::string& spec, const Taxonomy& taxonomy,
                     const std::string& model, const std::string& audit_path) {
  if (spec == "reference" || spec.rfind("reference:", 0) == 0 ||
      spec.rfind("remote:", 0) == 0) {
    std::shared_ptr<InferenceBackend> backend = MakeBackend(spec);
    return [backend, taxonomy](const std::string& text) {
      const std::string texts[] = {text};
      return MulticlassDecision(backend->Score(texts).front(), taxonomy).chosen;
    };
  }
  if (spec == "llm-single" || spec == "llm-multi") {
    std::shared_ptr<ChatClient> chat = MakeChat(audit_path);
    JudgeOptions options;
    if (!model.empty()) options.model_id = model;
    const bool multi = spec == "llm-multi";
    return [chat, options, taxonomy, multi](const std::string& text) {
      const JudgeOutcome outcome = multi ? MultiJudgeClassify(text, *chat, taxonomy, options)
                                         : SingleJudgeClassify(text, *chat, options);
      if (outcome.unresolved) throw BackendError("judge gave no usable answer");
      return outcome.label;
    };
  }
  throw InvalidArgument("unknown judge '" + spec + "'");
}

int Filter(const std::string& stage, const std::string& in, const std::string& seeds_path,
           const std::string& judge_spec, const std::string& model,
           const std::string& taxonomy_path, double tau_keep, double tau_conflict,
           const std::string& out, const std::string& report, const std::string& audit_path) {
  std::vector<Candidate> candidates = LoadCandidates(in);
  FilterReport result;
  if (stage == "roundtrip") {
    result = RoundtripFilter(candidates,
                             MakeJudge(judge_spec, LoadTaxonomy(taxonomy_path), model, audit_path));
  } else if (stage == "distance") {
    if (seeds_path.empty()) throw InvalidArgument("--seeds is required for the distance stage");
    const Dataset seeds = LoadDataset(seeds_path);
    result = DistanceFilter(candidates, seeds, HashingEmbedder(), {tau_keep, tau_conflict});
  } else {
    throw InvalidArgument("--stage must be roundtrip or distance");
  }
  Emit(out, CandidatesToJsonl(candidates));
  if (!report.empty()) WriteFileAtomic(report, FilterReportToJsonl(result));
  std::cerr << FilterSummaryJson(result) << "\n";
  return 0;
}

int Triage(const std::string& in, size_t k, double margin, const std::string& backend_spec,
           const std::string& taxonomy_path, bool queue_flagged, const std::string& out) {
  std::vector<Candidate> all = LoadCandidates(in);
  std::vector<Candidate> reviewable;
  for (auto& c : all) {
    if (c.filter_state != FilterState::kDropped) reviewable.push_back(std::move(c));
  }
  auto backend = MakeBackend(backend_spec);
  TriagePolicy policy;
  policy.margin_threshold = margin;
  policy.top_k = k;
  policy.always_queue_flagged = queue_flagged;
  const auto queue =
      UncertaintyTriage(reviewable, *backend, LoadTaxonomy(taxonomy_path), policy);
  Emit(out, TriageQueueToJsonl(queue));
  return 0;
}

int Bench(const std::string& dataset_path, size_t batch_size, const std::string& backend_spec,
          size_t warmup, size_t repeat, const std::string& json_out,
          const std::string& csv_out) {
  const Dataset dataset = LoadDataset(dataset_path);
  std::vector<std::string> texts;
  for (size_t r = 0; r < repeat; ++r) {
    for (const Example& e : dataset.examples()) texts.push_back(e.text);
  }
  auto backend = MakeBackend(backend_spec);
  const LatencyReport report = LatencyBench(*backend, texts, batch_size, warmup);
  Emit(json_out, LatencyToJson(report) + "\n");
  if (!csv_out.empty()) WriteFileAtomic(csv_out, LatencyToCsv(report));
  return 0;
}

int Split(const std::string& in, double frac, uint64_t seed, const std::string& train_out,
          const std::string& test_out) {
  const SplitResult split = StratifiedSplit(LoadDataset(in), frac, seed);
  SaveDataset(split.train, train_out);
  SaveDataset(split.test, test_out);
  std::cerr << "train " << split.train.size() << ", test " << split.test.size() << "\n";
  return 0;
}

int Main(int argc, char** argv) {
  CLI::App app{"juree: moderation gateway, evaluation and synthetic data tools"};
  app.require_subcommand(1);

  std::string taxonomy_path;
  std::string audit_path;
  app.add_option("--taxonomy", taxonomy_path, "taxonomy JSON (default: built-in)");
  app.add_option("--audit-log", audit_path, "append LLM prompts/responses to this JSONL file");

  auto* serve = app.add_subcommand("serve", "run the HTTP gateway");
  std::string config_path;
  std::optional<int> port;
  serve->add_option("--config", config_path, "gateway config JSON")->required();
  serve->add_option("--port", port, "override the configured port");

  auto* eval = app.add_subcommand("eval", "score a dataset and report metrics");
  std::string dataset_path;
  std::string backend_spec = "reference";
  std::string json_out;
  std::string csv_out;
  size_t max_batch = 128;
  eval->add_option("--dataset", dataset_path)->required();
  eval->add_option("--backend", backend_spec, "reference | reference:LEXICON | remote:URL");
  eval->add_option("--out", json_out, "metrics JSON (default stdout)");
  eval->add_option("--csv", csv_out, "metrics CSV");
  eval->add_option("--max-batch", max_batch);

  auto* gen = app.add_subcommand("gen", "generate synthetic candidates with an LLM");
  std::string recipe_path;
  size_t n = 10;
  std::optional<uint64_t> seed;
  std::string pool_path;
  std::string out;
  int max_calls = 5;
  gen->add_option("--recipe", recipe_path)->required();
  gen->add_option("--n", n)->required();
  gen->add_option("--seed", seed, "overrides the recipe seed");
  gen->add_option("--pool", pool_path, "seed dataset supplying few-shot exemplars");
  gen->add_option("--out", out, "candidates JSONL (default stdout)");
  gen->add_option("--max-calls", max_calls);

  auto* filter = app.add_subcommand("filter", "run a candidate filter stage");
  std::string stage;
  std::string in;
  std::string seeds_path;
  std::string judge_spec = "reference";
  std::string model;
  std::string report;
  double tau_keep = DistancePolicy{}.tau_keep;
  double tau_conflict = DistancePolicy{}.tau_conflict;
  filter->add_option("--stage", stage)->required()->check(
      CLI::IsMember({"roundtrip", "distance"}));
  filter->add_option("--in", in, "candidates JSONL")->required();
  filter->add_option("--seeds", seeds_path, "seed dataset (distance stage)");
  filter->add_option("--judge", judge_spec,
                     "reference | reference:LEXICON | remote:URL | llm-single | llm-multi");
  filter->add_option("--model", model, "LLM model id for llm judges");
  filter->add_option("--tau-keep", tau_keep);
  filter->add_option("--tau-conflict", tau_conflict);
  filter->add_option("--out", out, "updated candidates JSONL (default stdout)");
  filter->add_option("--report", report, "per-candidate decisions JSONL");

  auto* triage = app.add_subcommand("triage", "build the uncertainty review queue");
  size_t k = TriagePolicy{}.top_k;
  double margin = TriagePolicy{}.margin_threshold;
  bool queue_flagged = false;
  triage->add_option("--k", k)->required();
  triage->add_option("--in", in, "candidates JSONL")->required();
  triage->add_option("--margin", margin);
  triage->add_option("--backend", backend_spec);
  triage->add_flag("--queue-flagged", queue_flagged, "always queue flagged candidates");
  triage->add_option("--out", out, "queue JSONL (default stdout)");

  auto* bench = app.add_subcommand("bench", "measure backend latency and throughput");
  size_t batch_size = 128;
  size_t warmup = 1;
  size_t repeat = 1;
  bench->add_option("--dataset", dataset_path)->required();
  bench->add_option("--batch-size", batch_size)->required();
  bench->add_option("--backend", backend_spec);
  bench->add_option("--warmup", warmup, "untimed warmup batches");
  bench->add_option("--repeat", repeat, "passes over the dataset");
  bench->add_option("--out", json_out, "latency JSON (default stdout)");
  bench->add_option("--csv", csv_out, "per-batch timings CSV");

  auto* split = app.add_subcommand("split", "stratified train/test split");
  double frac = 0.2;
  uint64_t split_seed = 0;
  std::string train_out;
  std::string test_out;
  split->add_option("--test-frac", frac)->required()->check(CLI::Range(0.0, 1.0));
  split->add_option("--seed", split_seed)->required();
  split->add_option("--in", in, "dataset JSONL")->required();
  split->add_option("--train-out", train_out)->required();
  split->add_option("--test-out", test_out)->required();

  auto* tax = app.add_subcommand("taxonomy", "print the effective taxonomy");

  CLI11_PARSE(app, argc, argv);

  if (*serve) return Serve(config_path, port);
  if (*eval) return Eval(dataset_path, backend_spec, taxonomy_path, json_out, csv_out, max_batch);
  if (*gen) return Gen(recipe_path, n, seed, pool_path, out, max_calls, audit_path);
  if (*filter) {
    return Filter(stage, in, seeds_path, judge_spec, model, taxonomy_path, tau_keep,
                  tau_conflict, out, report, audit_path);
  }
  if (*triage) return Triage(in, k, margin, backend_spec, taxonomy_path, queue_flagged, out);
  if (*bench) return Bench(dataset_path, batch_size, backend_spec, warmup, repeat, json_out, csv_out);
  if (*split) return Split(in, frac, split_seed, train_out, test_out);
  if (*tax) {
    std::cout << LoadTaxonomy(taxonomy_path).Serialize();
    return 0;
  }
  return 1;
}

}  // namespace
}  // namespace juree

int main(int argc, char** argv) {
  try {
    return juree::Main(argc, argv);
  } catch (const std::exception& e) {
    std::cerr << "juree: " << e.what() << "\n";
    return 1;
  }
}
