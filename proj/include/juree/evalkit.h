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

// Classification metrics (precision, recall, F1, accuracy, AUPRC) and the
// batched latency benchmark.
//
// Conventions:
//  * a zero denominator yields 0, never NaN;
//  * macro averages are unweighted means over all six classes, including
//    classes absent from both golds and predictions;
//  * AUPRC is one-vs-rest step-wise average precision over a ranking by
//    descending score, equal scores ordered by input index.

#ifndef JUREE_EVALKIT_H_
#define JUREE_EVALKIT_H_

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "juree/corpus.h"
#include "juree/scorer.h"
#include "juree/taxonomy.h"

namespace juree {

struct ConfusionMatrix {
  // counts[gold][pred], canonical class order.
  std::array<std::array<int64_t, kNumClasses>, kNumClasses> counts{};
  int64_t total = 0;

  bool operator==(const ConfusionMatrix&) const = default;
};

// Throws InvalidArgument on a length mismatch.
ConfusionMatrix Confusion(std::span<const Label> golds,
                          std::span<const Label> preds);
// Name-based overload; throws InvalidArgument on unknown labels.
ConfusionMatrix Confusion(std::span<const std::string> golds,
                          std::span<const std::string> preds);

struct PrfScores {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

struct AuprcReport {
  // nullopt where the class has no positive example.
  std::array<std::optional<double>, kNumClasses> per_class;
  double macro = 0.0;
};

struct MetricsReport {
  double accuracy = 0.0;
  std::array<PrfScores, kNumClasses> per_class;
  PrfScores macro;
  PrfScores micro;
  std::optional<AuprcReport> auprc;
  int64_t support = 0;
};

// Throws InvalidArgument when the matrix is empty.
MetricsReport ComputeMetrics(const ConfusionMatrix& cm);

// Average precision for one ranking: scores and binary relevance.
// Returns nullopt when there are no positives.
std::optional<double> AveragePrecision(std::span<const double> scores,
                                       std::span<const bool> positive);

// Throws InvalidArgument on a length mismatch or when no class has a
// positive example.
AuprcReport Auprc(std::span<const Label> golds,
                  std::span<const ScoreVector> scores);

// Structured JSON and a flat CSV (metric,class,value) for plotting.
std::string MetricsToJson(const MetricsReport& report);
std::string MetricsToCsv(const MetricsReport& report);

struct BatchTiming {
  size_t batch_index = 0;
  size_t batch_size = 0;
  double wall_ms = 0.0;
};

struct LatencyReport {
  size_t n_items = 0;
  size_t batch_size = 0;
  double wall_total_s = 0.0;
  double per_item_mean_ms = 0.0;
  double p50_ms = 0.0;
  double p95_ms = 0.0;
  double p99_ms = 0.0;
  double throughput = 0.0;  // items per second
  std::vector<BatchTiming> batches;
};

// Runs `warmup_batches` untimed batches, then times scoring of the full set
// batch by batch. Each item is attributed its batch's wall time divided by
// the batch size; percentiles are nearest-rank over those per-item values.
// The caller must give the benchmark exclusive use of the backend.
// Throws InvalidArgument for an empty input or batch_size 0.
LatencyReport LatencyBench(InferenceBackend& backend,
                           std::span<const std::string> texts,
                           size_t batch_size, size_t warmup_batches);

// Nearest-rank percentile of already-sorted values, q in (0, 1].
double NearestRankPercentile(std::span<const double> sorted, double q);

std::string LatencyToJson(const LatencyReport& report);
// Columns batch_index,batch_size,wall_ms.
std::string LatencyToCsv(const LatencyReport& report);

struct Evaluation {
  MetricsReport metrics;
  ConfusionMatrix confusion;
  std::vector<Label> predictions;
  std::vector<ScoreVector> scores;
};

// Scores every example, predicts by MulticlassDecision and reports metrics
// with AUPRC.
Evaluation Evaluate(InferenceBackend& backend, const Dataset& dataset,
                    const Taxonomy& taxonomy, size_t max_batch = 128);

}  // namespace juree

#endif  // JUREE_EVALKIT_H_
