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

#include "juree/evalkit.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <sstream>

#include "json.hpp"
#include "juree/error.h"
#include "juree/util.h"

namespace juree {

namespace {

using ordered_json = nlohmann::ordered_json;
using Clock = std::chrono::steady_clock;

double SafeDiv(double num, double den) { return den == 0.0 ? 0.0 : num / den; }

PrfScores Prf(double tp, double fp, double fn) {
  PrfScores s;
  s.precision = SafeDiv(tp, tp + fp);
  s.recall = SafeDiv(tp, tp + fn);
  s.f1 = SafeDiv(2.0 * s.precision * s.recall, s.precision + s.recall);
  return s;
}

ordered_json PrfJson(const PrfScores& s) {
  ordered_json j;
  j["precision"] = s.precision;
  j["recall"] = s.recall;
  j["f1"] = s.f1;
  return j;
}

}  // namespace

ConfusionMatrix Confusion(std::span<const Label> golds,
                          std::span<const Label> preds) {
  if (golds.size() != preds.size()) {
    throw InvalidArgument("confusion: " + std::to_string(golds.size()) +
                          " golds vs " + std::to_string(preds.size()) + " preds");
  }
  ConfusionMatrix cm;
  for (size_t i = 0; i < golds.size(); ++i) {
    ++cm.counts[Index(golds[i])][Index(preds[i])];
  }
  cm.total = static_cast<int64_t>(golds.size());
  return cm;
}

ConfusionMatrix Confusion(std::span<const std::string> golds,
                          std::span<const std::string> preds) {
  if (golds.size() != preds.size()) {
    throw InvalidArgument("confusion: " + std::to_string(golds.size()) +
                          " golds vs " + std::to_string(preds.size()) + " preds");
  }
  std::vector<Label> g, p;
  g.reserve(golds.size());
  p.reserve(preds.size());
  for (const auto& s : golds) g.push_back(LabelFromName(s));
  for (const auto& s : preds) p.push_back(LabelFromName(s));
  return Confusion(std::span<const Label>(g), std::span<const Label>(p));
}

MetricsReport ComputeMetrics(const ConfusionMatrix& cm) {
  if (cm.total <= 0) throw InvalidArgument("compute_metrics: empty confusion matrix");
  MetricsReport r;
  r.support = cm.total;
  double trace = 0.0, sum_fp = 0.0, sum_fn = 0.0;
  for (size_t c = 0; c < kNumClasses; ++c) {
    const double tp = static_cast<double>(cm.counts[c][c]);
    double fp = 0.0, fn = 0.0;
    for (size_t k = 0; k < kNumClasses; ++k) {
      if (k == c) continue;
      fp += static_cast<double>(cm.counts[k][c]);
      fn += static_cast<double>(cm.counts[c][k]);
    }
    r.per_class[c] = Prf(tp, fp, fn);
    r.macro.precision += r.per_class[c].precision;
    r.macro.recall += r.per_class[c].recall;
    r.macro.f1 += r.per_class[c].f1;
    trace += tp;
    sum_fp += fp;
    sum_fn += fn;
  }
  r.macro.precision /= kNumClasses;
  r.macro.recall /= kNumClasses;
  r.macro.f1 /= kNumClasses;
  r.micro = Prf(trace, sum_fp, sum_fn);
  r.accuracy = trace / static_cast<double>(cm.total);
  return r;
}

std::optional<double> AveragePrecision(std::span<const double> scores,
                                       std::span<const bool> positive) {
  if (scores.size() != positive.size()) {
    throw InvalidArgument("average precision: length mismatch");
  }
  std::vector<size_t> order(scores.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](size_t a, size_t b) { return scores[a] > scores[b]; });
  size_t hits = 0;
  double sum = 0.0;
  for (size_t rank = 0; rank < order.size(); ++rank) {
    if (positive[order[rank]]) {
      ++hits;
      sum += static_cast<double>(hits) / static_cast<double>(rank + 1);
    }
  }
  if (hits == 0) return std::nullopt;
  return sum / static_cast<double>(hits);
}

AuprcReport Auprc(std::span<const Label> golds,
                  std::span<const ScoreVector> scores) {
  if (golds.size() != scores.size()) {
    throw InvalidArgument("auprc: " + std::to_string(golds.size()) +
                          " golds vs " + std::to_string(scores.size()) + " scores");
  }
  AuprcReport r;
  std::vector<double> column(golds.size());
  std::unique_ptr<bool[]> positive(new bool[golds.size()]);
  double sum = 0.0;
  size_t defined = 0;
  for (Label label : kCanonicalOrder) {
    for (size_t i = 0; i < golds.size(); ++i) {
      column[i] = scores[i][label];
      positive[i] = golds[i] == label;
    }
    r.per_class[Index(label)] = AveragePrecision(
        column, std::span<const bool>(positive.get(), golds.size()));
    if (r.per_class[Index(label)]) {
      sum += *r.per_class[Index(label)];
      ++defined;
    }
  }
  if (defined == 0) throw InvalidArgument("auprc: no class has a positive example");
  r.macro = sum / static_cast<double>(defined);
  return r;
}

std::string MetricsToJson(const MetricsReport& report) {
  ordered_json j;
  j["support"] = report.support;
  j["accuracy"] = report.accuracy;
  ordered_json per = ordered_json::object();
  for (Label label : kCanonicalOrder) {
    per[std::string(LabelName(label))] = PrfJson(report.per_class[Index(label)]);
  }
  j["per_class"] = std::move(per);
  j["macro"] = PrfJson(report.macro);
  j["micro"] = PrfJson(report.micro);
  if (report.auprc) {
    ordered_json a;
    ordered_json pc = ordered_json::object();
    for (Label label : kCanonicalOrder) {
      const auto& v = report.auprc->per_class[Index(label)];
      pc[std::string(LabelName(label))] = v ? ordered_json(*v) : ordered_json();
    }
    a["per_class"] = std::move(pc);
    a["macro"] = report.auprc->macro;
    j["auprc"] = std::move(a);
  }
  return j.dump(2) + "\n";
}

std::string MetricsToCsv(const MetricsReport& report) {
  std::ostringstream out;
  out << "metric,class,value\n";
  out << "accuracy,all," << FormatDouble(report.accuracy) << '\n';
  for (Label label : kCanonicalOrder) {
    const auto& s = report.per_class[Index(label)];
    out << "precision," << LabelName(label) << ',' << FormatDouble(s.precision) << '\n';
    out << "recall," << LabelName(label) << ',' << FormatDouble(s.recall) << '\n';
    out << "f1," << LabelName(label) << ',' << FormatDouble(s.f1) << '\n';
  }
  for (const auto& [name, s] : {std::pair{"macro", report.macro},
                                std::pair{"micro", report.micro}}) {
    out << "precision," << name << ',' << FormatDouble(s.precision) << '\n';
    out << "recall," << name << ',' << FormatDouble(s.recall) << '\n';
    out << "f1," << name << ',' << FormatDouble(s.f1) << '\n';
  }
  if (report.auprc) {
    for (Label label : kCanonicalOrder) {
      const auto& v = report.auprc->per_class[Index(label)];
      if (v) out << "auprc," << LabelName(label) << ',' << FormatDouble(*v) << '\n';
    }
    out << "auprc,macro," << FormatDouble(report.auprc->macro) << '\n';
  }
  return out.str();
}

double NearestRankPercentile(std::span<const double> sorted, double q) {
  if (sorted.empty()) throw InvalidArgument("percentile of empty sample");
  const auto n = static_cast<double>(sorted.size());
  auto rank = static_cast<size_t>(std::ceil(q * n));
  rank = std::clamp<size_t>(rank, 1, sorted.size());
  return sorted[rank - 1];
}

LatencyReport LatencyBench(InferenceBackend& backend,
                           std::span<const std::string> texts,
                           size_t batch_size, size_t warmup_batches) {
  if (texts.empty()) throw InvalidArgument("latency bench: nothing to time");
  if (batch_size == 0) throw InvalidArgument("latency bench: batch_size must be >= 1");

  const size_t n_batches = (texts.size() + batch_size - 1) / batch_size;
  for (size_t w = 0; w < warmup_batches; ++w) {
    const size_t begin = (w % n_batches) * batch_size;
    const size_t end = std::min(texts.size(), begin + batch_size);
    BatchScore(backend, texts.subspan(begin, end - begin), batch_size);
  }

  LatencyReport r;
  r.n_items = texts.size();
  r.batch_size = batch_size;
  std::vector<double> per_item;
  per_item.reserve(texts.size());
  const auto start = Clock::now();
  for (size_t b = 0; b < n_batches; ++b) {
    const size_t begin = b * batch_size;
    const size_t end = std::min(texts.size(), begin + batch_size);
    const auto t0 = Clock::now();
    BatchScore(backend, texts.subspan(begin, end - begin), batch_size);
    const double ms =
        std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
    r.batches.push_back({b, end - begin, ms});
    per_item.insert(per_item.end(), end - begin,
                    ms / static_cast<double>(end - begin));
  }
  r.wall_total_s =
      std::chrono::duration<double>(Clock::now() - start).count();
  std::sort(per_item.begin(), per_item.end());
  r.per_item_mean_ms = r.wall_total_s * 1e3 / static_cast<double>(r.n_items);
  r.p50_ms = NearestRankPercentile(per_item, 0.50);
  r.p95_ms = NearestRankPercentile(per_item, 0.95);
  r.p99_ms = NearestRankPercentile(per_item, 0.99);
  r.throughput = r.wall_total_s > 0.0
                     ? static_cast<double>(r.n_items) / r.wall_total_s
                     : 0.0;
  return r;
}

std::string LatencyToJson(const LatencyReport& r) {
  ordered_json j;
  j["n_items"] = r.n_items;
  j["batch_size"] = r.batch_size;
  j["wall_total_s"] = r.wall_total_s;
  j["per_item_mean_ms"] = r.per_item_mean_ms;
  j["p50_ms"] = r.p50_ms;
  j["p95_ms"] = r.p95_ms;
  j["p99_ms"] = r.p99_ms;
  j["throughput"] = r.throughput;
  return j.dump(2) + "\n";
}

std::string LatencyToCsv(const LatencyReport& r) {
  std::ostringstream out;
  out << "batch_index,batch_size,wall_ms\n";
  for (const auto& b : r.batches) {
    out << b.batch_index << ',' << b.batch_size << ',' << FormatDouble(b.wall_ms)
        << '\n';
  }
  return out.str();
}

Evaluation Evaluate(InferenceBackend& backend, const Dataset& dataset,
                    const Taxonomy& taxonomy, size_t max_batch) {
  if (dataset.empty()) throw InvalidArgument("evaluate: empty dataset");
  std::vector<std::string> texts;
  std::vector<Label> golds;
  texts.reserve(dataset.size());
  golds.reserve(dataset.size());
  for (const Example& e : dataset.examples()) {
    texts.push_back(e.text);
    golds.push_back(e.label);
  }
  Evaluation ev;
  ev.scores = BatchScore(backend, texts, max_batch);
  ev.predictions.reserve(ev.scores.size());
  for (const ScoreVector& s : ev.scores) {
    ev.predictions.push_back(MulticlassDecision(s, taxonomy).chosen);
  }
  ev.confusion = Confusion(std::span<const Label>(golds),
                           std::span<const Label>(ev.predictions));
  ev.metrics = ComputeMetrics(ev.confusion);
  ev.metrics.auprc = Auprc(golds, ev.scores);
  return ev;
}

}  // namespace juree
