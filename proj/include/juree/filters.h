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

// Candidate filters. Both filters update each candidate's filter_state and
// reasons in place and return a report with one record per candidate, in
// input order.

#ifndef JUREE_FILTERS_H_
#define JUREE_FILTERS_H_

#include <array>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "juree/corpus.h"
#include "juree/foundry.h"

namespace juree {

// embed(text) -> unit-norm vector of fixed dimension; deterministic.
class Embedder {
 public:
  virtual ~Embedder() = default;
  virtual std::vector<double> Embed(std::string_view text) const = 0;
  virtual size_t dimension() const = 0;
};

// Bag of lowercase whitespace tokens hashed (FNV-1a) into 256 buckets, then
// L2-normalized. Throws InvalidArgument for text without tokens.
class HashingEmbedder : public Embedder {
 public:
  static constexpr size_t kDimension = 256;
  std::vector<double> Embed(std::string_view text) const override;
  size_t dimension() const override { return kDimension; }
};

std::vector<double> ReferenceEmbed(std::string_view text);

double Dot(std::span<const double> a, std::span<const double> b);
double EuclideanDistance(std::span<const double> a, std::span<const double> b);

struct DistanceStats {
  std::string nearest_seed_id;
  Label nearest_label = Label::kBankingRelated;
  double nearest_cosine = 0.0;
  double nearest_euclidean = 0.0;
  // -1 when no seed shares the candidate's label.
  double max_same_label_cosine = -1.0;
};

struct FilterRecord {
  std::string id;
  Label label = Label::kBankingRelated;
  std::string stage;  // "roundtrip" or "distance"
  FilterState decision = FilterState::kPending;
  std::vector<FilterReason> reasons;
  std::optional<DistanceStats> distance;
};

struct FilterReport {
  std::vector<FilterRecord> records;
  std::array<size_t, kNumClasses> total{};
  std::array<size_t, kNumClasses> kept{};
  size_t n_kept = 0;
  size_t n_dropped = 0;
  size_t n_flagged = 0;

  double keep_rate() const;
  // nullopt when the class had no candidates.
  std::optional<double> class_keep_rate(Label label) const;
};

// One JSON line per record: {id, stage, decision, reasons}.
std::string FilterReportToJsonl(const FilterReport& report);
// Counts and keep rates, overall and per class.
std::string FilterSummaryJson(const FilterReport& report);

// Predicts a label for a text, e.g. an LLM judge. May throw.
using LabelJudge = std::function<Label(const std::string&)>;

// Keeps a candidate iff the judge re-predicts its label. A judge failure
// flags the candidate instead of dropping it.
FilterReport RoundtripFilter(std::vector<Candidate>& candidates,
                             const LabelJudge& judge);

struct DistancePolicy {
  double tau_keep = 0.15;
  double tau_conflict = 0.85;
};

// Compares each candidate with every seed by cosine similarity (Euclidean
// distance is recorded alongside). In order of precedence:
//  flagged  the globally nearest seed has another label and cosine >=
//           tau_conflict (a likely cross-class overlap);
//  kept     some same-label seed has cosine >= tau_keep;
//  dropped  otherwise, as an outlier.
// Throws InvalidArgument for an empty seed set or taus outside [0,1].
FilterReport DistanceFilter(std::vector<Candidate>& candidates,
                            const Dataset& seeds, const Embedder& embedder,
                            const DistancePolicy& policy = {});

// CSV with columns id,label,v0..v(D-1), one row per example in dataset order.
void ExportEmbeddings(const Dataset& dataset, const Embedder& embedder,
                      std::ostream& out);
std::string ExportEmbeddingsCsv(const Dataset& dataset, const Embedder& embedder);

}  // namespace juree

#endif  // JUREE_FILTERS_H_
