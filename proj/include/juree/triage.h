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

// Uncertainty triage and review commit: the active-learning loop that routes
// the scorer's least certain candidates to a human and folds the decisions
// back into the dataset.
//
// Uncertainty is 1 - (p_top1 - p_top2) over the candidate's score vector. A
// candidate is queued when its margin is below the policy threshold.

#ifndef JUREE_TRIAGE_H_
#define JUREE_TRIAGE_H_

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "juree/corpus.h"
#include "juree/foundry.h"
#include "juree/scorer.h"
#include "juree/taxonomy.h"

namespace juree {

enum class TriageStatus { kQueued, kLabeled, kSkipped };
std::string_view TriageStatusName(TriageStatus status);
TriageStatus TriageStatusFromName(std::string_view name);

struct TriageResolution {
  Label label = Label::kBankingRelated;
  std::string reviewer_id;
  std::string timestamp;

  bool operator==(const TriageResolution&) const = default;
};

struct TriageItem {
  std::string candidate_id;
  ScoreVector scores;
  double uncertainty = 0.0;
  Label proposed_label = Label::kBankingRelated;
  TriageStatus status = TriageStatus::kQueued;
  std::optional<TriageResolution> resolution;
  // The candidate under review, so a queue file is self-contained.
  Example candidate;

  bool operator==(const TriageItem&) const = default;
};

struct TriagePolicy {
  double margin_threshold = 0.2;
  size_t top_k = 200;
  // Queue distance-filter conflicts regardless of margin.
  bool always_queue_flagged = false;
};

// Scores the candidates, keeps those with margin < margin_threshold, and
// returns the top_k by (uncertainty desc, candidate id asc).
std::vector<TriageItem> UncertaintyTriage(std::span<const Candidate> candidates,
                                          InferenceBackend& backend,
                                          const Taxonomy& taxonomy,
                                          const TriagePolicy& policy = {},
                                          size_t max_batch = 128);

// Builds a queued item from an already computed score vector.
TriageItem MakeTriageItem(const Example& candidate, const ScoreVector& scores,
                          const Taxonomy& taxonomy);

// Strict ordering used by the queue.
bool TriageOrder(const TriageItem& a, const TriageItem& b);

std::string TriageItemToJson(const TriageItem& item);
TriageItem TriageItemFromJson(std::string_view json);
std::string TriageQueueToJsonl(std::span<const TriageItem> items);
std::vector<TriageItem> LoadTriageQueue(const std::string& path);

struct ReviewDecision {
  std::string candidate_id;
  Label label = Label::kBankingRelated;
  std::string reviewer_id;
  std::string timestamp;  // empty means "now"
};

// Turns each decided candidate into a reviewed Example and merges it into
// the dataset. Candidates are looked up first in `pool`, then in the dataset
// itself. A changed label records prior_label and recomputes the id; the old
// id is removed from the dataset. Reviewed copies replace existing entries
// with the same id in place; new examples are appended in decision order. Throws NotFound for an unknown candidate id and Conflict
// when the same candidate is decided twice in one call.
Dataset CommitReview(const Dataset& dataset, std::span<const Example> pool,
                     std::span<const ReviewDecision> decisions);

}  // namespace juree

#endif  // JUREE_TRIAGE_H_
