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

// One refinement round of the synthetic data loop:
//
//   generate -> counterfactuals -> augment -> round-trip filter ->
//   distance filter -> uncertainty triage -> review -> commit
//
// Candidates that survive both filters without being queued are accepted
// unreviewed; queued candidates enter the dataset only once reviewed. The
// output dataset is a valid seed pool for the next round.

#ifndef JUREE_PIPELINE_H_
#define JUREE_PIPELINE_H_

#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include "juree/chat.h"
#include "juree/corpus.h"
#include "juree/filters.h"
#include "juree/foundry.h"
#include "juree/scorer.h"
#include "juree/triage.h"

namespace juree {

struct CounterfactualSpec {
  std::string source_id;
  Label target_label = Label::kSystemAttack;
};

struct AugmentSpec {
  std::string source_id;
  AugmentOp op = AugmentOp::kSwap;
  double p = 0.3;
  uint64_t seed = 0;
};

struct PipelineConfig {
  std::vector<GenerationRecipe> recipes;
  size_t candidates_per_recipe = 10;
  GenerationOptions generation;
  std::vector<CounterfactualSpec> counterfactuals;
  std::vector<AugmentSpec> augmentations;
  ChatSettings rewrite_settings;
  DistancePolicy distance;
  TriagePolicy triage{.always_queue_flagged = true};
  size_t max_batch = 128;
};

// Receives the triage queue and returns decisions for any subset of it.
using Reviewer =
    std::function<std::vector<ReviewDecision>(const std::vector<TriageItem>&)>;

struct PipelineOutput {
  std::vector<Candidate> candidates;  // every candidate with its final state
  FilterReport roundtrip;
  FilterReport distance;
  std::vector<TriageItem> queue;      // with resolutions filled in
  Dataset dataset;
};

struct PipelineDeps {
  ChatClient& chat;
  LabelJudge judge;
  const Embedder& embedder;
  InferenceBackend& backend;
  const Taxonomy& taxonomy;
  const SynonymProvider& synonyms;
  Reviewer reviewer;  // may be empty: nothing reviewed this round
};

PipelineOutput RunPipelineRound(const PipelineConfig& config, const Dataset& seeds,
                                const PipelineDeps& deps);

// Writes dataset.jsonl, candidates.jsonl, roundtrip_report.jsonl,
// distance_report.jsonl and triage_queue.jsonl into dir.
void WritePipelineOutputs(const PipelineOutput& output,
                          const std::filesystem::path& dir);

}  // namespace juree

#endif  // JUREE_PIPELINE_H_
