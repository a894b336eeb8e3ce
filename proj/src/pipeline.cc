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

#include "juree/pipeline.h"

#include <set>
#include <unordered_map>

#include "juree/error.h"
#include "juree/util.h"

namespace juree {

namespace {

const Example& RequireSeed(const Dataset& seeds, const std::string& id) {
  const Example* e = seeds.Find(id);
  if (e == nullptr) throw NotFound("seed example " + id + " not found");
  return *e;
}

}  // namespace

PipelineOutput RunPipelineRound(const PipelineConfig& config, const Dataset& seeds,
                                const PipelineDeps& deps) {
  PipelineOutput out;

  std::vector<Candidate> pool;
  for (const GenerationRecipe& recipe : config.recipes) {
    GenerationResult gen = GenerateCandidates(recipe, config.candidates_per_recipe,
                                              deps.chat, seeds, config.generation);
    for (auto& c : gen.candidates) pool.push_back(std::move(c));
  }
  for (const CounterfactualSpec& spec : config.counterfactuals) {
    pool.push_back(Counterfactual(RequireSeed(seeds, spec.source_id),
                                  spec.target_label, deps.chat, deps.taxonomy,
                                  config.rewrite_settings));
  }
  for (const AugmentSpec& spec : config.augmentations) {
    pool.push_back(AugmentExample(RequireSeed(seeds, spec.source_id), spec.op,
                                  spec.p, spec.seed, deps.synonyms));
  }

  // Exact duplicates collapse to their first occurrence; producers that were
  // already flagged (identical counterfactuals) skip straight to triage.
  std::vector<Candidate> fresh;
  std::vector<Candidate> preflagged;
  std::set<std::string> seen;
  for (auto& c : pool) {
    if (!seen.insert(c.id()).second || seeds.Find(c.id()) != nullptr) continue;
    if (c.filter_state == FilterState::kFlagged) {
      preflagged.push_back(std::move(c));
    } else {
      fresh.push_back(std::move(c));
    }
  }

  out.roundtrip = RoundtripFilter(fresh, deps.judge);
  std::vector<Candidate> survivors;
  for (const Candidate& c : fresh) {
    if (c.filter_state != FilterState::kDropped) survivors.push_back(c);
  }
  // Candidates flagged by the judge stay flagged; only the rest are measured.
  std::vector<Candidate> measured;
  std::vector<Candidate> judge_flagged;
  for (auto& c : survivors) {
    (c.filter_state == FilterState::kFlagged ? judge_flagged : measured)
        .push_back(std::move(c));
  }
  out.distance = DistanceFilter(measured, seeds, deps.embedder, config.distance);

  std::vector<Candidate> reviewable;
  for (const Candidate& c : measured) {
    if (c.filter_state != FilterState::kDropped) reviewable.push_back(c);
  }
  reviewable.insert(reviewable.end(), judge_flagged.begin(), judge_flagged.end());
  reviewable.insert(reviewable.end(), preflagged.begin(), preflagged.end());

  out.queue = UncertaintyTriage(reviewable, deps.backend, deps.taxonomy,
                                config.triage, config.max_batch);
  std::set<std::string> queued;
  for (const TriageItem& item : out.queue) queued.insert(item.candidate_id);

  std::vector<Example> accepted;
  for (const Candidate& c : reviewable) {
    if (c.filter_state == FilterState::kKept && !queued.count(c.id())) {
      accepted.push_back(c.example);
    }
  }
  Dataset dataset = Merge(seeds, Dataset(std::move(accepted)));

  if (deps.reviewer && !out.queue.empty()) {
    const std::vector<ReviewDecision> decisions = deps.reviewer(out.queue);
    std::vector<Example> queued_examples;
    for (const TriageItem& item : out.queue) queued_examples.push_back(item.candidate);
    dataset = CommitReview(dataset, queued_examples, decisions);
    std::unordered_map<std::string, const ReviewDecision*> by_id;
    for (const auto& d : decisions) by_id[d.candidate_id] = &d;
    for (TriageItem& item : out.queue) {
      auto it = by_id.find(item.candidate_id);
      if (it == by_id.end()) continue;
      item.status = TriageStatus::kLabeled;
      item.resolution = TriageResolution{it->second->label, it->second->reviewer_id,
                                         it->second->timestamp};
    }
  }
  out.dataset = std::move(dataset);

  // Report every candidate once, in production order, with its final state.
  std::unordered_map<std::string, const Candidate*> final_state;
  for (const auto& c : fresh) final_state[c.id()] = &c;
  for (const auto& c : measured) final_state[c.id()] = &c;
  for (const auto& c : preflagged) final_state[c.id()] = &c;
  for (const auto& c : judge_flagged) final_state[c.id()] = &c;
  std::set<std::string> emitted;
  for (const auto& c : fresh) {
    if (emitted.insert(c.id()).second) out.candidates.push_back(*final_state[c.id()]);
  }
  for (const auto& c : preflagged) {
    if (emitted.insert(c.id()).second) out.candidates.push_back(c);
  }
  return out;
}

void WritePipelineOutputs(const PipelineOutput& output,
                          const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  WriteFileAtomic(dir / "dataset.jsonl", ToJsonl(output.dataset));
  WriteFileAtomic(dir / "candidates.jsonl", CandidatesToJsonl(output.candidates));
  WriteFileAtomic(dir / "roundtrip_report.jsonl", FilterReportToJsonl(output.roundtrip));
  WriteFileAtomic(dir / "distance_report.jsonl", FilterReportToJsonl(output.distance));
  WriteFileAtomic(dir / "triage_queue.jsonl", TriageQueueToJsonl(output.queue));
}

}  // namespace juree
