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

#include "juree/triage.h"

#include <algorithm>
#include <set>
#include <sstream>
#include <unordered_map>

#include "json.hpp"
#include "juree/error.h"
#include "juree/util.h"

namespace juree {

namespace {
using ordered_json = nlohmann::ordered_json;
}  // namespace

std::string_view TriageStatusName(TriageStatus status) {
  switch (status) {
    case TriageStatus::kQueued:
      return "queued";
    case TriageStatus::kLabeled:
      return "labeled";
    case TriageStatus::kSkipped:
      return "skipped";
  }
  return "queued";
}

TriageStatus TriageStatusFromName(std::string_view name) {
  if (name == "queued") return TriageStatus::kQueued;
  if (name == "labeled") return TriageStatus::kLabeled;
  if (name == "skipped") return TriageStatus::kSkipped;
  throw InvalidArgument("unknown triage status '" + std::string(name) + "'");
}

TriageItem MakeTriageItem(const Example& candidate, const ScoreVector& scores,
                          const Taxonomy& taxonomy) {
  const MulticlassVerdict mv = MulticlassDecision(scores, taxonomy);
  TriageItem item;
  item.candidate_id = candidate.id;
  item.scores = scores;
  item.uncertainty = 1.0 - mv.margin;
  item.proposed_label = mv.chosen;
  item.candidate = candidate;
  return item;
}

bool TriageOrder(const TriageItem& a, const TriageItem& b) {
  if (a.uncertainty != b.uncertainty) return a.uncertainty > b.uncertainty;
  return a.candidate_id < b.candidate_id;
}

std::vector<TriageItem> UncertaintyTriage(std::span<const Candidate> candidates,
                                          InferenceBackend& backend,
                                          const Taxonomy& taxonomy,
                                          const TriagePolicy& policy,
                                          size_t max_batch) {
  std::vector<std::string> texts;
  texts.reserve(candidates.size());
  for (const Candidate& c : candidates) texts.push_back(c.example.text);
  const std::vector<ScoreVector> scores = BatchScore(backend, texts, max_batch);

  std::vector<TriageItem> queue;
  for (size_t i = 0; i < candidates.size(); ++i) {
    TriageItem item = MakeTriageItem(candidates[i].example, scores[i], taxonomy);
    // Compare the raw margin; 1 - uncertainty can differ by one ulp.
    const double margin = MulticlassDecision(scores[i], taxonomy).margin;
    const bool forced = policy.always_queue_flagged &&
                        candidates[i].filter_state == FilterState::kFlagged;
    if (margin < policy.margin_threshold || forced) queue.push_back(std::move(item));
  }
  std::stable_sort(queue.begin(), queue.end(), TriageOrder);
  if (queue.size() > policy.top_k) queue.resize(policy.top_k);
  return queue;
}

std::string TriageItemToJson(const TriageItem& item) {
  ordered_json j;
  j["candidate_id"] = item.candidate_id;
  j["text"] = item.candidate.text;
  j["label"] = LabelName(item.candidate.label);
  ordered_json scores = ordered_json::object();
  for (Label label : kCanonicalOrder) {
    scores[std::string(LabelName(label))] = item.scores[label];
  }
  j["scores"] = std::move(scores);
  j["uncertainty"] = item.uncertainty;
  j["proposed_label"] = LabelName(item.proposed_label);
  j["status"] = TriageStatusName(item.status);
  if (item.resolution) {
    j["resolution"] = {{"label", LabelName(item.resolution->label)},
                       {"reviewer_id", item.resolution->reviewer_id},
                       {"timestamp", item.resolution->timestamp}};
  }
  j["candidate"] = ordered_json::parse(ExampleToJsonLine(item.candidate));
  return j.dump();
}

TriageItem TriageItemFromJson(std::string_view json) {
  try {
    const ordered_json j = ordered_json::parse(json);
    TriageItem item;
    item.candidate_id = j.at("candidate_id").get<std::string>();
    std::array<double, kNumClasses> probs{};
    for (Label label : kCanonicalOrder) {
      probs[Index(label)] = j.at("scores").at(std::string(LabelName(label))).get<double>();
    }
    item.scores = ScoreVector(probs);
    item.uncertainty = j.at("uncertainty").get<double>();
    item.proposed_label = LabelFromName(j.at("proposed_label").get<std::string>());
    item.status = TriageStatusFromName(j.value("status", std::string("queued")));
    if (j.contains("resolution")) {
      const auto& r = j["resolution"];
      item.resolution = TriageResolution{
          LabelFromName(r.at("label").get<std::string>()),
          r.at("reviewer_id").get<std::string>(),
          r.value("timestamp", std::string())};
    }
    item.candidate = ExampleFromJson(j.at("candidate").dump());
    if (item.candidate.id != item.candidate_id) {
      throw InvalidArgument("triage item " + item.candidate_id +
                            " does not match its candidate");
    }
    return item;
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument(std::string("malformed triage item: ") + e.what());
  }
}

std::string TriageQueueToJsonl(std::span<const TriageItem> items) {
  std::string out;
  for (const auto& item : items) {
    out += TriageItemToJson(item);
    out += '\n';
  }
  return out;
}

std::vector<TriageItem> LoadTriageQueue(const std::string& path) {
  std::istringstream in(ReadFile(path));
  std::vector<TriageItem> items;
  std::string line;
  while (std::getline(in, line)) {
    if (TrimAscii(line).empty()) continue;
    items.push_back(TriageItemFromJson(line));
  }
  return items;
}

Dataset CommitReview(const Dataset& dataset, std::span<const Example> pool,
                     std::span<const ReviewDecision> decisions) {
  if (decisions.empty()) return dataset;

  std::unordered_map<std::string, const Example*> pool_by_id;
  for (const Example& e : pool) pool_by_id.emplace(e.id, &e);

  std::set<std::string> decided;
  std::set<std::string> removed;
  std::vector<Example> reviewed;
  std::vector<std::string> source_ids;
  for (const ReviewDecision& d : decisions) {
    if (!decided.insert(d.candidate_id).second) {
      throw Conflict("candidate " + d.candidate_id + " decided twice");
    }
    const Example* source = nullptr;
    if (auto it = pool_by_id.find(d.candidate_id); it != pool_by_id.end()) {
      source = it->second;
    } else {
      source = dataset.Find(d.candidate_id);
    }
    if (source == nullptr) throw NotFound("unknown candidate id " + d.candidate_id);

    Example e = *source;
    Review review;
    review.reviewer_id = d.reviewer_id;
    review.timestamp = d.timestamp.empty() ? UtcTimestamp() : d.timestamp;
    if (d.label != e.label) {
      review.prior_label = e.label;
      e.label = d.label;
      e.id = ContentId(e.text, e.label, e.origin);
      removed.insert(source->id);
    } else if (e.review && e.review->prior_label) {
      review.prior_label = e.review->prior_label;
    }
    e.review = std::move(review);
    source_ids.push_back(source->id);
    reviewed.push_back(std::move(e));
  }

  // A reviewed copy takes the dataset position of its source or of an
  // existing row with the same id, whichever comes first.
  std::unordered_map<std::string, size_t> reviewed_pos;
  for (size_t i = 0; i < reviewed.size(); ++i) {
    reviewed_pos[reviewed[i].id] = i;
    reviewed_pos.emplace(source_ids[i], i);
  }
  std::vector<bool> placed(reviewed.size(), false);

  std::vector<Example> out;
  out.reserve(dataset.size() + reviewed.size());
  for (const Example& e : dataset.examples()) {
    if (auto it = reviewed_pos.find(e.id); it != reviewed_pos.end()) {
      if (!placed[it->second]) {
        out.push_back(reviewed[it->second]);
        placed[it->second] = true;
      }
      continue;
    }
    if (removed.count(e.id)) continue;
    out.push_back(e);
  }
  for (size_t i = 0; i < reviewed.size(); ++i) {
    if (!placed[i] && reviewed_pos[reviewed[i].id] == i) out.push_back(reviewed[i]);
  }
  return Dataset(std::move(out));
}

}  // namespace juree
