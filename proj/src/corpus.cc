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

#include "juree/corpus.h"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <unordered_set>

#include "json.hpp"
#include "juree/error.h"
#include "juree/util.h"

namespace juree {

namespace {

using ordered_json = nlohmann::ordered_json;

void AppendField(std::string& out, std::string_view field) {
  out.append(std::to_string(field.size()));
  out.push_back(':');
  out.append(field);
}

ordered_json LineageToJson(const Lineage& l) {
  ordered_json j = ordered_json::object();
  if (l.parent_id) j["parent_id"] = *l.parent_id;
  if (l.recipe_id) j["recipe_id"] = *l.recipe_id;
  j["stage"] = l.stage;
  if (!l.exemplar_ids.empty()) j["exemplar_ids"] = l.exemplar_ids;
  if (l.pivot) j["pivot"] = *l.pivot;
  return j;
}

Lineage LineageFromJson(const ordered_json& j) {
  Lineage l;
  if (j.contains("parent_id")) l.parent_id = j["parent_id"].get<std::string>();
  if (j.contains("recipe_id")) l.recipe_id = j["recipe_id"].get<std::string>();
  l.stage = j.value("stage", std::string());
  if (j.contains("exemplar_ids")) {
    l.exemplar_ids = j["exemplar_ids"].get<std::vector<std::string>>();
  }
  if (j.contains("pivot")) l.pivot = j["pivot"].get<std::string>();
  return l;
}

}  // namespace

std::string_view OriginName(Origin origin) {
  switch (origin) {
    case Origin::kInternal:
      return "internal";
    case Origin::kExternal:
      return "external";
    case Origin::kSynthetic:
      return "synthetic";
  }
  return "internal";
}

Origin OriginFromName(std::string_view name) {
  if (name == "internal") return Origin::kInternal;
  if (name == "external") return Origin::kExternal;
  if (name == "synthetic") return Origin::kSynthetic;
  throw InvalidArgument("unknown origin '" + std::string(name) + "'");
}

std::string_view SplitName(Split split) {
  return split == Split::kTrain ? "train" : "test";
}

Split SplitFromName(std::string_view name) {
  if (name == "train") return Split::kTrain;
  if (name == "test") return Split::kTest;
  throw InvalidArgument("unknown split '" + std::string(name) + "'");
}

std::string ContentId(std::string_view text, Label label, Origin origin) {
  std::string buf;
  AppendField(buf, text);
  AppendField(buf, LabelName(label));
  AppendField(buf, OriginName(origin));
  return Sha256Hex(buf).substr(0, 16);
}

Example MakeExample(std::string text, Label label, Origin origin,
                    std::optional<Lineage> lineage) {
  if (text.empty()) throw InvalidArgument("example text must be non-empty");
  if (origin == Origin::kSynthetic && !lineage) {
    throw InvalidArgument("synthetic examples must carry lineage");
  }
  if (origin != Origin::kSynthetic && lineage) {
    throw InvalidArgument("only synthetic examples carry lineage");
  }
  Example e;
  e.id = ContentId(text, label, origin);
  e.text = std::move(text);
  e.label = label;
  e.origin = origin;
  e.lineage = std::move(lineage);
  return e;
}

Dataset::Dataset(std::vector<Example> examples) : examples_(std::move(examples)) {
  by_id_.reserve(examples_.size());
  for (size_t i = 0; i < examples_.size(); ++i) {
    const Example& e = examples_[i];
    if (e.id != ContentId(e.text, e.label, e.origin)) {
      throw InvalidArgument("example id " + e.id +
                            " does not match its content hash");
    }
    if (!by_id_.emplace(e.id, i).second) {
      throw InvalidArgument("duplicate example id " + e.id);
    }
    ++counts_[Index(e.label)];
  }
}

const Example* Dataset::Find(std::string_view id) const {
  auto it = by_id_.find(std::string(id));
  return it == by_id_.end() ? nullptr : &examples_[it->second];
}

Dataset Ingest(std::span<const IngestRecord> records, const Taxonomy& taxonomy) {
  std::vector<Example> out;
  std::unordered_set<std::string> seen;
  for (size_t i = 0; i < records.size(); ++i) {
    const IngestRecord& r = records[i];
    if (r.text.empty()) {
      throw InvalidArgument("record " + std::to_string(i) + ": empty text");
    }
    const Label label = ValidateLabel(r.label, taxonomy).label;
    Example e = MakeExample(r.text, label, r.origin, r.lineage);
    if (seen.insert(e.id).second) out.push_back(std::move(e));
  }
  return Dataset(std::move(out));
}

size_t TestAllocation(size_t class_count, double test_fraction) {
  const double target = test_fraction * static_cast<double>(class_count);
  auto k = static_cast<size_t>(std::llround(target));
  k = std::clamp<size_t>(k, 1, class_count - 1);
  return k;
}

SplitResult StratifiedSplit(const Dataset& dataset, double test_fraction,
                            uint64_t seed) {
  if (!(test_fraction > 0.0 && test_fraction < 1.0)) {
    throw InvalidArgument("test_fraction must be in (0, 1)");
  }
  std::array<std::vector<size_t>, kNumClasses> members;
  for (size_t i = 0; i < dataset.size(); ++i) {
    members[Index(dataset.examples()[i].label)].push_back(i);
  }
  std::vector<bool> is_test(dataset.size(), false);
  for (Label label : kCanonicalOrder) {
    auto& idx = members[Index(label)];
    if (idx.size() < 2) {
      throw InvalidArgument("class '" + std::string(LabelName(label)) +
                            "' has fewer than 2 examples");
    }
    std::sort(idx.begin(), idx.end(), [&](size_t a, size_t b) {
      return dataset.examples()[a].id < dataset.examples()[b].id;
    });
    StableRng rng(MixSeed(seed, Index(label)));
    rng.Shuffle(idx);
    const size_t k = TestAllocation(idx.size(), test_fraction);
    for (size_t j = 0; j < k; ++j) is_test[idx[j]] = true;
  }
  std::vector<Example> train, test;
  for (size_t i = 0; i < dataset.size(); ++i) {
    Example e = dataset.examples()[i];
    if (is_test[i]) {
      e.split = Split::kTest;
      test.push_back(std::move(e));
    } else {
      e.split = Split::kTrain;
      train.push_back(std::move(e));
    }
  }
  return {Dataset(std::move(train)), Dataset(std::move(test))};
}

Dataset Merge(const Dataset& a, const Dataset& b) {
  std::vector<Example> out = a.examples();
  std::unordered_map<std::string, size_t> pos;
  for (size_t i = 0; i < out.size(); ++i) pos.emplace(out[i].id, i);
  for (const Example& e : b.examples()) {
    auto it = pos.find(e.id);
    if (it == pos.end()) {
      pos.emplace(e.id, out.size());
      out.push_back(e);
      continue;
    }
    Example& existing = out[it->second];
    if (!existing.review && e.review) existing = e;
  }
  return Dataset(std::move(out));
}

std::string ExampleToJsonLine(const Example& e) {
  ordered_json j;
  j["id"] = e.id;
  j["text"] = e.text;
  j["label"] = LabelName(e.label);
  j["origin"] = OriginName(e.origin);
  if (e.lineage) j["lineage"] = LineageToJson(*e.lineage);
  if (e.split) j["split"] = SplitName(*e.split);
  if (e.review) {
    ordered_json r;
    r["reviewer_id"] = e.review->reviewer_id;
    r["timestamp"] = e.review->timestamp;
    if (e.review->prior_label) r["prior_label"] = LabelName(*e.review->prior_label);
    j["review"] = std::move(r);
  }
  return j.dump();
}

Example ExampleFromJson(std::string_view line) {
  try {
    const ordered_json j = ordered_json::parse(line);
    Example e;
    e.id = j.at("id").get<std::string>();
    e.text = j.at("text").get<std::string>();
    e.label = LabelFromName(j.at("label").get<std::string>());
    e.origin = OriginFromName(j.at("origin").get<std::string>());
    if (j.contains("lineage")) e.lineage = LineageFromJson(j["lineage"]);
    if (j.contains("split")) e.split = SplitFromName(j["split"].get<std::string>());
    if (j.contains("review")) {
      const auto& r = j["review"];
      Review review;
      review.reviewer_id = r.at("reviewer_id").get<std::string>();
      review.timestamp = r.value("timestamp", std::string());
      if (r.contains("prior_label")) {
        review.prior_label = LabelFromName(r["prior_label"].get<std::string>());
      }
      e.review = std::move(review);
    }
    if (e.text.empty()) throw InvalidArgument("example text must be non-empty");
    if ((e.origin == Origin::kSynthetic) != e.lineage.has_value()) {
      throw InvalidArgument("lineage must be present exactly for synthetic examples");
    }
    return e;
  } catch (const nlohmann::json::exception& ex) {
    throw InvalidArgument(std::string("malformed example: ") + ex.what());
  }
}

void WriteJsonl(const Dataset& dataset, std::ostream& out) {
  for (const Example& e : dataset.examples()) out << ExampleToJsonLine(e) << '\n';
}

std::string ToJsonl(const Dataset& dataset) {
  std::ostringstream ss;
  WriteJsonl(dataset, ss);
  return ss.str();
}

Dataset ReadJsonl(std::istream& in) {
  std::vector<Example> examples;
  std::string line;
  size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (TrimAscii(line).empty()) continue;
    try {
      examples.push_back(ExampleFromJson(line));
    } catch (const InvalidArgument& e) {
      throw InvalidArgument("line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  return Dataset(std::move(examples));
}

Dataset LoadDataset(const std::string& path) {
  std::istringstream in(ReadFile(path));
  return ReadJsonl(in);
}

void SaveDataset(const Dataset& dataset, const std::string& path) {
  WriteFileAtomic(path, ToJsonl(dataset));
}

}  // namespace juree
