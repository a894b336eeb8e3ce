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

// Examples, datasets and their provenance. Every example carries a
// content-hash id so regenerating a corpus from the same sources reproduces
// the same ids, and exact duplicates collapse on ingest.

#ifndef JUREE_CORPUS_H_
#define JUREE_CORPUS_H_

#include <array>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "juree/taxonomy.h"

namespace juree {

enum class Origin { kInternal, kExternal, kSynthetic };
enum class Split { kTrain, kTest };

std::string_view OriginName(Origin origin);
Origin OriginFromName(std::string_view name);
std::string_view SplitName(Split split);
Split SplitFromName(std::string_view name);

// Where a synthetic example came from.
struct Lineage {
  std::optional<std::string> parent_id;
  std::optional<std::string> recipe_id;
  std::string stage;
  std::vector<std::string> exemplar_ids;
  std::optional<std::string> pivot;

  bool operator==(const Lineage&) const = default;
};

struct Review {
  std::string reviewer_id;
  std::string timestamp;
  std::optional<Label> prior_label;

  bool operator==(const Review&) const = default;
};

struct Example {
  std::string id;
  std::string text;
  Label label = Label::kBankingRelated;
  Origin origin = Origin::kInternal;
  std::optional<Lineage> lineage;
  std::optional<Split> split;
  std::optional<Review> review;

  bool operator==(const Example&) const = default;
};

// First 16 hex chars of SHA-256 over the length-prefixed (text, label,
// origin) triple.
std::string ContentId(std::string_view text, Label label, Origin origin);

// Builds an example with its id computed. Throws InvalidArgument on empty
// text or when the lineage rule is violated (synthetic examples must carry
// lineage, internal and external ones must not).
Example MakeExample(std::string text, Label label, Origin origin,
                    std::optional<Lineage> lineage = std::nullopt);

// Immutable collection of examples with unique ids.
class Dataset {
 public:
  Dataset() = default;
  // Throws InvalidArgument on duplicate or inconsistent ids.
  explicit Dataset(std::vector<Example> examples);

  const std::vector<Example>& examples() const { return examples_; }
  size_t size() const { return examples_.size(); }
  bool empty() const { return examples_.empty(); }
  const std::array<size_t, kNumClasses>& counts() const { return counts_; }
  size_t count(Label label) const { return counts_[Index(label)]; }

  const Example* Find(std::string_view id) const;

  bool operator==(const Dataset& other) const {
    return examples_ == other.examples_;
  }

 private:
  std::vector<Example> examples_;
  std::array<size_t, kNumClasses> counts_{};
  std::unordered_map<std::string, size_t> by_id_;
};

struct IngestRecord {
  std::string text;
  std::string label;
  Origin origin = Origin::kInternal;
  std::optional<Lineage> lineage;
};

// Validates labels against the taxonomy, computes ids and collapses exact
// duplicates (first occurrence wins). External labels must already be mapped
// onto the taxonomy's names.
Dataset Ingest(std::span<const IngestRecord> records, const Taxonomy& taxonomy);

struct SplitResult {
  Dataset train;
  Dataset test;
};

// Per-class seeded shuffle then prefix-take. Each class contributes
// round(test_fraction * n_c) test examples, clamped to [1, n_c - 1] so every
// class appears on both sides. Examples are ordered by id before shuffling,
// so the result depends only on the set of examples, the fraction and the
// seed. Throws InvalidArgument when a class has fewer than two examples or
// the fraction is outside (0, 1).
SplitResult StratifiedSplit(const Dataset& dataset, double test_fraction,
                            uint64_t seed);

// Number of test examples StratifiedSplit allocates for a class of size n.
size_t TestAllocation(size_t class_count, double test_fraction);

// Union by id. On collision the reviewed copy wins if exactly one copy is
// reviewed; otherwise a's copy is kept. Order: a's examples, then b's new ones.
Dataset Merge(const Dataset& a, const Dataset& b);

// JSON-Lines, one example per line, absent optionals omitted.
std::string ExampleToJsonLine(const Example& example);
Example ExampleFromJson(std::string_view line);
void WriteJsonl(const Dataset& dataset, std::ostream& out);
std::string ToJsonl(const Dataset& dataset);
Dataset ReadJsonl(std::istream& in);
Dataset LoadDataset(const std::string& path);
void SaveDataset(const Dataset& dataset, const std::string& path);

}  // namespace juree

#endif  // JUREE_CORPUS_H_
