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

// The six-class banking risk taxonomy. Every per-class vector in the toolkit
// (score vectors, confusion rows, wire arrays) is indexed by the canonical
// order defined here:
//
//   banking_related, harmful, off_topic, system_attack, vulnerable, complaint
//
// banking_related is the only in-scope class. The remaining five are the
// out-of-scope (unsafe or irrelevant) classes.

#ifndef JUREE_TAXONOMY_H_
#define JUREE_TAXONOMY_H_

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace juree {

enum class Label : uint8_t {
  kBankingRelated = 0,
  kHarmful = 1,
  kOffTopic = 2,
  kSystemAttack = 3,
  kVulnerable = 4,
  kComplaint = 5,
};

inline constexpr size_t kNumClasses = 6;

inline constexpr std::array<Label, kNumClasses> kCanonicalOrder = {
    Label::kBankingRelated, Label::kHarmful,    Label::kOffTopic,
    Label::kSystemAttack,   Label::kVulnerable, Label::kComplaint};

inline constexpr size_t Index(Label label) {
  return static_cast<size_t>(label);
}

// Canonical snake_case name, e.g. "system_attack".
std::string_view LabelName(Label label);

// Exact, case-sensitive match on canonical names.
std::optional<Label> ParseLabel(std::string_view name);

// Like ParseLabel but throws InvalidArgument on unknown names.
Label LabelFromName(std::string_view name);

enum class Scope { kInScope, kOutOfScope };

std::string_view ScopeName(Scope scope);

struct RiskClass {
  Label label;
  Scope scope;
  std::string description;
  std::vector<std::string> subtypes;

  std::string_view name() const { return LabelName(label); }
  bool operator==(const RiskClass&) const = default;
};

// Immutable after construction; safe to share across threads.
class Taxonomy {
 public:
  static constexpr double kDefaultThreshold = 0.5;

  // The six classes with Table-1 subtypes, default thresholds and the default
  // severity order harmful > system_attack > vulnerable > complaint >
  // off_topic.
  static Taxonomy Default();

  // Parses and validates a JSON config document. Missing thresholds default
  // to 0.5 and a missing severity_order takes the default. Throws
  // InvalidArgument on unknown or duplicate classes, a missing class, an
  // out-of-range threshold, wrong scopes or a bad severity order.
  static Taxonomy Load(std::string_view document);
  static Taxonomy LoadFile(const std::string& path);

  // Canonical JSON: classes in canonical order, every threshold explicit.
  // Load(Serialize()) reproduces an identical taxonomy.
  std::string Serialize() const;

  const std::array<RiskClass, kNumClasses>& classes() const { return classes_; }
  const RiskClass& risk_class(Label label) const {
    return classes_[Index(label)];
  }
  double threshold(Label label) const { return thresholds_[Index(label)]; }

  // Out-of-scope classes, most severe first.
  const std::array<Label, kNumClasses - 1>& severity_order() const {
    return severity_order_;
  }

  // 0 for the most severe out-of-scope class. banking_related ranks after
  // every out-of-scope class.
  size_t SeverityRank(Label label) const { return severity_rank_[Index(label)]; }

  bool operator==(const Taxonomy& other) const {
    return classes_ == other.classes_ && thresholds_ == other.thresholds_ &&
           severity_order_ == other.severity_order_;
  }

 private:
  Taxonomy() = default;
  void Validate() const;
  void IndexSeverity();

  std::array<RiskClass, kNumClasses> classes_;
  std::array<double, kNumClasses> thresholds_{};
  std::array<Label, kNumClasses - 1> severity_order_{};
  std::array<size_t, kNumClasses> severity_rank_{};
};

// Resolves a label name against the taxonomy. Throws InvalidArgument for
// anything that is not an exact canonical name.
const RiskClass& ValidateLabel(std::string_view name, const Taxonomy& taxonomy);

}  // namespace juree

#endif  // JUREE_TAXONOMY_H_
