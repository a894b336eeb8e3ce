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

// Per-class probabilities, their aggregation into binary and multiclass
// verdicts, and the inference backend contract.
//
// Scores come from an ensemble of independent binary heads: the six values
// are each in [0,1] and are not required to sum to one.
//
//   in_scope_prob  = p[banking_related]
//   out_scope_prob = max over the five out-of-scope classes
//   chosen         = argmax over all six classes

#ifndef JUREE_SCORER_H_
#define JUREE_SCORER_H_

#include <array>
#include <cstddef>
#include <map>
#include <memory>
#include <mutex>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "juree/taxonomy.h"

namespace juree {

class ScoreVector {
 public:
  ScoreVector() { probs_.fill(0.0); }
  // Throws InvalidArgument if any value is NaN or outside [0,1].
  explicit ScoreVector(const std::array<double, kNumClasses>& probs);

  double operator[](Label label) const { return probs_[Index(label)]; }
  const std::array<double, kNumClasses>& values() const { return probs_; }

  bool operator==(const ScoreVector&) const = default;

 private:
  std::array<double, kNumClasses> probs_;
};

enum class Decision { kSafe, kUnsafe };
std::string_view DecisionName(Decision decision);

struct BinaryVerdict {
  double in_scope_prob = 0.0;
  double out_scope_prob = 0.0;
  Decision decision = Decision::kSafe;
  // Out-of-scope class attaining out_scope_prob; ties go to the more severe.
  Label trigger_class = Label::kHarmful;
};

struct MulticlassVerdict {
  Label chosen = Label::kBankingRelated;
  double margin = 0.0;  // top1 - top2, >= 0
};

// unsafe iff out_scope_prob >= threshold of the trigger class.
BinaryVerdict BinaryDecision(const ScoreVector& scores, const Taxonomy& taxonomy);

// Ties resolve to banking_related first (canonical order), then among tied
// out-of-scope classes by severity.
MulticlassVerdict MulticlassDecision(const ScoreVector& scores,
                                     const Taxonomy& taxonomy);

enum class ConcurrencyMode {
  kConcurrent,  // Score() may be called from several threads at once.
  kSerialized,  // Callers must serialize Score() calls.
};

struct HealthStatus {
  bool ok = true;
  std::string reason;
};

// A scoring model. Score() returns one vector per text, in input order, and is
// deterministic for a fixed backend configuration.
class InferenceBackend {
 public:
  virtual ~InferenceBackend() = default;
  virtual std::vector<ScoreVector> Score(std::span<const std::string> texts) = 0;
  virtual std::string Name() const = 0;
  virtual ConcurrencyMode concurrency() const = 0;
  virtual HealthStatus Health() { return {}; }
};

// Test double for a trained encoder. For each class, h counts the
// case-insensitive lexicon hits in the text and p = h / (h + 1). Tokens are
// maximal runs of ASCII letters, digits and apostrophes after lowercasing.
class ReferenceLexiconScorer : public InferenceBackend {
 public:
  explicit ReferenceLexiconScorer(
      std::array<std::vector<std::string>, kNumClasses> lexicon);

  // Lexicon JSON: {"<class name>": ["token", ...], ...}, all six classes.
  static std::unique_ptr<ReferenceLexiconScorer> FromJson(std::string_view json);
  static std::unique_ptr<ReferenceLexiconScorer> FromFile(const std::string& path);

  ScoreVector ScoreOne(std::string_view text) const;
  std::array<int, kNumClasses> Hits(std::string_view text) const;

  std::vector<ScoreVector> Score(std::span<const std::string> texts) override;
  std::string Name() const override { return "reference-lexicon"; }
  ConcurrencyMode concurrency() const override {
    return ConcurrencyMode::kConcurrent;
  }

  const std::array<std::vector<std::string>, kNumClasses>& lexicon() const {
    return lexicon_;
  }

 private:
  std::array<std::vector<std::string>, kNumClasses> lexicon_;
  std::unordered_map<std::string, std::vector<Label>> token_classes_;
};

// Tokenizer shared by the lexicon scorer and its fixtures.
std::vector<std::string> LexiconTokens(std::string_view text);

struct RemoteBackendOptions {
  std::string base_url;  // e.g. http://127.0.0.1:9000
  double timeout_seconds = 10.0;
  int max_retries = 2;
};

// Scores over HTTP: POST /score {"texts": [...]} ->
// {"order": [six names], "scores": [[six floats], ...]}. Columns are
// re-ordered from the server's "order" into canonical order.
class RemoteBackend : public InferenceBackend {
 public:
  explicit RemoteBackend(RemoteBackendOptions options);

  std::vector<ScoreVector> Score(std::span<const std::string> texts) override;
  std::string Name() const override { return "remote:" + options_.base_url; }
  ConcurrencyMode concurrency() const override {
    return ConcurrencyMode::kConcurrent;
  }
  // Probes with an empty batch.
  HealthStatus Health() override;

 private:
  RemoteBackendOptions options_;
};

// Decodes a /score response body into canonical-order vectors.
std::vector<ScoreVector> DecodeScoreResponse(std::string_view body,
                                             size_t expected_rows);

// Wraps a kSerialized backend behind a mutex so it can be shared.
class SerializedBackend : public InferenceBackend {
 public:
  explicit SerializedBackend(std::shared_ptr<InferenceBackend> inner)
      : inner_(std::move(inner)) {}

  std::vector<ScoreVector> Score(std::span<const std::string> texts) override {
    std::lock_guard<std::mutex> lock(mu_);
    return inner_->Score(texts);
  }
  std::string Name() const override { return inner_->Name(); }
  ConcurrencyMode concurrency() const override {
    return ConcurrencyMode::kConcurrent;
  }
  HealthStatus Health() override {
    std::lock_guard<std::mutex> lock(mu_);
    return inner_->Health();
  }

 private:
  std::shared_ptr<InferenceBackend> inner_;
  std::mutex mu_;
};

// Splits texts into runs of at most max_batch and scores each run with one
// backend call. Backend failures are rethrown as BackendError naming the
// failing chunk's [begin, end) range.
std::vector<ScoreVector> BatchScore(InferenceBackend& backend,
                                    std::span<const std::string> texts,
                                    size_t max_batch);

// Backend spec strings used by the CLI and gateway config:
//   "reference"            built-in lexicon from the data directory
//   "reference:<path>"     lexicon JSON at <path>
//   "remote:<base url>"    RemoteBackend
std::shared_ptr<InferenceBackend> MakeBackend(const std::string& spec);

// Directory holding the shipped fixtures (lexicon, thesaurus, templates).
// JUREE_DATA_DIR in the environment overrides the compiled-in default.
std::string DataDir();

}  // namespace juree

#endif  // JUREE_SCORER_H_
