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

// Synthetic data generation: aspect-driven few-shot prompting, counterfactual
// rewrites, classical augmentation and backtranslation. Every producer emits
// Candidates: synthetic examples with lineage and a filter state that the
// filters (filters.h) and triage (triage.h) advance.

#ifndef JUREE_FOUNDRY_H_
#define JUREE_FOUNDRY_H_

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "juree/chat.h"
#include "juree/corpus.h"
#include "juree/taxonomy.h"

namespace juree {

// One row of the persona/style aspect catalog.
struct AspectSpec {
  std::string key;      // e.g. "emotional_tone"
  std::string display;  // e.g. "Emotional tone"
  std::vector<std::string> values;
};

// The eleven catalogued aspects and their example values.
const std::vector<AspectSpec>& AspectCatalog();
const AspectSpec* FindAspect(std::string_view key);

struct GenerationRecipe {
  std::string recipe_id;
  Label target_label = Label::kBankingRelated;
  // Ordered (aspect, value) pairs. Keys are catalog keys or free-form extras.
  // Empty means "draw 1-3 catalog aspects per call".
  std::vector<std::pair<std::string, std::string>> aspects;
  int n_fewshot = 0;
  std::string model_id;
  Sampling sampling;
  uint64_t seed = 0;
  // Lifts the 1-3 aspect limit.
  bool allow_many_aspects = false;

  // Throws InvalidArgument on duplicate aspect names, too many aspects,
  // negative n_fewshot or bad sampling values.
  void Validate() const;
};

GenerationRecipe RecipeFromJson(std::string_view json);
std::string RecipeToJson(const GenerationRecipe& recipe);
GenerationRecipe LoadRecipe(const std::string& path);

enum class Stage { kGenerated, kCounterfactual, kAugmented, kBacktranslated };
enum class FilterState { kPending, kKept, kDropped, kFlagged };

std::string_view StageName(Stage stage);
Stage StageFromName(std::string_view name);
std::string_view FilterStateName(FilterState state);
FilterState FilterStateFromName(std::string_view name);

struct FilterReason {
  std::string stage;
  std::string detail;

  bool operator==(const FilterReason&) const = default;
};

struct Candidate {
  Example example;  // origin synthetic, lineage present
  Stage stage = Stage::kGenerated;
  FilterState filter_state = FilterState::kPending;
  std::vector<FilterReason> filter_reasons;

  const std::string& id() const { return example.id; }
  bool operator==(const Candidate&) const = default;
};

Candidate MakeCandidate(std::string text, Label label, Stage stage,
                        Lineage lineage);

// JSON-Lines: the example fields plus stage, filter_state, filter_reasons.
std::string CandidateToJsonLine(const Candidate& candidate);
Candidate CandidateFromJson(std::string_view line);
std::string CandidatesToJsonl(std::span<const Candidate> candidates);
std::vector<Candidate> ReadCandidates(std::istream& in);
std::vector<Candidate> LoadCandidates(const std::string& path);

// The built-in generation template. Placeholders: {target_label},
// {aspect_instructions}, {examples}.
std::string_view DefaultGenerationTemplate();

struct GenerationPrompt {
  std::string text;
  std::vector<std::string> exemplar_ids;
  std::vector<std::pair<std::string, std::string>> aspects;
};

// Deterministic in (recipe, seed_pool, rng_seed): draws n_fewshot exemplars
// of the target label without replacement and, when the recipe leaves
// aspects unset, 1-3 catalog aspects with uniform values. With n_fewshot = 0
// the prompt has no Examples section. Throws InvalidArgument when the pool
// holds fewer than n_fewshot examples of the target label.
GenerationPrompt AssembleGenerationPrompt(
    const GenerationRecipe& recipe, const Dataset& seed_pool, uint64_t rng_seed,
    std::string_view tmpl = DefaultGenerationTemplate());

struct GenerationOptions {
  int max_calls = 5;  // retry budget
  std::string tmpl;   // empty selects DefaultGenerationTemplate()
};

struct GenerationResult {
  std::vector<Candidate> candidates;
  int calls = 0;
  // Set when the budget ran out before n candidates were collected.
  std::optional<std::string> error;
};

// Calls the chat model until n candidates are parsed (one per non-empty
// output line; extras are discarded) or the call budget is spent. Call i
// uses a fresh exemplar draw seeded from (recipe.seed, i).
GenerationResult GenerateCandidates(const GenerationRecipe& recipe, size_t n,
                                    ChatClient& chat, const Dataset& seed_pool,
                                    const GenerationOptions& options = {});

struct ChatSettings {
  std::string model_id;
  Sampling sampling;
};

std::string BuildCounterfactualPrompt(const Example& source, Label target_label,
                                      const Taxonomy& taxonomy);

// Asks the model for a minimal rewrite of source into target_label. An
// unchanged rewrite still yields a candidate, flagged identical-to-parent.
// Throws InvalidArgument when target_label equals the source label and
// Error on an empty rewrite.
Candidate Counterfactual(const Example& source, Label target_label,
                         ChatClient& chat, const Taxonomy& taxonomy,
                         const ChatSettings& settings);

class SynonymProvider {
 public:
  virtual ~SynonymProvider() = default;
  // Synonyms for a lowercase token; empty when none are known.
  virtual std::vector<std::string> Synonyms(std::string_view token) const = 0;
};

// Table-backed provider. JSON: {"word": ["synonym", ...], ...}.
class ThesaurusSynonyms : public SynonymProvider {
 public:
  explicit ThesaurusSynonyms(std::map<std::string, std::vector<std::string>> table)
      : table_(std::move(table)) {}
  static ThesaurusSynonyms FromJson(std::string_view json);
  static ThesaurusSynonyms FromFile(const std::string& path);

  std::vector<std::string> Synonyms(std::string_view token) const override;

 private:
  std::map<std::string, std::vector<std::string>> table_;
};

enum class AugmentOp { kDelete, kInsert, kSwap };
std::string_view AugmentOpName(AugmentOp op);
AugmentOp AugmentOpFromName(std::string_view name);

// Whitespace-token augmentation, deterministic in seed; output tokens are
// joined by single spaces.
//  delete: each token dropped with probability p; one token always survives.
//  insert: each of the n+1 gaps (both ends included) receives, with
//          probability p, a copy of a uniformly chosen original token.
//  swap:   each token with known synonyms (looked up lowercased) is replaced
//          with probability p by a uniformly chosen synonym.
// Throws InvalidArgument when p is outside [0,1] or the text has no tokens.
std::string Augment(std::string_view text, AugmentOp op, double p, uint64_t seed,
                    const SynonymProvider& synonyms);

// Augments an example into a candidate with the same label.
Candidate AugmentExample(const Example& source, AugmentOp op, double p,
                         uint64_t seed, const SynonymProvider& synonyms);

struct Backtranslation {
  std::string intermediate;
  std::string text;
};

// Two chat calls: source language -> pivot -> source language. Throws
// InvalidArgument on empty text or pivot and Error on an empty translation.
Backtranslation Backtranslate(std::string_view text, std::string_view pivot,
                              ChatClient& chat, const ChatSettings& settings,
                              std::string_view source_language = "English");

// Backtranslates an example; lineage records the pivot and the audit trail
// keeps both the intermediate and final texts.
Candidate BacktranslateExample(const Example& source, std::string_view pivot,
                               ChatClient& chat, const ChatSettings& settings,
                               std::string_view source_language = "English");

}  // namespace juree

#endif  // JUREE_FOUNDRY_H_
