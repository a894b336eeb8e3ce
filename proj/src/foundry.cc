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

#include "juree/foundry.h"

#include <algorithm>
#include <istream>
#include <numeric>
#include <set>
#include <sstream>

#include "json.hpp"
#include "juree/error.h"
#include "juree/util.h"

namespace juree {

namespace {

using ordered_json = nlohmann::ordered_json;

constexpr char kGenerationTemplate[] =
    R"tmpl(You are helping to build training data for a banking chatbot guardrail. Write new, realistic messages that a customer could send to the chatbot and that belong to the class label "{target_label}".

Shape every message according to these instructions:
{aspect_instructions}
{examples}
Reformulate the ideas in the examples rather than copying them, imitating the persona and situation described above. Return one message per line, with no numbering and nothing else.)tmpl";

constexpr char kCounterfactualTemplate[] =
    R"tmpl(Rewrite the following user message with as few changes as possible so that it belongs to the class label "{target_label}" instead of "{source_label}".

Class label "{target_label}": {target_description}

START OF USER INPUT
{source_text}
END OF USER INPUT

Return only the rewritten message.)tmpl";

constexpr char kTranslateTemplate[] =
    R"tmpl(Translate the following text from {from} into {to}. Return only the translation.

{text})tmpl";

// Strips a leading list marker such as "- ", "* " or "3. " from a model line.
std::string_view StripListMarker(std::string_view line) {
  if (line.size() >= 2 && (line[0] == '-' || line[0] == '*') && line[1] == ' ') {
    return TrimAscii(line.substr(2));
  }
  size_t i = 0;
  while (i < line.size() && line[i] >= '0' && line[i] <= '9') ++i;
  if (i > 0 && i + 1 < line.size() && (line[i] == '.' || line[i] == ')') &&
      line[i + 1] == ' ') {
    return TrimAscii(line.substr(i + 2));
  }
  return line;
}

std::string RenderExamplesSection(const std::vector<const Example*>& exemplars) {
  if (exemplars.empty()) return "";
  std::string out = "\n### Examples ###\n\n";
  for (size_t i = 0; i < exemplars.size(); ++i) {
    if (i > 0) out += "#\n";
    out += "text: " + exemplars[i]->text + "\n";
    out += "label: " + std::string(LabelName(exemplars[i]->label)) + "\n";
  }
  out += "\n### End of Examples ###\n";
  return out;
}

ordered_json ReasonsJson(const std::vector<FilterReason>& reasons) {
  ordered_json arr = ordered_json::array();
  for (const auto& r : reasons) {
    arr.push_back(ordered_json{{"stage", r.stage}, {"detail", r.detail}});
  }
  return arr;
}

}  // namespace

const std::vector<AspectSpec>& AspectCatalog() {
  static const std::vector<AspectSpec> kCatalog = {
      {"customer_type", "Customer type",
       {"Retail", "Small Business", "High Net-worth", "Students", "Seniors"}},
      {"cultural_type", "Cultural background",
       {"Western", "Eastern", "Middle Eastern", "Latin", "African", "Asian"}},
      {"expertise", "Educational or professional expertise",
       {"Students", "non-experts", "Finance Professionals", "Tech-savvy users"}},
      {"grammatical_aspect", "Grammatical style",
       {"Perfect Grammar", "Casual", "Typos and Errors", "Short & Concise",
        "Long & Detailed"}},
      {"specificity", "Specificity", {"Highly Specific", "Vague"}},
      {"hypothetical_vs_practical", "Hypothetical or practical",
       {"Hypothetical", "Practical"}},
      {"rarity", "Rarity", {"Common", "Unusual", "Edge Cases"}},
      {"product_or_service", "Product or service",
       {"Transactions", "Savings", "Loans", "Investments", "Cards", "Online"}},
      {"emotional_tone", "Emotional tone",
       {"Happy", "Neutral", "Frustrated", "Confused", "Anxious", "Impatient"}},
      {"urgency", "Urgency",
       {"Immediate Assistance", "General", "Scheduled/Planned Actions",
        "Follow-Up"}},
      {"financial_literacy", "Financial literacy",
       {"Novice", "Intermediate", "Advanced", "Mis-guided"}},
  };
  return kCatalog;
}

const AspectSpec* FindAspect(std::string_view key) {
  for (const auto& spec : AspectCatalog()) {
    if (spec.key == key) return &spec;
  }
  return nullptr;
}

void GenerationRecipe::Validate() const {
  if (recipe_id.empty()) throw InvalidArgument("recipe_id must be non-empty");
  std::set<std::string> names;
  for (const auto& [name, value] : aspects) {
    if (name.empty()) throw InvalidArgument("aspect names must be non-empty");
    if (!names.insert(name).second) {
      throw InvalidArgument("duplicate aspect '" + name + "'");
    }
  }
  if (!allow_many_aspects && aspects.size() > 3) {
    throw InvalidArgument("recipe sets " + std::to_string(aspects.size()) +
                          " aspects; at most 3 unless allow_many_aspects");
  }
  if (n_fewshot < 0) throw InvalidArgument("n_fewshot must be >= 0");
  if (!(sampling.temperature >= 0.0)) {
    throw InvalidArgument("temperature must be >= 0");
  }
  if (!(sampling.repetition_penalty > 0.0)) {
    throw InvalidArgument("repetition_penalty must be > 0");
  }
}

GenerationRecipe RecipeFromJson(std::string_view json) {
  GenerationRecipe r;
  try {
    const ordered_json j = ordered_json::parse(json);
    r.recipe_id = j.at("recipe_id").get<std::string>();
    r.target_label = LabelFromName(j.at("target_label").get<std::string>());
    if (j.contains("aspects")) {
      for (const auto& [k, v] : j["aspects"].items()) {
        r.aspects.emplace_back(k, v.get<std::string>());
      }
    }
    r.n_fewshot = j.value("n_fewshot", 0);
    r.model_id = j.value("model_id", std::string());
    if (j.contains("sampling")) {
      r.sampling.temperature = j["sampling"].value("temperature", 0.0);
      r.sampling.repetition_penalty = j["sampling"].value("repetition_penalty", 1.0);
    }
    r.seed = j.value("seed", uint64_t{0});
    r.allow_many_aspects = j.value("allow_many_aspects", false);
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument(std::string("malformed recipe: ") + e.what());
  }
  r.Validate();
  return r;
}

std::string RecipeToJson(const GenerationRecipe& r) {
  ordered_json j;
  j["recipe_id"] = r.recipe_id;
  j["target_label"] = LabelName(r.target_label);
  ordered_json aspects = ordered_json::object();
  for (const auto& [k, v] : r.aspects) aspects[k] = v;
  j["aspects"] = std::move(aspects);
  j["n_fewshot"] = r.n_fewshot;
  j["model_id"] = r.model_id;
  j["sampling"] = {{"temperature", r.sampling.temperature},
                   {"repetition_penalty", r.sampling.repetition_penalty}};
  j["seed"] = r.seed;
  if (r.allow_many_aspects) j["allow_many_aspects"] = true;
  return j.dump(2) + "\n";
}

GenerationRecipe LoadRecipe(const std::string& path) {
  return RecipeFromJson(ReadFile(path));
}

std::string_view StageName(Stage stage) {
  switch (stage) {
    case Stage::kGenerated:
      return "generated";
    case Stage::kCounterfactual:
      return "counterfactual";
    case Stage::kAugmented:
      return "augmented";
    case Stage::kBacktranslated:
      return "backtranslated";
  }
  return "generated";
}

Stage StageFromName(std::string_view name) {
  if (name == "generated") return Stage::kGenerated;
  if (name == "counterfactual") return Stage::kCounterfactual;
  if (name == "augmented") return Stage::kAugmented;
  if (name == "backtranslated") return Stage::kBacktranslated;
  throw InvalidArgument("unknown stage '" + std::string(name) + "'");
}

std::string_view FilterStateName(FilterState state) {
  switch (state) {
    case FilterState::kPending:
      return "pending";
    case FilterState::kKept:
      return "kept";
    case FilterState::kDropped:
      return "dropped";
    case FilterState::kFlagged:
      return "flagged";
  }
  return "pending";
}

FilterState FilterStateFromName(std::string_view name) {
  if (name == "pending") return FilterState::kPending;
  if (name == "kept") return FilterState::kKept;
  if (name == "dropped") return FilterState::kDropped;
  if (name == "flagged") return FilterState::kFlagged;
  throw InvalidArgument("unknown filter state '" + std::string(name) + "'");
}

Candidate MakeCandidate(std::string text, Label label, Stage stage,
                        Lineage lineage) {
  lineage.stage = std::string(StageName(stage));
  Candidate c;
  c.example = MakeExample(std::move(text), label, Origin::kSynthetic,
                          std::move(lineage));
  c.stage = stage;
  return c;
}

std::string CandidateToJsonLine(const Candidate& c) {
  ordered_json j = ordered_json::parse(ExampleToJsonLine(c.example));
  j["stage"] = StageName(c.stage);
  j["filter_state"] = FilterStateName(c.filter_state);
  j["filter_reasons"] = ReasonsJson(c.filter_reasons);
  return j.dump();
}

Candidate CandidateFromJson(std::string_view line) {
  Candidate c;
  c.example = ExampleFromJson(line);
  if (c.example.origin != Origin::kSynthetic) {
    throw InvalidArgument("candidate " + c.example.id + " is not synthetic");
  }
  try {
    const ordered_json j = ordered_json::parse(line);
    c.stage = StageFromName(j.value("stage", std::string("generated")));
    c.filter_state = FilterStateFromName(j.value("filter_state", std::string("pending")));
    if (j.contains("filter_reasons")) {
      for (const auto& r : j["filter_reasons"]) {
        c.filter_reasons.push_back(
            {r.at("stage").get<std::string>(), r.at("detail").get<std::string>()});
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument(std::string("malformed candidate: ") + e.what());
  }
  return c;
}

std::string CandidatesToJsonl(std::span<const Candidate> candidates) {
  std::string out;
  for (const auto& c : candidates) {
    out += CandidateToJsonLine(c);
    out += '\n';
  }
  return out;
}

std::vector<Candidate> ReadCandidates(std::istream& in) {
  std::vector<Candidate> out;
  std::string line;
  size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (TrimAscii(line).empty()) continue;
    try {
      out.push_back(CandidateFromJson(line));
    } catch (const InvalidArgument& e) {
      throw InvalidArgument("line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  return out;
}

std::vector<Candidate> LoadCandidates(const std::string& path) {
  std::istringstream in(ReadFile(path));
  return ReadCandidates(in);
}

std::string_view DefaultGenerationTemplate() { return kGenerationTemplate; }

GenerationPrompt AssembleGenerationPrompt(const GenerationRecipe& recipe,
                                          const Dataset& seed_pool,
                                          uint64_t rng_seed,
                                          std::string_view tmpl) {
  recipe.Validate();
  StableRng rng(MixSeed(recipe.seed, rng_seed));

  GenerationPrompt prompt;
  prompt.aspects = recipe.aspects;
  if (prompt.aspects.empty()) {
    const auto& catalog = AspectCatalog();
    std::vector<size_t> idx(catalog.size());
    std::iota(idx.begin(), idx.end(), 0);
    rng.Shuffle(idx);
    const size_t count = 1 + static_cast<size_t>(rng.Uniform(3));
    idx.resize(count);
    std::sort(idx.begin(), idx.end());
    for (size_t i : idx) {
      const auto& values = catalog[i].values;
      prompt.aspects.emplace_back(catalog[i].key,
                                  values[static_cast<size_t>(rng.Uniform(values.size()))]);
    }
  }

  std::vector<const Example*> pool;
  for (const Example& e : seed_pool.examples()) {
    if (e.label == recipe.target_label) pool.push_back(&e);
  }
  const auto n = static_cast<size_t>(recipe.n_fewshot);
  if (pool.size() < n) {
    throw InvalidArgument("seed pool has " + std::to_string(pool.size()) +
                          " examples of '" +
                          std::string(LabelName(recipe.target_label)) +
                          "', recipe needs " + std::to_string(n));
  }
  std::sort(pool.begin(), pool.end(),
            [](const Example* a, const Example* b) { return a->id < b->id; });
  rng.Shuffle(pool);
  pool.resize(n);
  for (const Example* e : pool) prompt.exemplar_ids.push_back(e->id);

  std::vector<std::string> lines;
  for (const auto& [key, value] : prompt.aspects) {
    const AspectSpec* spec = FindAspect(key);
    lines.push_back("- " + (spec ? spec->display : key) + ": " + value);
  }
  prompt.text = RenderTemplate(
      tmpl, {{"target_label", std::string(LabelName(recipe.target_label))},
             {"aspect_instructions", Join(lines, "\n")},
             {"examples", RenderExamplesSection(pool)}});
  return prompt;
}

GenerationResult GenerateCandidates(const GenerationRecipe& recipe, size_t n,
                                    ChatClient& chat, const Dataset& seed_pool,
                                    const GenerationOptions& options) {
  if (n == 0) throw InvalidArgument("generate_candidates: n must be >= 1");
  const std::string_view tmpl =
      options.tmpl.empty() ? DefaultGenerationTemplate() : options.tmpl;
  GenerationResult result;
  while (result.candidates.size() < n && result.calls < options.max_calls) {
    const GenerationPrompt prompt = AssembleGenerationPrompt(
        recipe, seed_pool, static_cast<uint64_t>(result.calls), tmpl);
    ++result.calls;
    const std::string output =
        chat.Complete(recipe.model_id, prompt.text, recipe.sampling);
    for (const std::string& raw_line : SplitLines(output)) {
      const std::string_view line = StripListMarker(TrimAscii(raw_line));
      if (line.empty()) continue;
      if (result.candidates.size() == n) break;
      Lineage lineage;
      lineage.recipe_id = recipe.recipe_id;
      lineage.exemplar_ids = prompt.exemplar_ids;
      result.candidates.push_back(MakeCandidate(
          std::string(line), recipe.target_label, Stage::kGenerated, lineage));
    }
  }
  if (result.candidates.size() < n) {
    result.error = "retry budget exhausted after " + std::to_string(result.calls) +
                   " calls: collected " + std::to_string(result.candidates.size()) +
                   " of " + std::to_string(n) + " candidates";
  }
  return result;
}

std::string BuildCounterfactualPrompt(const Example& source, Label target_label,
                                      const Taxonomy& taxonomy) {
  return RenderTemplate(
      kCounterfactualTemplate,
      {{"target_label", std::string(LabelName(target_label))},
       {"source_label", std::string(LabelName(source.label))},
       {"target_description", taxonomy.risk_class(target_label).description},
       {"source_text", source.text}});
}

Candidate Counterfactual(const Example& source, Label target_label,
                         ChatClient& chat, const Taxonomy& taxonomy,
                         const ChatSettings& settings) {
  if (target_label == source.label) {
    throw InvalidArgument("counterfactual target equals the source label '" +
                          std::string(LabelName(source.label)) + "'");
  }
  const std::string rewrite(TrimAscii(chat.Complete(
      settings.model_id, BuildCounterfactualPrompt(source, target_label, taxonomy),
      settings.sampling)));
  if (rewrite.empty()) throw Error("counterfactual rewrite is empty");
  Lineage lineage;
  lineage.parent_id = source.id;
  Candidate c = MakeCandidate(rewrite, target_label, Stage::kCounterfactual, lineage);
  if (rewrite == source.text) {
    c.filter_state = FilterState::kFlagged;
    c.filter_reasons.push_back({"counterfactual", "identical-to-parent"});
  }
  return c;
}

ThesaurusSynonyms ThesaurusSynonyms::FromJson(std::string_view json) {
  try {
    return ThesaurusSynonyms(nlohmann::json::parse(json)
                                 .get<std::map<std::string, std::vector<std::string>>>());
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument(std::string("malformed thesaurus: ") + e.what());
  }
}

ThesaurusSynonyms ThesaurusSynonyms::FromFile(const std::string& path) {
  return FromJson(ReadFile(path));
}

std::vector<std::string> ThesaurusSynonyms::Synonyms(std::string_view token) const {
  auto it = table_.find(std::string(token));
  return it == table_.end() ? std::vector<std::string>{} : it->second;
}

std::string_view AugmentOpName(AugmentOp op) {
  switch (op) {
    case AugmentOp::kDelete:
      return "delete";
    case AugmentOp::kInsert:
      return "insert";
    case AugmentOp::kSwap:
      return "swap";
  }
  return "delete";
}

AugmentOp AugmentOpFromName(std::string_view name) {
  if (name == "delete") return AugmentOp::kDelete;
  if (name == "insert") return AugmentOp::kInsert;
  if (name == "swap") return AugmentOp::kSwap;
  throw InvalidArgument("unknown augmentation '" + std::string(name) + "'");
}

std::string Augment(std::string_view text, AugmentOp op, double p, uint64_t seed,
                    const SynonymProvider& synonyms) {
  if (!(p >= 0.0 && p <= 1.0)) throw InvalidArgument("augment: p must be in [0,1]");
  const std::vector<std::string> tokens = SplitWhitespace(text);
  if (tokens.empty()) throw InvalidArgument("augment: text has no tokens");
  StableRng rng(seed);
  std::vector<std::string> out;

  switch (op) {
    case AugmentOp::kDelete: {
      std::vector<bool> keep(tokens.size());
      bool any = false;
      for (size_t i = 0; i < tokens.size(); ++i) {
        keep[i] = !rng.Bernoulli(p);
        any = any || keep[i];
      }
      if (!any) keep[static_cast<size_t>(rng.Uniform(tokens.size()))] = true;
      for (size_t i = 0; i < tokens.size(); ++i) {
        if (keep[i]) out.push_back(tokens[i]);
      }
      break;
    }
    case AugmentOp::kInsert: {
      for (size_t gap = 0; gap <= tokens.size(); ++gap) {
        if (rng.Bernoulli(p)) {
          out.push_back(tokens[static_cast<size_t>(rng.Uniform(tokens.size()))]);
        }
        if (gap < tokens.size()) out.push_back(tokens[gap]);
      }
      break;
    }
    case AugmentOp::kSwap: {
      for (const std::string& tok : tokens) {
        const auto options = synonyms.Synonyms(ToLowerAscii(tok));
        if (!options.empty() && rng.Bernoulli(p)) {
          out.push_back(options[static_cast<size_t>(rng.Uniform(options.size()))]);
        } else {
          out.push_back(tok);
        }
      }
      break;
    }
  }
  return Join(out, " ");
}

Candidate AugmentExample(const Example& source, AugmentOp op, double p,
                         uint64_t seed, const SynonymProvider& synonyms) {
  Lineage lineage;
  lineage.parent_id = source.id;
  if (source.lineage && source.lineage->recipe_id) {
    lineage.recipe_id = source.lineage->recipe_id;
  }
  Candidate c = MakeCandidate(Augment(source.text, op, p, seed, synonyms),
                              source.label, Stage::kAugmented, lineage);
  c.filter_reasons.push_back({"augment", std::string(AugmentOpName(op)) +
                                             " p=" + FormatDouble(p)});
  return c;
}

Backtranslation Backtranslate(std::string_view text, std::string_view pivot,
                              ChatClient& chat, const ChatSettings& settings,
                              std::string_view source_language) {
  if (TrimAscii(text).empty()) throw InvalidArgument("backtranslate: empty text");
  if (TrimAscii(pivot).empty()) throw InvalidArgument("backtranslate: empty pivot language");
  Backtranslation bt;
  bt.intermediate = std::string(TrimAscii(chat.Complete(
      settings.model_id,
      RenderTemplate(kTranslateTemplate, {{"from", std::string(source_language)},
                                          {"to", std::string(pivot)},
                                          {"text", std::string(text)}}),
      settings.sampling)));
  if (bt.intermediate.empty()) throw Error("backtranslate: empty pivot translation");
  bt.text = std::string(TrimAscii(chat.Complete(
      settings.model_id,
      RenderTemplate(kTranslateTemplate, {{"from", std::string(pivot)},
                                          {"to", std::string(source_language)},
                                          {"text", bt.intermediate}}),
      settings.sampling)));
  if (bt.text.empty()) throw Error("backtranslate: empty back translation");
  return bt;
}

Candidate BacktranslateExample(const Example& source, std::string_view pivot,
                               ChatClient& chat, const ChatSettings& settings,
                               std::string_view source_language) {
  const Backtranslation bt =
      Backtranslate(source.text, pivot, chat, settings, source_language);
  Lineage lineage;
  lineage.parent_id = source.id;
  lineage.pivot = std::string(pivot);
  Candidate c = MakeCandidate(bt.text, source.label, Stage::kBacktranslated, lineage);
  c.filter_reasons.push_back(
      {"backtranslate", "intermediate (" + std::string(pivot) + "): " + bt.intermediate});
  c.filter_reasons.push_back({"backtranslate", "final: " + bt.text});
  return c;
}

}  // namespace juree
