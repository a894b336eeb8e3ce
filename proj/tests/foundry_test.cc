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

#include <gtest/gtest.h>

#include <set>
#include <sstream>

#include "juree/error.h"
#include "juree/util.h"
#include "test_support.h"

namespace juree {
namespace {

using testing::FoundryStubChat;
using testing::ScriptedChat;

GenerationRecipe GamblingRecipe() {
  return LoadRecipe(testing::DataPath("recipes/vulnerable_gambling.json"));
}

TEST(AspectCatalogTest, ElevenAspectsWithValues) {
  const auto& catalog = AspectCatalog();
  ASSERT_EQ(catalog.size(), 11u);
  std::set<std::string> keys;
  for (const auto& a : catalog) {
    EXPECT_FALSE(a.values.empty()) << a.key;
    keys.insert(a.key);
  }
  EXPECT_EQ(keys.size(), 11u);
  ASSERT_NE(FindAspect("emotional_tone"), nullptr);
  const auto& tones = FindAspect("emotional_tone")->values;
  EXPECT_NE(std::find(tones.begin(), tones.end(), "Anxious"), tones.end());
  EXPECT_EQ(FindAspect("favourite_colour"), nullptr);
}

TEST(RecipeTest, LoadsStoredRecipe) {
  const GenerationRecipe r = GamblingRecipe();
  EXPECT_EQ(r.recipe_id, "vulnerable-gambling-v1");
  EXPECT_EQ(r.target_label, Label::kVulnerable);
  ASSERT_EQ(r.aspects.size(), 2u);
  EXPECT_EQ(r.aspects[0], (std::pair<std::string, std::string>{"emotional_tone", "Anxious"}));
  EXPECT_EQ(r.aspects[1].second, "Immediate Assistance");
  EXPECT_EQ(r.n_fewshot, 3);
  EXPECT_EQ(r.seed, 7u);
  EXPECT_DOUBLE_EQ(r.sampling.temperature, 0.9);
}

TEST(RecipeTest, JsonRoundTrip) {
  const GenerationRecipe r = GamblingRecipe();
  const GenerationRecipe back = RecipeFromJson(RecipeToJson(r));
  EXPECT_EQ(back.recipe_id, r.recipe_id);
  EXPECT_EQ(back.aspects, r.aspects);
  EXPECT_EQ(back.sampling, r.sampling);
  EXPECT_EQ(back.seed, r.seed);
  EXPECT_EQ(RecipeToJson(back), RecipeToJson(r));
}

TEST(RecipeTest, Validation) {
  GenerationRecipe r = GamblingRecipe();
  r.aspects = {{"a", "1"}, {"b", "2"}, {"c", "3"}};
  EXPECT_NO_THROW(r.Validate());
  r.aspects.push_back({"d", "4"});
  EXPECT_THROW(r.Validate(), InvalidArgument);
  r.allow_many_aspects = true;
  EXPECT_NO_THROW(r.Validate());
  r = GamblingRecipe();
  r.aspects = {{"a", "1"}, {"a", "2"}};
  EXPECT_THROW(r.Validate(), InvalidArgument);
  r = GamblingRecipe();
  r.n_fewshot = -1;
  EXPECT_THROW(r.Validate(), InvalidArgument);
  r = GamblingRecipe();
  r.sampling.temperature = -0.1;
  EXPECT_THROW(r.Validate(), InvalidArgument);
  r = GamblingRecipe();
  r.sampling.repetition_penalty = 0.0;
  EXPECT_THROW(r.Validate(), InvalidArgument);
  EXPECT_THROW(RecipeFromJson(R"({"recipe_id": "x"})"), InvalidArgument);
  EXPECT_THROW(RecipeFromJson(R"({"recipe_id": "x", "target_label": "fraud"})"),
               InvalidArgument);
}

TEST(TemplateTest, StoredTemplatesMatchBuiltins) {
  EXPECT_EQ(ReadFile(testing::DataPath("prompts/generation.txt")),
            DefaultGenerationTemplate());
  const Example src = MakeExample("my card was declined", Label::kBankingRelated,
                                  Origin::kInternal);
  const Taxonomy& tax = Taxonomy::Default();
  const std::string expected = RenderTemplate(
      ReadFile(testing::DataPath("prompts/counterfactual.txt")),
      {{"target_label", "complaint"},
       {"source_label", "banking_related"},
       {"target_description", tax.risk_class(Label::kComplaint).description},
       {"source_text", src.text}});
  EXPECT_EQ(BuildCounterfactualPrompt(src, Label::kComplaint, tax), expected);
}

TEST(GenerationPromptTest, DeterministicAndVerbatimAspects) {
  const Dataset pool = testing::SeparableDataset();
  const GenerationRecipe r = GamblingRecipe();
  const GenerationPrompt a = AssembleGenerationPrompt(r, pool, 0);
  const GenerationPrompt b = AssembleGenerationPrompt(r, pool, 0);
  EXPECT_EQ(a.text, b.text);
  EXPECT_EQ(a.exemplar_ids, b.exemplar_ids);
  EXPECT_NE(a.text.find("- Emotional tone: Anxious\n- Urgency: Immediate Assistance"),
            std::string::npos);
  EXPECT_NE(a.text.find("class label \"vulnerable\""), std::string::npos);
  ASSERT_EQ(a.exemplar_ids.size(), 3u);
  EXPECT_EQ(std::set<std::string>(a.exemplar_ids.begin(), a.exemplar_ids.end()).size(), 3u);
  for (const auto& id : a.exemplar_ids) {
    const Example* e = pool.Find(id);
    ASSERT_NE(e, nullptr);
    EXPECT_EQ(e->label, Label::kVulnerable);
    EXPECT_NE(a.text.find("text: " + e->text + "\n"), std::string::npos);
  }
  // Different draws are possible across calls.
  std::set<std::vector<std::string>> draws;
  for (uint64_t s = 0; s < 10; ++s) draws.insert(AssembleGenerationPrompt(r, pool, s).exemplar_ids);
  EXPECT_GT(draws.size(), 1u);
}

TEST(GenerationPromptTest, NoExamplesSectionWithoutFewShot) {
  GenerationRecipe r = GamblingRecipe();
  r.n_fewshot = 0;
  const GenerationPrompt p = AssembleGenerationPrompt(r, Dataset(), 0);
  EXPECT_EQ(p.text.find("Examples"), std::string::npos);
  EXPECT_TRUE(p.exemplar_ids.empty());
}

TEST(GenerationPromptTest, DrawsCatalogAspectsWhenUnset) {
  GenerationRecipe r = GamblingRecipe();
  r.aspects.clear();
  r.n_fewshot = 0;
  std::set<size_t> sizes;
  for (uint64_t s = 0; s < 50; ++s) {
    const GenerationPrompt p = AssembleGenerationPrompt(r, Dataset(), s);
    sizes.insert(p.aspects.size());
    EXPECT_GE(p.aspects.size(), 1u);
    EXPECT_LE(p.aspects.size(), 3u);
    for (const auto& [k, v] : p.aspects) {
      const AspectSpec* spec = FindAspect(k);
      ASSERT_NE(spec, nullptr);
      EXPECT_NE(std::find(spec->values.begin(), spec->values.end(), v), spec->values.end());
      EXPECT_NE(p.text.find("- " + spec->display + ": " + v), std::string::npos);
    }
  }
  EXPECT_EQ(sizes.size(), 3u);
}

TEST(GenerationPromptTest, PoolTooSmall) {
  GenerationRecipe r = GamblingRecipe();
  r.n_fewshot = 21;
  EXPECT_THROW(AssembleGenerationPrompt(r, testing::SeparableDataset(), 0), InvalidArgument);
}

TEST(GenerateCandidatesTest, CollectsAcrossCalls) {
  ScriptedChat chat([](const std::string&, const std::string&) {
    return std::string("1. first line\n- second line\n\n  third line  \n");
  });
  const GenerationResult res =
      GenerateCandidates(GamblingRecipe(), 5, chat, testing::SeparableDataset());
  EXPECT_EQ(res.calls, 2);
  ASSERT_EQ(res.candidates.size(), 5u);
  EXPECT_FALSE(res.error.has_value());
  EXPECT_EQ(res.candidates[0].example.text, "first line");
  EXPECT_EQ(res.candidates[1].example.text, "second line");
  EXPECT_EQ(res.candidates[2].example.text, "third line");
  for (const Candidate& c : res.candidates) {
    EXPECT_EQ(c.example.label, Label::kVulnerable);
    EXPECT_EQ(c.example.origin, Origin::kSynthetic);
    ASSERT_TRUE(c.example.lineage.has_value());
    EXPECT_EQ(c.example.lineage->recipe_id, "vulnerable-gambling-v1");
    EXPECT_EQ(c.example.lineage->exemplar_ids.size(), 3u);
    EXPECT_EQ(c.stage, Stage::kGenerated);
    EXPECT_EQ(c.filter_state, FilterState::kPending);
  }
  // The two calls used independent exemplar draws.
  const auto prompts = chat.prompts();
  ASSERT_EQ(prompts.size(), 2u);
  EXPECT_NE(prompts[0], prompts[1]);
}

TEST(GenerateCandidatesTest, BudgetExhausted) {
  auto chat = ScriptedChat::Constant("\n  \n");
  GenerationOptions opts;
  opts.max_calls = 2;
  const GenerationResult res =
      GenerateCandidates(GamblingRecipe(), 3, *chat, testing::SeparableDataset(), opts);
  EXPECT_EQ(res.calls, 2);
  EXPECT_TRUE(res.candidates.empty());
  ASSERT_TRUE(res.error.has_value());
  EXPECT_EQ(chat->calls(), 2);
}

TEST(GenerateCandidatesTest, StubIsDeterministic) {
  FoundryStubChat c1(testing::ReferenceScorer()), c2(testing::ReferenceScorer());
  const Dataset pool = testing::SeparableDataset();
  const auto a = GenerateCandidates(GamblingRecipe(), 12, c1, pool);
  const auto b = GenerateCandidates(GamblingRecipe(), 12, c2, pool);
  ASSERT_EQ(a.candidates.size(), 12u);
  EXPECT_EQ(a.candidates, b.candidates);
}

TEST(CandidateJsonTest, RoundTrip) {
  FoundryStubChat chat(testing::ReferenceScorer());
  auto cands = GenerateCandidates(GamblingRecipe(), 4, chat, testing::SeparableDataset()).candidates;
  cands[1].filter_state = FilterState::kFlagged;
  cands[1].filter_reasons.push_back({"distance", "conflict with abc"});
  std::istringstream in(CandidatesToJsonl(cands));
  EXPECT_EQ(ReadCandidates(in), cands);
  EXPECT_THROW(CandidateFromJson("{}"), InvalidArgument);
}

TEST(CounterfactualTest, RewritesIntoTarget) {
  const Example src = MakeExample("my card was declined", Label::kBankingRelated,
                                  Origin::kInternal);
  FoundryStubChat chat(testing::ReferenceScorer());
  const Candidate c = Counterfactual(src, Label::kComplaint, chat, Taxonomy::Default(), {});
  EXPECT_EQ(c.example.text, "my card was declined compensation");
  EXPECT_EQ(c.example.label, Label::kComplaint);
  EXPECT_EQ(c.stage, Stage::kCounterfactual);
  EXPECT_EQ(c.example.lineage->parent_id, src.id);
  EXPECT_EQ(c.filter_state, FilterState::kPending);
}

TEST(CounterfactualTest, PromptContents) {
  const Example src = MakeExample("my card was declined", Label::kBankingRelated,
                                  Origin::kInternal);
  const std::string p = BuildCounterfactualPrompt(src, Label::kHarmful, Taxonomy::Default());
  EXPECT_NE(p.find("\"harmful\" instead of \"banking_related\""), std::string::npos);
  EXPECT_NE(p.find(Taxonomy::Default().risk_class(Label::kHarmful).description),
            std::string::npos);
  EXPECT_NE(p.find("START OF USER INPUT\nmy card was declined\nEND OF USER INPUT"),
            std::string::npos);
}

TEST(CounterfactualTest, ErrorsAndIdenticalRewrite) {
  const Example src = MakeExample("hello there", Label::kOffTopic, Origin::kInternal);
  auto echo = ScriptedChat::Constant("  hello there \n");
  EXPECT_THROW(Counterfactual(src, Label::kOffTopic, *echo, Taxonomy::Default(), {}),
               InvalidArgument);
  EXPECT_EQ(echo->calls(), 0);
  const Candidate c = Counterfactual(src, Label::kComplaint, *echo, Taxonomy::Default(), {});
  EXPECT_EQ(c.filter_state, FilterState::kFlagged);
  ASSERT_EQ(c.filter_reasons.size(), 1u);
  EXPECT_EQ(c.filter_reasons[0].detail, "identical-to-parent");
  auto empty = ScriptedChat::Constant(" ");
  EXPECT_THROW(Counterfactual(src, Label::kComplaint, *empty, Taxonomy::Default(), {}), Error);
}

ThesaurusSynonyms Thesaurus() {
  return ThesaurusSynonyms::FromFile(testing::DataPath("thesaurus.json"));
}

TEST(AugmentTest, ZeroProbabilityIsIdentity) {
  const auto syn = Thesaurus();
  for (AugmentOp op : {AugmentOp::kDelete, AugmentOp::kInsert, AugmentOp::kSwap}) {
    EXPECT_EQ(Augment("I am  angry about\tthe fee", op, 0.0, 5, syn), "I am angry about the fee");
  }
}

TEST(AugmentTest, DeleteKeepsOneToken) {
  const auto syn = Thesaurus();
  for (uint64_t seed = 0; seed < 50; ++seed) {
    const std::string out = Augment("a b c d e", AugmentOp::kDelete, 1.0, seed, syn);
    EXPECT_EQ(SplitWhitespace(out).size(), 1u);
  }
  const auto out = SplitWhitespace(Augment("a b c d e f g h", AugmentOp::kDelete, 0.5, 3, syn));
  EXPECT_TRUE(std::is_sorted(out.begin(), out.end()));  // order preserved
}

TEST(AugmentTest, InsertFillsEveryGapAtOne) {
  const auto syn = Thesaurus();
  const auto out = SplitWhitespace(Augment("x y z", AugmentOp::kInsert, 1.0, 9, syn));
  ASSERT_EQ(out.size(), 7u);
  EXPECT_EQ(out[1], "x");
  EXPECT_EQ(out[3], "y");
  EXPECT_EQ(out[5], "z");
  for (const auto& t : out) EXPECT_TRUE(t == "x" || t == "y" || t == "z");
}

TEST(AugmentTest, SwapUsesThesaurus) {
  const auto syn = Thesaurus();
  for (uint64_t seed = 0; seed < 20; ++seed) {
    const std::string out = Augment("I am Angry", AugmentOp::kSwap, 1.0, seed, syn);
    EXPECT_TRUE(out == "I am furious" || out == "I am irate") << out;
  }
  EXPECT_EQ(Augment("I am angry", AugmentOp::kSwap, 1.0, 1, syn),
            Augment("I am angry", AugmentOp::kSwap, 1.0, 1, syn));
}

TEST(AugmentTest, RejectsBadInput) {
  const auto syn = Thesaurus();
  EXPECT_THROW(Augment("a", AugmentOp::kDelete, 1.5, 0, syn), InvalidArgument);
  EXPECT_THROW(Augment("a", AugmentOp::kDelete, -0.1, 0, syn), InvalidArgument);
  EXPECT_THROW(Augment("   ", AugmentOp::kDelete, 0.5, 0, syn), InvalidArgument);
  EXPECT_THROW(AugmentOpFromName("shuffle"), InvalidArgument);
}

TEST(AugmentTest, ExamplePreservesLabelAndLineage) {
  const Example src = MakeExample("I am angry about the fee", Label::kComplaint,
                                  Origin::kInternal);
  const Candidate c = AugmentExample(src, AugmentOp::kSwap, 1.0, 4, Thesaurus());
  EXPECT_EQ(c.example.label, Label::kComplaint);
  EXPECT_EQ(c.stage, Stage::kAugmented);
  EXPECT_EQ(c.example.lineage->parent_id, src.id);
  EXPECT_NE(c.example.text, src.text);
}

TEST(BacktranslateTest, RoundTripThroughPivot) {
  FoundryStubChat chat(testing::ReferenceScorer());
  const Backtranslation bt = Backtranslate("where is my refund", "German", chat, {});
  EXPECT_EQ(bt.intermediate, "where is my refund");
  EXPECT_EQ(bt.text, "where is my refund");
  EXPECT_EQ(chat.calls(), 2);

  ScriptedChat tagged([](const std::string&, const std::string& prompt) {
    return prompt.find("into German") != std::string::npos ? std::string("wo ist")
                                                            : std::string("where is");
  });
  const Example src = MakeExample("where is it", Label::kBankingRelated, Origin::kInternal);
  const Candidate c = BacktranslateExample(src, "German", tagged, {});
  EXPECT_EQ(c.example.text, "where is");
  EXPECT_EQ(c.example.lineage->pivot, "German");
  EXPECT_EQ(c.stage, Stage::kBacktranslated);
  ASSERT_EQ(c.filter_reasons.size(), 2u);
  EXPECT_NE(c.filter_reasons[0].detail.find("wo ist"), std::string::npos);
}

TEST(BacktranslateTest, Errors) {
  FoundryStubChat chat(testing::ReferenceScorer());
  EXPECT_THROW(Backtranslate("text", "", chat, {}), InvalidArgument);
  EXPECT_THROW(Backtranslate(" ", "German", chat, {}), InvalidArgument);
  EXPECT_EQ(chat.calls(), 0);
  auto empty = ScriptedChat::Constant("");
  EXPECT_THROW(Backtranslate("text", "German", *empty, {}), Error);
}

}  // namespace
}  // namespace juree
