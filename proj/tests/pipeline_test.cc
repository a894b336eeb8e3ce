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

#include <gtest/gtest.h>

#include <set>
#include <sstream>

#include "juree/util.h"
#include "pipeline_fixture.h"
#include "test_support.h"

namespace juree {
namespace {

const char* const kOutputs[] = {"dataset.jsonl", "candidates.jsonl", "roundtrip_report.jsonl",
                                "distance_report.jsonl", "triage_queue.jsonl"};

TEST(PipelineTest, TwoRunsAreByteIdentical) {
  testing::TempDir dir;
  const Dataset seeds = testing::SeparableDataset();
  testing::StubPipeline a, b;
  WritePipelineOutputs(a.Run(seeds), dir.path() / "a");
  WritePipelineOutputs(b.Run(seeds), dir.path() / "b");
  for (const char* name : kOutputs) {
    EXPECT_EQ(ReadFile(dir.path() / "a" / name), ReadFile(dir.path() / "b" / name)) << name;
  }
}

TEST(PipelineTest, RoundProducesEveryStateAndGrowsDataset) {
  const Dataset seeds = testing::SeparableDataset();
  testing::StubPipeline p;
  const PipelineOutput out = p.Run(seeds);
  EXPECT_GT(out.dataset.size(), seeds.size());
  EXPECT_FALSE(out.queue.empty());
  std::set<FilterState> states;
  std::set<Stage> stages;
  for (const Candidate& c : out.candidates) {
    states.insert(c.filter_state);
    stages.insert(c.stage);
  }
  EXPECT_TRUE(states.count(FilterState::kKept));
  EXPECT_TRUE(states.count(FilterState::kDropped));
  EXPECT_EQ(stages.size(), 3u);
  for (const TriageItem& item : out.queue) {
    EXPECT_EQ(item.status, TriageStatus::kLabeled);
    ASSERT_TRUE(item.resolution.has_value());
  }
}

TEST(PipelineTest, OutputIsClosedUnderTheLoop) {
  const Dataset seeds = testing::SeparableDataset();
  testing::StubPipeline p;
  const PipelineOutput out = p.Run(seeds);

  std::set<std::string> queued;
  for (const TriageItem& item : out.queue) queued.insert(item.candidate_id);
  std::set<std::string> dropped;
  for (const Candidate& c : out.candidates) {
    if (c.filter_state == FilterState::kDropped) dropped.insert(c.id());
  }
  for (const Example& e : out.dataset.examples()) {
    EXPECT_FALSE(dropped.count(e.id)) << e.id;
    EXPECT_EQ(e.id, ContentId(e.text, e.label, e.origin));
    if (e.origin == Origin::kSynthetic) {
      EXPECT_TRUE(e.lineage.has_value());
    }
    if (e.review) EXPECT_EQ(e.review->reviewer_id, "stub-reviewer");
  }
  // The output is a valid seed pool: a second round runs on it.
  std::istringstream in(ToJsonl(out.dataset));
  const Dataset reread = ReadJsonl(in);
  EXPECT_EQ(reread, out.dataset);
  testing::StubPipeline q;
  const PipelineOutput second = q.Run(reread);
  EXPECT_GE(second.dataset.size(), out.dataset.size());
}

TEST(PipelineTest, UnknownSeedIdIsRejected) {
  const Dataset seeds = testing::SeparableDataset();
  testing::StubPipeline p;
  PipelineConfig config = p.Config(seeds);
  config.counterfactuals.push_back({"0000000000000000", Label::kHarmful});
  auto scorer = testing::ReferenceScorer();
  testing::FoundryStubChat chat(scorer);
  HashingEmbedder emb;
  const auto syn = ThesaurusSynonyms::FromFile(testing::DataPath("thesaurus.json"));
  PipelineDeps deps{chat, [](const std::string&) { return Label::kHarmful; }, emb, *scorer,
                    Taxonomy::Default(), syn, nullptr};
  EXPECT_THROW(RunPipelineRound(config, seeds, deps), NotFound);
}

}  // namespace
}  // namespace juree
