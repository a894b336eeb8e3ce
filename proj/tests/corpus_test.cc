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

#include <gtest/gtest.h>

#include <cmath>
#include <regex>
#include <set>
#include <sstream>

#include "juree/error.h"
#include "juree/util.h"
#include "test_support.h"

namespace juree {
namespace {

// Builds n distinct examples per class.
Dataset Balanced(size_t per_class, const std::string& tag = "") {
  std::vector<Example> out;
  for (Label l : kCanonicalOrder) {
    for (size_t i = 0; i < per_class; ++i) {
      out.push_back(MakeExample(std::string(LabelName(l)) + " item " + std::to_string(i) + tag,
                                l, Origin::kInternal));
    }
  }
  return Dataset(std::move(out));
}

std::set<std::string> Ids(const Dataset& d) {
  std::set<std::string> ids;
  for (const auto& e : d.examples()) ids.insert(e.id);
  return ids;
}

TEST(ContentIdTest, SixteenHexOfSha256OverFields) {
  const std::string id = ContentId("hello", Label::kHarmful, Origin::kExternal);
  EXPECT_TRUE(std::regex_match(id, std::regex("[0-9a-f]{16}")));
  EXPECT_EQ(id, Sha256Hex("5:hello7:harmful8:external").substr(0, 16));
  // Each field participates.
  EXPECT_NE(id, ContentId("hello", Label::kComplaint, Origin::kExternal));
  EXPECT_NE(id, ContentId("hello", Label::kHarmful, Origin::kInternal));
  EXPECT_NE(id, ContentId("hello ", Label::kHarmful, Origin::kExternal));
}

TEST(ExampleTest, LineageRules) {
  EXPECT_THROW(MakeExample("x", Label::kHarmful, Origin::kSynthetic), InvalidArgument);
  Lineage lin;
  lin.stage = "generated";
  EXPECT_THROW(MakeExample("x", Label::kHarmful, Origin::kInternal, lin), InvalidArgument);
  EXPECT_NO_THROW(MakeExample("x", Label::kHarmful, Origin::kSynthetic, lin));
  EXPECT_THROW(MakeExample("", Label::kHarmful, Origin::kInternal), InvalidArgument);
}

TEST(DatasetTest, RejectsDuplicateAndForgedIds) {
  const Example e = MakeExample("a", Label::kHarmful, Origin::kInternal);
  EXPECT_THROW(Dataset({e, e}), InvalidArgument);
  Example forged = e;
  forged.text = "b";
  EXPECT_THROW(Dataset({forged}), InvalidArgument);
}

TEST(IngestTest, IdenticalRowsCollapse) {
  const std::vector<IngestRecord> rows = {{"same text", "harmful", Origin::kInternal},
                                          {"same text", "harmful", Origin::kInternal}};
  const Dataset d = Ingest(rows, Taxonomy::Default());
  EXPECT_EQ(d.size(), 1u);
  EXPECT_EQ(d.count(Label::kHarmful), 1u);
}

TEST(IngestTest, OneRowPerClass) {
  std::vector<IngestRecord> rows;
  for (Label l : kCanonicalOrder) rows.push_back({"text for " + std::string(LabelName(l)),
                                                  std::string(LabelName(l))});
  const Dataset d = Ingest(rows, Taxonomy::Default());
  for (Label l : kCanonicalOrder) EXPECT_EQ(d.count(l), 1u);
}

TEST(IngestTest, UnmappedLabelRejected) {
  const std::vector<IngestRecord> rows = {{"some text", "toxicity"}};
  EXPECT_THROW(Ingest(rows, Taxonomy::Default()), InvalidArgument);
  const std::vector<IngestRecord> empty = {{"", "harmful"}};
  EXPECT_THROW(Ingest(empty, Taxonomy::Default()), InvalidArgument);
}

TEST(IngestTest, SameTextDifferentOriginsAreDistinct) {
  const std::vector<IngestRecord> rows = {{"t", "harmful", Origin::kInternal},
                                          {"t", "harmful", Origin::kExternal}};
  EXPECT_EQ(Ingest(rows, Taxonomy::Default()).size(), 2u);
}

TEST(SplitTest, ExactDivisibility) {
  const Dataset d = Balanced(100);
  for (uint64_t seed : {0ull, 1ull, 99ull}) {
    const SplitResult s = StratifiedSplit(d, 0.2, seed);
    for (Label l : kCanonicalOrder) {
      EXPECT_EQ(s.test.count(l), 20u);
      EXPECT_EQ(s.train.count(l), 80u);
    }
  }
}

TEST(SplitTest, IsPartitionWithSplitFields) {
  const Dataset d = Balanced(37);
  const SplitResult s = StratifiedSplit(d, 0.3, 5);
  std::set<std::string> train = Ids(s.train);
  std::set<std::string> test = Ids(s.test);
  for (const auto& id : test) EXPECT_FALSE(train.count(id));
  std::set<std::string> all = train;
  all.insert(test.begin(), test.end());
  EXPECT_EQ(all, Ids(d));
  for (const auto& e : s.train.examples()) EXPECT_EQ(e.split, Split::kTrain);
  for (const auto& e : s.test.examples()) EXPECT_EQ(e.split, Split::kTest);
}

TEST(SplitTest, DeterministicAndSeedSensitive) {
  const Dataset d = Balanced(50);
  EXPECT_EQ(ToJsonl(StratifiedSplit(d, 0.25, 7).test), ToJsonl(StratifiedSplit(d, 0.25, 7).test));
  EXPECT_NE(Ids(StratifiedSplit(d, 0.25, 7).test), Ids(StratifiedSplit(d, 0.25, 8).test));
}

TEST(SplitTest, IndependentOfInputOrder) {
  const Dataset d = Balanced(30);
  std::vector<Example> rev(d.examples().rbegin(), d.examples().rend());
  EXPECT_EQ(Ids(StratifiedSplit(d, 0.2, 3).test), Ids(StratifiedSplit(Dataset(rev), 0.2, 3).test));
}

TEST(SplitTest, WithinOneExampleOfTarget) {
  for (size_t n : {2u, 3u, 7u, 10u, 33u, 101u, 13251u}) {
    for (double f : {0.01, 0.0493, 0.2, 0.5, 0.77, 0.99}) {
      const double alloc = static_cast<double>(TestAllocation(n, f));
      EXPECT_LE(std::abs(alloc - f * n), 1.0) << n << " " << f;
      EXPECT_GE(alloc, 1.0);
      EXPECT_LE(alloc, n - 1.0);
    }
  }
}

TEST(SplitTest, Table3OffTopicAllocation) {
  // Independent oracle: the integer k minimizing |k - f n|.
  const size_t n = 13251;
  const double f = 0.0493;
  size_t best = 0;
  for (size_t k = 0; k <= n; ++k) {
    if (std::abs(k - f * n) < std::abs(best - f * n)) best = k;
  }
  EXPECT_EQ(best, 653u);
  const size_t got = TestAllocation(n, f);
  EXPECT_LE(got > 653 ? got - 653 : 653 - got, 1u);
}

TEST(SplitTest, PreconditionErrors) {
  std::vector<Example> one_each;
  for (Label l : kCanonicalOrder) one_each.push_back(MakeExample("x", l, Origin::kInternal));
  EXPECT_THROW(StratifiedSplit(Dataset(one_each), 0.2, 1), InvalidArgument);
  EXPECT_THROW(StratifiedSplit(Balanced(5), 0.0, 1), InvalidArgument);
  EXPECT_THROW(StratifiedSplit(Balanced(5), 1.0, 1), InvalidArgument);
}

TEST(SplitTest, ProportionGapOnLargeBalancedCorpus) {
  const Dataset d = Balanced(1000);
  const SplitResult s = StratifiedSplit(d, 0.1, 11);
  for (Label l : kCanonicalOrder) {
    const double tr = 100.0 * s.train.count(l) / s.train.size();
    const double te = 100.0 * s.test.count(l) / s.test.size();
    EXPECT_LE(std::abs(tr - te), 1.5);
  }
}

TEST(MergeTest, IdentityAndIdempotence) {
  const Dataset d = Balanced(3);
  EXPECT_EQ(Merge(d, Dataset()), d);
  EXPECT_EQ(Merge(Dataset(), d), d);
  EXPECT_EQ(Merge(d, d), d);
}

TEST(MergeTest, ReviewedCopyWins) {
  Example plain = MakeExample("t", Label::kComplaint, Origin::kInternal);
  Example reviewed = plain;
  reviewed.review = Review{"r1", "2026-01-01T00:00:00Z", std::nullopt};
  const Dataset a({plain});
  const Dataset b({reviewed});
  EXPECT_EQ(Merge(a, b).examples().front().review, reviewed.review);
  EXPECT_EQ(Merge(b, a).examples().front().review, reviewed.review);
  // Both reviewed: a wins.
  Example other = plain;
  other.review = Review{"r2", "2026-01-02T00:00:00Z", std::nullopt};
  EXPECT_EQ(Merge(Dataset({other}), b).examples().front().review->reviewer_id, "r2");
}

TEST(MergeTest, OrderIsAThenNewFromB) {
  const Dataset a = Balanced(2, "a");
  const Dataset b = Balanced(2, "b");
  const Dataset m = Merge(a, b);
  ASSERT_EQ(m.size(), 24u);
  for (size_t i = 0; i < 12; ++i) EXPECT_EQ(m.examples()[i], a.examples()[i]);
}

TEST(JsonlTest, GoldenFixtureRoundTripsByteForByte) {
  const std::string path = testing::DataPath("fixtures/golden12.jsonl");
  const std::string text = ReadFile(path);
  const Dataset d = LoadDataset(path);
  EXPECT_EQ(d.size(), 12u);
  EXPECT_EQ(ToJsonl(d), text);
  const Example& last = d.examples().back();
  ASSERT_TRUE(last.lineage.has_value());
  EXPECT_EQ(last.lineage->parent_id, d.examples().front().id);
  ASSERT_TRUE(last.review.has_value());
  EXPECT_EQ(last.review->prior_label, Label::kBankingRelated);
  EXPECT_EQ(last.split, Split::kTrain);
}

TEST(JsonlTest, SaveLoadRoundTrip) {
  testing::TempDir dir;
  const Dataset d = StratifiedSplit(Balanced(4), 0.5, 1).train;
  SaveDataset(d, dir.file("d.jsonl"));
  EXPECT_EQ(LoadDataset(dir.file("d.jsonl")), d);
}

TEST(JsonlTest, MalformedLinesRejected) {
  std::istringstream bad_json("{not json}\n");
  EXPECT_THROW(ReadJsonl(bad_json), InvalidArgument);
  std::istringstream bad_id(R"({"id":"0000000000000000","text":"x","label":"harmful","origin":"internal"})");
  EXPECT_THROW(ReadJsonl(bad_id), InvalidArgument);
  std::istringstream bad_label(R"({"id":"0000000000000000","text":"x","label":"Harmful","origin":"internal"})");
  EXPECT_THROW(ReadJsonl(bad_label), InvalidArgument);
}

TEST(JsonlTest, AbsentOptionalsOmitted) {
  const Example e = MakeExample("plain", Label::kOffTopic, Origin::kInternal);
  const std::string line = ExampleToJsonLine(e);
  EXPECT_EQ(line.find("lineage"), std::string::npos);
  EXPECT_EQ(line.find("split"), std::string::npos);
  EXPECT_EQ(line.find("review"), std::string::npos);
  EXPECT_EQ(ExampleFromJson(line), e);
}

}  // namespace
}  // namespace juree
