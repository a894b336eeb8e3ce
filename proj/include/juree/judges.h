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

// LLM-as-judge baselines: prompt builders, output parsing and the single- and
// multi-judge classifiers.
//
// Three prompts are provided:
//  * class probe: asks whether the input belongs to one named class; the
//    answer is {'label': ['<class>']} or {'label': ['None']};
//  * single judge: the same class descriptions, answered with exactly one of
//    the six labels in one call;
//  * few-shot: two labelled exemplars per class, then the input.

#ifndef JUREE_JUDGES_H_
#define JUREE_JUDGES_H_

#include <array>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "juree/chat.h"
#include "juree/taxonomy.h"

namespace juree {

extern const char kClassProbeTemplate[];
extern const char kSingleJudgeTemplate[];
extern const char kFewShotTemplate[];

std::string BuildClassProbePrompt(std::string_view user_text, Label class_label);
std::string BuildSingleJudgePrompt(std::string_view user_text);

struct LabeledText {
  std::string text;
  Label label;
};

// Requires exactly two exemplars of each class (twelve in total); throws
// InvalidArgument otherwise. Within a class, exemplars keep their input order.
std::string BuildFewShotPrompt(std::string_view user_text,
                               std::span<const LabeledText> exemplars);

struct JudgeVerdict {
  std::optional<Label> label;  // absent for "None" and parse failures
  bool none = false;           // the judge answered ['None']
  bool parse_ok = false;
  std::string raw;
};

// Accepts {"label": [X]} with X a canonical class name or "None". Single
// quotes are normalized to double quotes and a surrounding ``` fence is
// ignored. Never throws; anything else yields parse_ok = false.
JudgeVerdict ParseJudgeOutput(std::string_view raw);

enum class JudgeMode { kZeroShot, kFewShot };

struct JudgeOptions {
  std::string model_id = "gpt-3.5-turbo";
  Sampling sampling;
  Label fallback = Label::kOffTopic;
  JudgeMode mode = JudgeMode::kZeroShot;
  std::vector<LabeledText> exemplars;  // few-shot mode only
  bool parallel_probes = false;        // multi-judge, honoured when the
                                       // client is concurrent_safe()
};

struct JudgeOutcome {
  Label label = Label::kOffTopic;
  // True when the fallback label was used because no usable answer came back.
  bool unresolved = false;
  // Multi-judge only: classes whose probe claimed the input, in canonical
  // order, and classes whose probe failed in transport.
  std::vector<Label> claims;
  std::vector<Label> undecided;
  int calls = 0;
};

// One chat call. Throws InvalidArgument in few-shot mode without valid
// exemplars; transport failures propagate as TransportError.
JudgeOutcome SingleJudgeClassify(std::string_view text, ChatClient& chat,
                                 const JudgeOptions& options);

// Six class-probe calls. Several claims resolve by severity order with
// banking_related last; no claim falls back to options.fallback. A probe
// whose call fails is recorded as undecided rather than aborting the rest.
JudgeOutcome MultiJudgeClassify(std::string_view text, ChatClient& chat,
                                const Taxonomy& taxonomy,
                                const JudgeOptions& options);

}  // namespace juree

#endif  // JUREE_JUDGES_H_
