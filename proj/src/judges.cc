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

#include "juree/judges.h"

#include <algorithm>
#include <future>
#include <map>

#include "json.hpp"
#include "juree/error.h"
#include "juree/util.h"

namespace juree {

namespace {

// Exemplar order in the few-shot template.
constexpr std::array<Label, kNumClasses> kFewShotOrder = {
    Label::kComplaint,    Label::kOffTopic, Label::kBankingRelated,
    Label::kSystemAttack, Label::kHarmful,  Label::kVulnerable};

std::optional<JudgeVerdict> TryParse(std::string_view text, std::string raw) {
  const auto doc = nlohmann::json::parse(text, nullptr, /*allow_exceptions=*/false);
  if (doc.is_discarded() || !doc.is_object() || doc.size() != 1 ||
      !doc.contains("label")) {
    return std::nullopt;
  }
  const auto& arr = doc["label"];
  if (!arr.is_array() || arr.size() != 1 || !arr[0].is_string()) {
    return std::nullopt;
  }
  const std::string value = arr[0].get<std::string>();
  JudgeVerdict v;
  v.raw = std::move(raw);
  if (value == "None") {
    v.none = true;
    v.parse_ok = true;
    return v;
  }
  const auto label = ParseLabel(value);
  if (!label) return std::nullopt;
  v.label = label;
  v.parse_ok = true;
  return v;
}

std::string_view StripFence(std::string_view s) {
  s = TrimAscii(s);
  if (s.size() >= 6 && s.substr(0, 3) == "```" && s.substr(s.size() - 3) == "```") {
    s = s.substr(3, s.size() - 6);
    // Drop an info string such as "json" on the opening fence line.
    const size_t nl = s.find('\n');
    if (nl != std::string_view::npos &&
        TrimAscii(s.substr(0, nl)).find_first_of("{[") == std::string_view::npos) {
      s = s.substr(nl + 1);
    }
    s = TrimAscii(s);
  }
  return s;
}

}  // namespace

std::string BuildClassProbePrompt(std::string_view user_text, Label class_label) {
  return RenderTemplate(kClassProbeTemplate,
                        {{"user_prompt", std::string(user_text)},
                         {"class_label", std::string(LabelName(class_label))}});
}

std::string BuildSingleJudgePrompt(std::string_view user_text) {
  return RenderTemplate(kSingleJudgeTemplate,
                        {{"user_prompt", std::string(user_text)}});
}

std::string BuildFewShotPrompt(std::string_view user_text,
                               std::span<const LabeledText> exemplars) {
  if (exemplars.size() != 2 * kNumClasses) {
    throw InvalidArgument("few-shot prompt needs 12 exemplars (2 per class), got " +
                          std::to_string(exemplars.size()));
  }
  std::array<std::vector<const LabeledText*>, kNumClasses> by_class;
  for (const LabeledText& e : exemplars) by_class[Index(e.label)].push_back(&e);
  std::map<std::string, std::string> values;
  for (Label label : kCanonicalOrder) {
    const auto& group = by_class[Index(label)];
    if (group.size() != 2) {
      throw InvalidArgument("few-shot prompt needs exactly 2 exemplars of '" +
                            std::string(LabelName(label)) + "', got " +
                            std::to_string(group.size()));
    }
    for (size_t k = 0; k < 2; ++k) {
      const std::string key = std::string(LabelName(label)) + std::to_string(k + 1);
      values[key + "[\"text\"]"] = group[k]->text;
      values[key + "[\"label\"]"] = std::string(LabelName(label));
    }
  }
  values["row"] = std::string(user_text);
  return RenderTemplate(kFewShotTemplate, values);
}

JudgeVerdict ParseJudgeOutput(std::string_view raw) {
  const std::string_view body = StripFence(raw);
  if (auto v = TryParse(body, std::string(raw))) return *v;
  std::string normalized(body);
  std::replace(normalized.begin(), normalized.end(), '\'', '"');
  if (auto v = TryParse(normalized, std::string(raw))) return *v;
  JudgeVerdict failed;
  failed.raw = std::string(raw);
  return failed;
}

JudgeOutcome SingleJudgeClassify(std::string_view text, ChatClient& chat,
                                 const JudgeOptions& options) {
  std::string prompt;
  if (options.mode == JudgeMode::kFewShot) {
    if (options.exemplars.empty()) {
      throw InvalidArgument("few-shot mode requires exemplars");
    }
    prompt = BuildFewShotPrompt(text, options.exemplars);
  } else {
    prompt = BuildSingleJudgePrompt(text);
  }
  const JudgeVerdict verdict =
      ParseJudgeOutput(chat.Complete(options.model_id, prompt, options.sampling));
  JudgeOutcome out;
  out.calls = 1;
  if (verdict.label) {
    out.label = *verdict.label;
  } else {
    out.label = options.fallback;
    out.unresolved = true;
  }
  return out;
}

JudgeOutcome MultiJudgeClassify(std::string_view text, ChatClient& chat,
                                const Taxonomy& taxonomy,
                                const JudgeOptions& options) {
  enum class ProbeResult { kClaim, kNoClaim, kFailed };
  std::array<ProbeResult, kNumClasses> results{};

  auto probe = [&](Label label) {
    try {
      const JudgeVerdict v = ParseJudgeOutput(chat.Complete(
          options.model_id, BuildClassProbePrompt(text, label), options.sampling));
      return v.label == label ? ProbeResult::kClaim : ProbeResult::kNoClaim;
    } catch (const TransportError&) {
      return ProbeResult::kFailed;
    }
  };

  if (options.parallel_probes && chat.concurrent_safe()) {
    std::array<std::future<ProbeResult>, kNumClasses> pending;
    for (Label label : kCanonicalOrder) {
      pending[Index(label)] = std::async(std::launch::async, probe, label);
    }
    for (Label label : kCanonicalOrder) results[Index(label)] = pending[Index(label)].get();
  } else {
    for (Label label : kCanonicalOrder) results[Index(label)] = probe(label);
  }

  JudgeOutcome out;
  out.calls = static_cast<int>(kNumClasses);
  for (Label label : kCanonicalOrder) {
    if (results[Index(label)] == ProbeResult::kClaim) out.claims.push_back(label);
    if (results[Index(label)] == ProbeResult::kFailed) out.undecided.push_back(label);
  }
  if (out.claims.empty()) {
    out.label = options.fallback;
    out.unresolved = true;
    return out;
  }
  out.label = *std::min_element(
      out.claims.begin(), out.claims.end(), [&](Label a, Label b) {
        return taxonomy.SeverityRank(a) < taxonomy.SeverityRank(b);
      });
  return out;
}

}  // namespace juree
