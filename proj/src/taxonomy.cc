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

#include "juree/taxonomy.h"

#include <cmath>

#include "json.hpp"
#include "juree/error.h"
#include "juree/util.h"

namespace juree {

namespace {

using ordered_json = nlohmann::ordered_json;

constexpr std::array<std::string_view, kNumClasses> kNames = {
    "banking_related", "harmful",    "off_topic",
    "system_attack",   "vulnerable", "complaint"};

constexpr std::array<Label, kNumClasses - 1> kDefaultSeverity = {
    Label::kHarmful, Label::kSystemAttack, Label::kVulnerable,
    Label::kComplaint, Label::kOffTopic};

Scope ExpectedScope(Label label) {
  return label == Label::kBankingRelated ? Scope::kInScope : Scope::kOutOfScope;
}

Scope ParseScope(const std::string& s) {
  if (s == "in-scope") return Scope::kInScope;
  if (s == "out-of-scope") return Scope::kOutOfScope;
  throw InvalidArgument("unknown scope '" + s + "'");
}

}  // namespace

std::string_view LabelName(Label label) { return kNames[Index(label)]; }

std::optional<Label> ParseLabel(std::string_view name) {
  for (size_t i = 0; i < kNumClasses; ++i) {
    if (kNames[i] == name) return static_cast<Label>(i);
  }
  return std::nullopt;
}

Label LabelFromName(std::string_view name) {
  if (auto label = ParseLabel(name)) return *label;
  throw InvalidArgument("unknown label '" + std::string(name) + "'");
}

std::string_view ScopeName(Scope scope) {
  return scope == Scope::kInScope ? "in-scope" : "out-of-scope";
}

Taxonomy Taxonomy::Default() {
  Taxonomy t;
  t.classes_ = {{
      {Label::kBankingRelated, Scope::kInScope,
       "Genuine, harmless banking queries about accounts, payments, products "
       "and services.",
       {"Account balances", "Upcoming payments", "Policy questions",
        "Product Information"}},
      {Label::kHarmful, Scope::kOutOfScope,
       "Content that is violent, hateful, profane, sexual or that plans or "
       "encourages crime.",
       {"Crimes", "Threats", "Weapons", "Drugs", "Violence", "Graphic",
        "Profanity", "Hate"}},
      {Label::kOffTopic, Scope::kOutOfScope,
       "Queries outside a banking context, including requests for specialised "
       "advice.",
       {"Political content", "Privacy", "Specialised advice",
        "Intellectual property"}},
      {Label::kSystemAttack, Scope::kOutOfScope,
       "Attempts to override or misuse the assistant or exploit the bank's "
       "systems.",
       {"Jailbreaking", "Prompt injection", "Model misuse", "Policy evasion"}},
      {Label::kVulnerable, Scope::kOutOfScope,
       "Messages indicating a customer at risk who needs careful handling.",
       {"Self-harm", "Suicide", "Financial abuse", "Domestic violence"}},
      {Label::kComplaint, Scope::kOutOfScope,
       "Complaints about the bank's products, services or conduct.",
       {"Account issues", "Service Issues", "Transaction disputes",
        "Product issues"}},
  }};
  t.thresholds_.fill(kDefaultThreshold);
  t.severity_order_ = kDefaultSeverity;
  t.IndexSeverity();
  return t;
}

Taxonomy Taxonomy::Load(std::string_view document) {
  ordered_json doc;
  try {
    doc = ordered_json::parse(document);
  } catch (const nlohmann::json::parse_error& e) {
    throw InvalidArgument(std::string("taxonomy config is not valid JSON: ") +
                          e.what());
  }
  if (!doc.is_object() || !doc.contains("classes") ||
      !doc["classes"].is_array()) {
    throw InvalidArgument("taxonomy config requires a 'classes' array");
  }

  Taxonomy t;
  std::array<bool, kNumClasses> seen{};
  try {
    for (const auto& entry : doc["classes"]) {
      const std::string name = entry.at("name").get<std::string>();
      const auto label = ParseLabel(name);
      if (!label) throw InvalidArgument("unknown class '" + name + "'");
      if (seen[Index(*label)]) {
        throw InvalidArgument("duplicate class '" + name + "'");
      }
      seen[Index(*label)] = true;
      RiskClass rc{*label, ParseScope(entry.at("scope").get<std::string>()),
                   entry.value("description", std::string()),
                   entry.value("subtypes", std::vector<std::string>())};
      t.classes_[Index(*label)] = std::move(rc);
    }
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument(std::string("malformed class entry: ") + e.what());
  }
  if (!seen[Index(Label::kBankingRelated)]) {
    throw InvalidArgument("missing class 'banking_related' (the in-scope class)");
  }
  for (size_t i = 0; i < kNumClasses; ++i) {
    if (!seen[i]) {
      throw InvalidArgument("missing class '" + std::string(kNames[i]) + "'");
    }
  }

  t.thresholds_.fill(kDefaultThreshold);
  if (doc.contains("thresholds")) {
    const auto& th = doc["thresholds"];
    if (!th.is_object()) throw InvalidArgument("'thresholds' must be an object");
    for (const auto& [name, value] : th.items()) {
      const auto label = ParseLabel(name);
      if (!label) throw InvalidArgument("threshold for unknown class '" + name + "'");
      if (!value.is_number()) {
        throw InvalidArgument("threshold for '" + name + "' is not a number");
      }
      const double v = value.get<double>();
      if (!(v >= 0.0 && v <= 1.0)) {
        throw InvalidArgument("threshold for '" + name + "' outside [0,1]");
      }
      t.thresholds_[Index(*label)] = v;
    }
  }

  t.severity_order_ = kDefaultSeverity;
  if (doc.contains("severity_order")) {
    const auto& so = doc["severity_order"];
    if (!so.is_array() || so.size() != kNumClasses - 1) {
      throw InvalidArgument(
          "'severity_order' must list the five out-of-scope classes");
    }
    for (size_t i = 0; i < so.size(); ++i) {
      if (!so[i].is_string()) {
        throw InvalidArgument("'severity_order' entries must be strings");
      }
      const auto label = ParseLabel(so[i].get<std::string>());
      if (!label) {
        throw InvalidArgument("unknown class in severity_order '" +
                              so[i].get<std::string>() + "'");
      }
      t.severity_order_[i] = *label;
    }
  }

  t.Validate();
  t.IndexSeverity();
  return t;
}

Taxonomy Taxonomy::LoadFile(const std::string& path) {
  return Load(ReadFile(path));
}

void Taxonomy::Validate() const {
  for (const auto& rc : classes_) {
    if (rc.scope != ExpectedScope(rc.label)) {
      throw InvalidArgument(
          "class '" + std::string(rc.name()) + "' must be " +
          std::string(ScopeName(ExpectedScope(rc.label))) +
          "; banking_related is the only in-scope class");
    }
  }
  std::array<bool, kNumClasses> seen{};
  for (Label label : severity_order_) {
    if (label == Label::kBankingRelated) {
      throw InvalidArgument("severity_order must not contain banking_related");
    }
    if (seen[Index(label)]) {
      throw InvalidArgument("severity_order repeats '" +
                            std::string(LabelName(label)) + "'");
    }
    seen[Index(label)] = true;
  }
}

void Taxonomy::IndexSeverity() {
  severity_rank_[Index(Label::kBankingRelated)] = kNumClasses - 1;
  for (size_t i = 0; i < severity_order_.size(); ++i) {
    severity_rank_[Index(severity_order_[i])] = i;
  }
}

std::string Taxonomy::Serialize() const {
  ordered_json doc;
  doc["classes"] = ordered_json::array();
  for (const auto& rc : classes_) {
    ordered_json c;
    c["name"] = rc.name();
    c["scope"] = ScopeName(rc.scope);
    c["description"] = rc.description;
    c["subtypes"] = rc.subtypes;
    doc["classes"].push_back(std::move(c));
  }
  ordered_json th = ordered_json::object();
  for (Label label : kCanonicalOrder) {
    th[std::string(LabelName(label))] = thresholds_[Index(label)];
  }
  doc["thresholds"] = std::move(th);
  ordered_json so = ordered_json::array();
  for (Label label : severity_order_) so.push_back(LabelName(label));
  doc["severity_order"] = std::move(so);
  return doc.dump(2) + "\n";
}

const RiskClass& ValidateLabel(std::string_view name, const Taxonomy& taxonomy) {
  return taxonomy.risk_class(LabelFromName(name));
}

}  // namespace juree
