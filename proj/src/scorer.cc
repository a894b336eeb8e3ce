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

#include "juree/scorer.h"

#include <cmath>
#include <cstdlib>

#include "httplib.h"
#include "json.hpp"
#include "juree/error.h"
#include "juree/util.h"

#ifndef JUREE_DEFAULT_DATA_DIR
#define JUREE_DEFAULT_DATA_DIR "data"
#endif

namespace juree {

ScoreVector::ScoreVector(const std::array<double, kNumClasses>& probs)
    : probs_(probs) {
  for (size_t i = 0; i < kNumClasses; ++i) {
    if (!(probs_[i] >= 0.0 && probs_[i] <= 1.0)) {
      throw InvalidArgument("probability for '" +
                            std::string(LabelName(kCanonicalOrder[i])) +
                            "' outside [0,1]");
    }
  }
}

std::string_view DecisionName(Decision decision) {
  return decision == Decision::kUnsafe ? "unsafe" : "safe";
}

BinaryVerdict BinaryDecision(const ScoreVector& scores,
                             const Taxonomy& taxonomy) {
  BinaryVerdict v;
  v.in_scope_prob = scores[Label::kBankingRelated];
  // Walking most-severe first with a strict comparison keeps the most severe
  // class among equal maxima.
  bool first = true;
  for (Label label : taxonomy.severity_order()) {
    if (first || scores[label] > v.out_scope_prob) {
      v.out_scope_prob = scores[label];
      v.trigger_class = label;
      first = false;
    }
  }
  v.decision = v.out_scope_prob >= taxonomy.threshold(v.trigger_class)
                   ? Decision::kUnsafe
                   : Decision::kSafe;
  return v;
}

MulticlassVerdict MulticlassDecision(const ScoreVector& scores,
                                     const Taxonomy& taxonomy) {
  // Tie priority: banking_related, then out-of-scope by severity.
  std::array<Label, kNumClasses> priority;
  priority[0] = Label::kBankingRelated;
  std::copy(taxonomy.severity_order().begin(), taxonomy.severity_order().end(),
            priority.begin() + 1);

  Label best = priority[0];
  double top1 = scores[best];
  for (size_t i = 1; i < kNumClasses; ++i) {
    if (scores[priority[i]] > top1) {
      top1 = scores[priority[i]];
      best = priority[i];
    }
  }
  double top2 = 0.0;
  bool have_second = false;
  for (Label label : kCanonicalOrder) {
    if (label == best) continue;
    if (!have_second || scores[label] > top2) {
      top2 = scores[label];
      have_second = true;
    }
  }
  return {best, top1 - top2};
}

std::vector<std::string> LexiconTokens(std::string_view text) {
  std::vector<std::string> tokens;
  std::string cur;
  for (char c : text) {
    const bool word = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
                      (c >= '0' && c <= '9') || c == '\'';
    if (word) {
      cur.push_back(c >= 'A' && c <= 'Z' ? static_cast<char>(c - 'A' + 'a') : c);
    } else if (!cur.empty()) {
      tokens.push_back(std::move(cur));
      cur.clear();
    }
  }
  if (!cur.empty()) tokens.push_back(std::move(cur));
  return tokens;
}

ReferenceLexiconScorer::ReferenceLexiconScorer(
    std::array<std::vector<std::string>, kNumClasses> lexicon)
    : lexicon_(std::move(lexicon)) {
  for (Label label : kCanonicalOrder) {
    for (const std::string& entry : lexicon_[Index(label)]) {
      const auto toks = LexiconTokens(entry);
      if (toks.size() != 1 || toks[0] != entry) {
        throw InvalidArgument("lexicon entry '" + entry +
                              "' must be a single lowercase token");
      }
      auto& classes = token_classes_[entry];
      if (std::find(classes.begin(), classes.end(), label) == classes.end()) {
        classes.push_back(label);
      }
    }
  }
}

std::unique_ptr<ReferenceLexiconScorer> ReferenceLexiconScorer::FromJson(
    std::string_view json) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(json);
  } catch (const nlohmann::json::parse_error& e) {
    throw InvalidArgument(std::string("lexicon is not valid JSON: ") + e.what());
  }
  std::array<std::vector<std::string>, kNumClasses> lexicon;
  for (Label label : kCanonicalOrder) {
    const std::string name(LabelName(label));
    if (!doc.contains(name) || !doc[name].is_array()) {
      throw InvalidArgument("lexicon missing class '" + name + "'");
    }
    lexicon[Index(label)] = doc[name].get<std::vector<std::string>>();
  }
  return std::make_unique<ReferenceLexiconScorer>(std::move(lexicon));
}

std::unique_ptr<ReferenceLexiconScorer> ReferenceLexiconScorer::FromFile(
    const std::string& path) {
  return FromJson(ReadFile(path));
}

std::array<int, kNumClasses> ReferenceLexiconScorer::Hits(
    std::string_view text) const {
  std::array<int, kNumClasses> hits{};
  for (const std::string& tok : LexiconTokens(text)) {
    auto it = token_classes_.find(tok);
    if (it == token_classes_.end()) continue;
    for (Label label : it->second) ++hits[Index(label)];
  }
  return hits;
}

ScoreVector ReferenceLexiconScorer::ScoreOne(std::string_view text) const {
  const auto hits = Hits(text);
  std::array<double, kNumClasses> probs;
  for (size_t i = 0; i < kNumClasses; ++i) {
    const double h = hits[i];
    probs[i] = h / (h + 1.0);
  }
  return ScoreVector(probs);
}

std::vector<ScoreVector> ReferenceLexiconScorer::Score(
    std::span<const std::string> texts) {
  std::vector<ScoreVector> out;
  out.reserve(texts.size());
  for (const std::string& t : texts) out.push_back(ScoreOne(t));
  return out;
}

RemoteBackend::RemoteBackend(RemoteBackendOptions options)
    : options_(std::move(options)) {
  if (options_.base_url.empty()) {
    throw InvalidArgument("remote backend requires a base url");
  }
}

namespace {

httplib::Client MakeClient(const RemoteBackendOptions& options) {
  httplib::Client client(options.base_url);
  const auto secs = static_cast<time_t>(options.timeout_seconds);
  const auto usecs = static_cast<time_t>(
      (options.timeout_seconds - static_cast<double>(secs)) * 1e6);
  client.set_connection_timeout(secs, usecs);
  client.set_read_timeout(secs, usecs);
  client.set_write_timeout(secs, usecs);
  return client;
}

}  // namespace

std::vector<ScoreVector> DecodeScoreResponse(std::string_view body,
                                             size_t expected_rows) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(body);
  } catch (const nlohmann::json::parse_error& e) {
    throw BackendError(std::string("score response is not JSON: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("order") || !doc.contains("scores") ||
      !doc["order"].is_array() || !doc["scores"].is_array()) {
    throw BackendError("score response must contain 'order' and 'scores'");
  }
  const auto& order = doc["order"];
  if (order.size() != kNumClasses) {
    throw BackendError("score response 'order' must list six classes");
  }
  std::array<size_t, kNumClasses> column_of{};
  std::array<bool, kNumClasses> seen{};
  for (size_t col = 0; col < kNumClasses; ++col) {
    const auto label =
        order[col].is_string() ? ParseLabel(order[col].get<std::string>())
                               : std::nullopt;
    if (!label || seen[Index(*label)]) {
      throw BackendError("score response 'order' is not a permutation of the "
                         "six classes");
    }
    seen[Index(*label)] = true;
    column_of[Index(*label)] = col;
  }
  const auto& rows = doc["scores"];
  if (rows.size() != expected_rows) {
    throw BackendError("score response has " + std::to_string(rows.size()) +
                       " rows, expected " + std::to_string(expected_rows));
  }
  std::vector<ScoreVector> out;
  out.reserve(rows.size());
  for (const auto& row : rows) {
    if (!row.is_array() || row.size() != kNumClasses) {
      throw BackendError("score row must hold six numbers");
    }
    std::array<double, kNumClasses> probs;
    for (size_t i = 0; i < kNumClasses; ++i) {
      const auto& cell = row[column_of[i]];
      if (!cell.is_number()) throw BackendError("score row must hold six numbers");
      probs[i] = cell.get<double>();
    }
    try {
      out.emplace_back(probs);
    } catch (const InvalidArgument& e) {
      throw BackendError(e.what());
    }
  }
  return out;
}

std::vector<ScoreVector> RemoteBackend::Score(std::span<const std::string> texts) {
  nlohmann::json req;
  req["texts"] = std::vector<std::string>(texts.begin(), texts.end());
  const std::string body = req.dump();
  std::string last_error;
  for (int attempt = 0; attempt <= options_.max_retries; ++attempt) {
    auto client = MakeClient(options_);
    auto res = client.Post("/score", body, "application/json");
    if (!res) {
      last_error = "transport: " + httplib::to_string(res.error());
      continue;
    }
    if (res->status >= 500) {
      last_error = "HTTP " + std::to_string(res->status);
      continue;
    }
    if (res->status != 200) {
      throw BackendError("remote scorer returned HTTP " +
                         std::to_string(res->status) + ": " + res->body);
    }
    return DecodeScoreResponse(res->body, texts.size());
  }
  throw BackendError("remote scorer " + options_.base_url + " failed after " +
                     std::to_string(options_.max_retries + 1) +
                     " attempts: " + last_error);
}

HealthStatus RemoteBackend::Health() {
  auto client = MakeClient(options_);
  auto res = client.Post("/score", R"({"texts":[]})", "application/json");
  if (!res) {
    return {false, "remote scorer unreachable: " + httplib::to_string(res.error())};
  }
  if (res->status != 200) {
    return {false, "remote scorer returned HTTP " + std::to_string(res->status)};
  }
  return {};
}

std::vector<ScoreVector> BatchScore(InferenceBackend& backend,
                                    std::span<const std::string> texts,
                                    size_t max_batch) {
  if (max_batch == 0) throw InvalidArgument("max_batch must be >= 1");
  std::vector<ScoreVector> out;
  out.reserve(texts.size());
  for (size_t begin = 0; begin < texts.size(); begin += max_batch) {
    const size_t end = std::min(texts.size(), begin + max_batch);
    const std::string range =
        "[" + std::to_string(begin) + ", " + std::to_string(end) + ")";
    std::vector<ScoreVector> chunk;
    try {
      chunk = backend.Score(texts.subspan(begin, end - begin));
    } catch (const std::exception& e) {
      throw BackendError("backend " + backend.Name() + " failed on items " +
                         range + ": " + e.what());
    }
    if (chunk.size() != end - begin) {
      throw BackendError("backend " + backend.Name() + " returned " +
                         std::to_string(chunk.size()) + " vectors for items " +
                         range);
    }
    out.insert(out.end(), chunk.begin(), chunk.end());
  }
  return out;
}

std::string DataDir() {
  if (const char* env = std::getenv("JUREE_DATA_DIR"); env && *env) return env;
  return JUREE_DEFAULT_DATA_DIR;
}

std::shared_ptr<InferenceBackend> MakeBackend(const std::string& spec) {
  std::shared_ptr<InferenceBackend> backend;
  if (spec == "reference") {
    backend = ReferenceLexiconScorer::FromFile(DataDir() + "/lexicon.json");
  } else if (spec.rfind("reference:", 0) == 0) {
    backend = ReferenceLexiconScorer::FromFile(spec.substr(10));
  } else if (spec.rfind("remote:", 0) == 0) {
    backend = std::make_shared<RemoteBackend>(
        RemoteBackendOptions{.base_url = spec.substr(7)});
  } else {
    throw InvalidArgument("unknown backend spec '" + spec + "'");
  }
  if (backend->concurrency() == ConcurrencyMode::kSerialized) {
    backend = std::make_shared<SerializedBackend>(std::move(backend));
  }
  return backend;
}

}  // namespace juree
