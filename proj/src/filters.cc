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

#include "juree/filters.h"

#include <cmath>
#include <ostream>
#include <sstream>

#include "json.hpp"
#include "juree/error.h"
#include "juree/util.h"

namespace juree {

namespace {

using ordered_json = nlohmann::ordered_json;

void Tally(FilterReport& report, const FilterRecord& record) {
  ++report.total[Index(record.label)];
  switch (record.decision) {
    case FilterState::kKept:
      ++report.kept[Index(record.label)];
      ++report.n_kept;
      break;
    case FilterState::kDropped:
      ++report.n_dropped;
      break;
    case FilterState::kFlagged:
      ++report.n_flagged;
      break;
    case FilterState::kPending:
      break;
  }
}

std::string Fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6f", v);
  return buf;
}

}  // namespace

std::vector<double> HashingEmbedder::Embed(std::string_view text) const {
  const auto tokens = SplitWhitespace(text);
  if (tokens.empty()) throw InvalidArgument("embed: text has no tokens");
  std::vector<double> v(kDimension, 0.0);
  for (const auto& tok : tokens) {
    v[Fnv1a64(ToLowerAscii(tok)) % kDimension] += 1.0;
  }
  double norm = 0.0;
  for (double x : v) norm += x * x;
  norm = std::sqrt(norm);
  for (double& x : v) x /= norm;
  return v;
}

std::vector<double> ReferenceEmbed(std::string_view text) {
  return HashingEmbedder().Embed(text);
}

double Dot(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw InvalidArgument("dot: dimension mismatch");
  double s = 0.0;
  for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double EuclideanDistance(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw InvalidArgument("euclidean: dimension mismatch");
  double s = 0.0;
  for (size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return std::sqrt(s);
}

double FilterReport::keep_rate() const {
  return records.empty() ? 0.0
                         : static_cast<double>(n_kept) /
                               static_cast<double>(records.size());
}

std::optional<double> FilterReport::class_keep_rate(Label label) const {
  if (total[Index(label)] == 0) return std::nullopt;
  return static_cast<double>(kept[Index(label)]) /
         static_cast<double>(total[Index(label)]);
}

std::string FilterReportToJsonl(const FilterReport& report) {
  std::string out;
  for (const FilterRecord& r : report.records) {
    ordered_json j;
    j["id"] = r.id;
    j["stage"] = r.stage;
    j["decision"] = FilterStateName(r.decision);
    ordered_json reasons = ordered_json::array();
    for (const auto& reason : r.reasons) {
      reasons.push_back({{"stage", reason.stage}, {"detail", reason.detail}});
    }
    j["reasons"] = std::move(reasons);
    out += j.dump();
    out += '\n';
  }
  return out;
}

std::string FilterSummaryJson(const FilterReport& report) {
  ordered_json j;
  j["candidates"] = report.records.size();
  j["kept"] = report.n_kept;
  j["dropped"] = report.n_dropped;
  j["flagged"] = report.n_flagged;
  j["keep_rate"] = report.keep_rate();
  ordered_json per = ordered_json::object();
  for (Label label : kCanonicalOrder) {
    const auto rate = report.class_keep_rate(label);
    per[std::string(LabelName(label))] = rate ? ordered_json(*rate) : ordered_json();
  }
  j["class_keep_rate"] = std::move(per);
  return j.dump(2) + "\n";
}

FilterReport RoundtripFilter(std::vector<Candidate>& candidates,
                             const LabelJudge& judge) {
  FilterReport report;
  report.records.reserve(candidates.size());
  for (Candidate& c : candidates) {
    FilterRecord rec;
    rec.id = c.id();
    rec.label = c.example.label;
    rec.stage = "roundtrip";
    try {
      const Label predicted = judge(c.example.text);
      if (predicted == c.example.label) {
        rec.decision = FilterState::kKept;
      } else {
        rec.decision = FilterState::kDropped;
        rec.reasons.push_back({"roundtrip", "judge predicted " +
                                                std::string(LabelName(predicted)) +
                                                ", expected " +
                                                std::string(LabelName(c.example.label))});
      }
    } catch (const std::exception& e) {
      rec.decision = FilterState::kFlagged;
      rec.reasons.push_back({"roundtrip", std::string("judge failure: ") + e.what()});
    }
    c.filter_state = rec.decision;
    c.filter_reasons.insert(c.filter_reasons.end(), rec.reasons.begin(),
                            rec.reasons.end());
    Tally(report, rec);
    report.records.push_back(std::move(rec));
  }
  return report;
}

FilterReport DistanceFilter(std::vector<Candidate>& candidates,
                            const Dataset& seeds, const Embedder& embedder,
                            const DistancePolicy& policy) {
  if (seeds.empty()) throw InvalidArgument("distance filter: empty seed set");
  if (!(policy.tau_keep >= 0.0 && policy.tau_keep <= 1.0) ||
      !(policy.tau_conflict >= 0.0 && policy.tau_conflict <= 1.0)) {
    throw InvalidArgument("distance filter: tau values must be in [0,1]");
  }
  std::vector<std::vector<double>> seed_vecs;
  seed_vecs.reserve(seeds.size());
  for (const Example& s : seeds.examples()) seed_vecs.push_back(embedder.Embed(s.text));

  FilterReport report;
  report.records.reserve(candidates.size());
  for (Candidate& c : candidates) {
    const std::vector<double> v = embedder.Embed(c.example.text);
    DistanceStats st;
    double best = -2.0;
    for (size_t i = 0; i < seed_vecs.size(); ++i) {
      const double cos = Dot(v, seed_vecs[i]);
      const Example& seed = seeds.examples()[i];
      // Ties keep the first seed in dataset order.
      if (cos > best) {
        best = cos;
        st.nearest_seed_id = seed.id;
        st.nearest_label = seed.label;
        st.nearest_cosine = cos;
        st.nearest_euclidean = EuclideanDistance(v, seed_vecs[i]);
      }
      if (seed.label == c.example.label && cos > st.max_same_label_cosine) {
        st.max_same_label_cosine = cos;
      }
    }

    FilterRecord rec;
    rec.id = c.id();
    rec.label = c.example.label;
    rec.stage = "distance";
    const std::string nearest =
        "nearest seed " + st.nearest_seed_id + " (" +
        std::string(LabelName(st.nearest_label)) + ") cosine=" +
        Fmt(st.nearest_cosine) + " euclidean=" + Fmt(st.nearest_euclidean);
    if (st.nearest_label != c.example.label &&
        st.nearest_cosine >= policy.tau_conflict) {
      rec.decision = FilterState::kFlagged;
      rec.reasons.push_back({"distance", "label conflict: " + nearest +
                                             " >= tau_conflict=" +
                                             Fmt(policy.tau_conflict)});
    } else if (st.max_same_label_cosine >= policy.tau_keep) {
      rec.decision = FilterState::kKept;
    } else {
      rec.decision = FilterState::kDropped;
      rec.reasons.push_back(
          {"distance", "outlier: max same-label cosine=" +
                           Fmt(st.max_same_label_cosine) + " < tau_keep=" +
                           Fmt(policy.tau_keep) + "; " + nearest});
    }
    rec.distance = st;
    c.filter_state = rec.decision;
    c.filter_reasons.insert(c.filter_reasons.end(), rec.reasons.begin(),
                            rec.reasons.end());
    Tally(report, rec);
    report.records.push_back(std::move(rec));
  }
  return report;
}

void ExportEmbeddings(const Dataset& dataset, const Embedder& embedder,
                      std::ostream& out) {
  out << "id,label";
  for (size_t d = 0; d < embedder.dimension(); ++d) out << ",v" << d;
  out << '\n';
  for (const Example& e : dataset.examples()) {
    out << e.id << ',' << LabelName(e.label);
    for (double x : embedder.Embed(e.text)) out << ',' << FormatDouble(x);
    out << '\n';
  }
  if (!out) throw Error("export embeddings: write failed");
}

std::string ExportEmbeddingsCsv(const Dataset& dataset, const Embedder& embedder) {
  std::ostringstream ss;
  ExportEmbeddings(dataset, embedder, ss);
  return ss.str();
}

}  // namespace juree
