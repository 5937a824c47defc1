// Copyright 2026 The cardgauge Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "cardgauge/cohort.hpp"

#include <algorithm>
#include <cmath>
#include <nlohmann/json.hpp>
#include <numeric>
#include <random>

namespace cardgauge {
namespace {

using nlohmann::json;
using nlohmann::ordered_json;

bool manifest_order(const ModelRecord& a, const ModelRecord& b) {
  return a.downloads != b.downloads ? a.downloads > b.downloads : a.model_id < b.model_id;
}

// Unbiased draw from [0, n) that does not depend on the standard library's
// distribution implementations.
std::uint64_t uniform_index(std::mt19937_64& gen, std::uint64_t n) {
  const std::uint64_t threshold = (0 - n) % n;
  for (;;) {
    const std::uint64_t r = gen();
    if (r >= threshold) return r % n;
  }
}

std::uint64_t pow10(std::size_t e) {
  std::uint64_t v = 1;
  for (std::size_t i = 0; i < e; ++i) v *= 10;
  return v;
}

std::pair<std::uint64_t, std::optional<std::uint64_t>> bin_bounds(std::size_t i) {
  if (i == 0) return {0, 1};
  if (i + 1 == kDownloadBinCount) return {pow10(i - 1), std::nullopt};
  return {pow10(i - 1), pow10(i)};
}

double mean(std::span<const double> v) { return std::accumulate(v.begin(), v.end(), 0.0) / v.size(); }

}  // namespace

CohortKind parse_cohort_kind(std::string_view name) {
  if (name == "uniform") return CohortKind::uniform;
  if (name == "top") return CohortKind::top;
  if (name == "cluster") return CohortKind::cluster;
  throw InvalidArgument("unknown cohort kind: " + std::string(name));
}

std::string_view cohort_kind_name(CohortKind k) {
  switch (k) {
    case CohortKind::uniform: return "uniform";
    case CohortKind::top: return "top";
    case CohortKind::cluster: return "cluster";
  }
  return "uniform";
}

void CohortSpec::validate() const {
  switch (kind) {
    case CohortKind::uniform:
      if (step < 1) throw InvalidArgument("step must be >= 1");
      break;
    case CohortKind::top:
      break;
    case CohortKind::cluster:
      if (lo >= hi) throw InvalidArgument("cluster range requires lo < hi");
      if (samples_per_bin < 1) throw InvalidArgument("samples_per_bin must be >= 1");
      break;
  }
}

std::string DownloadBin::label() const {
  if (lo == 0) return "0";
  if (!hi) return "[" + std::to_string(lo) + ",inf)";
  return "[" + std::to_string(lo) + "," + std::to_string(*hi) + ")";
}

std::size_t download_bin_index(std::uint64_t downloads) {
  if (downloads == 0) return 0;
  std::size_t i = 1;
  std::uint64_t upper = 10;
  while (i + 1 < kDownloadBinCount && downloads >= upper) {
    ++i;
    upper *= 10;
  }
  return i;
}

std::vector<DownloadBin> download_bins(std::span<const ModelRecord> records) {
  std::vector<DownloadBin> bins(kDownloadBinCount);
  for (std::size_t i = 0; i < kDownloadBinCount; ++i) {
    const auto [lo, hi] = bin_bounds(i);
    bins[i].lo = lo;
    bins[i].hi = hi;
  }
  for (const auto& r : records) ++bins[download_bin_index(r.downloads)].count;
  return bins;
}

Cohort build_cohort(const CorpusManifest& manifest, const CohortSpec& spec) {
  if (manifest.records.empty()) throw InvalidArgument("cannot build a cohort from an empty manifest");
  spec.validate();
  std::vector<ModelRecord> sorted = manifest.records;
  std::sort(sorted.begin(), sorted.end(), manifest_order);

  Cohort c;
  c.spec = spec;
  switch (spec.kind) {
    case CohortKind::uniform:
      for (std::size_t i = 0; i < sorted.size(); i += spec.step) c.members.push_back(sorted[i]);
      break;
    case CohortKind::top:
      for (const auto& r : sorted) {
        if (r.downloads > spec.download_threshold || r.likes > spec.likes_threshold) c.members.push_back(r);
      }
      break;
    case CohortKind::cluster: {
      std::vector<std::vector<const ModelRecord*>> by_bin(kDownloadBinCount);
      for (const auto& r : sorted) {
        if (r.downloads >= spec.lo && r.downloads < spec.hi) by_bin[download_bin_index(r.downloads)].push_back(&r);
      }
      std::mt19937_64 gen(spec.seed);
      std::vector<const ModelRecord*> picked;
      for (auto& bin : by_bin) {
        const std::size_t take = std::min(bin.size(), spec.samples_per_bin);
        for (std::size_t i = 0; i < take; ++i) {
          const std::size_t j = i + uniform_index(gen, bin.size() - i);
          std::swap(bin[i], bin[j]);
          picked.push_back(bin[i]);
        }
      }
      std::sort(picked.begin(), picked.end(), [](const auto* a, const auto* b) { return manifest_order(*a, *b); });
      for (const auto* r : picked) c.members.push_back(*r);
      break;
    }
  }
  if (c.members.empty()) throw InvalidArgument("cohort is empty");
  for (const auto& r : c.members) {
    if (r.status == FetchStatus::fetched) c.documented_members.push_back(r);
  }
  return c;
}

std::vector<double> rank_descending(std::span<const double> values) {
  if (values.empty()) throw InvalidArgument("rank of an empty series");
  std::vector<std::size_t> order(values.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return values[a] > values[b]; });
  std::vector<double> ranks(values.size());
  std::size_t i = 0;
  while (i < order.size()) {
    std::size_t j = i + 1;
    while (j < order.size() && values[order[j]] == values[order[i]]) ++j;
    // Positions i+1 .. j share their mean.
    const double avg = (static_cast<double>(i + 1) + static_cast<double>(j)) / 2.0;
    for (std::size_t k = i; k < j; ++k) ranks[order[k]] = avg;
    i = j;
  }
  return ranks;
}

std::optional<double> pearson(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw InvalidArgument("pearson: series lengths differ");
  if (x.size() < 2) throw InvalidArgument("pearson: need at least two samples");
  const double mx = mean(x);
  const double my = mean(y);
  double sxy = 0.0;
  double sxx = 0.0;
  double syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = x[i] - mx;
    const double dy = y[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0.0 || syy == 0.0) return std::nullopt;
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

ReferenceKind parse_reference_kind(std::string_view name) {
  if (name == "zd-common" || name == "zd_common_words") return ReferenceKind::zd_common_words;
  if (name == "hf-all" || name == "hf_histogram") return ReferenceKind::hf_histogram;
  throw InvalidArgument("unknown reference: " + std::string(name));
}

std::string_view reference_kind_name(ReferenceKind k) {
  return k == ReferenceKind::zd_common_words ? "zd_common_words" : "hf_histogram";
}

std::unordered_set<std::string> reference_words(ReferenceKind kind, const WordHistogram& zd, const WordHistogram& hf) {
  std::unordered_set<std::string> out;
  if (kind == ReferenceKind::hf_histogram) {
    for (const auto& [w, n] : hf.counts()) out.insert(w);
  } else {
    for (const auto& [w, n] : zd.counts()) {
      if (hf.contains(w)) out.insert(w);
    }
  }
  return out;
}

CorrelationResult correlate(const Cohort& cohort, const std::unordered_set<std::string>& reference_words,
                            const std::unordered_map<std::string, WordHistogram>& per_file_histograms,
                            ReferenceKind reference) {
  CorrelationResult res;
  res.reference = reference;
  res.n = cohort.documented_members.size();
  if (res.n < 2) throw InvalidArgument("correlate needs at least two documented members");

  std::vector<double> downloads;
  std::vector<double> counts;
  std::vector<double> freqs;
  for (const auto& m : cohort.documented_members) {
    const auto it = per_file_histograms.find(m.model_id);
    if (it == per_file_histograms.end()) throw InvalidArgument("no histogram for documented member " + m.model_id);
    CorrelationPoint p;
    p.model_id = m.model_id;
    p.downloads = m.downloads;
    for (const auto& [w, n] : it->second.counts()) {
      if (reference_words.count(w)) {
        ++p.common_word_count;
        p.common_word_frequency += n;
      }
    }
    downloads.push_back(static_cast<double>(p.downloads));
    counts.push_back(static_cast<double>(p.common_word_count));
    freqs.push_back(static_cast<double>(p.common_word_frequency));
    res.points.push_back(std::move(p));
  }
  const auto rd = rank_descending(downloads);
  const auto rc = rank_descending(counts);
  for (std::size_t i = 0; i < res.points.size(); ++i) {
    res.points[i].downloads_rank = rd[i];
    res.points[i].common_count_rank = rc[i];
  }
  res.rank_vs_rank = pearson(rd, rc);
  res.freq_vs_freq = pearson(downloads, freqs);
  std::vector<std::string> notes;
  if (!res.rank_vs_rank) notes.push_back("rank_vs_rank undefined: a ranked series has zero variance");
  if (!res.freq_vs_freq) notes.push_back("freq_vs_freq undefined: a raw series has zero variance");
  for (std::size_t i = 0; i < notes.size(); ++i) res.note += (i ? "; " : "") + notes[i];
  return res;
}

std::string cohort_to_json(const Cohort& cohort) {
  const CohortSpec& s = cohort.spec;
  ordered_json spec;
  spec["kind"] = std::string(cohort_kind_name(s.kind));
  switch (s.kind) {
    case CohortKind::uniform:
      spec["step"] = s.step;
      break;
    case CohortKind::top:
      spec["download_threshold"] = s.download_threshold;
      spec["likes_threshold"] = s.likes_threshold;
      break;
    case CohortKind::cluster:
      spec["lo"] = s.lo;
      spec["hi"] = s.hi;
      spec["samples_per_bin"] = s.samples_per_bin;
      spec["seed"] = s.seed;
      break;
  }
  ordered_json j;
  j["spec"] = spec;
  j["member_count"] = cohort.members.size();
  j["documented_count"] = cohort.documented_members.size();
  j["members"] = ordered_json::array();
  for (const auto& r : cohort.members) j["members"].push_back(ordered_json::parse(record_to_json(r)));
  return j.dump(2) + "\n";
}

Cohort cohort_from_json(std::string_view text) {
  Cohort c;
  try {
    const json j = json::parse(text);
    const json& spec = j.at("spec");
    CohortSpec& s = c.spec;
    s.kind = parse_cohort_kind(spec.at("kind").get<std::string>());
    s.step = spec.value("step", s.step);
    s.download_threshold = spec.value("download_threshold", s.download_threshold);
    s.likes_threshold = spec.value("likes_threshold", s.likes_threshold);
    s.lo = spec.value("lo", s.lo);
    s.hi = spec.value("hi", s.hi);
    s.samples_per_bin = spec.value("samples_per_bin", s.samples_per_bin);
    s.seed = spec.value("seed", s.seed);
    s.validate();
    std::unordered_set<std::string> ids;
    for (const auto& m : j.at("members")) {
      ModelRecord r = record_from_json(m.dump());
      if (!ids.insert(r.model_id).second) throw InvalidArgument("duplicate cohort member " + r.model_id);
      if (r.status == FetchStatus::fetched) c.documented_members.push_back(r);
      c.members.push_back(std::move(r));
    }
  } catch (const json::exception& e) {
    throw InvalidArgument(std::string("cohort json: ") + e.what());
  }
  return c;
}

}  // namespace cardgauge
