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

#ifndef CARDGAUGE_COHORT_HPP
#define CARDGAUGE_COHORT_HPP

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "cardgauge/histogram.hpp"
#include "cardgauge/ingest.hpp"

namespace cardgauge {

enum class CohortKind { uniform, top, cluster };
CohortKind parse_cohort_kind(std::string_view name);
std::string_view cohort_kind_name(CohortKind k);

// Only the fields of the selected kind are used.
struct CohortSpec {
  CohortKind kind = CohortKind::uniform;
  // uniform
  std::size_t step = 1;
  // top: records strictly above either threshold
  std::uint64_t download_threshold = 0;
  std::uint64_t likes_threshold = 0;
  // cluster: download range [lo, hi)
  std::uint64_t lo = 1;
  std::uint64_t hi = 100000;
  std::size_t samples_per_bin = 20;
  std::uint64_t seed = 0;

  void validate() const;
  bool operator==(const CohortSpec&) const = default;
};

struct Cohort {
  CohortSpec spec;
  // Manifest order: downloads descending, ties by model id.
  std::vector<ModelRecord> members;
  // Members whose card was fetched.
  std::vector<ModelRecord> documented_members;
};

struct DownloadBin {
  std::uint64_t lo = 0;
  // Exclusive upper bound; nullopt for the open last bin.
  std::optional<std::uint64_t> hi;
  std::size_t count = 0;

  std::string label() const;
};

// Bins {0}, [1,10), [10,100), ..., [10^7, inf).
inline constexpr std::size_t kDownloadBinCount = 9;
std::size_t download_bin_index(std::uint64_t downloads);
std::vector<DownloadBin> download_bins(std::span<const ModelRecord> records);

// Throws InvalidArgument for an empty manifest, an invalid spec or an empty
// result. A uniform step past the end yields the single top record.
Cohort build_cohort(const CorpusManifest& manifest, const CohortSpec& spec);

// Rank 1 is the largest value; ties share the mean of the positions they
// cover. Throws InvalidArgument for an empty input.
std::vector<double> rank_descending(std::span<const double> values);

// Pearson product-moment coefficient. nullopt when either series has zero
// variance. Throws InvalidArgument on length mismatch or n < 2.
std::optional<double> pearson(std::span<const double> x, std::span<const double> y);

enum class ReferenceKind { zd_common_words, hf_histogram };
ReferenceKind parse_reference_kind(std::string_view name);
std::string_view reference_kind_name(ReferenceKind k);

// zd_common_words: vocabulary(zd) intersected with vocabulary(hf).
// hf_histogram: vocabulary(hf).
std::unordered_set<std::string> reference_words(ReferenceKind kind, const WordHistogram& zd, const WordHistogram& hf);

struct CorrelationPoint {
  std::string model_id;
  std::uint64_t downloads = 0;
  std::uint64_t common_word_count = 0;
  std::uint64_t common_word_frequency = 0;
  double downloads_rank = 0.0;
  double common_count_rank = 0.0;
};

struct CorrelationResult {
  std::optional<double> rank_vs_rank;
  std::optional<double> freq_vs_freq;
  std::size_t n = 0;
  ReferenceKind reference = ReferenceKind::zd_common_words;
  // Set when a coefficient is undefined.
  std::string note;
  std::vector<CorrelationPoint> points;
};

// Correlates reuse with documentation overlap over the documented members.
// Throws InvalidArgument when a documented member has no histogram or fewer
// than two members are documented.
CorrelationResult correlate(const Cohort& cohort, const std::unordered_set<std::string>& reference_words,
                            const std::unordered_map<std::string, WordHistogram>& per_file_histograms,
                            ReferenceKind reference = ReferenceKind::zd_common_words);

std::string cohort_to_json(const Cohort& cohort);
Cohort cohort_from_json(std::string_view json);

}  // namespace cardgauge

#endif  // CARDGAUGE_COHORT_HPP
