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

#ifndef CARDGAUGE_SIMMETRICS_HPP
#define CARDGAUGE_SIMMETRICS_HPP

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "cardgauge/histogram.hpp"
#include "cardgauge/mdparse.hpp"

namespace cardgauge {

// Scores at or above a threshold count as a heading match.
struct MatchThresholds {
  double nlss_match = 25.0;
  double nld_match = 50.0;

  void validate() const;
};

enum class Metric { nlss, nld };
Metric parse_metric(std::string_view name);
std::string_view metric_name(Metric m);

struct NlssResult {
  double score = 0.0;
  // Words present in both paths, distinct, in HF order.
  std::vector<std::string> common_words;
};

// Common-word coverage of the HF heading path, in [0, 100]:
//   100 * len(join(common words)) / len(join(distinct HF words))
// Lengths are code-point counts of the single-space-joined word lists; words
// match by exact, case-sensitive equality. Throws InvalidArgument when the HF
// path has no words.
NlssResult nlss(std::span<const std::string> hf_words, std::span<const std::string> zd_words);
NlssResult nlss(const HeadingPath& hf, const HeadingPath& zd);

// Edit distance over code points with insertion 1, deletion 1, substitution 2.
std::size_t gld(std::string_view a, std::string_view b);

// 100 * (1 - gld(a, b) / (|a| + |b|)). Throws InvalidArgument when both are empty.
double nld_ratio(std::string_view a, std::string_view b);

// Token-sort normal form: ASCII characters other than letters, digits and '_'
// become spaces, ASCII letters are lowercased, then the white-space separated
// tokens are sorted and joined by single spaces.
std::string token_sort_key(std::string_view s);

// nld_ratio over token_sort_key of both inputs. Throws InvalidArgument when
// both raw inputs are empty; returns 0 when either key is empty.
double nld_sorted(std::string_view a, std::string_view b);

struct HeadingMatch {
  HeadingPath hf_path;
  HeadingPath zd_path;
  std::vector<std::string> common_words;
  double nlss = 0.0;
  double nld_ratio = 0.0;
  double nld_sorted = 0.0;
  bool by_nlss = false;
  bool by_nld = false;

  bool matched_by(Metric m) const { return m == Metric::nlss ? by_nlss : by_nld; }
};

// Every (hf, zd) pair where NLSS or NLD_sorted reaches its threshold, ordered
// by HF document order, then ZD document order.
std::vector<HeadingMatch> match_headings(std::span<const HeadingPath> hf, std::span<const HeadingPath> zd,
                                         const MatchThresholds& th);

// Number of distinct HF headings with at least one match under `m`.
std::size_t matched_heading_count(std::span<const HeadingMatch> matches, Metric m);

// Strongest pair per matched HF heading under `m`; ties go to the later ZD
// heading. Ordered by HF document order.
std::vector<HeadingMatch> best_matches(std::span<const HeadingMatch> matches, Metric m);

// Percentage of files with at least one heading match under `m`.
// Throws InvalidArgument when `files` is empty.
double subset_similarity(std::span<const std::vector<HeadingPath>> files, std::span<const HeadingPath> zd, Metric m,
                         const MatchThresholds& th);

enum class CosineSupport { full_vocabulary, common_words };
enum class IntersectionMode { min, left, right };
enum class KlNormalization { full_vocabulary, common_words };

struct HistogramComparisonConfig {
  CosineSupport cosine = CosineSupport::full_vocabulary;
  IntersectionMode intersection = IntersectionMode::min;
  KlNormalization kl_normalization = KlNormalization::full_vocabulary;
  // Add-one smoothing over the union vocabulary instead of common support.
  bool kl_add_one = false;
};

struct HistogramComparison {
  std::uint64_t count_common_words = 0;
  std::uint64_t count_left_only = 0;
  std::uint64_t count_right_only = 0;
  std::uint64_t histogram_intersection = 0;
  double cosine_similarity = 0.0;
  // KL(right || left): the left histogram is the reference distribution.
  std::optional<double> kl_left_ref;
  // KL(left || right).
  std::optional<double> kl_right_ref;
};

// Throws InvalidArgument when either histogram is empty. With no common words
// the cosine is 0 and both divergences are undefined (nullopt) unless add-one
// smoothing is enabled.
HistogramComparison compare_histograms(const WordHistogram& left, const WordHistogram& right,
                                       const HistogramComparisonConfig& cfg = {});

}  // namespace cardgauge

#endif  // CARDGAUGE_SIMMETRICS_HPP
