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

#ifndef CARDGAUGE_REPORT_HPP
#define CARDGAUGE_REPORT_HPP

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "cardgauge/cohort.hpp"
#include "cardgauge/histogram.hpp"
#include "cardgauge/mdparse.hpp"
#include "cardgauge/simmetrics.hpp"

namespace cardgauge {

struct CommonWord {
  std::string word;
  std::uint64_t f_left = 0;
  std::uint64_t f_right = 0;
  std::uint64_t product = 0;
  bool operator==(const CommonWord&) const = default;
};

// Vocabulary split of a reference (left) and a corpus (right) histogram.
struct WordGapReport {
  std::string left_label;
  std::string right_label;
  std::size_t top_k = 0;
  std::string generated_at;
  // Sorted by product descending, then word.
  std::vector<CommonWord> common;
  // Complete; count descending, then word.
  std::vector<WordCount> left_only;
  // First top_k right-only words; count descending, then word.
  std::vector<WordCount> right_only_top;
  std::size_t right_only_count = 0;
  // First top_k words of each full histogram.
  std::vector<WordCount> left_top;
  std::vector<WordCount> right_top;

  bool operator==(const WordGapReport&) const = default;
};

// Throws InvalidArgument when either histogram is empty or top_k == 0.
WordGapReport gap_report(const WordHistogram& left, const WordHistogram& right, std::size_t top_k,
                         std::string generated_at = {});

inline constexpr std::string_view kCompositeVersion = "composite-v1";

struct CardScore {
  std::string model_id;
  std::size_t nlss_matches = 0;
  std::size_t nld_matches = 0;
  std::uint64_t common_word_count = 0;
  std::uint64_t common_word_frequency = 0;
  std::size_t reference_vocabulary = 0;
  double composite = 0.0;
};

// 50 * min(1, nlss/5) + 25 * min(1, nld/2) + 25 * common/reference_vocabulary.
double composite_score(std::size_t nlss_matches, std::size_t nld_matches, std::uint64_t common_word_count,
                       std::size_t reference_vocabulary);

// Heading matches are counted per card heading. Common words are the card
// vocabulary intersected with the reference vocabulary; their frequency is
// the card's token count over that intersection.
CardScore score_card(std::string model_id, std::span<const HeadingPath> card_paths, const WordHistogram& card_hist,
                     std::span<const HeadingPath> reference_paths, const WordHistogram& reference_hist,
                     const MatchThresholds& th);

// Heading alignment of one card. Counts cover all pairs under both metrics;
// `pairs` holds the listed subset.
struct TocSimReport {
  MatchThresholds thresholds;
  std::size_t nlss_matches = 0;
  std::size_t nld_matches = 0;
  std::vector<HeadingMatch> pairs;
};

// Lists the pairs matched under `listed`, or only the strongest pair per card
// heading when `best_only` is set.
TocSimReport toc_sim_report(std::span<const HeadingPath> card, std::span<const HeadingPath> reference,
                            const MatchThresholds& th, Metric listed, bool best_only);

enum class OutputFormat { json, csv, markdown };
OutputFormat parse_output_format(std::string_view name);

// A cell is text, a count, a real number, or empty.
using Cell = std::variant<std::monostate, std::string, std::uint64_t, double>;

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
};

// JSON is an array of objects keyed by column; CSV follows RFC 4180 with a
// header line and CRLF-free LF endings; markdown is a pipe table.
std::string emit(const Table& table, OutputFormat format);
std::string emit(const WordGapReport& report, OutputFormat format);
std::string emit(const CardScore& score, OutputFormat format);
std::string emit(const HistogramComparison& cmp, OutputFormat format);
std::string emit(const CorrelationResult& result, OutputFormat format);
std::string emit(const TocSimReport& report, OutputFormat format);
std::string emit(std::span<const DownloadBin> bins, OutputFormat format);

// Inverse of emit(report, json).
WordGapReport gap_report_from_json(std::string_view json);

// RFC 4180 field quoting.
std::string csv_field(std::string_view s);

}  // namespace cardgauge

#endif  // CARDGAUGE_REPORT_HPP
