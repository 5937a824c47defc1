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

#ifndef CARDGAUGE_HISTOGRAM_HPP
#define CARDGAUGE_HISTOGRAM_HPP

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace cardgauge {

using WordCount = std::pair<std::string, std::uint64_t>;

// Exact word -> count map. Entries always have positive counts and `total()`
// equals the sum of all counts.
class WordHistogram {
 public:
  WordHistogram() = default;
  explicit WordHistogram(std::string label) : label_(std::move(label)) {}

  // Adds `n` occurrences of `word`; n == 0 is a no-op.
  void add(std::string_view word, std::uint64_t n = 1);
  void add(std::string&& word, std::uint64_t n = 1);
  void add(const char* word, std::uint64_t n = 1) { add(std::string_view(word), n); }

  std::uint64_t count(std::string_view word) const;
  bool contains(std::string_view word) const { return count(word) != 0; }
  std::uint64_t total() const { return total_; }
  std::size_t size() const { return counts_.size(); }
  bool empty() const { return counts_.empty(); }

  const std::string& label() const { return label_; }
  void set_label(std::string label) { label_ = std::move(label); }

  const std::unordered_map<std::string, std::uint64_t>& counts() const { return counts_; }
  std::vector<std::string> vocabulary() const;

  // Entries ordered by count descending, then word ascending (byte order).
  std::vector<WordCount> sorted_entries() const;

  // Equality ignores the label.
  bool operator==(const WordHistogram& other) const { return total_ == other.total_ && counts_ == other.counts_; }

 private:
  std::unordered_map<std::string, std::uint64_t> counts_;
  std::uint64_t total_ = 0;
  std::string label_;
};

WordHistogram histogram_of(std::span<const std::string> tokens, std::string label = {});

// Counts are summed pointwise; labels of non-empty parts are joined with '+'.
WordHistogram merge(std::span<const WordHistogram> parts);

// TSV serialisation: `word<TAB>count` per line, LF terminated, in
// sorted_entries() order.
std::string to_tsv(const WordHistogram& h);

// Throws IoError naming the 1-based line for malformed lines, zero counts,
// empty words and duplicate words.
WordHistogram from_tsv(std::string_view tsv, std::string label = {});

void save(const WordHistogram& h, const std::string& path);
WordHistogram load(const std::string& path);

// First k entries in sorted_entries() order. Throws InvalidArgument for k == 0.
std::vector<WordCount> top_k(const WordHistogram& h, std::size_t k);

}  // namespace cardgauge

#endif  // CARDGAUGE_HISTOGRAM_HPP
