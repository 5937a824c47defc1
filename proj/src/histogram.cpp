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

#include "cardgauge/histogram.hpp"

#include <algorithm>
#include <charconv>

#include "cardgauge/error.hpp"
#include "cardgauge/text.hpp"

namespace cardgauge {

void WordHistogram::add(std::string_view word, std::uint64_t n) {
  if (n == 0) return;
  auto it = counts_.find(std::string(word));
  if (it == counts_.end()) {
    counts_.emplace(std::string(word), n);
  } else {
    it->second += n;
  }
  total_ += n;
}

void WordHistogram::add(std::string&& word, std::uint64_t n) {
  if (n == 0) return;
  counts_[std::move(word)] += n;
  total_ += n;
}

std::uint64_t WordHistogram::count(std::string_view word) const {
  const auto it = counts_.find(std::string(word));
  return it == counts_.end() ? 0 : it->second;
}

std::vector<std::string> WordHistogram::vocabulary() const {
  std::vector<std::string> words;
  words.reserve(counts_.size());
  for (const auto& [w, n] : counts_) words.push_back(w);
  std::sort(words.begin(), words.end());
  return words;
}

std::vector<WordCount> WordHistogram::sorted_entries() const {
  std::vector<WordCount> entries(counts_.begin(), counts_.end());
  std::sort(entries.begin(), entries.end(), [](const WordCount& a, const WordCount& b) {
    return a.second != b.second ? a.second > b.second : a.first < b.first;
  });
  return entries;
}

WordHistogram histogram_of(std::span<const std::string> tokens, std::string label) {
  WordHistogram h(std::move(label));
  for (const auto& t : tokens) h.add(t);
  return h;
}

WordHistogram merge(std::span<const WordHistogram> parts) {
  WordHistogram out;
  std::string label;
  for (const auto& part : parts) {
    for (const auto& [w, n] : part.counts()) out.add(w, n);
    if (!part.empty() && !part.label().empty()) {
      if (!label.empty()) label += '+';
      label += part.label();
    }
  }
  out.set_label(std::move(label));
  return out;
}

std::string to_tsv(const WordHistogram& h) {
  std::string out;
  for (const auto& [w, n] : h.sorted_entries()) {
    out += w;
    out += '\t';
    out += std::to_string(n);
    out += '\n';
  }
  return out;
}

WordHistogram from_tsv(std::string_view tsv, std::string label) {
  WordHistogram h(std::move(label));
  std::size_t line_no = 0;
  for (std::string_view line : text::split_lines(tsv)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) continue;
    const auto where = [&] { return "histogram line " + std::to_string(line_no) + ": "; };
    const auto tab = line.rfind('\t');
    if (tab == std::string_view::npos) throw IoError(where() + "expected word<TAB>count");
    const auto word = line.substr(0, tab);
    const auto num = line.substr(tab + 1);
    if (word.empty()) throw IoError(where() + "empty word");
    std::uint64_t n = 0;
    const auto [ptr, ec] = std::from_chars(num.data(), num.data() + num.size(), n);
    if (ec != std::errc() || ptr != num.data() + num.size() || num.empty()) {
      throw IoError(where() + "count is not a non-negative integer");
    }
    if (n == 0) throw IoError(where() + "zero count");
    if (h.contains(word)) throw IoError(where() + "duplicate word '" + std::string(word) + "'");
    h.add(word, n);
  }
  return h;
}

void save(const WordHistogram& h, const std::string& path) { text::write_file_atomic(path, to_tsv(h)); }

WordHistogram load(const std::string& path) { return from_tsv(text::read_file(path), path); }

std::vector<WordCount> top_k(const WordHistogram& h, std::size_t k) {
  if (k == 0) throw InvalidArgument("top_k requires k >= 1");
  std::vector<WordCount> entries(std::min(k, h.size()));
  std::partial_sort_copy(h.counts().begin(), h.counts().end(), entries.begin(), entries.end(),
                         [](const auto& a, const auto& b) {
                           return a.second != b.second ? a.second > b.second : a.first < b.first;
                         });
  return entries;
}

}  // namespace cardgauge
