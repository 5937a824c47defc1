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

#ifndef CARDGAUGE_TEXTPREP_HPP
#define CARDGAUGE_TEXTPREP_HPP

#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

namespace cardgauge {

using StopWords = std::unordered_set<std::string>;

struct FilterConfig {
  StopWords stop_words;
  // Tokens with more than this many 'x'/'X' characters are dropped.
  int max_x_occurrences = 2;
  bool lowercase = true;
  bool strip_markdown = true;

  // Throws InvalidArgument when max_x_occurrences < 0.
  void validate() const;
};

// Marker accepted by load_stop_words in place of a path.
inline constexpr std::string_view kBuiltinStopWords = "builtin";

// The shipped English stop list (198 entries).
const StopWords& builtin_stop_words();

// One word per line, UTF-8. Entries are lowercased and deduplicated. Throws
// IoError when the file is unreadable or contains no words.
StopWords load_stop_words(const std::string& path_or_builtin);

// Turns raw card text into the filtered word stream used for histograms.
// Stages run in a fixed order: front matter and fence lines removed, Markdown
// symbols replaced by spaces, whitespace split, edge punctuation trimmed,
// lowercased, stop words dropped, x-rule applied, empties dropped.
std::vector<std::string> tokenize(std::string_view text, const FilterConfig& cfg);

// Streaming form of tokenize for corpus-scale callers; invokes `sink` once per
// surviving token without materialising the token list.
template <typename Sink>
void for_each_token(std::string_view text, const FilterConfig& cfg, Sink&& sink);

namespace textprep_detail {
// Steps (1)-(2): returns text whose remaining characters are word material
// and white space.
std::string strip_markdown(std::string_view text);
// Applies strip_markdown when enabled; otherwise only repairs invalid UTF-8.
std::string prepare(std::string_view text, const FilterConfig& cfg);
// Steps (4)-(7) on a single raw token; returns false when the token is dropped.
bool filter_token(std::string& token, const FilterConfig& cfg);
std::vector<std::string> split_tokens(std::string_view text);
}  // namespace textprep_detail

template <typename Sink>
void for_each_token(std::string_view text, const FilterConfig& cfg, Sink&& sink) {
  const std::string cleaned = textprep_detail::prepare(text, cfg);
  for (std::string& tok : textprep_detail::split_tokens(cleaned)) {
    if (textprep_detail::filter_token(tok, cfg)) sink(std::move(tok));
  }
}

}  // namespace cardgauge

#endif  // CARDGAUGE_TEXTPREP_HPP
