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

#include "cardgauge/textprep.hpp"

#include <algorithm>
#include <array>

#include "cardgauge/error.hpp"
#include "cardgauge/text.hpp"

namespace cardgauge {
namespace {

// NLTK English list: the historical 179 entries plus the 19 contractions that
// were added upstream later.
constexpr std::array<std::string_view, 198> kEnglishStopWords = {
    "i", "me", "my", "myself", "we", "our", "ours", "ourselves", "you", "you're",
    "you've", "you'll", "you'd", "your", "yours", "yourself", "yourselves", "he", "him", "his",
    "himself", "she", "she's", "her", "hers", "herself", "it", "it's", "its", "itself",
    "they", "them", "their", "theirs", "themselves", "what", "which", "who", "whom", "this",
    "that", "that'll", "these", "those", "am", "is", "are", "was", "were", "be",
    "been", "being", "have", "has", "had", "having", "do", "does", "did", "doing",
    "a", "an", "the", "and", "but", "if", "or", "because", "as", "until",
    "while", "of", "at", "by", "for", "with", "about", "against", "between", "into",
    "through", "during", "before", "after", "above", "below", "to", "from", "up", "down",
    "in", "out", "on", "off", "over", "under", "again", "further", "then", "once",
    "here", "there", "when", "where", "why", "how", "all", "any", "both", "each",
    "few", "more", "most", "other", "some", "such", "no", "nor", "not", "only",
    "own", "same", "so", "than", "too", "very", "s", "t", "can", "will",
    "just", "don", "don't", "should", "should've", "now", "d", "ll", "m", "o",
    "re", "ve", "y", "ain", "aren", "aren't", "couldn", "couldn't", "didn", "didn't",
    "doesn", "doesn't", "hadn", "hadn't", "hasn", "hasn't", "haven", "haven't", "isn", "isn't",
    "ma", "mightn", "mightn't", "mustn", "mustn't", "needn", "needn't", "shan", "shan't", "shouldn",
    "shouldn't", "wasn", "wasn't", "weren", "weren't", "won", "won't", "wouldn", "wouldn't",
    "he'd", "he'll", "he's", "i'd", "i'll", "i'm", "i've", "it'd", "it'll", "she'd",
    "she'll", "they'd", "they'll", "they're", "they've", "we'd", "we'll", "we're", "we've",
};

bool is_fence_line(std::string_view line) {
  std::size_t i = 0;
  while (i < line.size() && i < 3 && line[i] == ' ') ++i;
  if (i >= line.size()) return false;
  const char c = line[i];
  if (c != '`' && c != '~') return false;
  std::size_t run = 0;
  while (i + run < line.size() && line[i + run] == c) ++run;
  return run >= 3;
}

bool is_front_matter_fence(std::string_view line) {
  while (!line.empty() && (line.back() == ' ' || line.back() == '\t')) line.remove_suffix(1);
  return line == "---";
}

bool is_front_matter_close(std::string_view line) {
  while (!line.empty() && (line.back() == ' ' || line.back() == '\t')) line.remove_suffix(1);
  return line == "---" || line == "...";
}

bool is_markdown_symbol(char c) {
  switch (c) {
    case '#': case '*': case '_': case '`': case '>': case '|': case '[': case ']':
      return true;
    default:
      return false;
  }
}

void strip_line(std::string_view line, std::string& out) {
  const std::size_t base = out.size();
  out.append(line);
  std::string_view view(out.data() + base, line.size());
  auto* s = out.data() + base;
  const std::size_t n = view.size();
  for (std::size_t i = 0; i < n; ++i) {
    if (s[i] == ']' && i + 1 < n && s[i + 1] == '(') {
      const auto close = view.find(')', i + 2);
      if (close != std::string_view::npos) {
        s[i + 1] = ' ';
        s[close] = ' ';
      }
    }
  }
  std::size_t i = 0;
  while (i < n) {
    if (s[i] == '-') {
      std::size_t run = 0;
      while (i + run < n && s[i + run] == '-') ++run;
      if (run >= 3) std::fill(s + i, s + i + run, ' ');
      i += run;
      continue;
    }
    if (is_markdown_symbol(s[i])) s[i] = ' ';
    ++i;
  }
}

bool is_unicode_punct(char32_t c) {
  if (c < 0x80) return (c >= 0x21 && c <= 0x2F) || (c >= 0x3A && c <= 0x40) || (c >= 0x5B && c <= 0x60) ||
                       (c >= 0x7B && c <= 0x7E);
  switch (c) {
    case 0xA1: case 0xAB: case 0xB7: case 0xBB: case 0xBF:
    case 0x2013: case 0x2014: case 0x2022: case 0x2026: case 0xFFFD:
      return true;
    default:
      return c >= 0x2018 && c <= 0x201F;
  }
}

void trim_punctuation(std::string& token) {
  const bool ascii = std::all_of(token.begin(), token.end(), [](char c) { return static_cast<unsigned char>(c) < 0x80; });
  if (ascii) {
    std::size_t b = 0;
    std::size_t e = token.size();
    while (b < e && is_unicode_punct(static_cast<unsigned char>(token[b]))) ++b;
    while (e > b && is_unicode_punct(static_cast<unsigned char>(token[e - 1]))) --e;
    if (b != 0 || e != token.size()) token = token.substr(b, e - b);
    return;
  }
  std::u32string cps = text::decode_utf8(token);
  std::size_t b = 0;
  std::size_t e = cps.size();
  while (b < e && is_unicode_punct(cps[b])) ++b;
  while (e > b && is_unicode_punct(cps[e - 1])) --e;
  token = text::encode_utf8(std::u32string_view(cps).substr(b, e - b));
}

}  // namespace

void FilterConfig::validate() const {
  if (max_x_occurrences < 0) throw InvalidArgument("max_x_occurrences must be >= 0");
}

const StopWords& builtin_stop_words() {
  static const StopWords words = [] {
    StopWords w;
    for (std::string_view s : kEnglishStopWords) w.emplace(s);
    return w;
  }();
  return words;
}

StopWords load_stop_words(const std::string& path_or_builtin) {
  if (path_or_builtin == kBuiltinStopWords) return builtin_stop_words();
  const std::string raw = text::normalize_newlines(text::sanitize_utf8(text::read_file(path_or_builtin)));
  StopWords words;
  for (std::string_view line : text::split_lines(raw)) {
    const auto w = text::trim(line);
    if (!w.empty()) words.insert(text::ascii_lower(w));
  }
  if (words.empty()) throw IoError("stop-word file has no entries: " + path_or_builtin);
  return words;
}

namespace textprep_detail {

std::string strip_markdown(std::string_view raw) {
  const std::string normalized = text::normalize_newlines(text::sanitize_utf8(raw));
  const auto lines = text::split_lines(normalized);
  std::size_t first = 0;
  if (!lines.empty() && is_front_matter_fence(lines[0])) {
    for (std::size_t k = 1; k < lines.size(); ++k) {
      if (is_front_matter_close(lines[k])) {
        first = k + 1;
        break;
      }
    }
  }
  std::string out;
  out.reserve(normalized.size());
  for (std::size_t k = first; k < lines.size(); ++k) {
    if (is_fence_line(lines[k])) continue;
    strip_line(lines[k], out);
    out.push_back('\n');
  }
  return out;
}

std::string prepare(std::string_view text, const FilterConfig& cfg) {
  return cfg.strip_markdown ? strip_markdown(text) : text::sanitize_utf8(text);
}

std::vector<std::string> split_tokens(std::string_view text) { return text::split_whitespace(text); }

bool filter_token(std::string& token, const FilterConfig& cfg) {
  trim_punctuation(token);
  if (token.empty()) return false;
  std::string lower = text::ascii_lower(token);
  if (cfg.lowercase) token = lower;
  if (cfg.stop_words.count(lower)) return false;
  const auto xs = std::count_if(lower.begin(), lower.end(), [](char c) { return c == 'x'; });
  return xs <= cfg.max_x_occurrences;
}

}  // namespace textprep_detail

std::vector<std::string> tokenize(std::string_view text, const FilterConfig& cfg) {
  std::vector<std::string> out;
  for_each_token(text, cfg, [&](std::string&& t) { out.push_back(std::move(t)); });
  return out;
}

}  // namespace cardgauge
