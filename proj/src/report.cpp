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

#include "cardgauge/report.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <nlohmann/json.hpp>
#include <unordered_set>

#include "cardgauge/error.hpp"
#include "cardgauge/text.hpp"

namespace cardgauge {
namespace {

using nlohmann::json;
using nlohmann::ordered_json;

bool count_order(const WordCount& a, const WordCount& b) {
  return a.second != b.second ? a.second > b.second : a.first < b.first;
}

std::string shortest(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string fixed2(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string cell_text(const Cell& c, bool human) {
  return std::visit(
      [&](const auto& v) -> std::string {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, std::monostate>) {
          return "";
        } else if constexpr (std::is_same_v<T, std::string>) {
          return v;
        } else if constexpr (std::is_same_v<T, std::uint64_t>) {
          return std::to_string(v);
        } else {
          return human ? fixed2(v) : shortest(v);
        }
      },
      c);
}

ordered_json cell_json(const Cell& c) {
  return std::visit(
      [](const auto& v) -> ordered_json {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, std::monostate>) {
          return nullptr;
        } else {
          return v;
        }
      },
      c);
}

std::string markdown_cell(std::string s) {
  std::string out;
  for (char ch : s) {
    if (ch == '|') out += "\\|";
    else if (ch == '\n' || ch == '\r') out += ' ';
    else out += ch;
  }
  return out;
}

Cell opt_cell(const std::optional<double>& v) { return v ? Cell(*v) : Cell(); }

ordered_json opt_json(const std::optional<double>& v) { return v ? ordered_json(*v) : ordered_json(nullptr); }

ordered_json counts_json(const std::vector<WordCount>& v) {
  ordered_json arr = ordered_json::array();
  for (const auto& [w, n] : v) arr.push_back({{"word", w}, {"frequency", n}});
  return arr;
}

std::vector<WordCount> counts_from(const json& arr) {
  std::vector<WordCount> out;
  for (const auto& e : arr) out.emplace_back(e.at("word").get<std::string>(), e.at("frequency").get<std::uint64_t>());
  return out;
}

Table field_table(std::vector<std::pair<std::string, Cell>> fields) {
  Table t;
  t.columns = {"field", "value"};
  for (auto& [k, v] : fields) t.rows.push_back({Cell(k), std::move(v)});
  return t;
}

std::string dump(const ordered_json& j) { return j.dump(2) + "\n"; }

std::string join_words(const std::vector<std::string>& words) { return text::join(words, " "); }

}  // namespace

WordGapReport gap_report(const WordHistogram& left, const WordHistogram& right, std::size_t top_k,
                         std::string generated_at) {
  if (left.empty() || right.empty()) throw InvalidArgument("gap_report: histograms must be non-empty");
  if (top_k == 0) throw InvalidArgument("gap_report: top_k must be positive");
  WordGapReport r;
  r.left_label = left.label();
  r.right_label = right.label();
  r.top_k = top_k;
  r.generated_at = std::move(generated_at);
  for (const auto& [w, n] : left.counts()) {
    const std::uint64_t m = right.count(w);
    if (m) {
      r.common.push_back({w, n, m, n * m});
    } else {
      r.left_only.emplace_back(w, n);
    }
  }
  std::sort(r.common.begin(), r.common.end(), [](const CommonWord& a, const CommonWord& b) {
    return a.product != b.product ? a.product > b.product : a.word < b.word;
  });
  std::sort(r.left_only.begin(), r.left_only.end(), count_order);

  std::vector<WordCount> right_only;
  for (const auto& [w, n] : right.counts()) {
    if (!left.contains(w)) right_only.emplace_back(w, n);
  }
  r.right_only_count = right_only.size();
  const std::size_t k = std::min(top_k, right_only.size());
  std::partial_sort(right_only.begin(), right_only.begin() + k, right_only.end(), count_order);
  right_only.resize(k);
  r.right_only_top = std::move(right_only);
  r.left_top = cardgauge::top_k(left, top_k);
  r.right_top = cardgauge::top_k(right, top_k);
  return r;
}

double composite_score(std::size_t nlss_matches, std::size_t nld_matches, std::uint64_t common_word_count,
                       std::size_t reference_vocabulary) {
  const double heading = 50.0 * std::min(1.0, nlss_matches / 5.0) + 25.0 * std::min(1.0, nld_matches / 2.0);
  const double words =
      reference_vocabulary ? 25.0 * static_cast<double>(common_word_count) / static_cast<double>(reference_vocabulary)
                           : 0.0;
  return heading + words;
}

CardScore score_card(std::string model_id, std::span<const HeadingPath> card_paths, const WordHistogram& card_hist,
                     std::span<const HeadingPath> reference_paths, const WordHistogram& reference_hist,
                     const MatchThresholds& th) {
  CardScore s;
  s.model_id = std::move(model_id);
  s.reference_vocabulary = reference_hist.size();
  if (!card_paths.empty() && !reference_paths.empty()) {
    const auto matches = match_headings(card_paths, reference_paths, th);
    s.nlss_matches = matched_heading_count(matches, Metric::nlss);
    s.nld_matches = matched_heading_count(matches, Metric::nld);
  }
  for (const auto& [w, n] : card_hist.counts()) {
    if (reference_hist.contains(w)) {
      ++s.common_word_count;
      s.common_word_frequency += n;
    }
  }
  s.composite = composite_score(s.nlss_matches, s.nld_matches, s.common_word_count, s.reference_vocabulary);
  return s;
}

OutputFormat parse_output_format(std::string_view name) {
  if (name == "json") return OutputFormat::json;
  if (name == "csv") return OutputFormat::csv;
  if (name == "markdown" || name == "md") return OutputFormat::markdown;
  throw InvalidArgument("unknown output format: " + std::string(name));
}

std::string csv_field(std::string_view s) {
  if (s.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(s);
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

std::string emit(const Table& table, OutputFormat format) {
  for (const auto& row : table.rows) {
    if (row.size() != table.columns.size()) throw InvalidArgument("table row width differs from header");
  }
  std::string out;
  switch (format) {
    case OutputFormat::json: {
      ordered_json arr = ordered_json::array();
      for (const auto& row : table.rows) {
        ordered_json obj = ordered_json::object();
        for (std::size_t i = 0; i < row.size(); ++i) obj[table.columns[i]] = cell_json(row[i]);
        arr.push_back(std::move(obj));
      }
      return dump(arr);
    }
    case OutputFormat::csv:
      for (std::size_t i = 0; i < table.columns.size(); ++i) out += (i ? "," : "") + csv_field(table.columns[i]);
      out += '\n';
      for (const auto& row : table.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) out += (i ? "," : "") + csv_field(cell_text(row[i], false));
        out += '\n';
      }
      return out;
    case OutputFormat::markdown:
      out += "|";
      for (const auto& c : table.columns) out += " " + markdown_cell(c) + " |";
      out += "\n|";
      for (std::size_t i = 0; i < table.columns.size(); ++i) out += " --- |";
      out += '\n';
      for (const auto& row : table.rows) {
        out += "|";
        for (const auto& c : row) out += " " + markdown_cell(cell_text(c, true)) + " |";
        out += '\n';
      }
      return out;
  }
  throw InvalidArgument("unknown output format");
}

std::string emit(const WordGapReport& r, OutputFormat format) {
  switch (format) {
    case OutputFormat::json: {
      ordered_json j;
      j["inputs"] = {{"left", r.left_label}, {"right", r.right_label}};
      j["generated_at"] = r.generated_at;
      j["top_k"] = r.top_k;
      ordered_json common = ordered_json::array();
      for (const auto& c : r.common) {
        common.push_back({{"word", c.word}, {"f_left", c.f_left}, {"f_right", c.f_right}, {"product", c.product}});
      }
      j["common"] = std::move(common);
      j["left_only"] = counts_json(r.left_only);
      j["right_only_top"] = counts_json(r.right_only_top);
      j["right_only_count"] = r.right_only_count;
      j["left_top"] = counts_json(r.left_top);
      j["right_top"] = counts_json(r.right_top);
      return dump(j);
    }
    case OutputFormat::csv: {
      Table t;
      t.columns = {"category", "word", "f_left", "f_right", "product"};
      for (const auto& c : r.common) t.rows.push_back({Cell("common"), c.word, c.f_left, c.f_right, c.product});
      for (const auto& [w, n] : r.left_only) t.rows.push_back({Cell("left_only"), w, n, Cell(), Cell()});
      for (const auto& [w, n] : r.right_only_top) t.rows.push_back({Cell("right_only"), w, Cell(), n, Cell()});
      return emit(t, OutputFormat::csv);
    }
    case OutputFormat::markdown: {
      const std::string left = r.left_label.empty() ? "left" : r.left_label;
      const std::string right = r.right_label.empty() ? "right" : r.right_label;
      Table words;
      words.columns = {"Word (top " + std::to_string(r.top_k) + " common, sorted by f(" + left + ") * f(" + right + "))",
                       "Word (top " + std::to_string(r.top_k) + " in " + left + ")",
                       "Word (top " + std::to_string(r.top_k) + " in " + right + ")"};
      const std::size_t rows =
          std::min(r.top_k, std::max({r.common.size(), r.left_top.size(), r.right_top.size()}));
      for (std::size_t i = 0; i < rows; ++i) {
        words.rows.push_back({i < r.common.size() ? Cell(r.common[i].word) : Cell(),
                              i < r.left_top.size() ? Cell(r.left_top[i].first) : Cell(),
                              i < r.right_top.size() ? Cell(r.right_top[i].first) : Cell()});
      }
      Table only;
      only.columns = {"word", "frequency"};
      for (const auto& [w, n] : r.left_only) only.rows.push_back({Cell(w), Cell(n)});
      std::string out = "## Word comparison\n\n" + emit(words, OutputFormat::markdown);
      out += "\n## Words only in " + left + " (" + std::to_string(r.left_only.size()) + ")\n\n";
      out += emit(only, OutputFormat::markdown);
      return out;
    }
  }
  throw InvalidArgument("unknown output format");
}

WordGapReport gap_report_from_json(std::string_view text) {
  WordGapReport r;
  try {
    const json j = json::parse(text);
    r.left_label = j.at("inputs").at("left").get<std::string>();
    r.right_label = j.at("inputs").at("right").get<std::string>();
    r.generated_at = j.at("generated_at").get<std::string>();
    r.top_k = j.at("top_k").get<std::size_t>();
    for (const auto& c : j.at("common")) {
      r.common.push_back({c.at("word").get<std::string>(), c.at("f_left").get<std::uint64_t>(),
                          c.at("f_right").get<std::uint64_t>(), c.at("product").get<std::uint64_t>()});
    }
    r.left_only = counts_from(j.at("left_only"));
    r.right_only_top = counts_from(j.at("right_only_top"));
    r.right_only_count = j.at("right_only_count").get<std::size_t>();
    r.left_top = counts_from(j.at("left_top"));
    r.right_top = counts_from(j.at("right_top"));
  } catch (const json::exception& e) {
    throw InvalidArgument(std::string("gap report json: ") + e.what());
  }
  return r;
}

std::string emit(const CardScore& s, OutputFormat format) {
  if (format == OutputFormat::json) {
    ordered_json j;
    j["model_id"] = s.model_id;
    j["nlss_matches"] = s.nlss_matches;
    j["nld_matches"] = s.nld_matches;
    j["common_word_count"] = s.common_word_count;
    j["common_word_frequency"] = s.common_word_frequency;
    j["reference_vocabulary"] = s.reference_vocabulary;
    j["composite"] = s.composite;
    j["composite_version"] = std::string(kCompositeVersion);
    return dump(j);
  }
  Table t;
  t.columns = {"model_id",          "nlss_matches",          "nld_matches", "common_word_count",
               "common_word_frequency", "reference_vocabulary", "composite",   "composite_version"};
  t.rows.push_back({Cell(s.model_id), Cell(std::uint64_t{s.nlss_matches}), Cell(std::uint64_t{s.nld_matches}),
                    Cell(s.common_word_count), Cell(s.common_word_frequency),
                    Cell(std::uint64_t{s.reference_vocabulary}), Cell(s.composite),
                    Cell(std::string(kCompositeVersion))});
  return emit(t, format);
}

std::string emit(const HistogramComparison& c, OutputFormat format) {
  if (format == OutputFormat::json) {
    ordered_json j;
    j["count_common_words"] = c.count_common_words;
    j["count_left_only_words"] = c.count_left_only;
    j["count_right_only_words"] = c.count_right_only;
    j["histogram_intersection"] = c.histogram_intersection;
    j["cosine_similarity"] = c.cosine_similarity;
    j["kl_left_ref"] = opt_json(c.kl_left_ref);
    j["kl_right_ref"] = opt_json(c.kl_right_ref);
    return dump(j);
  }
  return emit(field_table({{"count_common_words", c.count_common_words},
                           {"count_left_only_words", c.count_left_only},
                           {"count_right_only_words", c.count_right_only},
                           {"histogram_intersection", c.histogram_intersection},
                           {"cosine_similarity", c.cosine_similarity},
                           {"kl_left_ref", opt_cell(c.kl_left_ref)},
                           {"kl_right_ref", opt_cell(c.kl_right_ref)}}),
              format);
}

std::string emit(const CorrelationResult& r, OutputFormat format) {
  switch (format) {
    case OutputFormat::json: {
      ordered_json j;
      j["reference"] = std::string(reference_kind_name(r.reference));
      j["n"] = r.n;
      j["rank_vs_rank"] = opt_json(r.rank_vs_rank);
      j["freq_vs_freq"] = opt_json(r.freq_vs_freq);
      if (!r.note.empty()) j["note"] = r.note;
      ordered_json pts = ordered_json::array();
      for (const auto& p : r.points) {
        pts.push_back({{"model_id", p.model_id},
                       {"downloads", p.downloads},
                       {"common_word_count", p.common_word_count},
                       {"common_word_frequency", p.common_word_frequency},
                       {"downloads_rank", p.downloads_rank},
                       {"common_count_rank", p.common_count_rank}});
      }
      j["points"] = std::move(pts);
      return dump(j);
    }
    case OutputFormat::csv: {
      Table t;
      t.columns = {"model_id",          "downloads",      "common_word_count",
                   "common_word_frequency", "downloads_rank", "common_count_rank"};
      for (const auto& p : r.points) {
        t.rows.push_back({Cell(p.model_id), Cell(p.downloads), Cell(p.common_word_count),
                          Cell(p.common_word_frequency), Cell(p.downloads_rank), Cell(p.common_count_rank)});
      }
      return emit(t, format);
    }
    case OutputFormat::markdown: {
      Table t;
      t.columns = {"reference", "n", "Rank vs Rank", "Freq vs Freq"};
      t.rows.push_back({Cell(std::string(reference_kind_name(r.reference))), Cell(std::uint64_t{r.n}),
                        opt_cell(r.rank_vs_rank), opt_cell(r.freq_vs_freq)});
      std::string out = emit(t, format);
      if (!r.note.empty()) out += "\n" + r.note + "\n";
      return out;
    }
  }
  throw InvalidArgument("unknown output format");
}

TocSimReport toc_sim_report(std::span<const HeadingPath> card, std::span<const HeadingPath> reference,
                            const MatchThresholds& th, Metric listed, bool best_only) {
  TocSimReport r;
  r.thresholds = th;
  if (card.empty() || reference.empty()) return r;
  const auto all = match_headings(card, reference, th);
  r.nlss_matches = matched_heading_count(all, Metric::nlss);
  r.nld_matches = matched_heading_count(all, Metric::nld);
  if (best_only) {
    r.pairs = best_matches(all, listed);
  } else {
    for (const auto& m : all) {
      if (m.matched_by(listed)) r.pairs.push_back(m);
    }
  }
  return r;
}

std::string emit(const TocSimReport& r, OutputFormat format) {
  if (format == OutputFormat::json) {
    ordered_json j;
    j["thresholds"] = {{"nlss", r.thresholds.nlss_match}, {"nld", r.thresholds.nld_match}};
    j["nlss_matches"] = r.nlss_matches;
    j["nld_matches"] = r.nld_matches;
    ordered_json pairs = ordered_json::array();
    for (const auto& m : r.pairs) {
      pairs.push_back({{"hf_path", m.hf_path.text()},
                       {"zd_path", m.zd_path.text()},
                       {"common_words", m.common_words},
                       {"nlss", m.nlss},
                       {"nld_ratio", m.nld_ratio},
                       {"nld_sorted", m.nld_sorted},
                       {"by_nlss", m.by_nlss},
                       {"by_nld", m.by_nld}});
    }
    j["pairs"] = std::move(pairs);
    return dump(j);
  }
  Table t;
  t.columns = {"hf_path", "zd_path", "common_words", "nlss", "nld_ratio", "nld_sorted", "by_nlss", "by_nld"};
  for (const auto& m : r.pairs) {
    t.rows.push_back({Cell(m.hf_path.text()), Cell(m.zd_path.text()), Cell(join_words(m.common_words)), Cell(m.nlss),
                      Cell(m.nld_ratio), Cell(m.nld_sorted), Cell(std::string(m.by_nlss ? "yes" : "no")),
                      Cell(std::string(m.by_nld ? "yes" : "no"))});
  }
  return emit(t, format);
}

std::string emit(std::span<const DownloadBin> bins, OutputFormat format) {
  Table t;
  t.columns = {"bin", "lo", "hi", "count"};
  for (const auto& b : bins) {
    t.rows.push_back({Cell(b.label()), Cell(b.lo), b.hi ? Cell(*b.hi) : Cell(), Cell(std::uint64_t{b.count})});
  }
  return emit(t, format);
}

}  // namespace cardgauge
