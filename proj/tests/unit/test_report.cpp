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

#include <doctest.h>

#include <nlohmann/json.hpp>

#include "cardgauge/error.hpp"
#include "cardgauge/mdparse.hpp"
#include "cardgauge/pipeline.hpp"
#include "cardgauge/report.hpp"
#include "cardgauge/text.hpp"
#include "testkit.hpp"

using namespace cardgauge;

namespace {

WordHistogram make(std::initializer_list<WordCount> entries) {
  WordHistogram h;
  for (const auto& [w, n] : entries) h.add(w, n);
  return h;
}

std::size_t count_lines(const std::string& s) { return std::count(s.begin(), s.end(), '\n'); }

}  // namespace

TEST_CASE("gap report example") {
  const auto r = gap_report(make({{"a", 2}, {"b", 1}}), make({{"a", 3}, {"c", 5}}), 10);
  CHECK(r.common == std::vector<CommonWord>{{"a", 2, 3, 6}});
  CHECK(r.left_only == std::vector<WordCount>{{"b", 1}});
  CHECK(r.right_only_top == std::vector<WordCount>{{"c", 5}});
  CHECK(r.right_only_count == 1);
  const auto same = gap_report(make({{"a", 2}}), make({{"a", 2}}), 3);
  CHECK(same.left_only.empty());
  CHECK(same.right_only_top.empty());
  CHECK_THROWS_AS(gap_report(WordHistogram(), make({{"a", 1}}), 3), InvalidArgument);
  CHECK_THROWS_AS(gap_report(make({{"a", 1}}), make({{"a", 1}}), 0), InvalidArgument);
}

TEST_CASE("gap report sorts common words by product") {
  const auto r = gap_report(make({{"x", 1}, {"y", 3}, {"z", 2}, {"w", 2}}),
                            make({{"x", 10}, {"y", 2}, {"z", 3}, {"w", 3}}), 2);
  REQUIRE(r.common.size() == 4);
  CHECK(r.common[0].word == "x");
  CHECK(r.common[1].word == "w");
  CHECK(r.common[2].word == "y");
  CHECK(r.common[3].word == "z");
  CHECK(r.left_top.size() == 2);
}

TEST_CASE("gap report json round-trips and markdown has the three-column layout") {
  WordHistogram l, r;
  for (int i = 0; i < 30; ++i) {
    l.add("w" + std::to_string(i), i + 1);
    r.add("w" + std::to_string(i + 5), 2 * i + 1);
  }
  l.set_label("ZD");
  r.set_label("HF");
  const auto rep = gap_report(l, r, 20, "2026-01-01T00:00:00Z");
  CHECK(gap_report_from_json(emit(rep, OutputFormat::json)) == rep);
  const std::string md = emit(rep, OutputFormat::markdown);
  const auto table_start = md.find("## Word comparison");
  REQUIRE(table_start != std::string::npos);
  const auto table_end = md.find("\n\n", table_start + 20);
  const std::string head = md.substr(table_start, table_end - table_start) + "\n";
  const auto lines = text::split_lines(head);
  // Heading, blank, header row, separator, 20 body rows.
  CHECK(count_lines(head) == 24);
  CHECK(std::count(lines[2].begin(), lines[2].end(), '|') == 4);
  CHECK(md.find("## Words only in ZD (5)") != std::string::npos);
  const std::string csv = emit(rep, OutputFormat::csv);
  CHECK(csv.rfind("category,word,", 0) == 0);
}

TEST_CASE("composite score") {
  CHECK(composite_score(0, 0, 0, 10) == 0);
  CHECK(composite_score(5, 2, 10, 10) == doctest::Approx(100));
  CHECK(composite_score(9, 9, 5, 10) == doctest::Approx(87.5));
  CHECK(composite_score(1, 1, 0, 0) == doctest::Approx(22.5));
}

TEST_CASE("score_card") {
  const std::string tmpl = text::read_file(testkit::fixture("zd_template.md"));
  FilterConfig cfg;
  cfg.stop_words = builtin_stop_words();
  const auto paths = heading_paths(parse_toc(tmpl));
  const WordHistogram h = text_histogram(tmpl, cfg);
  const auto empty = score_card("e", {}, WordHistogram(), paths, h, MatchThresholds{});
  CHECK(empty.composite == 0);
  const auto self = score_card("self", paths, h, paths, h, MatchThresholds{});
  CHECK(self.composite == doctest::Approx(100));
  CHECK(self.common_word_count == h.size());

  const auto card = heading_paths(parse_toc(text::read_file(testkit::fixture("worked/hf_model_card.md"))));
  const auto zd = heading_paths(parse_toc(text::read_file(testkit::fixture("worked/zd_data_template.md"))));
  const auto worked = score_card("worked", card, WordHistogram(), zd, h, MatchThresholds{});
  CHECK(worked.nlss_matches == 5);
  CHECK(worked.nld_matches == 2);
}

TEST_CASE("tables in every format") {
  Table t{{"model_id", "rank", "note"}, {{std::string("a,b"), std::uint64_t{1}, 0.5}, {std::string("c"), std::uint64_t{2}, {}}, {std::string("d\"q"), std::uint64_t{3}, 1.25}}};
  const std::string csv = emit(t, OutputFormat::csv);
  CHECK(csv == "model_id,rank,note\n\"a,b\",1,0.5\nc,2,\n\"d\"\"q\",3,1.25\n");
  const auto json = nlohmann::json::parse(emit(t, OutputFormat::json));
  CHECK(json.size() == 3);
  CHECK(json[1]["note"].is_null());
  CHECK(json[0]["rank"] == 1);
  CHECK(count_lines(emit(t, OutputFormat::markdown)) == 5);
  CHECK(parse_output_format("md") == OutputFormat::markdown);
  CHECK_THROWS_AS(parse_output_format("xml"), InvalidArgument);
  CHECK(csv_field("plain") == "plain");
  CHECK(csv_field("a\nb") == "\"a\nb\"");
}

TEST_CASE("correlation csv has one row per point") {
  CorrelationResult r;
  r.n = 3;
  r.rank_vs_rank = 0.5;
  for (int i = 0; i < 3; ++i) r.points.push_back({"m" + std::to_string(i), 10u - i, 1, 2, 1.0 + i, 1.0 + i});
  CHECK(count_lines(emit(r, OutputFormat::csv)) == 4);
  const auto j = nlohmann::json::parse(emit(r, OutputFormat::json));
  CHECK(j["n"] == 3);
  CHECK(j["freq_vs_freq"].is_null());
}

TEST_CASE("histogram comparison and bins emit") {
  HistogramComparison c;
  c.count_common_words = 2;
  c.cosine_similarity = 0.25;
  const auto j = nlohmann::json::parse(emit(c, OutputFormat::json));
  CHECK(j["count_common_words"] == 2);
  CHECK(j["kl_left_ref"].is_null());
  const std::vector<DownloadBin> bins = download_bins({});
  CHECK(count_lines(emit(std::span<const DownloadBin>(bins), OutputFormat::csv)) == 10);
}
