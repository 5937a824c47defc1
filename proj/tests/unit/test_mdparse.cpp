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

#include "cardgauge/error.hpp"
#include "cardgauge/mdparse.hpp"
#include "cardgauge/text.hpp"
#include "testkit.hpp"

using namespace cardgauge;

namespace {

std::vector<std::string> path_texts(const TocTree& t) {
  std::vector<std::string> out;
  for (const auto& p : heading_paths(t)) out.push_back(p.text());
  return out;
}

std::size_t count_of(const std::string& hay, const std::string& needle) {
  std::size_t n = 0;
  for (auto pos = hay.find(needle); pos != std::string::npos; pos = hay.find(needle, pos + 1)) ++n;
  return n;
}

}  // namespace

TEST_CASE("parse_toc nests by level") {
  const TocTree t = parse_toc("# Evaluation\n## Metric\n## Speed");
  REQUIRE(t.root.children.size() == 1);
  const TocNode& eval = t.root.children[0];
  CHECK(eval.heading_text == "Evaluation");
  CHECK(eval.level == 1);
  REQUIRE(eval.children.size() == 2);
  CHECK(eval.children[0].heading_text == "Metric");
  CHECK(eval.children[1].heading_text == "Speed");
  CHECK(t.heading_count() == 3);
  CHECK(path_texts(t) == std::vector<std::string>{"Evaluation", "Evaluation Metric", "Evaluation Speed"});
}

TEST_CASE("fenced headings are ignored") {
  CHECK(parse_toc("```\n# not a heading\n```").heading_count() == 0);
  CHECK(parse_toc("~~~\n# no\n~~~\n# yes").heading_count() == 1);
}

TEST_CASE("front matter and level jumps") {
  const TocTree t = parse_toc("---\ntags: x\n---\n# A\n### B");
  REQUIRE(t.root.children.size() == 1);
  CHECK(t.root.children[0].heading_text == "A");
  REQUIRE(t.root.children[0].children.size() == 1);
  CHECK(t.root.children[0].children[0].heading_text == "B");
  CHECK(t.root.children[0].children[0].level == 3);
}

TEST_CASE("a shallower heading after a deep one climbs back up") {
  const TocTree t = parse_toc("## A\n# B\n### C\n## D\n");
  CHECK(path_texts(t) == std::vector<std::string>{"A", "B", "B C", "B D"});
}

TEST_CASE("setext headings and inline styling") {
  const TocTree t = parse_toc("Title\n=====\n\nPart *one*\n---\n\n### [Link](http://x) `code` \\*esc\\*\n#\n");
  CHECK(path_texts(t) == std::vector<std::string>{"Title", "Title Part one", "Title Part one Link code *esc*"});
  CHECK(strip_inline_styling("**Bold**  _it_ [a](b)") == "Bold it a");
}

TEST_CASE("ATX closing hashes and indentation") {
  const TocTree t = parse_toc("  # Spaced #\n    # indented code\n#NoSpace\n####### seven\n");
  CHECK(path_texts(t) == std::vector<std::string>{"Spaced"});
}

TEST_CASE("heading_paths of trivial trees") {
  CHECK(path_texts(parse_toc("# A\n## B")) == std::vector<std::string>{"A", "A B"});
  CHECK(heading_paths(parse_toc("no headings")).empty());
  const auto paths = heading_paths(parse_toc("# A\n## B\n# C"));
  CHECK(paths[2].node_index == 2);
  CHECK(paths[1].words == std::vector<std::string>{"A", "B"});
}

TEST_CASE("worked-example card contains the out-of-scope path") {
  const TocTree t = parse_toc(text::read_file(testkit::fixture("worked/hf_model_card.md")));
  const auto texts = path_texts(t);
  CHECK(std::find(texts.begin(), texts.end(), "Model Card for Model ID Uses Out-of-Scope Use") != texts.end());
}

TEST_CASE("dot export") {
  const std::string root_only = export_tree(parse_toc(""), TreeFormat::dot);
  CHECK(count_of(root_only, "[label=") == 1);
  CHECK(count_of(root_only, "gray") == 1);
  CHECK(count_of(root_only, "->") == 0);

  const std::string two = export_tree(parse_toc("# A\n## B"), TreeFormat::dot);
  CHECK(count_of(two, "[label=") == 3);
  CHECK(count_of(two, "->") == 2);
  CHECK(two.find("label=\"A\"") != std::string::npos);
  CHECK(count_of(two, "green") == 1);
  CHECK(count_of(two, "yellow") == 1);
  CHECK(export_tree(parse_toc("# a \"q\""), TreeFormat::dot).find("a \\\"q\\\"") != std::string::npos);
}

TEST_CASE("json export round-trips") {
  testkit::Gen gen(5);
  for (int round = 0; round < 200; ++round) {
    std::string md;
    const auto n = gen.range(0, 25);
    for (std::uint64_t i = 0; i < n; ++i) {
      md += std::string(gen.range(1, 6), '#') + " " + gen.word("abc \"\\", 1, 6) + "\n";
    }
    const TocTree t = parse_toc(md);
    const std::string json = export_tree(t, TreeFormat::json);
    const TocTree back = tree_from_json(json);
    CHECK(back == t);
    CHECK(export_tree(back, TreeFormat::json) == json);
  }
}

TEST_CASE("format and schema errors") {
  CHECK(parse_tree_format("dot") == TreeFormat::dot);
  CHECK_THROWS_AS(parse_tree_format("svg"), InvalidArgument);
  CHECK_THROWS_AS(tree_from_json("[1]"), InvalidArgument);
  CHECK_THROWS_AS(tree_from_json("{\"heading\":\"\",\"level\":0,\"children\":[{\"heading\":\"a\",\"level\":0,"
                                 "\"children\":[]}]}"),
                  InvalidArgument);
}

TEST_CASE("property: tree invariants on random documents") {
  testkit::Gen gen(17);
  const std::vector<std::string> lines{"# H", "## H2", "### H3", "###### H6", "text", "```", "---", "", "=====",
                                       "Setext", "#### *styled*", "# `", "> quote"};
  for (int round = 0; round < 500; ++round) {
    std::string md;
    const auto n = gen.range(0, 30);
    for (std::uint64_t i = 0; i < n; ++i) md += gen.pick(lines) + "\n";
    const TocTree t = parse_toc(md);
    CHECK(t.root.level == 0);
    CHECK(t.root.heading_text.empty());
    std::size_t nodes = 0;
    std::function<void(const TocNode&)> walk = [&](const TocNode& node) {
      for (const auto& c : node.children) {
        ++nodes;
        CHECK(c.level > node.level);
        CHECK(c.level <= 6);
        CHECK_FALSE(c.heading_text.empty());
        walk(c);
      }
    };
    walk(t.root);
    CHECK(nodes == t.heading_count());
    CHECK(heading_paths(t).size() == nodes);
  }
}
