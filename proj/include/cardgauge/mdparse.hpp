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

#ifndef CARDGAUGE_MDPARSE_HPP
#define CARDGAUGE_MDPARSE_HPP

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace cardgauge {

// One heading in a card's table of contents. The document root has level 0
// and empty text; every child sits at a strictly deeper level than its parent.
struct TocNode {
  std::string heading_text;
  int level = 0;
  std::vector<TocNode> children;

  bool operator==(const TocNode&) const = default;
};

struct TocTree {
  TocNode root;

  // Number of heading nodes (the root is not counted).
  std::size_t heading_count() const;
  bool operator==(const TocTree&) const = default;
};

// Words of all headings from the top-level ancestor down to one node.
struct HeadingPath {
  std::vector<std::string> words;
  // Pre-order index of the originating heading (0 = first heading).
  std::size_t node_index = 0;

  std::string text() const;
  bool operator==(const HeadingPath&) const = default;
};

// Extracts ATX (levels 1-6) and setext (levels 1-2) headings. Front matter is
// recognised only when the text starts with a `---` line; headings inside
// fenced code blocks are ignored. A heading that skips levels attaches to the
// nearest shallower ancestor. Headings whose text is empty after styling is
// stripped do not produce nodes. Never throws.
TocTree parse_toc(std::string_view markdown);

// One path per heading node, in document order.
std::vector<HeadingPath> heading_paths(const TocTree& tree);

// Removes emphasis markers, inline code ticks, backslash escapes and link
// syntax (`[text](url)` becomes `text`), then collapses white space.
std::string strip_inline_styling(std::string_view heading);

enum class TreeFormat { dot, json };

// Accepts "dot" or "json"; throws InvalidArgument otherwise.
TreeFormat parse_tree_format(std::string_view name);

// DOT colours nodes by level: root gray, 1 green, 2 yellow, 3 orange, 4 red,
// 5 purple, 6 brown. JSON mirrors TocNode as nested objects.
std::string export_tree(const TocTree& tree, TreeFormat format);

// Inverse of the JSON export. Throws InvalidArgument on schema violations.
TocTree tree_from_json(std::string_view json);

}  // namespace cardgauge

#endif  // CARDGAUGE_MDPARSE_HPP
