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

#include "cardgauge/mdparse.hpp"

#include <array>
#include <cctype>
#include <nlohmann/json.hpp>
#include <utility>

#include "cardgauge/error.hpp"
#include "cardgauge/text.hpp"

namespace cardgauge {
namespace {

using ordered_json = nlohmann::ordered_json;

struct FlatHeading {
  std::string text;
  int level;
};

std::size_t leading_spaces(std::string_view line) {
  std::size_t width = 0;
  for (char c : line) {
    if (c == ' ') {
      ++width;
    } else if (c == '\t') {
      width += 4 - width % 4;
    } else {
      break;
    }
  }
  return width;
}

std::string_view skip_indent(std::string_view line) {
  std::size_t i = 0;
  while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
  return line.substr(i);
}

bool is_blank(std::string_view line) { return text::trim(line).empty(); }

struct Fence {
  char marker = 0;
  std::size_t length = 0;
};

// Opening code fence: up to three spaces, then 3+ backticks or tildes.
bool opens_fence(std::string_view line, Fence& fence) {
  if (leading_spaces(line) > 3) return false;
  const auto body = skip_indent(line);
  if (body.empty() || (body[0] != '`' && body[0] != '~')) return false;
  std::size_t run = 0;
  while (run < body.size() && body[run] == body[0]) ++run;
  if (run < 3) return false;
  if (body[0] == '`' && body.substr(run).find('`') != std::string_view::npos) return false;
  fence = {body[0], run};
  return true;
}

bool closes_fence(std::string_view line, const Fence& fence) {
  if (leading_spaces(line) > 3) return false;
  const auto body = text::trim(line);
  if (body.size() < fence.length) return false;
  for (char c : body) {
    if (c != fence.marker) return false;
  }
  return true;
}

// Returns the level (1-6) and fills `content` when `line` is an ATX heading.
int atx_level(std::string_view line, std::string_view& content) {
  if (leading_spaces(line) > 3) return 0;
  auto body = skip_indent(line);
  int level = 0;
  while (level < static_cast<int>(body.size()) && body[level] == '#') ++level;
  if (level == 0 || level > 6) return 0;
  if (static_cast<std::size_t>(level) < body.size() && body[level] != ' ' && body[level] != '\t') return 0;
  auto rest = text::trim(body.substr(level));
  // Optional closing sequence: a run of '#' preceded by white space.
  std::size_t end = rest.size();
  while (end > 0 && rest[end - 1] == '#') --end;
  if (end == 0) {
    rest = {};
  } else if (end < rest.size() && (rest[end - 1] == ' ' || rest[end - 1] == '\t')) {
    rest = text::trim(rest.substr(0, end));
  }
  content = rest;
  return level;
}

// 1 for `===`, 2 for `---`, 0 otherwise.
int setext_level(std::string_view line) {
  if (leading_spaces(line) > 3) return 0;
  const auto body = text::trim(line);
  if (body.empty() || (body[0] != '=' && body[0] != '-')) return 0;
  for (char c : body) {
    if (c != body[0]) return 0;
  }
  return body[0] == '=' ? 1 : 2;
}

bool is_thematic_break(std::string_view line) {
  if (leading_spaces(line) > 3) return false;
  const auto body = text::trim(line);
  if (body.empty() || (body[0] != '-' && body[0] != '*' && body[0] != '_')) return false;
  std::size_t marks = 0;
  for (char c : body) {
    if (c == body[0]) {
      ++marks;
    } else if (c != ' ' && c != '\t') {
      return false;
    }
  }
  return marks >= 3;
}

// Lines that start a block other than a paragraph; they cannot become the
// text of a setext heading.
bool starts_other_block(std::string_view line) {
  const auto body = skip_indent(line);
  if (body.empty()) return false;
  const char c = body[0];
  if (c == '>' || c == '<') return true;
  if ((c == '-' || c == '*' || c == '+') && (body.size() == 1 || body[1] == ' ' || body[1] == '\t')) return true;
  std::size_t digits = 0;
  while (digits < body.size() && digits < 9 && std::isdigit(static_cast<unsigned char>(body[digits]))) ++digits;
  if (digits > 0 && digits < body.size() && (body[digits] == '.' || body[digits] == ')') &&
      (digits + 1 == body.size() || body[digits + 1] == ' ')) {
    return true;
  }
  return false;
}

bool front_matter_delimiter(std::string_view line, bool closing) {
  while (!line.empty() && (line.back() == ' ' || line.back() == '\t')) line.remove_suffix(1);
  return line == "---" || (closing && line == "...");
}

void add_heading(std::vector<FlatHeading>& out, std::string_view raw, int level) {
  std::string cleaned = strip_inline_styling(raw);
  if (!cleaned.empty()) out.push_back({std::move(cleaned), level});
}

std::vector<FlatHeading> scan_headings(std::string_view markdown) {
  const std::string normalized = text::normalize_newlines(text::sanitize_utf8(markdown));
  const auto lines = text::split_lines(normalized);
  std::size_t i = 0;
  if (!lines.empty() && front_matter_delimiter(lines[0], false)) {
    for (std::size_t k = 1; k < lines.size(); ++k) {
      if (front_matter_delimiter(lines[k], true)) {
        i = k + 1;
        break;
      }
    }
  }

  std::vector<FlatHeading> headings;
  std::vector<std::string_view> paragraph;
  bool in_fence = false;
  Fence fence;
  for (; i < lines.size(); ++i) {
    const std::string_view line = lines[i];
    if (in_fence) {
      if (closes_fence(line, fence)) in_fence = false;
      continue;
    }
    if (opens_fence(line, fence)) {
      in_fence = true;
      paragraph.clear();
      continue;
    }
    if (is_blank(line)) {
      paragraph.clear();
      continue;
    }
    if (leading_spaces(line) >= 4) {
      // Indented code unless it continues an open paragraph.
      if (!paragraph.empty()) paragraph.push_back(line);
      continue;
    }
    std::string_view content;
    if (const int level = atx_level(line, content)) {
      add_heading(headings, content, level);
      paragraph.clear();
      continue;
    }
    if (const int level = setext_level(line); level && !paragraph.empty()) {
      std::string joined;
      for (auto p : paragraph) {
        if (!joined.empty()) joined.push_back(' ');
        joined.append(text::trim(p));
      }
      add_heading(headings, joined, level);
      paragraph.clear();
      continue;
    }
    if (is_thematic_break(line) || starts_other_block(line)) {
      paragraph.clear();
      continue;
    }
    paragraph.push_back(line);
  }
  return headings;
}

std::size_t build_subtree(TocNode& parent, const std::vector<FlatHeading>& flat, std::size_t pos) {
  while (pos < flat.size() && flat[pos].level > parent.level) {
    TocNode child{flat[pos].text, flat[pos].level, {}};
    pos = build_subtree(child, flat, pos + 1);
    parent.children.push_back(std::move(child));
  }
  return pos;
}

std::size_t count_nodes(const TocNode& node) {
  std::size_t n = node.children.size();
  for (const auto& c : node.children) n += count_nodes(c);
  return n;
}

void collect_paths(const TocNode& node, std::vector<std::string>& prefix, std::vector<HeadingPath>& out) {
  for (const auto& child : node.children) {
    const std::size_t keep = prefix.size();
    for (auto& w : text::split_whitespace(child.heading_text)) prefix.push_back(std::move(w));
    out.push_back({prefix, out.size()});
    collect_paths(child, prefix, out);
    prefix.resize(keep);
  }
}

constexpr std::array<const char*, 7> kLevelColors = {"gray", "green", "yellow", "orange", "red", "purple", "brown"};

std::string dot_escape(std::string_view s) {
  std::string out;
  for (char c : s) {
    if (c == '"' || c == '\\') out.push_back('\\');
    if (c == '\n') {
      out += "\\n";
      continue;
    }
    out.push_back(c);
  }
  return out;
}

void emit_dot(const TocNode& node, std::size_t id, std::size_t& next_id, std::string& out) {
  out += "  n" + std::to_string(id) + " [label=\"" + dot_escape(node.heading_text) + "\", fillcolor=" +
         kLevelColors[static_cast<std::size_t>(node.level)] + "];\n";
  for (const auto& child : node.children) {
    const std::size_t child_id = next_id++;
    out += "  n" + std::to_string(id) + " -> n" + std::to_string(child_id) + ";\n";
    emit_dot(child, child_id, next_id, out);
  }
}

ordered_json node_to_json(const TocNode& node) {
  ordered_json j;
  j["heading"] = node.heading_text;
  j["level"] = node.level;
  j["children"] = ordered_json::array();
  for (const auto& c : node.children) j["children"].push_back(node_to_json(c));
  return j;
}

TocNode node_from_json(const nlohmann::json& j, int parent_level) {
  if (!j.is_object() || !j.contains("heading") || !j.contains("level") || !j.contains("children")) {
    throw InvalidArgument("TOC node needs heading, level and children");
  }
  TocNode node;
  node.heading_text = j.at("heading").get<std::string>();
  node.level = j.at("level").get<int>();
  if (node.level < 0 || node.level > 6) throw InvalidArgument("TOC level out of range");
  if (parent_level >= 0 && node.level <= parent_level) throw InvalidArgument("child level must exceed parent level");
  if (parent_level < 0 && (node.level != 0 || !node.heading_text.empty())) {
    throw InvalidArgument("TOC root must have level 0 and empty heading");
  }
  for (const auto& c : j.at("children")) node.children.push_back(node_from_json(c, node.level));
  return node;
}

}  // namespace

std::size_t TocTree::heading_count() const { return count_nodes(root); }

std::string HeadingPath::text() const { return text::join(words, " "); }

std::string strip_inline_styling(std::string_view heading) {
  const std::string_view s = heading;
  std::string out;
  out.reserve(s.size());
  std::size_t i = 0;
  while (i < s.size()) {
    const char c = s[i];
    if (c == '\\' && i + 1 < s.size() && std::ispunct(static_cast<unsigned char>(s[i + 1]))) {
      out.push_back(s[i + 1]);
      i += 2;
      continue;
    }
    // [text](url), ![alt](url) and [text][ref] keep only the bracketed text.
    if (c == '[' || (c == '!' && i + 1 < s.size() && s[i + 1] == '[')) {
      const std::size_t open = c == '[' ? i : i + 1;
      const std::size_t close = s.find(']', open + 1);
      if (close != std::string_view::npos && close + 1 < s.size() && (s[close + 1] == '(' || s[close + 1] == '[')) {
        const char closer = s[close + 1] == '(' ? ')' : ']';
        const std::size_t end = s.find(closer, close + 2);
        if (end != std::string_view::npos) {
          out += strip_inline_styling(s.substr(open + 1, close - open - 1));
          i = end + 1;
          continue;
        }
      }
    }
    if (c == '*' || c == '`') {
      ++i;
      continue;
    }
    if (c == '~' && i + 1 < s.size() && s[i + 1] == '~') {
      i += 2;
      continue;
    }
    if (c == '_') {
      const bool alnum_before = i > 0 && std::isalnum(static_cast<unsigned char>(s[i - 1]));
      const bool alnum_after = i + 1 < s.size() && std::isalnum(static_cast<unsigned char>(s[i + 1]));
      if (!(alnum_before && alnum_after)) {
        ++i;
        continue;
      }
    }
    out.push_back(c);
    ++i;
  }
  return text::join(text::split_whitespace(out), " ");
}

TocTree parse_toc(std::string_view markdown) {
  const auto flat = scan_headings(markdown);
  TocTree tree;
  std::size_t pos = 0;
  while (pos < flat.size()) pos = build_subtree(tree.root, flat, pos);
  return tree;
}

std::vector<HeadingPath> heading_paths(const TocTree& tree) {
  std::vector<HeadingPath> out;
  std::vector<std::string> prefix;
  collect_paths(tree.root, prefix, out);
  return out;
}

TreeFormat parse_tree_format(std::string_view name) {
  if (name == "dot") return TreeFormat::dot;
  if (name == "json") return TreeFormat::json;
  throw InvalidArgument("unknown tree format: " + std::string(name));
}

std::string export_tree(const TocTree& tree, TreeFormat format) {
  if (format == TreeFormat::json) return node_to_json(tree.root).dump(2) + "\n";
  std::string out = "digraph toc {\n  node [shape=box, style=filled];\n";
  std::size_t next_id = 1;
  emit_dot(tree.root, 0, next_id, out);
  out += "}\n";
  return out;
}

TocTree tree_from_json(std::string_view json) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(json);
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument(std::string("TOC JSON: ") + e.what());
  }
  try {
    return TocTree{node_from_json(j, -1)};
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument(std::string("TOC JSON: ") + e.what());
  }
}

}  // namespace cardgauge
