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

// UTF-8 helpers shared by the parsers and metrics. Invalid byte sequences are
// replaced with U+FFFD on decode so that every input yields a result.

#ifndef CARDGAUGE_TEXT_HPP
#define CARDGAUGE_TEXT_HPP

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace cardgauge::text {

std::u32string decode_utf8(std::string_view bytes);
std::string encode_utf8(std::u32string_view codepoints);

// Re-encodes `bytes`, replacing invalid sequences with U+FFFD.
std::string sanitize_utf8(std::string_view bytes);

// Number of code points (after replacement of invalid sequences).
std::size_t codepoint_length(std::string_view bytes);

bool is_space(char32_t c);

// Splits on Unicode white space, dropping empty pieces.
std::vector<std::string> split_whitespace(std::string_view s);

std::string join(const std::vector<std::string>& parts, std::string_view sep);

// Converts CRLF and lone CR line endings to LF.
std::string normalize_newlines(std::string_view s);

// Splits LF-terminated text into lines without the terminators.
std::vector<std::string_view> split_lines(std::string_view s);

std::string ascii_lower(std::string_view s);

std::string_view trim(std::string_view s);

// Reads a whole file; throws IoError when it cannot be opened.
std::string read_file(const std::string& path);

// Writes via a temporary sibling and rename so readers never observe a
// partially written file.
void write_file_atomic(const std::string& path, std::string_view contents);

}  // namespace cardgauge::text

#endif  // CARDGAUGE_TEXT_HPP
