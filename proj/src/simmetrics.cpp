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

#include "cardgauge/simmetrics.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <unordered_set>

#include "cardgauge/error.hpp"
#include "cardgauge/text.hpp"

namespace cardgauge {
namespace {

std::size_t edit_distance(std::u32string_view a, std::u32string_view b) {
  if (a.size() < b.size()) std::swap(a, b);
  std::vector<std::size_t> row(b.size() + 1);
  for (std::size_t j = 0; j <= b.size(); ++j) row[j] = j;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    std::size_t diag = row[0];
    row[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      const std::size_t up = row[j];
      const std::size_t sub = diag + (a[i - 1] == b[j - 1] ? 0 : 2);
      row[j] = std::min({up + 1, row[j - 1] + 1, sub});
      diag = up;
    }
  }
  return row[b.size()];
}

double ratio_of(std::u32string_view a, std::u32string_view b) {
  const std::size_t total = a.size() + b.size();
  if (total == 0) throw InvalidArgument("nld_ratio needs at least one non-empty string");
  return 100.0 * (1.0 - static_cast<double>(edit_distance(a, b)) / static_cast<double>(total));
}

std::size_t joined_length(const std::vector<std::string>& words) {
  if (words.empty()) return 0;
  std::size_t n = words.size() - 1;
  for (const auto& w : words) n += text::codepoint_length(w);
  return n;
}

// Precomputed per-path data for all-pairs matching.
struct PreparedPath {
  const HeadingPath* path;
  std::u32string raw;
  std::u32string sorted;
};

PreparedPath prepare(const HeadingPath& p) {
  return {&p, text::decode_utf8(p.text()), text::decode_utf8(token_sort_key(p.text()))};
}

double sorted_ratio(const PreparedPath& a, const PreparedPath& b) {
  if (a.sorted.empty() || b.sorted.empty()) return 0.0;
  return ratio_of(a.sorted, b.sorted);
}

}  // namespace

void MatchThresholds::validate() const {
  const auto ok = [](double v) { return v >= 0.0 && v <= 100.0; };
  if (!ok(nlss_match) || !ok(nld_match)) throw InvalidArgument("match thresholds must lie in [0, 100]");
}

Metric parse_metric(std::string_view name) {
  if (name == "nlss") return Metric::nlss;
  if (name == "nld") return Metric::nld;
  throw InvalidArgument("unknown metric: " + std::string(name));
}

std::string_view metric_name(Metric m) { return m == Metric::nlss ? "nlss" : "nld"; }

NlssResult nlss(std::span<const std::string> hf_words, std::span<const std::string> zd_words) {
  std::vector<std::string> distinct;
  std::unordered_set<std::string_view> seen;
  for (const auto& w : hf_words) {
    if (seen.insert(w).second) distinct.push_back(w);
  }
  const std::size_t denom = joined_length(distinct);
  if (denom == 0) throw InvalidArgument("NLSS needs a non-empty HF heading path");
  const std::unordered_set<std::string_view> zd(zd_words.begin(), zd_words.end());
  NlssResult r;
  for (const auto& w : distinct) {
    if (zd.count(w)) r.common_words.push_back(w);
  }
  r.score = std::clamp(100.0 * static_cast<double>(joined_length(r.common_words)) / static_cast<double>(denom), 0.0,
                       100.0);
  return r;
}

NlssResult nlss(const HeadingPath& hf, const HeadingPath& zd) { return nlss(hf.words, zd.words); }

std::size_t gld(std::string_view a, std::string_view b) {
  return edit_distance(text::decode_utf8(a), text::decode_utf8(b));
}

double nld_ratio(std::string_view a, std::string_view b) { return ratio_of(text::decode_utf8(a), text::decode_utf8(b)); }

std::string token_sort_key(std::string_view s) {
  std::string cleaned(s);
  for (char& c : cleaned) {
    const auto u = static_cast<unsigned char>(c);
    if (u >= 0x80) continue;
    if (c >= 'A' && c <= 'Z') {
      c = static_cast<char>(c - 'A' + 'a');
    } else if (!((c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '_')) {
      c = ' ';
    }
  }
  auto tokens = text::split_whitespace(cleaned);
  std::sort(tokens.begin(), tokens.end());
  return text::join(tokens, " ");
}

double nld_sorted(std::string_view a, std::string_view b) {
  if (a.empty() && b.empty()) throw InvalidArgument("nld_sorted needs at least one non-empty string");
  const auto ka = token_sort_key(a);
  const auto kb = token_sort_key(b);
  if (ka.empty() || kb.empty()) return 0.0;
  return nld_ratio(ka, kb);
}

std::vector<HeadingMatch> match_headings(std::span<const HeadingPath> hf, std::span<const HeadingPath> zd,
                                         const MatchThresholds& th) {
  th.validate();
  std::vector<PreparedPath> zd_prepared;
  zd_prepared.reserve(zd.size());
  for (const auto& z : zd) zd_prepared.push_back(prepare(z));

  std::vector<HeadingMatch> out;
  for (const auto& h : hf) {
    const PreparedPath hp = prepare(h);
    for (const auto& zp : zd_prepared) {
      NlssResult n = nlss(h, *zp.path);
      const double sorted = sorted_ratio(hp, zp);
      const bool by_nlss = n.score >= th.nlss_match;
      const bool by_nld = sorted >= th.nld_match;
      if (!by_nlss && !by_nld) continue;
      HeadingMatch m;
      m.hf_path = h;
      m.zd_path = *zp.path;
      m.common_words = std::move(n.common_words);
      m.nlss = n.score;
      m.nld_ratio = ratio_of(hp.raw, zp.raw);
      m.nld_sorted = sorted;
      m.by_nlss = by_nlss;
      m.by_nld = by_nld;
      out.push_back(std::move(m));
    }
  }
  return out;
}

std::size_t matched_heading_count(std::span<const HeadingMatch> matches, Metric m) {
  std::set<std::size_t> heads;
  for (const auto& x : matches) {
    if (x.matched_by(m)) heads.insert(x.hf_path.node_index);
  }
  return heads.size();
}

std::vector<HeadingMatch> best_matches(std::span<const HeadingMatch> matches, Metric m) {
  std::vector<HeadingMatch> out;
  const auto score = [m](const HeadingMatch& x) { return m == Metric::nlss ? x.nlss : x.nld_sorted; };
  for (const auto& x : matches) {
    if (!x.matched_by(m)) continue;
    if (!out.empty() && out.back().hf_path.node_index == x.hf_path.node_index) {
      if (score(x) >= score(out.back())) out.back() = x;
    } else {
      out.push_back(x);
    }
  }
  return out;
}

double subset_similarity(std::span<const std::vector<HeadingPath>> files, std::span<const HeadingPath> zd, Metric m,
                         const MatchThresholds& th) {
  if (files.empty()) throw InvalidArgument("subset_similarity needs at least one file");
  std::size_t hits = 0;
  for (const auto& file : files) {
    const auto matches = match_headings(file, zd, th);
    if (matched_heading_count(matches, m) > 0) ++hits;
  }
  return 100.0 * static_cast<double>(hits) / static_cast<double>(files.size());
}

HistogramComparison compare_histograms(const WordHistogram& left, const WordHistogram& right,
                                       const HistogramComparisonConfig& cfg) {
  if (left.empty() || right.empty()) throw InvalidArgument("compare_histograms needs two non-empty histograms");
  HistogramComparison r;

  // Walk the smaller vocabulary to find common words.
  const bool left_small = left.size() <= right.size();
  const WordHistogram& small = left_small ? left : right;
  const WordHistogram& large = left_small ? right : left;
  struct Pair {
    double l;
    double r;
  };
  std::vector<Pair> common;
  for (const auto& [w, n] : small.counts()) {
    const std::uint64_t m = large.count(w);
    if (m == 0) continue;
    const std::uint64_t l = left_small ? n : m;
    const std::uint64_t rr = left_small ? m : n;
    common.push_back({static_cast<double>(l), static_cast<double>(rr)});
    switch (cfg.intersection) {
      case IntersectionMode::min: r.histogram_intersection += std::min(l, rr); break;
      case IntersectionMode::left: r.histogram_intersection += l; break;
      case IntersectionMode::right: r.histogram_intersection += rr; break;
    }
  }
  r.count_common_words = common.size();
  r.count_left_only = left.size() - common.size();
  r.count_right_only = right.size() - common.size();

  double dot = 0.0;
  double common_l2 = 0.0;
  double common_r2 = 0.0;
  double common_l = 0.0;
  double common_r = 0.0;
  for (const auto& p : common) {
    dot += p.l * p.r;
    common_l2 += p.l * p.l;
    common_r2 += p.r * p.r;
    common_l += p.l;
    common_r += p.r;
  }
  if (!common.empty()) {
    double nl = common_l2;
    double nr = common_r2;
    if (cfg.cosine == CosineSupport::full_vocabulary) {
      nl = 0.0;
      nr = 0.0;
      for (const auto& [w, n] : left.counts()) nl += static_cast<double>(n) * static_cast<double>(n);
      for (const auto& [w, n] : right.counts()) nr += static_cast<double>(n) * static_cast<double>(n);
    }
    r.cosine_similarity = std::clamp(dot / (std::sqrt(nl) * std::sqrt(nr)), 0.0, 1.0);
  }

  if (cfg.kl_add_one) {
    // Union support with add-one counts.
    std::unordered_set<std::string_view> vocab;
    for (const auto& [w, n] : left.counts()) vocab.insert(w);
    for (const auto& [w, n] : right.counts()) vocab.insert(w);
    const double v = static_cast<double>(vocab.size());
    const double tl = static_cast<double>(left.total()) + v;
    const double tr = static_cast<double>(right.total()) + v;
    double kl_lr = 0.0;
    double kl_rl = 0.0;
    for (auto w : vocab) {
      const double p = (static_cast<double>(left.count(w)) + 1.0) / tl;
      const double q = (static_cast<double>(right.count(w)) + 1.0) / tr;
      kl_lr += p * std::log(p / q);
      kl_rl += q * std::log(q / p);
    }
    r.kl_right_ref = kl_lr;
    r.kl_left_ref = kl_rl;
    return r;
  }
  if (common.empty()) return r;

  double tl = static_cast<double>(left.total());
  double tr = static_cast<double>(right.total());
  if (cfg.kl_normalization == KlNormalization::common_words) {
    tl = common_l;
    tr = common_r;
  }
  double kl_lr = 0.0;
  double kl_rl = 0.0;
  for (const auto& c : common) {
    const double p = c.l / tl;
    const double q = c.r / tr;
    kl_lr += p * std::log(p / q);
    kl_rl += q * std::log(q / p);
  }
  r.kl_right_ref = kl_lr;
  r.kl_left_ref = kl_rl;
  return r;
}

}  // namespace cardgauge
