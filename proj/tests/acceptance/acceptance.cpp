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

// Acceptance run: prints one [PASS]/[FAIL] line per criterion and exits
// non-zero if any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numeric>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "cardgauge/cohort.hpp"
#include "cardgauge/histogram.hpp"
#include "cardgauge/ingest.hpp"
#include "cardgauge/mdparse.hpp"
#include "cardgauge/pipeline.hpp"
#include "cardgauge/report.hpp"
#include "cardgauge/simmetrics.hpp"
#include "cardgauge/text.hpp"
#include "cardgauge/textprep.hpp"
#include "testkit.hpp"

using namespace cardgauge;
namespace fs = std::filesystem;
using Stopwatch = std::chrono::steady_clock;

namespace {

class Outcome {
 public:
  void expect(bool cond, const std::string& what) {
    if (!cond && ok_) failure_ = what;
    ok_ = ok_ && cond;
  }
  void note(const std::string& s) { notes_ += (notes_.empty() ? "" : "; ") + s; }
  bool ok() const { return ok_; }
  std::string detail() const { return ok_ ? notes_ : failure_ + (notes_.empty() ? "" : " (" + notes_ + ")"); }

 private:
  bool ok_ = true;
  std::string failure_;
  std::string notes_;
};

double seconds_since(Stopwatch::time_point t0) { return std::chrono::duration<double>(Stopwatch::now() - t0).count(); }

std::string sci(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.1e", v);
  return buf;
}

std::string fmt(double v, int prec = 2) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", prec, v);
  return buf;
}

// Worked example: ZD data template against the transcribed model card.
Outcome ac1() {
  Outcome o;
  const auto t0 = Stopwatch::now();
  const auto card = heading_paths(parse_toc(text::read_file(testkit::fixture("worked/hf_model_card.md"))));
  const auto zd = heading_paths(parse_toc(text::read_file(testkit::fixture("worked/zd_data_template.md"))));
  const auto matches = match_headings(card, zd, MatchThresholds{25, 50});
  const auto nlss_count = matched_heading_count(matches, Metric::nlss);
  const auto nld_count = matched_heading_count(matches, Metric::nld);
  o.expect(nlss_count == 5, "NLSS matches " + std::to_string(nlss_count) + " != 5");
  o.expect(nld_count == 2, "NLD matches " + std::to_string(nld_count) + " != 2");

  const std::string z = "Appendix 1: Expanded Dataset Documentation Template ";
  const std::string h = "Model Card for Model ID ";
  struct NlssRow {
    std::string zd, hf;
    std::vector<std::string> common;
    double score;
  };
  const std::vector<NlssRow> nlss_rows{
      {z + "Dataset Identifying Descriptors Contact Details Source URL", h + "Model Details", {"Details"}, 29},
      {z + "Intended Use Out-of-Scope Use", h + "Uses Out-of-Scope Use", {"Out-of-Scope", "Use"}, 43},
      {z + "Dataset Evaluation Data Visualization", h + "Evaluation", {"Evaluation"}, 37},
      {z + "Dataset Evaluation Data Visualization", h + "Evaluation Results", {"Evaluation"}, 28},
      {z + "Dataset Identifying Descriptors Contact Details Source URL", h + "Model Card Contact", {"Contact"}, 29}};
  auto find = [&](const std::string& zd_text, const std::string& hf_text) -> const HeadingMatch* {
    for (const auto& m : matches) {
      if (m.zd_path.text() == zd_text && m.hf_path.text() == hf_text) return &m;
    }
    return nullptr;
  };
  std::string scores;
  for (const auto& row : nlss_rows) {
    const HeadingMatch* m = find(row.zd, row.hf);
    o.expect(m && m->by_nlss, "missing NLSS pair: " + row.hf);
    if (!m) continue;
    o.expect(m->common_words == row.common, "common words differ for " + row.hf);
    o.expect(std::abs(m->nlss - row.score) <= 5, "NLSS " + fmt(m->nlss) + " vs " + fmt(row.score, 0));
    scores += (scores.empty() ? "" : ",") + fmt(m->nlss, 1);
  }
  // Every NLSS-matched card heading appears in the table.
  std::set<std::string> table_hf;
  for (const auto& row : nlss_rows) table_hf.insert(row.hf);
  for (const auto& m : best_matches(matches, Metric::nlss)) {
    o.expect(table_hf.count(m.hf_path.text()) == 1, "unexpected NLSS heading " + m.hf_path.text());
  }

  struct NldRow {
    std::string zd, hf;
    double ratio, sorted;
  };
  const std::vector<NldRow> nld_rows{
      {z + "Dataset Identifying Descriptors", h + "Evaluation Testing Data, Factors & Metrics Testing Data", 44, 51},
      {z + "Intended Use Out-of-Scope Use", h + "Uses Out-of-Scope Use", 51, 53}};
  for (const auto& row : nld_rows) {
    const HeadingMatch* m = find(row.zd, row.hf);
    o.expect(m && m->by_nld, "missing NLD pair: " + row.hf);
    if (!m) continue;
    o.expect(std::abs(m->nld_ratio - row.ratio) <= 5, "NLD ratio " + fmt(m->nld_ratio) + " vs " + fmt(row.ratio, 0));
    o.expect(std::abs(m->nld_sorted - row.sorted) <= 5,
             "NLD sorted " + fmt(m->nld_sorted) + " vs " + fmt(row.sorted, 0));
    scores += " " + fmt(m->nld_ratio, 1) + "/" + fmt(m->nld_sorted, 1);
  }
  const double secs = seconds_since(t0);
  o.expect(secs < 1.0, "runtime " + fmt(secs, 3) + " s");
  o.note(std::to_string(nlss_count) + " NLSS / " + std::to_string(nld_count) + " NLD matches, scores " + scores +
         ", " + fmt(secs, 3) + " s");
  return o;
}

Outcome ac2() {
  Outcome o;
  const auto t0 = Stopwatch::now();
  testkit::Gen gen(2026);
  const std::string alphabet = "abcdeé";
  for (int i = 0; i < 1000; ++i) {
    const std::string a = gen.word(alphabet, 0, 12), b = gen.word(alphabet, 0, 12);
    o.expect(gld(a, b) == testkit::gld_oracle(a, b), "gld(" + a + "," + b + ") differs from oracle");
  }
  for (int i = 0; i < 1000; ++i) {
    const std::string a = gen.word(alphabet, 0, 12), b = gen.word(alphabet, 0, 12), c = gen.word(alphabet, 0, 12);
    o.expect(gld(a, b) == gld(b, a), "symmetry fails for " + a + "," + b);
    o.expect(gld(a, c) <= gld(a, b) + gld(b, c), "triangle fails for " + a + "," + b + "," + c);
    o.expect(gld(a, a) == 0, "identity fails for " + a);
  }
  const double secs = seconds_since(t0);
  o.expect(secs < 10.0, "runtime " + fmt(secs, 3) + " s");
  o.note("1000 oracle pairs, 1000 axiom triples, " + fmt(secs, 3) + " s");
  return o;
}

Outcome ac3() {
  Outcome o;
  testkit::Gen gen(33);
  testkit::ScratchDir dir("ac3");
  for (int round = 0; round < 200; ++round) {
    std::vector<std::string> stream;
    const auto n = gen.range(0, 2000);
    for (std::uint64_t i = 0; i < n; ++i) stream.push_back(gen.word("abcdefgh", 1, 3));
    const WordHistogram direct = histogram_of(stream);

    std::vector<WordHistogram> parts;
    std::size_t pos = 0;
    while (pos < stream.size()) {
      const std::size_t len = gen.range(1, stream.size() - pos);
      parts.push_back(histogram_of(std::span<const std::string>(stream.data() + pos, len)));
      pos += len;
    }
    o.expect(merge(parts) == direct, "merge of parts differs in round " + std::to_string(round));

    const auto a = (dir / "a.tsv").string(), b = (dir / "b.tsv").string(), c = (dir / "c.tsv").string();
    save(direct, a);
    save(load(a), b);
    o.expect(text::read_file(a) == text::read_file(b), "save/load not byte identical");

    std::vector<std::string> shuffled = stream;
    std::shuffle(shuffled.begin(), shuffled.end(), gen.engine());
    save(histogram_of(shuffled), c);
    o.expect(sha256_file(a) == sha256_file(c), "file hash depends on insertion order");
  }
  o.note("200 streams");
  return o;
}

Outcome ac4() {
  Outcome o;
  testkit::Gen gen(44);
  double worst = 0;
  for (int round = 0; round < 100; ++round) {
    WordHistogram l, r;
    const auto nl = gen.range(1, 60), nr = gen.range(1, 60);
    for (std::uint64_t i = 0; i < nl; ++i) l.add(gen.word("abcdefg", 1, 2), gen.range(1, 1000));
    for (std::uint64_t i = 0; i < nr; ++i) r.add(gen.word("abcdefg", 1, 2), gen.range(1, 1000));
    const auto c = compare_histograms(l, r);
    const double dc = std::abs(c.cosine_similarity - testkit::cosine_oracle(l, r));
    worst = std::max(worst, dc);
    o.expect(dc < 1e-9, "cosine differs by " + std::to_string(dc));
    o.expect(c.histogram_intersection <= std::min(l.total(), r.total()), "intersection exceeds min total");
    if (c.count_common_words == 0) {
      o.expect(!c.kl_left_ref && !c.kl_right_ref, "KL defined without common support");
      continue;
    }
    const double dl = std::abs(*c.kl_left_ref - testkit::kl_oracle(r, l));
    const double dr = std::abs(*c.kl_right_ref - testkit::kl_oracle(l, r));
    worst = std::max({worst, dl, dr});
    o.expect(dl < 1e-9 && dr < 1e-9, "KL differs from oracle");
  }
  WordHistogram p, q;
  p.add("a", 9);
  p.add("b", 1);
  q.add("a", 5);
  q.add("b", 5);
  const auto fixed = compare_histograms(p, q);
  o.expect(std::abs(*fixed.kl_left_ref - *fixed.kl_right_ref) > 1e-3, "KL is symmetric on the fixed fixture");
  o.note("100 pairs, max deviation " + sci(worst) + ", KL(q||p)=" + fmt(*fixed.kl_left_ref, 4) +
         " KL(p||q)=" + fmt(*fixed.kl_right_ref, 4));
  return o;
}

ModelRecord synthetic(std::size_t i, std::uint64_t downloads, std::uint64_t likes) {
  ModelRecord r;
  r.model_id = "org/model-" + std::to_string(i);
  r.downloads = downloads;
  r.likes = likes;
  r.status = i % 12 == 0 ? FetchStatus::missing_card : FetchStatus::fetched;
  if (r.status == FetchStatus::fetched) r.card_path = CorpusStore::card_relpath(r.model_id);
  return r;
}

Outcome ac5() {
  Outcome o;
  testkit::Gen gen(55);
  std::vector<ModelRecord> records;
  // Pareto tail: downloads = floor(u^(-1/alpha)) - 1, spanning 0 to ~10^8.
  for (std::size_t i = 0; i < 10000; ++i) {
    const double u = std::max(gen.unit(), 1e-12);
    const auto downloads = static_cast<std::uint64_t>(std::floor(std::pow(u, -1.0 / 0.45))) - 1;
    records.push_back(synthetic(i, downloads, gen.range(0, 4000)));
  }
  std::sort(records.begin(), records.end(), [](const ModelRecord& a, const ModelRecord& b) {
    return a.downloads != b.downloads ? a.downloads > b.downloads : a.model_id < b.model_id;
  });

  // Likes above the threshold for 18 records outside the download top 21 and
  // 2 inside it.
  std::vector<std::size_t> likers{3, 15};
  while (likers.size() < 20) {
    const std::size_t idx = gen.range(21, records.size() - 1);
    if (std::find(likers.begin(), likers.end(), idx) == likers.end()) likers.push_back(idx);
  }
  for (std::size_t idx : likers) records[idx].likes = gen.range(4001, 200000);
  CorpusManifest m;
  m.records = records;

  CohortSpec uni;
  uni.step = 1000;
  const Cohort u = build_cohort(m, uni);
  o.expect(u.members.size() == 10, "uniform size " + std::to_string(u.members.size()));
  for (std::size_t i = 0; i < u.members.size() && i < 10; ++i) {
    o.expect(u.members[i] == records[i * 1000], "uniform member " + std::to_string(i) + " is not index " +
                                                    std::to_string(i * 1000));
  }

  CohortSpec top;
  top.kind = CohortKind::top;
  top.download_threshold = records[21].downloads;
  top.likes_threshold = 4000;
  std::size_t pass_dl = 0, pass_likes = 0, both = 0;
  for (const auto& r : records) {
    const bool d = r.downloads > top.download_threshold, l = r.likes > top.likes_threshold;
    pass_dl += d;
    pass_likes += l;
    both += d && l;
  }
  o.expect(pass_dl == 21 && pass_likes == 20 && both == 2, "threshold construction off: " + std::to_string(pass_dl) +
                                                               "/" + std::to_string(pass_likes) + "/" +
                                                               std::to_string(both));
  const Cohort t = build_cohort(m, top);
  o.expect(t.members.size() == 39, "top size " + std::to_string(t.members.size()));

  CohortSpec cl;
  cl.kind = CohortKind::cluster;
  cl.lo = 1;
  cl.hi = 100000;
  cl.samples_per_bin = 20;
  cl.seed = 2026;
  const Cohort c1 = build_cohort(m, cl), c2 = build_cohort(m, cl);
  o.expect(c1.members.size() <= 100, "cluster size " + std::to_string(c1.members.size()));
  o.expect(c1.members == c2.members, "cluster sampling is not deterministic");
  for (const auto& r : c1.members) o.expect(r.downloads >= 1 && r.downloads < 100000, "cluster member out of range");
  o.note("uniform 10, top " + std::to_string(t.members.size()) + ", cluster " + std::to_string(c1.members.size()) +
         " (" + std::to_string(c1.documented_members.size()) + " documented)");
  return o;
}

Outcome ac6() {
  Outcome o;
  testkit::Gen gen(66);
  double worst = 0;
  for (int round = 0; round < 100; ++round) {
    const auto n = gen.range(3, 200);
    std::vector<double> dl, common;
    for (std::uint64_t i = 0; i < n; ++i) {
      dl.push_back(static_cast<double>(gen.range(1, 1u << 30)));
      common.push_back(static_cast<double>(gen.range(0, 40)));
    }
    const auto rd = rank_descending(dl), rc = rank_descending(common);
    o.expect(rd == testkit::rank_oracle(dl) && rc == testkit::rank_oracle(common), "ranks differ from oracle");
    const double sum = std::accumulate(rc.begin(), rc.end(), 0.0);
    o.expect(std::abs(sum - static_cast<double>(n * (n + 1)) / 2.0) < 1e-9, "tie ranks do not sum to n(n+1)/2");

    const auto rr = pearson(rd, rc);
    const auto ff = pearson(dl, common);
    if (!rr || !ff) continue;
    const double drr = std::abs(*rr - testkit::pearson_oracle(rd, rc));
    const double dff = std::abs(*ff - testkit::pearson_oracle(dl, common));
    worst = std::max({worst, drr, dff});
    o.expect(drr < 1e-12 && dff < 1e-12, "pearson differs from oracle by " + std::to_string(std::max(drr, dff)));

    std::vector<double> logged;
    for (double d : dl) logged.push_back(std::log(d));
    const auto rl = pearson(rank_descending(logged), rc);
    o.expect(rl && *rl == *rr, "rank correlation changes under log transform");
  }
  o.note("100 series, max deviation " + sci(worst));
  return o;
}

std::map<std::string, std::string> snapshot(const fs::path& dir) {
  std::map<std::string, std::string> out;
  for (const auto& e : fs::recursive_directory_iterator(dir)) {
    if (e.is_regular_file()) out[fs::relative(e.path(), dir).string()] = text::read_file(e.path().string());
  }
  return out;
}

Outcome ac7() {
  Outcome o;
  testkit::ScratchDir dir("ac7");
  RunConfig cfg = load_run_config(testkit::fixture("pipeline.yaml"));
  cfg.corpus_dir = dir / "corpus";
  cfg.output_dir = dir / "out";
  const std::vector<Stage> all(std::begin(kAllStages), std::end(kAllStages));
  run_pipeline(cfg, all);

  const auto golden = [](const std::string& name) { return text::read_file(testkit::fixture("golden/" + name)); };
  const auto out = [&](const std::string& name) { return text::read_file((cfg.output_dir / name).string()); };
  o.expect(out("hf.tsv") == golden("hf.tsv"), "hf.tsv differs from golden");
  o.expect(out("zd.tsv") == golden("zd.tsv"), "zd.tsv differs from golden");

  WordGapReport got = gap_report_from_json(out("gap_report.json"));
  WordGapReport want = gap_report_from_json(golden("gap_report.json"));
  got.generated_at.clear();
  want.generated_at.clear();
  o.expect(got == want, "gap report differs from golden");

  // Partition by brute-force set operations over the two histograms.
  const WordHistogram zd = load((cfg.output_dir / "zd.tsv").string());
  const WordHistogram hf = load((cfg.output_dir / "hf.tsv").string());
  std::set<std::string> zd_words, hf_words, common, left_only, right_only;
  for (const auto& w : zd.vocabulary()) zd_words.insert(w);
  for (const auto& w : hf.vocabulary()) hf_words.insert(w);
  std::set_intersection(zd_words.begin(), zd_words.end(), hf_words.begin(), hf_words.end(),
                        std::inserter(common, common.end()));
  std::set_difference(zd_words.begin(), zd_words.end(), hf_words.begin(), hf_words.end(),
                      std::inserter(left_only, left_only.end()));
  std::set_difference(hf_words.begin(), hf_words.end(), zd_words.begin(), zd_words.end(),
                      std::inserter(right_only, right_only.end()));
  std::set<std::string> got_common, got_left;
  for (const auto& c : got.common) {
    got_common.insert(c.word);
    o.expect(c.product == c.f_left * c.f_right && c.f_left == zd.count(c.word) && c.f_right == hf.count(c.word),
             "wrong frequencies for " + c.word);
  }
  for (const auto& [w, n] : got.left_only) got_left.insert(w);
  o.expect(got_common == common, "common set differs from set intersection");
  o.expect(got_left == left_only, "left-only set differs from set difference");
  o.expect(got.right_only_count == right_only.size(), "right-only count differs");
  for (const auto& [w, n] : got.right_only_top) o.expect(right_only.count(w) == 1, "right-only word " + w);
  for (std::size_t i = 1; i < got.common.size(); ++i) {
    o.expect(got.common[i - 1].product >= got.common[i].product, "common list not product-sorted");
  }

  const auto before = snapshot(dir.path());
  const auto rerun = run_pipeline(cfg, all);
  for (const auto& s : rerun) o.expect(!s.ran, "stage " + std::string(stage_name(s.stage)) + " reran");
  o.expect(snapshot(dir.path()) == before, "rerun changed files");
  o.note(std::to_string(common.size()) + " common, " + std::to_string(left_only.size()) + " ZD-only, " +
         std::to_string(right_only.size()) + " HF-only; rerun unchanged");
  return o;
}

Outcome ac8() {
  Outcome o;
  testkit::ScratchDir dir("ac8");
  testkit::Gen gen(88);
  std::vector<std::string> vocab;
  for (int i = 0; i < 5000; ++i) vocab.push_back(gen.word("abcdefghijklmnopqrstuvwyz", 2, 10));
  const std::vector<std::string> common{"the", "model", "and", "of", "data", "training", "is", "for", "to", "a"};
  const std::size_t cards = 10000;
  std::vector<fs::path> paths;
  fs::create_directories(dir / "cards");
  for (std::size_t i = 0; i < cards; ++i) {
    std::string card = "---\nlicense: apache-2.0\n---\n# Model card " + std::to_string(i) + "\n";
    while (card.size() < 5000) {
      if (gen.coin(0.05)) card += "\n## " + gen.pick(vocab) + " " + gen.pick(vocab) + "\n";
      card += gen.coin(0.4) ? gen.pick(common) : gen.pick(vocab);
      card += gen.coin(0.1) ? ", **" + gen.pick(vocab) + "** " : " ";
    }
    paths.push_back(dir / "cards" / (std::to_string(i) + ".md"));
    text::write_file_atomic(paths.back().string(), card);
  }
  FilterConfig cfg;
  cfg.stop_words = builtin_stop_words();
  const auto t0 = Stopwatch::now();
  WordHistogram h;
  for (const auto& p : paths) {
    for_each_token(text::read_file(p.string()), cfg, [&](std::string&& t) { h.add(std::move(t)); });
  }
  const double secs = seconds_since(t0);
  o.expect(secs < 60.0, "took " + fmt(secs) + " s");
  o.expect(h.total() > 0, "empty histogram");
  o.note(std::to_string(cards) + " cards in " + fmt(secs) + " s (" + fmt(cards / secs, 0) + " files/s, one thread)");
  return o;
}

Outcome ac9() {
  Outcome o;
  FilterConfig cfg;
  cfg.stop_words = builtin_stop_words();
  const std::vector<std::string> stops(cfg.stop_words.begin(), cfg.stop_words.end());
  const std::vector<std::string> pieces{"#", "###", "*", "**", "_", "__", "`", "```", ">", "|", "---", "[", "]",
                                        "[x](y)", "(", ")", "\\x00\\x01\\x02", "xx", "XxX", "exam", "Model",
                                        "out-of-scope", "\n", "\r\n", " ", "\t", ".", ",", "\xC3\xA9"};
  testkit::Gen gen(99);
  std::size_t emitted = 0;
  for (int round = 0; round < 2000; ++round) {
    std::string text;
    const auto n = gen.range(0, 60);
    for (std::uint64_t i = 0; i < n; ++i) {
      text += gen.coin(0.3) ? gen.pick(stops) : gen.pick(pieces);
      if (gen.coin(0.5)) text += gen.coin(0.5) ? " " : "\n";
    }
    for (const auto& t : tokenize(text, cfg)) {
      ++emitted;
      o.expect(cfg.stop_words.count(t) == 0, "stop word emitted: " + t);
      o.expect(t.find_first_of("#*_`>|[]") == std::string::npos && t.find("---") == std::string::npos,
               "markdown symbol emitted: " + t);
      o.expect(std::count_if(t.begin(), t.end(), [](char c) { return c == 'x' || c == 'X'; }) <= 2,
               "x-rule violated: " + t);
    }
  }

  testkit::ScratchDir dir("ac9");
  std::vector<testkit::HubModel> models{{"small/card", 10, 0, std::string(4096, 'a')},
                                        {"huge/card", 20, 0, std::string(2 * 1024 * 1024, 'b')}};
  testkit::MockHub hub(models, 10);
  ManualClock clock;
  HubClient client(hub, clock, testkit::mock_hub_config(10));
  CorpusStore store(dir.path());
  FetchOptions opts;
  opts.size_cutoff_bytes = 1024 * 1024;
  opts.batch_count = 1;
  fetch_corpus(client, store, opts);
  const CorpusManifest m = load_manifest(dir.path());
  const auto it = std::find_if(m.records.begin(), m.records.end(),
                               [](const ModelRecord& r) { return r.model_id == "huge/card"; });
  o.expect(it != m.records.end() && it->status == FetchStatus::filtered_oversize,
           "2 MB card not recorded as filtered_oversize");
  o.expect(!fs::exists(dir / CorpusStore::card_relpath("huge/card")), "oversize card stored");
  o.expect(m.records.size() == 2 && m.status_counts().at(FetchStatus::fetched) == 1, "small card not fetched");
  o.note(std::to_string(emitted) + " tokens checked; 2 MB card filtered_oversize");
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"AC1 worked-example fidelity", ac1},     {"AC2 edit-distance oracle", ac2},
      {"AC3 histogram algebra", ac3},           {"AC4 histogram comparison oracles", ac4},
      {"AC5 cohort construction", ac5},         {"AC6 correlation oracle", ac6},
      {"AC7 end-to-end golden run", ac7},       {"AC8 throughput", ac8},
      {"AC9 filtering rules", ac9}};
  int failed = 0;
  for (const auto& [name, run] : criteria) {
    Outcome o;
    try {
      o = run();
    } catch (const std::exception& e) {
      o.expect(false, std::string("exception: ") + e.what());
    }
    std::printf("[%s] %s: %s\n", o.ok() ? "PASS" : "FAIL", name.c_str(), o.detail().c_str());
    std::fflush(stdout);
    failed += !o.ok();
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed ? 1 : 0;
}
