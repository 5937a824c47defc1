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

// cardgauge: model-card documentation quality against reference templates.

#include <CLI11.hpp>

#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "cardgauge/cohort.hpp"
#include "cardgauge/histogram.hpp"
#include "cardgauge/ingest.hpp"
#include "cardgauge/mdparse.hpp"
#include "cardgauge/pipeline.hpp"
#include "cardgauge/report.hpp"
#include "cardgauge/simmetrics.hpp"
#include "cardgauge/text.hpp"
#include "cardgauge/textprep.hpp"

namespace fs = std::filesystem;
using namespace cardgauge;

namespace {

// Flags shared with the config file. A flag given on the command line wins.
struct Overrides {
  std::string stop_words;
  int max_x = 2;
  bool no_lowercase = false;
  std::string thresholds;
  std::size_t workers = 4;
  CLI::Option* stop_words_opt = nullptr;
  CLI::Option* max_x_opt = nullptr;
  CLI::Option* thresholds_opt = nullptr;
  CLI::Option* workers_opt = nullptr;
};

void add_filter_flags(CLI::App* cmd, Overrides& o) {
  o.stop_words_opt = cmd->add_option("--stopwords", o.stop_words, "Stop list file, or 'builtin'");
  o.max_x_opt = cmd->add_option("--max-x", o.max_x, "Drop tokens with more than N 'x' characters");
  cmd->add_flag("--no-lowercase", o.no_lowercase, "Keep token case");
}

MatchThresholds parse_thresholds(const std::string& s) {
  const auto comma = s.find(',');
  if (comma == std::string::npos) throw InvalidArgument("--thresholds expects NLSS,NLD");
  MatchThresholds th;
  try {
    th.nlss_match = std::stod(s.substr(0, comma));
    th.nld_match = std::stod(s.substr(comma + 1));
  } catch (const std::exception&) {
    throw InvalidArgument("--thresholds expects two numbers, got '" + s + "'");
  }
  th.validate();
  return th;
}

void apply(RunConfig& cfg, const Overrides& o) {
  if (o.stop_words_opt && o.stop_words_opt->count()) cfg.stop_words = o.stop_words;
  if (o.max_x_opt && o.max_x_opt->count()) cfg.max_x_occurrences = o.max_x;
  if (o.no_lowercase) cfg.lowercase = false;
  if (o.thresholds_opt && o.thresholds_opt->count()) cfg.thresholds = parse_thresholds(o.thresholds);
  if (o.workers_opt && o.workers_opt->count()) cfg.workers = o.workers;
}

void write_output(const std::string& path, const std::string& data) {
  if (path.empty() || path == "-") {
    std::cout << data;
  } else {
    text::write_file_atomic(path, data);
  }
}

std::pair<std::uint64_t, std::uint64_t> parse_range(const std::string& s) {
  const auto comma = s.find(',');
  if (comma == std::string::npos) throw InvalidArgument("--range expects LO,HI");
  try {
    return {std::stoull(s.substr(0, comma)), std::stoull(s.substr(comma + 1))};
  } catch (const std::exception&) {
    throw InvalidArgument("--range expects two integers, got '" + s + "'");
  }
}

fs::path corpus_root(const std::string& manifest_or_dir) {
  const fs::path p(manifest_or_dir);
  return fs::is_directory(p) ? p : p.parent_path();
}

std::vector<Stage> parse_stages(const std::string& list) {
  if (list.empty() || list == "all") return {std::begin(kAllStages), std::end(kAllStages)};
  std::vector<Stage> out;
  std::stringstream ss(list);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_stage(std::string(text::trim(item))));
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Measure model-card documentation quality against reference templates"};
  app.require_subcommand(1);
  std::string config_path;
  app.add_option("--config", config_path, "YAML run configuration")->check(CLI::ExistingFile);

  Overrides ov;

  // fetch
  auto* fetch = app.add_subcommand("fetch", "Download a hub listing and cards, or import a local corpus");
  std::string f_endpoint, f_out, f_local, f_metadata;
  std::size_t f_batches = 15, f_page_size = 1000, f_max_cards = 0;
  std::uint64_t f_cutoff = 1048576;
  std::int64_t f_pace = 500;
  bool f_resume = false;
  auto* f_endpoint_opt = fetch->add_option("--endpoint", f_endpoint, "Hub base URL");
  fetch->add_option("--out", f_out, "Corpus store directory")->required();
  auto* f_batches_opt = fetch->add_option("--batches", f_batches, "Number of manifest batches");
  auto* f_cutoff_opt = fetch->add_option("--cutoff-bytes", f_cutoff, "Discard cards larger than this");
  auto* f_pace_opt = fetch->add_option("--pace-ms", f_pace, "Minimum spacing between requests");
  auto* f_page_opt = fetch->add_option("--page-size", f_page_size, "Listing page size");
  fetch->add_option("--max-cards", f_max_cards, "Stop after N downloads");
  fetch->add_flag("--resume", f_resume, "Continue an interrupted fetch");
  auto* f_local_opt = fetch->add_option("--local", f_local, "Import <DIR>/<model_id>/README.md instead of fetching");
  fetch->add_option("--metadata", f_metadata, "Sidecar JSONL for --local (default <DIR>/metadata.jsonl)");
  ov.workers_opt = fetch->add_option("--workers", ov.workers, "Concurrent downloads");
  f_local_opt->excludes(f_endpoint_opt);

  // tokens
  auto* tokens = app.add_subcommand("tokens", "Print the filtered tokens of a file, one per line");
  std::string t_file;
  tokens->add_option("FILE", t_file)->required()->check(CLI::ExistingFile);
  add_filter_flags(tokens, ov);

  // toc
  auto* toc = app.add_subcommand("toc", "Export the heading tree of a Markdown file");
  std::string toc_file, toc_format = "json", toc_out;
  toc->add_option("FILE", toc_file)->required()->check(CLI::ExistingFile);
  toc->add_option("--format", toc_format, "dot or json");
  toc->add_option("--out", toc_out, "Output file (default stdout)");

  // hist
  auto* hist = app.add_subcommand("hist", "Build a word histogram of a corpus or a single file");
  std::string h_corpus, h_file, h_out;
  auto* h_corpus_opt = hist->add_option("--corpus", h_corpus, "Corpus store directory");
  auto* h_file_opt = hist->add_option("--file", h_file, "Single file")->check(CLI::ExistingFile);
  hist->add_option("--out", h_out, "Output TSV (default stdout)");
  add_filter_flags(hist, ov);
  auto* h_workers_opt = hist->add_option("--workers", ov.workers, "Parallel batches");
  h_corpus_opt->excludes(h_file_opt);

  // toc-sim
  auto* tocsim = app.add_subcommand("toc-sim", "Match card headings against template headings");
  std::string ts_card, ts_template, ts_metric = "nlss", ts_format = "json", ts_output;
  bool ts_best = false;
  tocsim->add_option("--card", ts_card)->required()->check(CLI::ExistingFile);
  tocsim->add_option("--template", ts_template)->required()->check(CLI::ExistingFile);
  tocsim->add_option("--metric", ts_metric, "nlss or nld: pairs to list");
  auto* ts_th_opt = tocsim->add_option("--thresholds", ov.thresholds, "NLSS,NLD match thresholds");
  tocsim->add_option("--out", ts_format, "json, csv or markdown");
  tocsim->add_option("--output", ts_output, "Output file (default stdout)");
  tocsim->add_flag("--best", ts_best, "Only the strongest pair per card heading");

  // hist-sim
  auto* histsim = app.add_subcommand("hist-sim", "Compare two word histograms");
  std::string hs_left, hs_right, hs_format = "json", hs_output, hs_cosine = "full", hs_kl = "full",
                                  hs_inter = "min";
  bool hs_add_one = false;
  histsim->add_option("--left", hs_left, "Reference histogram TSV")->required()->check(CLI::ExistingFile);
  histsim->add_option("--right", hs_right, "Compared histogram TSV")->required()->check(CLI::ExistingFile);
  histsim->add_option("--out", hs_format, "json, csv or markdown");
  histsim->add_option("--output", hs_output, "Output file (default stdout)");
  histsim->add_option("--cosine", hs_cosine, "Cosine denominators: full or common")
      ->check(CLI::IsMember({"full", "common"}));
  histsim->add_option("--kl-norm", hs_kl, "KL normalisation: full or common")->check(CLI::IsMember({"full", "common"}));
  histsim->add_option("--intersection", hs_inter, "min, left or right")->check(CLI::IsMember({"min", "left", "right"}));
  histsim->add_flag("--kl-add-one", hs_add_one, "Add-one smoothing over the union vocabulary");

  // cohort
  auto* cohort = app.add_subcommand("cohort", "Sample a cohort from a corpus manifest");
  std::string c_manifest, c_kind = "uniform", c_range = "1,100000", c_out, c_bins_out;
  CohortSpec c_spec;
  cohort->add_option("--manifest", c_manifest, "Corpus directory or its manifest.jsonl")->required();
  cohort->add_option("--kind", c_kind, "uniform, top or cluster");
  cohort->add_option("--step", c_spec.step, "uniform: take every N-th record");
  cohort->add_option("--dl-th", c_spec.download_threshold, "top: downloads threshold");
  cohort->add_option("--likes-th", c_spec.likes_threshold, "top: likes threshold");
  cohort->add_option("--range", c_range, "cluster: download range LO,HI");
  cohort->add_option("--per-bin", c_spec.samples_per_bin, "cluster: samples per download bin");
  auto* c_seed_opt = cohort->add_option("--seed", c_spec.seed, "cluster: random seed");
  cohort->add_option("--out", c_out, "Output cohort JSON (default stdout)");
  cohort->add_option("--bins-out", c_bins_out, "Also write download-bin counts as CSV");

  // correlate
  auto* corr = app.add_subcommand("correlate", "Correlate downloads with template word overlap");
  std::string cr_cohort, cr_reference = "zd-common", cr_format = "json", cr_output, cr_corpus, cr_zd, cr_hf;
  corr->add_option("--cohort", cr_cohort)->required()->check(CLI::ExistingFile);
  corr->add_option("--reference", cr_reference, "zd-common or hf-all");
  corr->add_option("--corpus", cr_corpus, "Corpus store directory")->required();
  corr->add_option("--zd", cr_zd, "Template histogram TSV")->required()->check(CLI::ExistingFile);
  corr->add_option("--hf", cr_hf, "Corpus histogram TSV")->required()->check(CLI::ExistingFile);
  corr->add_option("--out", cr_format, "json, csv or markdown");
  corr->add_option("--output", cr_output, "Output file (default stdout)");
  add_filter_flags(corr, ov);

  // suggest
  auto* suggest = app.add_subcommand("suggest", "Report common and missing words for template updates");
  std::string sg_zd, sg_hf, sg_format = "markdown", sg_output;
  std::size_t sg_top_k = 20;
  suggest->add_option("--zd", sg_zd)->required()->check(CLI::ExistingFile);
  suggest->add_option("--hf", sg_hf)->required()->check(CLI::ExistingFile);
  auto* sg_top_opt = suggest->add_option("--top-k", sg_top_k, "Rows per list");
  suggest->add_option("--format", sg_format, "json, csv or markdown");
  suggest->add_option("--output", sg_output, "Output file (default stdout)");

  // score
  auto* score = app.add_subcommand("score", "Score one card against a template");
  std::string sc_card, sc_headings, sc_hist, sc_format = "json", sc_id, sc_output;
  score->add_option("--card", sc_card)->required()->check(CLI::ExistingFile);
  score->add_option("--zd-headings", sc_headings, "Template Markdown")->required()->check(CLI::ExistingFile);
  score->add_option("--zd-hist", sc_hist, "Template histogram TSV")->required()->check(CLI::ExistingFile);
  score->add_option("--id", sc_id, "Model id to report (default: file name)");
  score->add_option("--format", sc_format, "json, csv or markdown");
  score->add_option("--output", sc_output, "Output file (default stdout)");
  auto* sc_th_opt = score->add_option("--thresholds", ov.thresholds, "NLSS,NLD match thresholds");
  add_filter_flags(score, ov);

  // pipeline
  auto* pipe = app.add_subcommand("pipeline", "Run pipeline stages with artifact caching");
  std::string p_stages = "all", p_output_dir, p_corpus_dir, p_local, p_endpoint, p_template;
  std::uint64_t p_seed = 0;
  pipe->add_option("--stages", p_stages, "Comma-separated stages or 'all'");
  auto* p_out_opt = pipe->add_option("--output-dir", p_output_dir);
  auto* p_corpus_opt = pipe->add_option("--corpus-dir", p_corpus_dir);
  auto* p_local_opt = pipe->add_option("--local", p_local, "Local corpus source");
  auto* p_endpoint_opt = pipe->add_option("--endpoint", p_endpoint);
  auto* p_template_opt = pipe->add_option("--zd-template", p_template);
  auto* p_seed_opt = pipe->add_option("--seed", p_seed);
  auto* p_workers_opt = pipe->add_option("--workers", ov.workers);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    RunConfig cfg = config_path.empty() ? RunConfig{} : load_run_config(config_path);
    for (auto* o : {h_workers_opt, p_workers_opt}) {
      if (o->count()) ov.workers_opt = o;
    }
    for (auto* o : {ts_th_opt, sc_th_opt}) {
      if (o->count()) ov.thresholds_opt = o;
    }
    apply(cfg, ov);

    if (*fetch) {
      if (f_batches_opt->count()) cfg.batches = f_batches;
      if (f_cutoff_opt->count()) cfg.size_cutoff_bytes = f_cutoff;
      if (f_pace_opt->count()) cfg.pace_ms = f_pace;
      if (f_page_opt->count()) cfg.page_size = f_page_size;
      if (f_endpoint_opt->count()) cfg.endpoint = f_endpoint;
      cfg.validate();
      CorpusStore store(f_out);
      SystemClock clock;
      CorpusManifest m;
      if (!f_local.empty()) {
        const fs::path sidecar = f_metadata.empty() ? fs::path(f_local) / "metadata.jsonl" : fs::path(f_metadata);
        m = import_local(f_local, sidecar, store, cfg.size_cutoff_bytes, cfg.batches, clock);
      } else {
        if (!cfg.endpoint) throw InvalidArgument("fetch needs --endpoint or --local");
        std::optional<std::string> token;
        if (const char* t = std::getenv("CARDGAUGE_HUB_TOKEN"); t && *t) token = t;
        HttplibTransport transport(token);
        HubConfig hc;
        hc.endpoint = *cfg.endpoint;
        hc.page_size = cfg.page_size;
        hc.pace = std::chrono::milliseconds(cfg.pace_ms);
        HubClient client(transport, clock, hc);
        FetchOptions fo;
        fo.size_cutoff_bytes = cfg.size_cutoff_bytes;
        fo.workers = cfg.workers;
        fo.batch_count = cfg.batches;
        fo.resume = f_resume;
        fo.max_cards = f_max_cards;
        m = fetch_corpus(client, store, fo);
      }
      for (const auto& [status, n] : m.status_counts()) std::cerr << status_name(status) << "\t" << n << "\n";
      return 0;
    }

    if (*tokens) {
      const FilterConfig fc = cfg.filter();
      for_each_token(text::read_file(t_file), fc, [](std::string&& tok) { std::cout << tok << '\n'; });
      return 0;
    }

    if (*toc) {
      write_output(toc_out, export_tree(parse_toc(text::read_file(toc_file)), parse_tree_format(toc_format)));
      return 0;
    }

    if (*hist) {
      const FilterConfig fc = cfg.filter();
      WordHistogram h;
      if (!h_corpus.empty()) {
        const CorpusStore store(h_corpus);
        h = corpus_histogram(load_manifest(h_corpus), store, fc, cfg.workers);
      } else if (!h_file.empty()) {
        h = text_histogram(text::read_file(h_file), fc);
      } else {
        throw InvalidArgument("hist needs --corpus or --file");
      }
      write_output(h_out, to_tsv(h));
      return 0;
    }

    if (*tocsim) {
      const auto hf = heading_paths(parse_toc(text::read_file(ts_card)));
      const auto zd = heading_paths(parse_toc(text::read_file(ts_template)));
      const auto r = toc_sim_report(hf, zd, cfg.thresholds, parse_metric(ts_metric), ts_best);
      write_output(ts_output, emit(r, parse_output_format(ts_format)));
      return 0;
    }

    if (*histsim) {
      HistogramComparisonConfig hc;
      hc.cosine = hs_cosine == "common" ? CosineSupport::common_words : CosineSupport::full_vocabulary;
      hc.kl_normalization = hs_kl == "common" ? KlNormalization::common_words : KlNormalization::full_vocabulary;
      hc.intersection = hs_inter == "left"    ? IntersectionMode::left
                        : hs_inter == "right" ? IntersectionMode::right
                                              : IntersectionMode::min;
      hc.kl_add_one = hs_add_one;
      const auto cmp = compare_histograms(load(hs_left), load(hs_right), hc);
      write_output(hs_output, emit(cmp, parse_output_format(hs_format)));
      return 0;
    }

    if (*cohort) {
      c_spec.kind = parse_cohort_kind(c_kind);
      std::tie(c_spec.lo, c_spec.hi) = parse_range(c_range);
      if (!c_seed_opt->count()) c_spec.seed = cfg.seed;
      const CorpusManifest m = load_manifest(corpus_root(c_manifest));
      const Cohort c = build_cohort(m, c_spec);
      write_output(c_out, cohort_to_json(c));
      if (!c_bins_out.empty()) text::write_file_atomic(c_bins_out, emit(download_bins(m.records), OutputFormat::csv));
      std::cerr << "members\t" << c.members.size() << "\ndocumented\t" << c.documented_members.size() << "\n";
      return 0;
    }

    if (*corr) {
      const ReferenceKind ref = parse_reference_kind(cr_reference);
      const FilterConfig fc = cfg.filter();
      const Cohort c = cohort_from_json(text::read_file(cr_cohort));
      const auto words = reference_words(ref, load(cr_zd), load(cr_hf));
      const CorpusStore store(cr_corpus);
      const auto hists = per_file_histograms(c.documented_members, store, fc, cfg.workers);
      write_output(cr_output, emit(correlate(c, words, hists, ref), parse_output_format(cr_format)));
      return 0;
    }

    if (*suggest) {
      const std::size_t k = sg_top_opt->count() ? sg_top_k : cfg.top_k;
      WordHistogram zd = load(sg_zd);
      WordHistogram hf = load(sg_hf);
      zd.set_label("ZD");
      hf.set_label("HF");
      const auto r = gap_report(zd, hf, k, format_utc(std::chrono::system_clock::now()));
      write_output(sg_output, emit(r, parse_output_format(sg_format)));
      return 0;
    }

    if (*score) {
      const FilterConfig fc = cfg.filter();
      const std::string body = text::read_file(sc_card);
      const auto s = score_card(sc_id.empty() ? fs::path(sc_card).stem().string() : sc_id,
                                heading_paths(parse_toc(body)), text_histogram(body, fc),
                                heading_paths(parse_toc(text::read_file(sc_headings))), load(sc_hist), cfg.thresholds);
      write_output(sc_output, emit(s, parse_output_format(sc_format)));
      return 0;
    }

    if (*pipe) {
      if (p_out_opt->count()) cfg.output_dir = p_output_dir;
      if (p_corpus_opt->count()) cfg.corpus_dir = p_corpus_dir;
      if (p_local_opt->count()) {
        cfg.local_source = fs::path(p_local);
        cfg.endpoint.reset();
      }
      if (p_endpoint_opt->count()) cfg.endpoint = p_endpoint;
      if (p_template_opt->count()) cfg.zd_template = p_template;
      if (p_seed_opt->count()) cfg.seed = p_seed;
      for (const auto& o : run_pipeline(cfg, parse_stages(p_stages))) {
        std::cerr << stage_name(o.stage) << "\t" << (o.ran ? "ran" : "up to date") << "\n";
      }
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "cardgauge: error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
