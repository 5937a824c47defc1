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

#include "cardgauge/pipeline.hpp"

#include <openssl/evp.h>
#include <yaml-cpp/yaml.h>

#include <algorithm>
#include <atomic>
#include <fstream>
#include <nlohmann/json.hpp>
#include <set>
#include <thread>

#include "cardgauge/mdparse.hpp"
#include "cardgauge/report.hpp"
#include "cardgauge/text.hpp"

namespace cardgauge {
namespace fs = std::filesystem;
using nlohmann::json;
using nlohmann::ordered_json;

namespace {

// ---------------------------------------------------------------------------
// Config

void check_keys(const YAML::Node& node, std::string_view where, std::initializer_list<std::string_view> allowed) {
  if (!node.IsMap()) throw InvalidArgument(std::string(where) + " must be a mapping");
  for (const auto& kv : node) {
    const auto key = kv.first.as<std::string>();
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
      throw InvalidArgument("unknown config key: " + (where.empty() ? key : std::string(where) + "." + key));
    }
  }
}

template <typename T>
void read(const YAML::Node& node, const char* key, T& out, std::string_view where) {
  const YAML::Node v = node[key];
  if (!v) return;
  try {
    out = v.as<T>();
  } catch (const YAML::Exception&) {
    throw InvalidArgument("config key " + std::string(where) + (where.empty() ? "" : ".") + key + " has the wrong type");
  }
}

fs::path resolve(const fs::path& base, const std::string& p) {
  const fs::path path(p);
  if (path.is_absolute() || base.empty()) return path;
  return (base / path).lexically_normal();
}

void read_path(const YAML::Node& node, const char* key, fs::path& out, const fs::path& base, std::string_view where) {
  std::string s;
  read(node, key, s, where);
  if (!s.empty()) out = resolve(base, s);
}

void read_opt_path(const YAML::Node& node, const char* key, std::optional<fs::path>& out, const fs::path& base,
                   std::string_view where) {
  std::string s;
  read(node, key, s, where);
  if (!s.empty()) out = resolve(base, s);
}

// ---------------------------------------------------------------------------
// Stamps

std::string card_digest(const CorpusManifest& m, const fs::path& root) {
  std::string lines;
  for (const auto& r : m.records) {
    if (r.status != FetchStatus::fetched || !r.card_path) continue;
    lines += r.model_id + "\t" + sha256_file(root / *r.card_path) + "\n";
  }
  return sha256_hex(lines);
}

struct StageSpec {
  Stage stage;
  // Named input digests.
  std::map<std::string, std::string> inputs;
  std::string settings;
  std::vector<fs::path> outputs;
};

fs::path stamp_path(const RunConfig& cfg, Stage s) {
  return cfg.output_dir / ".stamps" / (std::string(stage_name(s)) + ".json");
}

bool stamp_matches(const RunConfig& cfg, const StageSpec& spec) {
  const fs::path p = stamp_path(cfg, spec.stage);
  if (!fs::exists(p)) return false;
  try {
    const json j = json::parse(text::read_file(p.string()));
    if (j.at("inputs").get<std::map<std::string, std::string>>() != spec.inputs) return false;
    if (j.at("settings").get<std::string>() != sha256_hex(spec.settings)) return false;
    const auto outputs = j.at("outputs").get<std::map<std::string, std::string>>();
    if (outputs.size() != spec.outputs.size()) return false;
    for (const auto& o : spec.outputs) {
      const auto it = outputs.find(o.string());
      if (it == outputs.end() || !fs::exists(o) || sha256_file(o) != it->second) return false;
    }
    return true;
  } catch (const std::exception&) {
    return false;
  }
}

void write_stamp(const RunConfig& cfg, const StageSpec& spec) {
  ordered_json j;
  j["stage"] = std::string(stage_name(spec.stage));
  j["inputs"] = spec.inputs;
  j["settings"] = sha256_hex(spec.settings);
  ordered_json outs = ordered_json::object();
  for (const auto& o : spec.outputs) outs[o.string()] = sha256_file(o);
  j["outputs"] = outs;
  text::write_file_atomic(stamp_path(cfg, spec.stage).string(), j.dump(2) + "\n");
}

std::string filter_settings(const RunConfig& cfg) {
  return "stop_words=" + cfg.stop_words + ";max_x=" + std::to_string(cfg.max_x_occurrences) +
         ";lowercase=" + (cfg.lowercase ? "1" : "0");
}

std::string threshold_settings(const RunConfig& cfg) {
  return "nlss=" + std::to_string(cfg.thresholds.nlss_match) + ";nld=" + std::to_string(cfg.thresholds.nld_match);
}

// ---------------------------------------------------------------------------
// Runner

class Runner {
 public:
  Runner(const RunConfig& cfg, const PipelineHooks& hooks) : cfg_(cfg), hooks_(hooks) {}

  StageOutcome run(Stage s) {
    current_ = s;
    try {
      switch (s) {
        case Stage::ingest: return ingest();
        case Stage::hist: return hist();
        case Stage::zd_hist: return zd_hist();
        case Stage::compare: return compare();
        case Stage::toc_sim: return toc_sim();
        case Stage::score: return score();
        case Stage::cohort: return cohort();
        case Stage::correlate: return correlate_stage();
        case Stage::suggest: return suggest();
      }
    } catch (const PipelineError&) {
      throw;
    } catch (const std::exception& e) {
      throw PipelineError(s, e.what());
    }
    throw PipelineError(s, "unknown stage");
  }

 private:
  fs::path out(const char* name) const { return cfg_.output_dir / name; }
  fs::path manifest_path() const { return cfg_.corpus_dir / "manifest.jsonl"; }

  // Fails with a pointer to the producing stage when `p` does not exist.
  void require(const fs::path& p, Stage producer) const {
    if (!fs::exists(p)) {
      throw PipelineError(current_, "missing " + p.string() + "; run stage '" + std::string(stage_name(producer)) +
                                        "' first");
    }
  }

  const CorpusManifest& manifest() {
    require(manifest_path(), Stage::ingest);
    if (!manifest_) manifest_ = load_manifest(cfg_.corpus_dir);
    return *manifest_;
  }

  const std::string& cards() {
    if (!cards_) cards_ = card_digest(manifest(), cfg_.corpus_dir);
    return *cards_;
  }

  const FilterConfig& filter() {
    if (!filter_) filter_ = cfg_.filter();
    return *filter_;
  }

  std::string input(const fs::path& p, Stage producer) const {
    require(p, producer);
    return sha256_file(p);
  }

  const fs::path& zd_template() const {
    if (cfg_.zd_template.empty()) throw PipelineError(current_, "zd_template is not configured");
    if (!fs::exists(cfg_.zd_template)) throw PipelineError(current_, "zd_template not found: " + cfg_.zd_template.string());
    return cfg_.zd_template;
  }

  template <typename Body>
  StageOutcome stage(StageSpec spec, Body&& body) {
    StageOutcome o{spec.stage, false, spec.outputs};
    if (stamp_matches(cfg_, spec)) return o;
    body();
    write_stamp(cfg_, spec);
    o.ran = true;
    return o;
  }

  static void write(const fs::path& p, std::string_view data) { text::write_file_atomic(p.string(), data); }

  StageOutcome ingest() {
    StageSpec spec{Stage::ingest, {}, {}, {manifest_path(), cfg_.corpus_dir / "manifest.meta.json"}};
    std::string settings = "cutoff=" + std::to_string(cfg_.size_cutoff_bytes) + ";batches=" + std::to_string(cfg_.batches);
    if (cfg_.endpoint) {
      spec.settings = settings + ";endpoint=" + *cfg_.endpoint + ";page_size=" + std::to_string(cfg_.page_size);
    } else {
      if (!cfg_.local_source) throw PipelineError(Stage::ingest, "neither endpoint nor local_source is configured");
      const fs::path src = *cfg_.local_source;
      const fs::path sidecar = cfg_.local_metadata.value_or(src / "metadata.jsonl");
      if (!fs::exists(sidecar)) throw PipelineError(Stage::ingest, "metadata sidecar not found: " + sidecar.string());
      std::string lines;
      for (const auto& entry : fs::recursive_directory_iterator(src)) {
        if (entry.is_regular_file() && entry.path().filename() == "README.md") {
          lines += fs::relative(entry.path(), src).generic_string() + "\t" + sha256_file(entry.path()) + "\n";
        }
      }
      std::vector<std::string> sorted;
      for (auto l : text::split_lines(lines)) sorted.emplace_back(l);
      std::sort(sorted.begin(), sorted.end());
      spec.inputs["local_cards"] = sha256_hex(text::join(sorted, "\n"));
      spec.inputs["metadata"] = sha256_file(sidecar);
      spec.settings = settings + ";source=" + src.string();
    }
    return stage(std::move(spec), [&] {
      CorpusStore store(cfg_.corpus_dir);
      SystemClock system_clock;
      Clock& clock = hooks_.clock ? *hooks_.clock : system_clock;
      if (cfg_.endpoint) {
        std::optional<HttplibTransport> owned;
        HttpTransport* transport = hooks_.transport;
        if (!transport) {
          std::optional<std::string> token;
          if (const char* t = std::getenv("CARDGAUGE_HUB_TOKEN"); t && *t) token = t;
          owned.emplace(token);
          transport = &*owned;
        }
        HubConfig hc;
        hc.endpoint = *cfg_.endpoint;
        hc.page_size = cfg_.page_size;
        hc.pace = std::chrono::milliseconds(cfg_.pace_ms);
        HubClient client(*transport, clock, hc);
        FetchOptions fo;
        fo.size_cutoff_bytes = cfg_.size_cutoff_bytes;
        fo.workers = cfg_.workers;
        fo.batch_count = cfg_.batches;
        fo.resume = true;
        fetch_corpus(client, store, fo);
      } else {
        const fs::path src = *cfg_.local_source;
        import_local(src, cfg_.local_metadata.value_or(src / "metadata.jsonl"), store, cfg_.size_cutoff_bytes,
                     cfg_.batches, clock);
      }
      manifest_.reset();
      cards_.reset();
    });
  }

  StageOutcome hist() {
    StageSpec spec{Stage::hist, {}, filter_settings(cfg_), {out("hf.tsv")}};
    spec.inputs["manifest"] = input(manifest_path(), Stage::ingest);
    spec.inputs["cards"] = cards();
    return stage(std::move(spec), [&] {
      const CorpusStore store(cfg_.corpus_dir);
      write(out("hf.tsv"), to_tsv(corpus_histogram(manifest(), store, filter(), cfg_.workers)));
    });
  }

  StageOutcome zd_hist() {
    StageSpec spec{Stage::zd_hist, {}, filter_settings(cfg_), {out("zd.tsv")}};
    spec.inputs["zd_template"] = sha256_file(zd_template());
    return stage(std::move(spec), [&] {
      const WordHistogram h = text_histogram(text::read_file(zd_template().string()), filter());
      if (h.empty()) throw PipelineError(Stage::zd_hist, "template produced no words");
      write(out("zd.tsv"), to_tsv(h));
    });
  }

  StageOutcome compare() {
    StageSpec spec{Stage::compare, {}, "left=zd;right=hf", {out("comparison.json")}};
    spec.inputs["zd"] = input(out("zd.tsv"), Stage::zd_hist);
    spec.inputs["hf"] = input(out("hf.tsv"), Stage::hist);
    return stage(std::move(spec), [&] {
      const auto cmp = compare_histograms(load(out("zd.tsv").string()), load(out("hf.tsv").string()));
      write(out("comparison.json"), emit(cmp, OutputFormat::json));
    });
  }

  std::vector<HeadingPath> template_paths() { return heading_paths(parse_toc(text::read_file(zd_template().string()))); }

  StageOutcome toc_sim() {
    StageSpec spec{Stage::toc_sim, {}, threshold_settings(cfg_), {out("toc_similarity.json")}};
    spec.inputs["manifest"] = input(manifest_path(), Stage::ingest);
    spec.inputs["cards"] = cards();
    spec.inputs["zd_template"] = sha256_file(zd_template());
    return stage(std::move(spec), [&] {
      const auto zd = template_paths();
      const CorpusStore store(cfg_.corpus_dir);
      ordered_json files = ordered_json::array();
      std::size_t documented = 0;
      std::size_t nlss_files = 0;
      std::size_t nld_files = 0;
      for (const auto& r : manifest().records) {
        if (r.status != FetchStatus::fetched) continue;
        ++documented;
        const auto paths = heading_paths(parse_toc(store.read_card(r)));
        const auto matches = paths.empty() ? std::vector<HeadingMatch>{} : match_headings(paths, zd, cfg_.thresholds);
        const auto n1 = matched_heading_count(matches, Metric::nlss);
        const auto n2 = matched_heading_count(matches, Metric::nld);
        nlss_files += n1 > 0;
        nld_files += n2 > 0;
        files.push_back({{"model_id", r.model_id}, {"headings", paths.size()}, {"nlss_matches", n1}, {"nld_matches", n2}});
      }
      ordered_json j;
      j["thresholds"] = {{"nlss", cfg_.thresholds.nlss_match}, {"nld", cfg_.thresholds.nld_match}};
      j["documented_files"] = documented;
      const auto pct = [&](std::size_t n) {
        return documented ? ordered_json(100.0 * n / documented) : ordered_json(nullptr);
      };
      j["subset_similarity"] = {{"nlss", pct(nlss_files)}, {"nld", pct(nld_files)}};
      j["files"] = std::move(files);
      write(out("toc_similarity.json"), j.dump(2) + "\n");
    });
  }

  StageOutcome score() {
    StageSpec spec{Stage::score, {}, threshold_settings(cfg_) + ";" + filter_settings(cfg_), {out("scores.csv")}};
    spec.inputs["manifest"] = input(manifest_path(), Stage::ingest);
    spec.inputs["cards"] = cards();
    spec.inputs["zd_template"] = sha256_file(zd_template());
    spec.inputs["zd"] = input(out("zd.tsv"), Stage::zd_hist);
    return stage(std::move(spec), [&] {
      const auto zd_paths = template_paths();
      const WordHistogram zd = load(out("zd.tsv").string());
      const CorpusStore store(cfg_.corpus_dir);
      Table t;
      t.columns = {"model_id", "nlss_matches", "nld_matches", "common_word_count", "common_word_frequency",
                   "composite"};
      for (const auto& r : manifest().records) {
        if (r.status != FetchStatus::fetched) continue;
        const std::string body = store.read_card(r);
        const auto s = score_card(r.model_id, heading_paths(parse_toc(body)), text_histogram(body, filter()), zd_paths,
                                  zd, cfg_.thresholds);
        t.rows.push_back({Cell(s.model_id), Cell(std::uint64_t{s.nlss_matches}), Cell(std::uint64_t{s.nld_matches}),
                          Cell(s.common_word_count), Cell(s.common_word_frequency), Cell(s.composite)});
      }
      write(out("scores.csv"), emit(t, OutputFormat::csv));
    });
  }

  CohortSpec cohort_spec() const {
    CohortSpec s = cfg_.cohort;
    s.seed = cfg_.seed;
    return s;
  }

  StageOutcome cohort() {
    StageSpec spec{Stage::cohort, {}, {}, {out("cohort.json"), out("download_bins.csv")}};
    spec.inputs["manifest"] = input(manifest_path(), Stage::ingest);
    Cohort probe;
    probe.spec = cohort_spec();
    spec.settings = cohort_to_json(probe);
    return stage(std::move(spec), [&] {
      const Cohort c = build_cohort(manifest(), cohort_spec());
      write(out("cohort.json"), cohort_to_json(c));
      write(out("download_bins.csv"), emit(download_bins(manifest().records), OutputFormat::csv));
    });
  }

  StageOutcome correlate_stage() {
    StageSpec spec{Stage::correlate,
                   {},
                   std::string("reference=") + std::string(reference_kind_name(cfg_.reference)) + ";" +
                       filter_settings(cfg_),
                   {out("correlation.json"), out("correlation.csv")}};
    spec.inputs["cohort"] = input(out("cohort.json"), Stage::cohort);
    spec.inputs["zd"] = input(out("zd.tsv"), Stage::zd_hist);
    spec.inputs["hf"] = input(out("hf.tsv"), Stage::hist);
    spec.inputs["cards"] = cards();
    return stage(std::move(spec), [&] {
      const Cohort c = cohort_from_json(text::read_file(out("cohort.json").string()));
      const auto words =
          reference_words(cfg_.reference, load(out("zd.tsv").string()), load(out("hf.tsv").string()));
      const CorpusStore store(cfg_.corpus_dir);
      const auto hists = per_file_histograms(c.documented_members, store, filter(), cfg_.workers);
      const auto res = correlate(c, words, hists, cfg_.reference);
      write(out("correlation.json"), emit(res, OutputFormat::json));
      write(out("correlation.csv"), emit(res, OutputFormat::csv));
    });
  }

  StageOutcome suggest() {
    StageSpec spec{Stage::suggest, {}, "top_k=" + std::to_string(cfg_.top_k),
                   {out("gap_report.json"), out("suggestions.md")}};
    spec.inputs["zd"] = input(out("zd.tsv"), Stage::zd_hist);
    spec.inputs["hf"] = input(out("hf.tsv"), Stage::hist);
    return stage(std::move(spec), [&] {
      WordHistogram zd = load(out("zd.tsv").string());
      WordHistogram hf = load(out("hf.tsv").string());
      zd.set_label("ZD");
      hf.set_label("HF");
      const auto r = gap_report(zd, hf, cfg_.top_k, format_utc(std::chrono::system_clock::now()));
      write(out("gap_report.json"), emit(r, OutputFormat::json));
      write(out("suggestions.md"), emit(r, OutputFormat::markdown));
    });
  }

  const RunConfig& cfg_;
  const PipelineHooks& hooks_;
  Stage current_ = Stage::ingest;
  std::optional<CorpusManifest> manifest_;
  std::optional<std::string> cards_;
  std::optional<FilterConfig> filter_;
};

}  // namespace

void RunConfig::validate() const {
  thresholds.validate();
  cohort.validate();
  if (page_size < 1) throw InvalidArgument("page_size must be >= 1");
  if (pace_ms < 0) throw InvalidArgument("pace_ms must be >= 0");
  if (size_cutoff_bytes == 0) throw InvalidArgument("size_cutoff_bytes must be positive");
  if (batches < 1) throw InvalidArgument("batches must be >= 1");
  if (workers < 1) throw InvalidArgument("workers must be >= 1");
  if (top_k < 1) throw InvalidArgument("top_k must be >= 1");
  if (max_x_occurrences < 0) throw InvalidArgument("max_x must be >= 0");
  if (stop_words.empty()) throw InvalidArgument("stop_words must name a file or 'builtin'");
  if (corpus_dir.empty()) throw InvalidArgument("corpus_dir is empty");
  if (output_dir.empty()) throw InvalidArgument("output_dir is empty");
}

FilterConfig RunConfig::filter() const {
  FilterConfig f;
  f.stop_words = load_stop_words(stop_words);
  f.max_x_occurrences = max_x_occurrences;
  f.lowercase = lowercase;
  f.validate();
  return f;
}

bool RunConfig::operator==(const RunConfig& o) const {
  return endpoint == o.endpoint && page_size == o.page_size && pace_ms == o.pace_ms &&
         size_cutoff_bytes == o.size_cutoff_bytes && local_source == o.local_source &&
         local_metadata == o.local_metadata && corpus_dir == o.corpus_dir && zd_template == o.zd_template &&
         output_dir == o.output_dir && thresholds.nlss_match == o.thresholds.nlss_match &&
         thresholds.nld_match == o.thresholds.nld_match && stop_words == o.stop_words &&
         max_x_occurrences == o.max_x_occurrences && lowercase == o.lowercase && batches == o.batches &&
         workers == o.workers && seed == o.seed && cohort == o.cohort && reference == o.reference && top_k == o.top_k;
}

RunConfig config_from_yaml(std::string_view yaml, const fs::path& base_dir) {
  YAML::Node root;
  try {
    root = YAML::Load(std::string(yaml));
  } catch (const YAML::Exception& e) {
    throw InvalidArgument(std::string("config: ") + e.what());
  }
  RunConfig cfg;
  if (root.IsNull()) return cfg;
  check_keys(root, "",
             {"endpoint", "hub", "local", "corpus_dir", "zd_template", "output_dir", "thresholds", "filter",
              "batches", "workers", "seed", "cohort", "correlate", "suggest"});
  std::string endpoint;
  read(root, "endpoint", endpoint, "");
  if (!endpoint.empty()) cfg.endpoint = endpoint;
  if (const auto hub = root["hub"]) {
    check_keys(hub, "hub", {"page_size", "pace_ms", "size_cutoff_bytes"});
    read(hub, "page_size", cfg.page_size, "hub");
    read(hub, "pace_ms", cfg.pace_ms, "hub");
    read(hub, "size_cutoff_bytes", cfg.size_cutoff_bytes, "hub");
  }
  if (const auto local = root["local"]) {
    check_keys(local, "local", {"source", "metadata"});
    read_opt_path(local, "source", cfg.local_source, base_dir, "local");
    read_opt_path(local, "metadata", cfg.local_metadata, base_dir, "local");
  }
  read_path(root, "corpus_dir", cfg.corpus_dir, base_dir, "");
  read_path(root, "zd_template", cfg.zd_template, base_dir, "");
  read_path(root, "output_dir", cfg.output_dir, base_dir, "");
  if (const auto th = root["thresholds"]) {
    check_keys(th, "thresholds", {"nlss", "nld"});
    read(th, "nlss", cfg.thresholds.nlss_match, "thresholds");
    read(th, "nld", cfg.thresholds.nld_match, "thresholds");
  }
  if (const auto f = root["filter"]) {
    check_keys(f, "filter", {"stop_words", "max_x", "lowercase"});
    std::string sw;
    read(f, "stop_words", sw, "filter");
    if (!sw.empty()) cfg.stop_words = sw == kBuiltinStopWords ? sw : resolve(base_dir, sw).string();
    read(f, "max_x", cfg.max_x_occurrences, "filter");
    read(f, "lowercase", cfg.lowercase, "filter");
  }
  read(root, "batches", cfg.batches, "");
  read(root, "workers", cfg.workers, "");
  read(root, "seed", cfg.seed, "");
  if (const auto c = root["cohort"]) {
    check_keys(c, "cohort", {"kind", "step", "download_threshold", "likes_threshold", "range", "per_bin"});
    std::string kind;
    read(c, "kind", kind, "cohort");
    if (!kind.empty()) cfg.cohort.kind = parse_cohort_kind(kind);
    read(c, "step", cfg.cohort.step, "cohort");
    read(c, "download_threshold", cfg.cohort.download_threshold, "cohort");
    read(c, "likes_threshold", cfg.cohort.likes_threshold, "cohort");
    if (const auto range = c["range"]) {
      if (!range.IsSequence() || range.size() != 2) throw InvalidArgument("cohort.range must be [lo, hi]");
      cfg.cohort.lo = range[0].as<std::uint64_t>();
      cfg.cohort.hi = range[1].as<std::uint64_t>();
    }
    read(c, "per_bin", cfg.cohort.samples_per_bin, "cohort");
  }
  if (const auto c = root["correlate"]) {
    check_keys(c, "correlate", {"reference"});
    std::string ref;
    read(c, "reference", ref, "correlate");
    if (!ref.empty()) cfg.reference = parse_reference_kind(ref);
  }
  if (const auto s = root["suggest"]) {
    check_keys(s, "suggest", {"top_k"});
    read(s, "top_k", cfg.top_k, "suggest");
  }
  cfg.validate();
  return cfg;
}

RunConfig load_run_config(const fs::path& path) {
  return config_from_yaml(text::read_file(path.string()), fs::absolute(path).parent_path());
}

std::string config_to_yaml(const RunConfig& cfg) {
  YAML::Emitter e;
  e << YAML::BeginMap;
  if (cfg.endpoint) e << YAML::Key << "endpoint" << YAML::Value << *cfg.endpoint;
  e << YAML::Key << "hub" << YAML::Value << YAML::BeginMap;
  e << YAML::Key << "page_size" << YAML::Value << cfg.page_size;
  e << YAML::Key << "pace_ms" << YAML::Value << cfg.pace_ms;
  e << YAML::Key << "size_cutoff_bytes" << YAML::Value << cfg.size_cutoff_bytes;
  e << YAML::EndMap;
  if (cfg.local_source || cfg.local_metadata) {
    e << YAML::Key << "local" << YAML::Value << YAML::BeginMap;
    if (cfg.local_source) e << YAML::Key << "source" << YAML::Value << cfg.local_source->string();
    if (cfg.local_metadata) e << YAML::Key << "metadata" << YAML::Value << cfg.local_metadata->string();
    e << YAML::EndMap;
  }
  e << YAML::Key << "corpus_dir" << YAML::Value << cfg.corpus_dir.string();
  if (!cfg.zd_template.empty()) e << YAML::Key << "zd_template" << YAML::Value << cfg.zd_template.string();
  e << YAML::Key << "output_dir" << YAML::Value << cfg.output_dir.string();
  e << YAML::Key << "thresholds" << YAML::Value << YAML::BeginMap;
  e << YAML::Key << "nlss" << YAML::Value << cfg.thresholds.nlss_match;
  e << YAML::Key << "nld" << YAML::Value << cfg.thresholds.nld_match;
  e << YAML::EndMap;
  e << YAML::Key << "filter" << YAML::Value << YAML::BeginMap;
  e << YAML::Key << "stop_words" << YAML::Value << cfg.stop_words;
  e << YAML::Key << "max_x" << YAML::Value << cfg.max_x_occurrences;
  e << YAML::Key << "lowercase" << YAML::Value << cfg.lowercase;
  e << YAML::EndMap;
  e << YAML::Key << "batches" << YAML::Value << cfg.batches;
  e << YAML::Key << "workers" << YAML::Value << cfg.workers;
  e << YAML::Key << "seed" << YAML::Value << cfg.seed;
  e << YAML::Key << "cohort" << YAML::Value << YAML::BeginMap;
  e << YAML::Key << "kind" << YAML::Value << std::string(cohort_kind_name(cfg.cohort.kind));
  e << YAML::Key << "step" << YAML::Value << cfg.cohort.step;
  e << YAML::Key << "download_threshold" << YAML::Value << cfg.cohort.download_threshold;
  e << YAML::Key << "likes_threshold" << YAML::Value << cfg.cohort.likes_threshold;
  e << YAML::Key << "range" << YAML::Value << YAML::Flow << YAML::BeginSeq << cfg.cohort.lo << cfg.cohort.hi
    << YAML::EndSeq;
  e << YAML::Key << "per_bin" << YAML::Value << cfg.cohort.samples_per_bin;
  e << YAML::EndMap;
  e << YAML::Key << "correlate" << YAML::Value << YAML::BeginMap;
  e << YAML::Key << "reference" << YAML::Value
    << std::string(cfg.reference == ReferenceKind::zd_common_words ? "zd-common" : "hf-all");
  e << YAML::EndMap;
  e << YAML::Key << "suggest" << YAML::Value << YAML::BeginMap;
  e << YAML::Key << "top_k" << YAML::Value << cfg.top_k;
  e << YAML::EndMap;
  e << YAML::EndMap;
  return std::string(e.c_str()) + "\n";
}

std::string sha256_hex(std::string_view data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
    throw Error("SHA-256 computation failed");
  }
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  out.reserve(len * 2);
  for (unsigned int i = 0; i < len; ++i) {
    out.push_back(kHex[digest[i] >> 4]);
    out.push_back(kHex[digest[i] & 0xF]);
  }
  return out;
}

std::string sha256_file(const fs::path& path) { return sha256_hex(text::read_file(path.string())); }

WordHistogram text_histogram(std::string_view text, const FilterConfig& cfg, std::string label) {
  WordHistogram h(std::move(label));
  for_each_token(text, cfg, [&](std::string&& tok) { h.add(std::move(tok)); });
  return h;
}

WordHistogram corpus_histogram(const CorpusManifest& manifest, const CorpusStore& store, const FilterConfig& cfg,
                               std::size_t workers) {
  if (workers < 1) throw InvalidArgument("workers must be >= 1");
  const auto ranges = manifest.batch_ranges();
  std::vector<WordHistogram> parts(ranges.size());
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mu;
  const auto worker = [&] {
    for (std::size_t b = next.fetch_add(1); b < ranges.size(); b = next.fetch_add(1)) {
      try {
        WordHistogram h("batch" + std::to_string(b));
        for (std::size_t i = ranges[b].first; i < ranges[b].second; ++i) {
          const auto& r = manifest.records[i];
          if (r.status != FetchStatus::fetched) continue;
          for_each_token(store.read_card(r), cfg, [&](std::string&& tok) { h.add(std::move(tok)); });
        }
        parts[b] = std::move(h);
      } catch (...) {
        std::lock_guard lock(failure_mu);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  {
    std::vector<std::jthread> pool;
    const std::size_t n = std::min(workers, std::max<std::size_t>(ranges.size(), 1));
    for (std::size_t k = 0; k < n; ++k) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);
  WordHistogram merged = merge(parts);
  merged.set_label("hf");
  return merged;
}

std::unordered_map<std::string, WordHistogram> per_file_histograms(const std::vector<ModelRecord>& records,
                                                                   const CorpusStore& store, const FilterConfig& cfg,
                                                                   std::size_t workers) {
  if (workers < 1) throw InvalidArgument("workers must be >= 1");
  std::vector<WordHistogram> hists(records.size());
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mu;
  const auto worker = [&] {
    for (std::size_t i = next.fetch_add(1); i < records.size(); i = next.fetch_add(1)) {
      try {
        hists[i] = text_histogram(store.read_card(records[i]), cfg, records[i].model_id);
      } catch (...) {
        std::lock_guard lock(failure_mu);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  {
    std::vector<std::jthread> pool;
    const std::size_t n = std::min(workers, std::max<std::size_t>(records.size(), 1));
    for (std::size_t k = 0; k < n; ++k) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);
  std::unordered_map<std::string, WordHistogram> out;
  for (std::size_t i = 0; i < records.size(); ++i) out.emplace(records[i].model_id, std::move(hists[i]));
  return out;
}

Stage parse_stage(std::string_view name) {
  for (Stage s : kAllStages) {
    if (stage_name(s) == name) return s;
  }
  throw InvalidArgument("unknown stage: " + std::string(name));
}

std::string_view stage_name(Stage s) {
  switch (s) {
    case Stage::ingest: return "ingest";
    case Stage::hist: return "hist";
    case Stage::zd_hist: return "zd-hist";
    case Stage::compare: return "compare";
    case Stage::toc_sim: return "toc-sim";
    case Stage::score: return "score";
    case Stage::cohort: return "cohort";
    case Stage::correlate: return "correlate";
    case Stage::suggest: return "suggest";
  }
  return "ingest";
}

PipelineError::PipelineError(Stage stage, const std::string& what)
    : Error("stage '" + std::string(stage_name(stage)) + "': " + what), stage_(stage) {}

std::vector<StageOutcome> run_pipeline(const RunConfig& cfg, const std::vector<Stage>& stages,
                                       const PipelineHooks& hooks) {
  cfg.validate();
  const std::set<Stage> wanted(stages.begin(), stages.end());
  Runner runner(cfg, hooks);
  std::vector<StageOutcome> outcomes;
  for (Stage s : kAllStages) {
    if (wanted.count(s)) outcomes.push_back(runner.run(s));
  }
  return outcomes;
}

}  // namespace cardgauge
