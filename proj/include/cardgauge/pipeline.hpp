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

#ifndef CARDGAUGE_PIPELINE_HPP
#define CARDGAUGE_PIPELINE_HPP

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "cardgauge/cohort.hpp"
#include "cardgauge/histogram.hpp"
#include "cardgauge/ingest.hpp"
#include "cardgauge/simmetrics.hpp"
#include "cardgauge/textprep.hpp"

namespace cardgauge {

// Settings for a pipeline run. Relative paths in a config file are resolved
// against the file's directory.
struct RunConfig {
  // Hub endpoint. When absent the corpus is imported from local_source.
  std::optional<std::string> endpoint;
  std::size_t page_size = 1000;
  std::int64_t pace_ms = 500;
  std::uint64_t size_cutoff_bytes = 1048576;
  std::optional<std::filesystem::path> local_source;
  // Defaults to <local_source>/metadata.jsonl.
  std::optional<std::filesystem::path> local_metadata;

  std::filesystem::path corpus_dir = "corpus";
  std::filesystem::path zd_template;
  std::filesystem::path output_dir = "out";

  MatchThresholds thresholds;
  std::string stop_words = std::string(kBuiltinStopWords);
  int max_x_occurrences = 2;
  bool lowercase = true;

  std::size_t batches = 15;
  std::size_t workers = 4;
  std::uint64_t seed = 0;

  CohortSpec cohort;
  ReferenceKind reference = ReferenceKind::zd_common_words;
  std::size_t top_k = 20;

  void validate() const;
  FilterConfig filter() const;
  bool operator==(const RunConfig& other) const;
};

// Throws InvalidArgument on unknown keys or ill-typed values.
RunConfig config_from_yaml(std::string_view yaml, const std::filesystem::path& base_dir = {});
RunConfig load_run_config(const std::filesystem::path& path);
std::string config_to_yaml(const RunConfig& cfg);

std::string sha256_hex(std::string_view data);
std::string sha256_file(const std::filesystem::path& path);

// Histogram of one card's filtered tokens.
WordHistogram text_histogram(std::string_view text, const FilterConfig& cfg, std::string label = {});

// Merged histogram of every fetched card in the manifest. Batches are built
// in parallel by up to `workers` threads and merged in batch order.
WordHistogram corpus_histogram(const CorpusManifest& manifest, const CorpusStore& store, const FilterConfig& cfg,
                               std::size_t workers);

std::unordered_map<std::string, WordHistogram> per_file_histograms(const std::vector<ModelRecord>& records,
                                                                   const CorpusStore& store, const FilterConfig& cfg,
                                                                   std::size_t workers);

enum class Stage { ingest, hist, zd_hist, compare, toc_sim, score, cohort, correlate, suggest };
inline constexpr Stage kAllStages[] = {Stage::ingest, Stage::hist,   Stage::zd_hist,   Stage::compare, Stage::toc_sim,
                                       Stage::score,  Stage::cohort, Stage::correlate, Stage::suggest};
Stage parse_stage(std::string_view name);
std::string_view stage_name(Stage s);

// A stage failed; the message names the stage.
class PipelineError : public Error {
 public:
  PipelineError(Stage stage, const std::string& what);
  Stage stage() const { return stage_; }

 private:
  Stage stage_;
};

struct StageOutcome {
  Stage stage;
  // False when the stamp matched and nothing was rewritten.
  bool ran = false;
  std::vector<std::filesystem::path> outputs;
};

struct PipelineHooks {
  // Transport for the ingest stage when an endpoint is configured.
  HttpTransport* transport = nullptr;
  Clock* clock = nullptr;
};

// Runs the requested stages in pipeline order. Each stage records the hashes
// of its inputs, settings and outputs under <output_dir>/.stamps; a stage
// whose stamp still matches is skipped. Throws PipelineError when a
// prerequisite artifact is missing or a stage fails.
std::vector<StageOutcome> run_pipeline(const RunConfig& cfg, const std::vector<Stage>& stages,
                                       const PipelineHooks& hooks = {});

}  // namespace cardgauge

#endif  // CARDGAUGE_PIPELINE_HPP
