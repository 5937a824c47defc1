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

#ifndef CARDGAUGE_INGEST_HPP
#define CARDGAUGE_INGEST_HPP

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "cardgauge/error.hpp"

namespace cardgauge {

enum class FetchStatus { fetched, missing_card, filtered_oversize, error };
std::string_view status_name(FetchStatus s);
FetchStatus parse_status(std::string_view name);

struct ModelRecord {
  std::string model_id;
  std::uint64_t downloads = 0;
  std::uint64_t likes = 0;
  // Path relative to the corpus root; set iff a card exists on the hub.
  std::optional<std::string> card_path;
  std::uint64_t card_size_bytes = 0;
  FetchStatus status = FetchStatus::missing_card;
  std::string fetched_at;  // ISO-8601 UTC, e.g. 2025-12-22T10:00:00Z
  std::string error;       // reason when status == error

  bool operator==(const ModelRecord&) const = default;
};

enum class ManifestSource { hub_api, local_dir };

struct CorpusManifest {
  std::vector<ModelRecord> records;
  std::size_t batch_count = 1;
  std::string created_at;
  ManifestSource source = ManifestSource::hub_api;

  // Half-open [begin, end) index ranges of the contiguous batches. Sizes
  // differ by at most one; earlier batches take the remainder.
  std::vector<std::pair<std::size_t, std::size_t>> batch_ranges() const;
  std::map<FetchStatus, std::size_t> status_counts() const;
};

// ---------------------------------------------------------------------------
// Time and transport seams. Production code uses SystemClock and
// HttplibTransport; tests substitute deterministic doubles.

class Clock {
 public:
  virtual ~Clock() = default;
  virtual std::chrono::steady_clock::time_point now() = 0;
  virtual std::chrono::system_clock::time_point utc_now() = 0;
  virtual void sleep_for(std::chrono::milliseconds d) = 0;
};

class SystemClock final : public Clock {
 public:
  std::chrono::steady_clock::time_point now() override { return std::chrono::steady_clock::now(); }
  std::chrono::system_clock::time_point utc_now() override { return std::chrono::system_clock::now(); }
  void sleep_for(std::chrono::milliseconds d) override;
};

// Time advances only through sleep_for. Thread safe.
class ManualClock final : public Clock {
 public:
  explicit ManualClock(std::chrono::system_clock::time_point utc_origin = {});
  std::chrono::steady_clock::time_point now() override;
  std::chrono::system_clock::time_point utc_now() override;
  void sleep_for(std::chrono::milliseconds d) override;
  std::chrono::milliseconds elapsed() const;

 private:
  mutable std::mutex mu_;
  std::chrono::milliseconds elapsed_{0};
  std::chrono::system_clock::time_point utc_origin_;
};

std::string format_utc(std::chrono::system_clock::time_point t);

struct HttpResponse {
  int status = 0;
  std::string body;
  // Header names lowercased.
  std::map<std::string, std::string> headers;
  // Body was cut off at the requested byte limit.
  bool truncated = false;
  std::optional<std::uint64_t> content_length;
};

// Network-level failure (connection refused, reset, timeout).
class TransportError : public Error {
 public:
  using Error::Error;
};

class HttpTransport {
 public:
  virtual ~HttpTransport() = default;
  // GET `url`; reads at most `max_body_bytes` of the body (0 = unlimited).
  // Throws TransportError on network failure.
  virtual HttpResponse get(const std::string& url, std::uint64_t max_body_bytes) = 0;
};

class HttplibTransport final : public HttpTransport {
 public:
  explicit HttplibTransport(std::optional<std::string> bearer_token = {},
                            std::chrono::seconds timeout = std::chrono::seconds(60));
  HttpResponse get(const std::string& url, std::uint64_t max_body_bytes) override;

 private:
  std::optional<std::string> token_;
  std::chrono::seconds timeout_;
};

// Listing or download failure after retries were exhausted. `cursor` is the
// URL to resume the listing from.
class HubError : public Error {
 public:
  HubError(const std::string& what, std::size_t page, std::string cursor)
      : Error(what), page_(page), cursor_(std::move(cursor)) {}
  std::size_t page() const { return page_; }
  const std::string& cursor() const { return cursor_; }

 private:
  std::size_t page_;
  std::string cursor_;
};

// URL templates are configuration. `{limit}` and `{model_id}` are substituted.
struct HubConfig {
  std::string endpoint = "https://huggingface.co";
  std::string list_path = "/api/models?limit={limit}";
  std::string card_path = "/{model_id}/raw/main/README.md";
  std::size_t page_size = 1000;
  std::chrono::milliseconds pace{500};
  int max_attempts = 5;
  std::chrono::milliseconds backoff_base{500};
  std::chrono::milliseconds backoff_cap{16000};

  void validate() const;
};

// Enforces a minimum spacing between request start times across threads.
class Pacer {
 public:
  Pacer(Clock& clock, std::chrono::milliseconds interval) : clock_(clock), interval_(interval) {}
  void wait();

 private:
  Clock& clock_;
  std::chrono::milliseconds interval_;
  std::mutex mu_;
  std::optional<std::chrono::steady_clock::time_point> last_;
};

class CorpusStore;
class HubClient;

// Pulls the paginated model listing. Pages follow the `Link: <...>; rel="next"`
// header; a page body is a JSON array of objects carrying `id` (or
// `modelId`), `downloads` and `likes`.
class ModelLister {
 public:
  ModelLister(HubClient& client, std::optional<std::string> resume_cursor);

  // Next page of records, or nullopt once the listing is exhausted. Throws
  // HubError when a page cannot be fetched or parsed.
  std::optional<std::vector<ModelRecord>> next_page();
  // URL of the next page, or nullopt when done.
  const std::optional<std::string>& cursor() const { return cursor_; }
  std::size_t pages_fetched() const { return pages_; }

 private:
  HubClient& client_;
  std::optional<std::string> cursor_;
  std::size_t pages_ = 0;
};

class HubClient {
 public:
  HubClient(HttpTransport& transport, Clock& clock, HubConfig cfg);

  // Paced GET with bounded exponential backoff on network errors, 429 and 5xx.
  // Throws HubError after max_attempts failures.
  HttpResponse get(const std::string& url, std::uint64_t max_body_bytes, std::size_t page = 0);

  ModelLister list_models(std::optional<std::string> resume_cursor = {}) { return ModelLister(*this, resume_cursor); }

  // Downloads the root README.md of `listed.model_id` into `store`. Cards larger
  // than `size_cutoff_bytes` are discarded (filtered_oversize); a 404 yields
  // missing_card; exhausted retries yield status error. Throws Error when the
  // store path for this model collides with another model.
  ModelRecord fetch_card(const ModelRecord& listed, CorpusStore& store, std::uint64_t size_cutoff_bytes);

  const HubConfig& config() const { return cfg_; }
  Clock& clock() { return clock_; }
  std::string resolve(const std::string& path_or_url) const;

 private:
  HttpTransport& transport_;
  Clock& clock_;
  HubConfig cfg_;
  Pacer pacer_;
};

// Drains the whole listing.
std::vector<ModelRecord> list_models(HubClient& client);

// On-disk corpus: `cards/<sanitized id>.md`, a fetch journal, and after
// build_manifest `manifest.jsonl` plus `manifest.meta.json`. Card writes and
// journal appends are serialized per store.
class CorpusStore {
 public:
  explicit CorpusStore(std::filesystem::path root);

  const std::filesystem::path& root() const { return root_; }

  // Maps a hub id to a file-name-safe string: '/' becomes "--"; characters
  // outside [A-Za-z0-9._-] are percent-encoded.
  static std::string sanitize_id(std::string_view model_id);
  static std::string card_relpath(std::string_view model_id);

  // Reserves the card path for model_id. Throws Error if another model id
  // already owns the same path.
  void claim(const std::string& model_id);
  void write_card(const std::string& model_id, std::string_view body);
  void remove_card(const std::string& model_id);
  std::string read_card(const ModelRecord& rec) const;

  void append_journal(const ModelRecord& rec);
  // Latest journal entry per model id, in first-seen order.
  std::vector<ModelRecord> journal() const;
  void reset_journal();

 private:
  std::filesystem::path root_;
  mutable std::mutex mu_;
  std::unordered_map<std::string, std::string> owners_;
};

std::string record_to_json(const ModelRecord& rec);
ModelRecord record_from_json(std::string_view line);

// Sorts journal records by downloads descending (ties: id ascending), assigns
// contiguous batches and writes manifest.jsonl / manifest.meta.json. Output
// is byte-identical for an unchanged journal. Throws InvalidArgument when
// batch_count < 1.
CorpusManifest build_manifest(CorpusStore& store, std::size_t batch_count,
                              ManifestSource source = ManifestSource::hub_api);

CorpusManifest load_manifest(const std::filesystem::path& root);

struct FetchOptions {
  std::uint64_t size_cutoff_bytes = 1048576;
  std::size_t workers = 4;
  std::size_t batch_count = 15;
  // Continue an interrupted listing and skip models already settled.
  bool resume = false;
  // Stop after this many card downloads (0 = no limit) and throw Error if
  // models remain. Used to simulate interruption.
  std::size_t max_cards = 0;
};

// Listing + card download + manifest. The listing is persisted page by page
// (listing.jsonl, listing.state.json) so it can resume from its cursor.
CorpusManifest fetch_corpus(HubClient& client, CorpusStore& store, const FetchOptions& opts);

// Imports `<src>/<model_id>/README.md` files described by a JSONL sidecar of
// {"model_id", "downloads", "likes"} objects (default `<src>/metadata.jsonl`).
CorpusManifest import_local(const std::filesystem::path& src, const std::filesystem::path& sidecar,
                            CorpusStore& store, std::uint64_t size_cutoff_bytes, std::size_t batch_count,
                            Clock& clock);

}  // namespace cardgauge

#endif  // CARDGAUGE_INGEST_HPP
