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

#include "cardgauge/ingest.hpp"

#include <httplib.h>

#include <algorithm>
#include <atomic>
#include <ctime>
#include <exception>
#include <fstream>
#include <nlohmann/json.hpp>
#include <thread>
#include <unordered_set>

#include "cardgauge/text.hpp"

namespace cardgauge {
namespace fs = std::filesystem;
using nlohmann::json;
using nlohmann::ordered_json;

namespace {

constexpr const char* kJournal = "fetch_journal.jsonl";
constexpr const char* kListing = "listing.jsonl";
constexpr const char* kListingState = "listing.state.json";
constexpr const char* kManifest = "manifest.jsonl";
constexpr const char* kManifestMeta = "manifest.meta.json";

std::string replace_all(std::string s, std::string_view from, std::string_view to) {
  std::size_t pos = 0;
  while ((pos = s.find(from, pos)) != std::string::npos) {
    s.replace(pos, from.size(), to);
    pos += to.size();
  }
  return s;
}

// Splits "scheme://host[:port]/path?query" into origin and path.
std::pair<std::string, std::string> split_url(const std::string& url) {
  const auto scheme_end = url.find("://");
  if (scheme_end == std::string::npos) throw InvalidArgument("not an absolute URL: " + url);
  const auto path_start = url.find('/', scheme_end + 3);
  if (path_start == std::string::npos) return {url, "/"};
  return {url.substr(0, path_start), url.substr(path_start)};
}

// Extracts the rel="next" target of an RFC 8288 Link header.
std::optional<std::string> next_link(const std::string& header) {
  std::size_t pos = 0;
  while (pos < header.size()) {
    const auto lt = header.find('<', pos);
    if (lt == std::string::npos) break;
    const auto gt = header.find('>', lt);
    if (gt == std::string::npos) break;
    auto end = header.find(",", gt);
    if (end == std::string::npos) end = header.size();
    const std::string params = header.substr(gt + 1, end - gt - 1);
    if (params.find("rel=\"next\"") != std::string::npos || params.find("rel=next") != std::string::npos) {
      return header.substr(lt + 1, gt - lt - 1);
    }
    pos = end + 1;
  }
  return std::nullopt;
}

std::uint64_t json_count(const json& obj, const char* key) {
  if (!obj.contains(key) || obj.at(key).is_null()) return 0;
  const auto& v = obj.at(key);
  if (v.is_number_unsigned()) return v.get<std::uint64_t>();
  if (v.is_number_integer()) {
    const auto n = v.get<std::int64_t>();
    if (n < 0) throw InvalidArgument(std::string("negative ") + key);
    return static_cast<std::uint64_t>(n);
  }
  throw InvalidArgument(std::string(key) + " is not an integer");
}

ordered_json record_json(const ModelRecord& r) {
  ordered_json j;
  j["model_id"] = r.model_id;
  j["downloads"] = r.downloads;
  j["likes"] = r.likes;
  j["card_path"] = r.card_path ? ordered_json(*r.card_path) : ordered_json(nullptr);
  j["card_size_bytes"] = r.card_size_bytes;
  j["status"] = std::string(status_name(r.status));
  j["fetched_at"] = r.fetched_at;
  if (!r.error.empty()) j["error"] = r.error;
  return j;
}

ModelRecord record_from(const json& j) {
  ModelRecord r;
  r.model_id = j.at("model_id").get<std::string>();
  if (r.model_id.empty()) throw InvalidArgument("empty model_id");
  r.downloads = json_count(j, "downloads");
  r.likes = json_count(j, "likes");
  if (j.contains("card_path") && !j.at("card_path").is_null()) r.card_path = j.at("card_path").get<std::string>();
  r.card_size_bytes = json_count(j, "card_size_bytes");
  r.status = parse_status(j.at("status").get<std::string>());
  r.fetched_at = j.value("fetched_at", std::string());
  r.error = j.value("error", std::string());
  if ((r.status == FetchStatus::missing_card) != !r.card_path.has_value()) {
    throw InvalidArgument("record " + r.model_id + ": card_path must be absent iff status is missing_card");
  }
  return r;
}

std::vector<ModelRecord> read_jsonl_records(const fs::path& path) {
  std::vector<ModelRecord> out;
  if (!fs::exists(path)) return out;
  const std::string data = text::read_file(path.string());
  std::size_t line_no = 0;
  for (auto line : text::split_lines(data)) {
    ++line_no;
    if (text::trim(line).empty()) continue;
    try {
      out.push_back(record_from(json::parse(line)));
    } catch (const std::exception& e) {
      throw IoError(path.string() + ":" + std::to_string(line_no) + ": " + e.what());
    }
  }
  return out;
}

void append_line(const fs::path& path, const std::string& line) {
  std::ofstream out(path, std::ios::binary | std::ios::app);
  if (!out) throw IoError("cannot append to " + path.string());
  out << line << '\n';
  out.flush();
  if (!out) throw IoError("append failed: " + path.string());
}

void sort_records(std::vector<ModelRecord>& recs) {
  std::sort(recs.begin(), recs.end(), [](const ModelRecord& a, const ModelRecord& b) {
    return a.downloads != b.downloads ? a.downloads > b.downloads : a.model_id < b.model_id;
  });
}

std::string_view source_name(ManifestSource s) { return s == ManifestSource::hub_api ? "hub_api" : "local_dir"; }

ManifestSource parse_source(std::string_view s) {
  if (s == "hub_api") return ManifestSource::hub_api;
  if (s == "local_dir") return ManifestSource::local_dir;
  throw InvalidArgument("unknown manifest source: " + std::string(s));
}

std::vector<std::pair<std::size_t, std::size_t>> partition(std::size_t n, std::size_t batches) {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  const std::size_t base = n / batches;
  const std::size_t extra = n % batches;
  std::size_t begin = 0;
  for (std::size_t b = 0; b < batches; ++b) {
    const std::size_t len = base + (b < extra ? 1 : 0);
    out.emplace_back(begin, begin + len);
    begin += len;
  }
  return out;
}

}  // namespace

std::string_view status_name(FetchStatus s) {
  switch (s) {
    case FetchStatus::fetched: return "fetched";
    case FetchStatus::missing_card: return "missing_card";
    case FetchStatus::filtered_oversize: return "filtered_oversize";
    case FetchStatus::error: return "error";
  }
  return "error";
}

FetchStatus parse_status(std::string_view name) {
  if (name == "fetched") return FetchStatus::fetched;
  if (name == "missing_card") return FetchStatus::missing_card;
  if (name == "filtered_oversize") return FetchStatus::filtered_oversize;
  if (name == "error") return FetchStatus::error;
  throw InvalidArgument("unknown fetch status: " + std::string(name));
}

std::vector<std::pair<std::size_t, std::size_t>> CorpusManifest::batch_ranges() const {
  return partition(records.size(), batch_count);
}

std::map<FetchStatus, std::size_t> CorpusManifest::status_counts() const {
  std::map<FetchStatus, std::size_t> counts{{FetchStatus::fetched, 0},
                                            {FetchStatus::missing_card, 0},
                                            {FetchStatus::filtered_oversize, 0},
                                            {FetchStatus::error, 0}};
  for (const auto& r : records) ++counts[r.status];
  return counts;
}

void SystemClock::sleep_for(std::chrono::milliseconds d) {
  if (d.count() > 0) std::this_thread::sleep_for(d);
}

ManualClock::ManualClock(std::chrono::system_clock::time_point utc_origin) : utc_origin_(utc_origin) {}

std::chrono::steady_clock::time_point ManualClock::now() {
  std::lock_guard lock(mu_);
  return std::chrono::steady_clock::time_point(elapsed_);
}

std::chrono::system_clock::time_point ManualClock::utc_now() {
  std::lock_guard lock(mu_);
  return utc_origin_ + elapsed_;
}

void ManualClock::sleep_for(std::chrono::milliseconds d) {
  std::lock_guard lock(mu_);
  if (d.count() > 0) elapsed_ += d;
}

std::chrono::milliseconds ManualClock::elapsed() const {
  std::lock_guard lock(mu_);
  return elapsed_;
}

std::string format_utc(std::chrono::system_clock::time_point t) {
  const std::time_t secs = std::chrono::system_clock::to_time_t(t);
  std::tm tm{};
  gmtime_r(&secs, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

HttplibTransport::HttplibTransport(std::optional<std::string> bearer_token, std::chrono::seconds timeout)
    : token_(std::move(bearer_token)), timeout_(timeout) {}

HttpResponse HttplibTransport::get(const std::string& url, std::uint64_t max_body_bytes) {
  const auto [origin, path] = split_url(url);
  httplib::Client cli(origin);
  cli.set_follow_location(true);
  cli.set_connection_timeout(timeout_);
  cli.set_read_timeout(timeout_);
  httplib::Headers headers;
  if (token_) headers.emplace("Authorization", "Bearer " + *token_);

  HttpResponse out;
  bool over_limit = false;
  auto res = cli.Get(
      path, headers,
      [&](const httplib::Response& r) {
        out.status = r.status;
        out.headers.clear();
        out.body.clear();
        for (const auto& [k, v] : r.headers) out.headers[text::ascii_lower(k)] = v;
        if (auto it = out.headers.find("content-length"); it != out.headers.end()) {
          try {
            out.content_length = std::stoull(it->second);
          } catch (const std::exception&) {
            out.content_length.reset();
          }
        }
        return true;
      },
      [&](const char* data, std::size_t len) {
        if (max_body_bytes && out.body.size() + len > max_body_bytes) {
          out.body.append(data, max_body_bytes - out.body.size());
          over_limit = true;
          return false;
        }
        out.body.append(data, len);
        return true;
      });
  if (!res) {
    if (over_limit) {
      out.truncated = true;
      return out;
    }
    throw TransportError("GET " + url + ": " + httplib::to_string(res.error()));
  }
  out.status = res->status;
  return out;
}

void HubConfig::validate() const {
  if (endpoint.empty()) throw InvalidArgument("hub endpoint is empty");
  if (page_size < 1) throw InvalidArgument("page_size must be >= 1");
  if (max_attempts < 1) throw InvalidArgument("max_attempts must be >= 1");
  if (pace.count() < 0) throw InvalidArgument("pace must be >= 0");
}

void Pacer::wait() {
  if (interval_.count() <= 0) return;
  std::chrono::steady_clock::time_point slot;
  {
    std::lock_guard lock(mu_);
    const auto now = clock_.now();
    slot = last_ ? std::max(now, *last_ + interval_) : now;
    last_ = slot;
  }
  const auto now = clock_.now();
  if (slot > now) clock_.sleep_for(std::chrono::ceil<std::chrono::milliseconds>(slot - now));
}

HubClient::HubClient(HttpTransport& transport, Clock& clock, HubConfig cfg)
    : transport_(transport), clock_(clock), cfg_(std::move(cfg)), pacer_(clock, cfg_.pace) {
  cfg_.validate();
}

std::string HubClient::resolve(const std::string& path_or_url) const {
  if (path_or_url.find("://") != std::string::npos) return path_or_url;
  std::string base = cfg_.endpoint;
  while (!base.empty() && base.back() == '/') base.pop_back();
  return base + (path_or_url.starts_with('/') ? "" : "/") + path_or_url;
}

HttpResponse HubClient::get(const std::string& url, std::uint64_t max_body_bytes, std::size_t page) {
  std::string last_error;
  auto backoff = cfg_.backoff_base;
  for (int attempt = 1; attempt <= cfg_.max_attempts; ++attempt) {
    pacer_.wait();
    try {
      HttpResponse r = transport_.get(url, max_body_bytes);
      if (r.status != 429 && r.status < 500) return r;
      last_error = "HTTP " + std::to_string(r.status);
    } catch (const TransportError& e) {
      last_error = e.what();
    }
    if (attempt < cfg_.max_attempts) {
      clock_.sleep_for(backoff);
      backoff = std::min(backoff * 2, cfg_.backoff_cap);
    }
  }
  throw HubError("GET " + url + " failed after " + std::to_string(cfg_.max_attempts) + " attempts: " + last_error,
                 page, url);
}

ModelLister::ModelLister(HubClient& client, std::optional<std::string> resume_cursor) : client_(client) {
  if (resume_cursor) {
    cursor_ = std::move(resume_cursor);
  } else {
    const auto& cfg = client.config();
    cursor_ = client.resolve(replace_all(cfg.list_path, "{limit}", std::to_string(cfg.page_size)));
  }
}

std::optional<std::vector<ModelRecord>> ModelLister::next_page() {
  if (!cursor_) return std::nullopt;
  const std::size_t page = pages_ + 1;
  const std::string url = *cursor_;
  const HttpResponse r = client_.get(url, 0, page);
  if (r.status != 200) {
    throw HubError("listing page " + std::to_string(page) + ": HTTP " + std::to_string(r.status), page, url);
  }
  std::vector<ModelRecord> records;
  try {
    const json body = json::parse(r.body);
    if (!body.is_array()) throw InvalidArgument("expected a JSON array");
    for (const auto& item : body) {
      ModelRecord rec;
      if (item.contains("id")) {
        rec.model_id = item.at("id").get<std::string>();
      } else {
        rec.model_id = item.at("modelId").get<std::string>();
      }
      rec.downloads = json_count(item, "downloads");
      rec.likes = json_count(item, "likes");
      records.push_back(std::move(rec));
    }
  } catch (const std::exception& e) {
    throw HubError("malformed listing page " + std::to_string(page) + ": " + e.what(), page, url);
  }
  ++pages_;
  if (auto it = r.headers.find("link"); it != r.headers.end()) {
    if (auto next = next_link(it->second)) {
      cursor_ = client_.resolve(*next);
      return records;
    }
  }
  cursor_.reset();
  return records;
}

std::vector<ModelRecord> list_models(HubClient& client) {
  std::vector<ModelRecord> all;
  auto lister = client.list_models();
  while (auto page = lister.next_page()) {
    for (auto& r : *page) all.push_back(std::move(r));
  }
  return all;
}

ModelRecord HubClient::fetch_card(const ModelRecord& listed, CorpusStore& store, std::uint64_t size_cutoff_bytes) {
  if (size_cutoff_bytes == 0) throw InvalidArgument("size cutoff must be positive");
  store.claim(listed.model_id);
  ModelRecord rec = listed;
  rec.card_path = CorpusStore::card_relpath(listed.model_id);
  rec.card_size_bytes = 0;
  rec.error.clear();
  const std::string url = resolve(replace_all(cfg_.card_path, "{model_id}", listed.model_id));
  HttpResponse r;
  try {
    r = get(url, size_cutoff_bytes + 1);
  } catch (const HubError& e) {
    rec.status = FetchStatus::error;
    rec.error = e.what();
    rec.fetched_at = format_utc(clock_.utc_now());
    return rec;
  }
  rec.fetched_at = format_utc(clock_.utc_now());
  if (r.status == 404) {
    rec.status = FetchStatus::missing_card;
    rec.card_path.reset();
    return rec;
  }
  if (r.status != 200) {
    rec.status = FetchStatus::error;
    rec.error = "HTTP " + std::to_string(r.status);
    return rec;
  }
  const std::uint64_t size = std::max<std::uint64_t>(r.content_length.value_or(0), r.body.size());
  if (r.truncated || size > size_cutoff_bytes) {
    rec.status = FetchStatus::filtered_oversize;
    rec.card_size_bytes = size;
    store.remove_card(listed.model_id);
    return rec;
  }
  store.write_card(listed.model_id, r.body);
  rec.status = FetchStatus::fetched;
  rec.card_size_bytes = r.body.size();
  return rec;
}

CorpusStore::CorpusStore(fs::path root) : root_(std::move(root)) { fs::create_directories(root_ / "cards"); }

std::string CorpusStore::sanitize_id(std::string_view model_id) {
  static constexpr char kHex[] = "0123456789ABCDEF";
  std::string out;
  for (char c : model_id) {
    const auto u = static_cast<unsigned char>(c);
    if (c == '/') {
      out += "--";
    } else if (std::isalnum(u) || c == '.' || c == '_' || c == '-') {
      out.push_back(c);
    } else {
      out.push_back('%');
      out.push_back(kHex[u >> 4]);
      out.push_back(kHex[u & 0xF]);
    }
  }
  // Keep names like "." and ".." out of the directory.
  if (!out.empty() && out.front() == '.') out.insert(0, "%2E").erase(3, 1);
  return out;
}

std::string CorpusStore::card_relpath(std::string_view model_id) { return "cards/" + sanitize_id(model_id) + ".md"; }

void CorpusStore::claim(const std::string& model_id) {
  std::lock_guard lock(mu_);
  const std::string path = card_relpath(model_id);
  const auto [it, inserted] = owners_.emplace(path, model_id);
  if (!inserted && it->second != model_id) {
    throw Error("card path collision: '" + model_id + "' and '" + it->second + "' both map to " + path);
  }
}

void CorpusStore::write_card(const std::string& model_id, std::string_view body) {
  text::write_file_atomic((root_ / card_relpath(model_id)).string(), body);
}

void CorpusStore::remove_card(const std::string& model_id) {
  std::error_code ec;
  fs::remove(root_ / card_relpath(model_id), ec);
}

std::string CorpusStore::read_card(const ModelRecord& rec) const {
  if (rec.status != FetchStatus::fetched || !rec.card_path) {
    throw InvalidArgument("model " + rec.model_id + " has no stored card");
  }
  return text::read_file((root_ / *rec.card_path).string());
}

void CorpusStore::append_journal(const ModelRecord& rec) {
  std::lock_guard lock(mu_);
  append_line(root_ / kJournal, record_to_json(rec));
}

std::vector<ModelRecord> CorpusStore::journal() const {
  std::lock_guard lock(mu_);
  const auto entries = read_jsonl_records(root_ / kJournal);
  std::vector<ModelRecord> out;
  std::unordered_map<std::string, std::size_t> index;
  for (const auto& e : entries) {
    const auto [it, inserted] = index.emplace(e.model_id, out.size());
    if (inserted) {
      out.push_back(e);
    } else {
      out[it->second] = e;
    }
  }
  return out;
}

void CorpusStore::reset_journal() {
  std::lock_guard lock(mu_);
  std::error_code ec;
  fs::remove(root_ / kJournal, ec);
}

std::string record_to_json(const ModelRecord& rec) { return record_json(rec).dump(); }

ModelRecord record_from_json(std::string_view line) {
  try {
    return record_from(json::parse(line));
  } catch (const json::exception& e) {
    throw InvalidArgument(std::string("model record: ") + e.what());
  }
}

CorpusManifest build_manifest(CorpusStore& store, std::size_t batch_count, ManifestSource source) {
  if (batch_count < 1) throw InvalidArgument("batch_count must be >= 1");
  CorpusManifest m;
  m.records = store.journal();
  sort_records(m.records);
  m.batch_count = batch_count;
  m.source = source;
  m.created_at = "1970-01-01T00:00:00Z";
  for (const auto& r : m.records) m.created_at = std::max(m.created_at, r.fetched_at);

  std::string lines;
  const auto ranges = m.batch_ranges();
  for (std::size_t b = 0; b < ranges.size(); ++b) {
    for (std::size_t i = ranges[b].first; i < ranges[b].second; ++i) {
      ordered_json j = record_json(m.records[i]);
      j["batch"] = b;
      lines += j.dump();
      lines += '\n';
    }
  }
  ordered_json meta;
  meta["batch_count"] = batch_count;
  meta["created_at"] = m.created_at;
  meta["source"] = std::string(source_name(source));
  meta["record_count"] = m.records.size();
  ordered_json counts;
  for (const auto& [status, n] : m.status_counts()) counts[std::string(status_name(status))] = n;
  meta["status_counts"] = counts;
  text::write_file_atomic((store.root() / kManifest).string(), lines);
  text::write_file_atomic((store.root() / kManifestMeta).string(), meta.dump(2) + "\n");
  return m;
}

CorpusManifest load_manifest(const fs::path& root) {
  const fs::path meta_path = root / kManifestMeta;
  if (!fs::exists(meta_path)) throw IoError("no manifest in " + root.string());
  CorpusManifest m;
  try {
    const json meta = json::parse(text::read_file(meta_path.string()));
    m.batch_count = meta.at("batch_count").get<std::size_t>();
    m.created_at = meta.at("created_at").get<std::string>();
    m.source = parse_source(meta.at("source").get<std::string>());
  } catch (const json::exception& e) {
    throw IoError(meta_path.string() + ": " + e.what());
  }
  m.records = read_jsonl_records(root / kManifest);
  std::unordered_set<std::string> ids;
  for (const auto& r : m.records) {
    if (!ids.insert(r.model_id).second) throw IoError("duplicate model_id in manifest: " + r.model_id);
  }
  if (m.batch_count < 1) throw IoError("manifest batch_count must be >= 1");
  return m;
}

namespace {

struct ListingState {
  std::optional<std::string> next;
  bool complete = false;
};

void write_listing_state(const fs::path& root, const ListingState& st) {
  ordered_json j;
  j["next"] = st.next ? ordered_json(*st.next) : ordered_json(nullptr);
  j["complete"] = st.complete;
  text::write_file_atomic((root / kListingState).string(), j.dump(2) + "\n");
}

std::optional<ListingState> read_listing_state(const fs::path& root) {
  const fs::path p = root / kListingState;
  if (!fs::exists(p)) return std::nullopt;
  const json j = json::parse(text::read_file(p.string()));
  ListingState st;
  if (!j.at("next").is_null()) st.next = j.at("next").get<std::string>();
  st.complete = j.at("complete").get<bool>();
  return st;
}

std::vector<ModelRecord> read_listing(const fs::path& root) {
  std::vector<ModelRecord> out;
  std::unordered_set<std::string> seen;
  const fs::path p = root / kListing;
  if (!fs::exists(p)) return out;
  const std::string data = text::read_file(p.string());
  for (auto line : text::split_lines(data)) {
    if (text::trim(line).empty()) continue;
    const json j = json::parse(line);
    ModelRecord r;
    r.model_id = j.at("model_id").get<std::string>();
    r.downloads = json_count(j, "downloads");
    r.likes = json_count(j, "likes");
    if (seen.insert(r.model_id).second) out.push_back(std::move(r));
  }
  return out;
}

}  // namespace

CorpusManifest fetch_corpus(HubClient& client, CorpusStore& store, const FetchOptions& opts) {
  if (opts.workers < 1) throw InvalidArgument("workers must be >= 1");
  if (opts.batch_count < 1) throw InvalidArgument("batch_count must be >= 1");
  const fs::path& root = store.root();

  std::vector<ModelRecord> listed;
  ListingState state;
  const auto saved = opts.resume ? read_listing_state(root) : std::nullopt;
  if (saved) {
    state = *saved;
    listed = read_listing(root);
  } else {
    std::error_code ec;
    fs::remove(root / kListing, ec);
    store.reset_journal();
  }

  if (!state.complete) {
    auto lister = client.list_models(saved ? state.next : std::nullopt);
    std::unordered_set<std::string> seen;
    for (const auto& r : listed) seen.insert(r.model_id);
    while (auto page = lister.next_page()) {
      for (auto& r : *page) {
        if (!seen.insert(r.model_id).second) continue;
        ordered_json j;
        j["model_id"] = r.model_id;
        j["downloads"] = r.downloads;
        j["likes"] = r.likes;
        append_line(root / kListing, j.dump());
        listed.push_back(std::move(r));
      }
      write_listing_state(root, {lister.cursor(), false});
    }
    write_listing_state(root, {std::nullopt, true});
  }

  std::unordered_set<std::string> settled;
  for (const auto& r : store.journal()) {
    if (r.status != FetchStatus::error) settled.insert(r.model_id);
  }
  std::vector<const ModelRecord*> todo;
  for (const auto& r : listed) {
    if (!settled.count(r.model_id)) todo.push_back(&r);
  }

  std::atomic<std::size_t> next{0};
  std::atomic<bool> stop{false};
  std::exception_ptr failure;
  std::mutex failure_mu;
  const auto worker = [&] {
    while (!stop) {
      const std::size_t i = next.fetch_add(1);
      if (i >= todo.size() || (opts.max_cards && i >= opts.max_cards)) return;
      try {
        store.append_journal(client.fetch_card(*todo[i], store, opts.size_cutoff_bytes));
      } catch (...) {
        std::lock_guard lock(failure_mu);
        if (!failure) failure = std::current_exception();
        stop = true;
      }
    }
  };
  {
    std::vector<std::jthread> pool;
    const std::size_t n = std::min(opts.workers, std::max<std::size_t>(todo.size(), 1));
    for (std::size_t k = 0; k < n; ++k) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);
  if (opts.max_cards && todo.size() > opts.max_cards) {
    throw Error("fetch interrupted after " + std::to_string(opts.max_cards) + " cards; rerun with resume");
  }
  return build_manifest(store, opts.batch_count, ManifestSource::hub_api);
}

CorpusManifest import_local(const fs::path& src, const fs::path& sidecar, CorpusStore& store,
                            std::uint64_t size_cutoff_bytes, std::size_t batch_count, Clock& clock) {
  if (size_cutoff_bytes == 0) throw InvalidArgument("size cutoff must be positive");
  if (!fs::is_directory(src)) throw IoError("local corpus directory not found: " + src.string());
  const std::string meta = text::read_file(sidecar.string());
  store.reset_journal();
  std::size_t line_no = 0;
  std::unordered_set<std::string> seen;
  for (auto line : text::split_lines(meta)) {
    ++line_no;
    if (text::trim(line).empty()) continue;
    ModelRecord rec;
    try {
      const json j = json::parse(line);
      rec.model_id = j.at("model_id").get<std::string>();
      rec.downloads = json_count(j, "downloads");
      rec.likes = json_count(j, "likes");
    } catch (const std::exception& e) {
      throw IoError(sidecar.string() + ":" + std::to_string(line_no) + ": " + e.what());
    }
    if (!seen.insert(rec.model_id).second) {
      throw IoError(sidecar.string() + ":" + std::to_string(line_no) + ": duplicate model_id " + rec.model_id);
    }
    store.claim(rec.model_id);
    rec.fetched_at = format_utc(clock.utc_now());
    const fs::path card = src / rec.model_id / "README.md";
    if (!fs::is_regular_file(card)) {
      rec.status = FetchStatus::missing_card;
    } else {
      rec.card_path = CorpusStore::card_relpath(rec.model_id);
      rec.card_size_bytes = fs::file_size(card);
      if (rec.card_size_bytes > size_cutoff_bytes) {
        rec.status = FetchStatus::filtered_oversize;
        store.remove_card(rec.model_id);
      } else {
        store.write_card(rec.model_id, text::read_file(card.string()));
        rec.status = FetchStatus::fetched;
      }
    }
    store.append_journal(rec);
  }
  return build_manifest(store, batch_count, ManifestSource::local_dir);
}

}  // namespace cardgauge
