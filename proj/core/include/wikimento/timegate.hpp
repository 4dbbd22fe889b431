#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "wikimento/heuristics.hpp"
#include "wikimento/time.hpp"
#include "wikimento/timeline.hpp"

namespace wikimento {

struct StoreRevision {
  std::int64_t revision_id = 0;
  EpochSecond datetime = 0;
  std::string uri_m;  // absolute, or service-relative starting with '/'

  friend bool operator==(const StoreRevision&, const StoreRevision&) = default;
};

struct StoreEntry {
  std::string uri_r;
  std::string page_title;
  std::vector<StoreRevision> revisions;  // ascending (datetime, id), never empty
};

struct StoreOptions {
  // When set, URI-Ms point back at the origin wiki in oldid style:
  // oldid_base + revisionId. Otherwise they are served locally as
  // /memento/{revisionId}.
  std::string oldid_base;
};

// Immutable snapshot of the revisions the TimeGate negotiates over.
class RevisionStore {
 public:
  RevisionStore() = default;

  // Revision ids must be unique across all pages when URI-Ms are served
  // locally, because /memento/{id} addresses them globally; duplicates
  // throw Error.
  static RevisionStore from_timelines(const std::vector<PageTimeline>& pages,
                                      const StoreOptions& options = {});

  // Exact URI-R match, with the page title (and its underscored form)
  // accepted as a convenience alias.
  const StoreEntry* find_original(std::string_view key) const;

  struct MementoRef {
    const StoreEntry* entry;
    const StoreRevision* revision;
  };
  std::optional<MementoRef> find_memento(std::int64_t revision_id) const;

  const std::vector<StoreEntry>& entries() const { return entries_; }
  std::size_t page_count() const { return entries_.size(); }

 private:
  std::vector<StoreEntry> entries_;
  std::map<std::string, std::size_t, std::less<>> by_key_;
  std::map<std::int64_t, std::pair<std::size_t, std::size_t>> by_revision_id_;
};

struct NegotiationResult {
  std::string uri_m;
  EpochSecond memento_datetime = 0;
  std::int64_t revision_id = 0;
  Heuristic heuristic = Heuristic::minpast;
};

// Selects the revision for the desired datetime. Nothing when minpast has
// no revision at or before `desired` (the spoiler-safe refusal).
std::optional<NegotiationResult> negotiate(const StoreEntry& entry,
                                           EpochSecond desired, Heuristic h);

struct ServiceConfig {
  Heuristic default_heuristic = Heuristic::minpast;
  // Base for absolute URIs in Location/Link headers; derived from the
  // request's Host header when empty.
  std::string base_uri;
};

// Standalone RFC 7089 pattern TimeGate over a RevisionStore.
// Endpoints: /timegate/{uri}, /timemap/{uri}, /memento/{id}, /healthz.
class TimegateService {
 public:
  TimegateService(RevisionStore store, ServiceConfig config = {});
  ~TimegateService();

  TimegateService(const TimegateService&) = delete;
  TimegateService& operator=(const TimegateService&) = delete;

  // Test path: bind an ephemeral port (returns it, -1 on failure), then
  // run serve_after_bind() on a thread.
  int bind_any(const std::string& host);
  bool serve_after_bind();  // blocking
  bool listen(const std::string& host, int port);  // blocking
  void stop();
  bool is_running() const;

  const RevisionStore& store() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace wikimento
