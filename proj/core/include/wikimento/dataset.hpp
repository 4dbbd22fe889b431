#pragma once

#include <string>
#include <vector>

#include "wikimento/ingest.hpp"
#include "wikimento/time.hpp"
#include "wikimento/timeline.hpp"

namespace wikimento {

// On-disk dataset layout:
//   manifest.json            wiki id, page base URI, snapshot datetime
//   episodes.csv             optional; the series the wiki covers
//   pages/<enc(title)>.xml   one export document per page
//   timemaps/<enc(title)>.link
// <enc> percent-encodes everything outside [A-Za-z0-9._-].
struct DatasetManifest {
  std::string wiki_id;
  std::string base_uri;  // prefix for page URI-Rs, e.g. http://w.test/wiki/
  EpochSecond snapshot_datetime = 0;
  int format = 1;

  friend bool operator==(const DatasetManifest&,
                         const DatasetManifest&) = default;
};

std::string encode_component(std::string_view raw);
std::string decode_component(std::string_view encoded);

// MediaWiki-style page URI: spaces become underscores, the rest is
// percent-encoded conservatively.
std::string uri_for_title(std::string_view base_uri, std::string_view title);

void save_manifest(const std::string& dataset_dir, const DatasetManifest& m);
DatasetManifest load_manifest(const std::string& dataset_dir);

void dataset_store_page(const std::string& dataset_dir,
                        const std::string& title, std::string_view xml_bytes);
void dataset_store_timemap(const std::string& dataset_dir,
                           const std::string& title, std::string_view body);
void dataset_store_episodes(const std::string& dataset_dir,
                            std::string_view csv_bytes);

// True when episodes.csv exists in the dataset.
bool dataset_has_episodes(const std::string& dataset_dir);
EventSeries dataset_load_episodes(const std::string& dataset_dir);

// Loads every stored page (sorted by encoded filename), pairs it with its
// TimeMap when one exists, applies the redirect and consistency filters,
// and returns ready-to-analyze timelines. Skipped pages and dropped
// TimeMap entries are reported through `warnings`.
struct DatasetLoadResult {
  DatasetManifest manifest;
  std::vector<PageTimeline> timelines;
  std::size_t redirects_removed = 0;
};

DatasetLoadResult dataset_load(const std::string& dataset_dir,
                               std::vector<std::string>* warnings = nullptr);

}  // namespace wikimento
