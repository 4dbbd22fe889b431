#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "wikimento/time.hpp"
#include "wikimento/timeline.hpp"

namespace wikimento {

// One page of a MediaWiki XML export, metadata only.
struct WikiExportDocument {
  std::string page_title;
  std::vector<Revision> revisions;  // document order, unsorted
  bool is_redirect = false;
  EpochSecond snapshot_datetime = 0;  // supplied by the dataset, not the XML

  friend bool operator==(const WikiExportDocument&,
                         const WikiExportDocument&) = default;
};

// Parses the export subset: page > title, redirect?, revision > id,
// timestamp, text. A page is flagged as a redirect when it carries the
// redirect element or its latest revision text starts with the redirect
// directive. Structural XML problems throw MalformedExport with a byte
// offset; a page missing required fields is skipped with a warning.
std::vector<WikiExportDocument> parse_wiki_export(
    std::string_view bytes, std::vector<std::string>* warnings = nullptr);

// Renders documents back to export XML (metadata only; revision text is
// not retained beyond the redirect flag).
std::string serialize_wiki_export(const std::vector<WikiExportDocument>& docs);

struct TimeMapEntry {
  std::string uri_m;
  EpochSecond datetime = 0;

  friend bool operator==(const TimeMapEntry&, const TimeMapEntry&) = default;
};

struct TimeMapDocument {
  std::string uri_r;
  std::string uri_t;
  std::string uri_g;  // timegate link, empty when absent
  std::vector<TimeMapEntry> entries;  // ascending by datetime

  friend bool operator==(const TimeMapDocument&,
                         const TimeMapDocument&) = default;
};

// Parses an RFC 7089 link-format TimeMap: rel="original" names the URI-R,
// rel="self" (or "timemap") the URI-T, and every link whose rel tokens
// include "memento" contributes an entry. Entries with missing or
// unparseable datetime attributes are dropped with a warning. Throws
// MalformedTimeMap when the body does not scan as link-format at all.
TimeMapDocument parse_timemap(std::string_view bytes,
                              std::vector<std::string>* warnings = nullptr);

std::string serialize_timemap(const TimeMapDocument& doc);

// Episode list file: UTF-8 CSV, header series,season,episode,title,
// air_datetime; air_datetime is ISO-8601, date-only rows meaning midnight
// UTC. Result is sorted by air datetime. Throws MalformedEpisodeList with
// the offending 1-based line number.
EventSeries parse_episode_list(std::string_view bytes);

std::string serialize_episode_list(const EventSeries& series);

struct RedirectFilterResult {
  std::vector<WikiExportDocument> pages;
  std::size_t removed = 0;
};

RedirectFilterResult filter_redirects(std::vector<WikiExportDocument> pages);

// Drops every memento taken after the page snapshot and rebuilds the
// capture map. Order of the surviving mementos is preserved.
PageTimeline consistency_filter(const PageTimeline& timeline);

}  // namespace wikimento
