#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "wikimento/time.hpp"

namespace wikimento {

// One episode of a series.
struct Event {
  std::string series_id;
  int season = 0;
  int episode = 0;
  std::string label;
  EpochSecond air_datetime = 0;

  friend bool operator==(const Event&, const Event&) = default;
};

// Episodes sorted ascending by air datetime (ties keep season/episode order).
struct EventSeries {
  std::vector<Event> events;

  bool empty() const { return events.empty(); }
  const Event& first() const { return events.front(); }
  const Event& last() const { return events.back(); }
};

EventSeries make_event_series(std::vector<Event> events);

// A version stored by the wiki itself. Wikis keep every revision, so the
// revision list is the complete edit history of a page.
struct Revision {
  std::int64_t id = 0;
  EpochSecond datetime = 0;
  bool is_redirect = false;

  friend bool operator==(const Revision&, const Revision&) = default;
};

// A capture held by a web archive. Sparse: most revisions have none.
struct Memento {
  std::string uri_m;
  EpochSecond datetime = 0;

  friend bool operator==(const Memento&, const Memento&) = default;
};

// Which revision each memento is a capture of. Partial: a memento taken
// before the page's first revision maps to nothing. Monotone by
// construction: later mementos never map to earlier revisions.
class CaptureMap {
public:
  CaptureMap() = default;
  explicit CaptureMap(std::vector<std::optional<std::size_t>> slots)
      : slots_(std::move(slots)) {}

  std::size_t memento_count() const { return slots_.size(); }
  std::optional<std::size_t> revision_for(std::size_t memento_index) const {
    return slots_.at(memento_index);
  }

  // Index of the earliest memento that has a mapping, if any.
  std::optional<std::size_t> first_mapped() const;
  std::size_t mapped_count() const;

  friend bool operator==(const CaptureMap&, const CaptureMap&) = default;

private:
  std::vector<std::optional<std::size_t>> slots_;
};

// Each memento is the capture of the latest revision at or before its own
// datetime; among revisions sharing a datetime the larger id wins (wiki ids
// are monotone). Inputs must be sorted ascending by datetime.
CaptureMap build_capture_map(const std::vector<Revision>& revisions,
                             const std::vector<Memento>& mementos);

// One wiki page: its full revision history, the archive's captures of it,
// and the mapping between the two.
struct PageTimeline {
  std::string page_title;
  std::string uri_r;
  std::vector<Revision> revisions;  // sorted by (datetime, id)
  std::vector<Memento> mementos;    // sorted by (datetime, uri_m)
  CaptureMap captures;
  EpochSecond snapshot_datetime = 0;  // when the wiki export was taken
};

// Sorts both lists and builds the capture map.
PageTimeline make_page_timeline(std::string page_title, std::string uri_r,
                                std::vector<Revision> revisions,
                                std::vector<Memento> mementos,
                                EpochSecond snapshot_datetime);

// Revisions that no memento captured, in datetime order.
std::vector<Revision> missed_updates(const PageTimeline& timeline);

// For each revision captured by n >= 1 mementos, n - 1 of those captures
// are redundant; unmapped mementos contribute nothing.
std::size_t redundant_memento_count(const PageTimeline& timeline);

}  // namespace wikimento
