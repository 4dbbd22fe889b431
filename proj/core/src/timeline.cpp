#include "wikimento/timeline.hpp"

#include <algorithm>
#include <set>
#include <tuple>

namespace wikimento {

EventSeries make_event_series(std::vector<Event> events) {
  std::stable_sort(events.begin(), events.end(),
                   [](const Event& a, const Event& b) {
                     return std::tie(a.air_datetime, a.season, a.episode) <
                            std::tie(b.air_datetime, b.season, b.episode);
                   });
  return EventSeries{std::move(events)};
}

std::optional<std::size_t> CaptureMap::first_mapped() const {
  for (std::size_t k = 0; k < slots_.size(); ++k) {
    if (slots_[k]) return k;
  }
  return std::nullopt;
}

std::size_t CaptureMap::mapped_count() const {
  std::size_t n = 0;
  for (const auto& s : slots_) {
    if (s) ++n;
  }
  return n;
}

CaptureMap build_capture_map(const std::vector<Revision>& revisions,
                             const std::vector<Memento>& mementos) {
  std::vector<std::optional<std::size_t>> slots(mementos.size());
  // Both lists are sorted, so a single merge pass suffices: advance the
  // revision cursor while the next revision is still at-or-before the
  // memento. Equal datetimes capture (the crawler sees the just-saved edit).
  std::size_t j = 0;
  std::optional<std::size_t> latest;
  for (std::size_t k = 0; k < mementos.size(); ++k) {
    while (j < revisions.size() &&
           revisions[j].datetime <= mementos[k].datetime) {
      latest = j;
      ++j;
    }
    slots[k] = latest;
  }
  return CaptureMap(std::move(slots));
}

PageTimeline make_page_timeline(std::string page_title, std::string uri_r,
                                std::vector<Revision> revisions,
                                std::vector<Memento> mementos,
                                EpochSecond snapshot_datetime) {
  std::sort(revisions.begin(), revisions.end(),
            [](const Revision& a, const Revision& b) {
              return std::tie(a.datetime, a.id) < std::tie(b.datetime, b.id);
            });
  std::sort(mementos.begin(), mementos.end(),
            [](const Memento& a, const Memento& b) {
              return std::tie(a.datetime, a.uri_m) <
                     std::tie(b.datetime, b.uri_m);
            });
  PageTimeline t;
  t.page_title = std::move(page_title);
  t.uri_r = std::move(uri_r);
  t.revisions = std::move(revisions);
  t.mementos = std::move(mementos);
  t.captures = build_capture_map(t.revisions, t.mementos);
  t.snapshot_datetime = snapshot_datetime;
  return t;
}

std::vector<Revision> missed_updates(const PageTimeline& timeline) {
  std::vector<bool> captured(timeline.revisions.size(), false);
  for (std::size_t k = 0; k < timeline.captures.memento_count(); ++k) {
    if (auto j = timeline.captures.revision_for(k)) captured[*j] = true;
  }
  std::vector<Revision> missed;
  for (std::size_t j = 0; j < timeline.revisions.size(); ++j) {
    if (!captured[j]) missed.push_back(timeline.revisions[j]);
  }
  return missed;
}

std::size_t redundant_memento_count(const PageTimeline& timeline) {
  std::set<std::size_t> distinct;
  std::size_t mapped = 0;
  for (std::size_t k = 0; k < timeline.captures.memento_count(); ++k) {
    if (auto j = timeline.captures.revision_for(k)) {
      ++mapped;
      distinct.insert(*j);
    }
  }
  return mapped - distinct.size();
}

}  // namespace wikimento
