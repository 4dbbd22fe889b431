#include "wikimento/spoiler.hpp"

#include <algorithm>
#include <thread>

#include "wikimento/errors.hpp"
#include "wikimento/heuristics.hpp"

namespace wikimento {

std::string_view area_kind_name(AreaKind kind) {
  return kind == AreaKind::pre_archive ? "pre_archive" : "archive_extant";
}

std::string_view page_status_name(PageStatus status) {
  switch (status) {
    case PageStatus::analyzed: return "analyzed";
    case PageStatus::unarchived: return "unarchived";
    default: return "failed";
  }
}

PotentialSpoilerZone potential_spoiler_zone(const EventSeries& series) {
  if (series.empty()) throw Error("event series is empty");
  return {series.first().air_datetime, series.last().air_datetime};
}

namespace {

struct CapturedMemento {
  EpochSecond memento_datetime;
  EpochSecond revision_datetime;
};

// Mementos with a capture mapping, in datetime order. Mementos taken
// before the page's first revision existed deliver nothing and cannot
// spoil, so they are not negotiation candidates here.
std::vector<CapturedMemento> captured_mementos(const PageTimeline& t) {
  std::vector<CapturedMemento> out;
  out.reserve(t.mementos.size());
  for (std::size_t k = 0; k < t.mementos.size(); ++k) {
    const auto j = t.captures.revision_for(k);
    if (!j) continue;
    out.push_back({t.mementos[k].datetime, t.revisions[*j].datetime});
  }
  return out;
}

}  // namespace

std::optional<SpoilerArea> pre_archive_area(const EventSeries& series,
                                            std::size_t episode_index,
                                            const PageTimeline& timeline) {
  const auto first = timeline.captures.first_mapped();
  if (!first) throw NoCapturedMemento();

  const auto j = *timeline.captures.revision_for(*first);
  const EpochSecond t_r = timeline.revisions[j].datetime;
  const EpochSecond t_m = timeline.mementos[*first].datetime;
  const EpochSecond t_e = series.events.at(episode_index).air_datetime;
  const EpochSecond t_e1 = series.first().air_datetime;

  if (t_e < t_r && t_e < t_m && t_e1 < t_e)
    return SpoilerArea{AreaKind::pre_archive, t_e1, t_e, episode_index};
  return std::nullopt;
}

std::optional<SpoilerArea> archive_extant_area(const EventSeries& series,
                                               std::size_t episode_index,
                                               const PageTimeline& timeline) {
  const EpochSecond t_e = series.events.at(episode_index).air_datetime;
  const auto captured = captured_mementos(timeline);
  if (captured.size() < 2) return std::nullopt;

  // The unique consecutive pair with t_prev < t_e < t_next, if any.
  const auto it = std::lower_bound(
      captured.begin(), captured.end(), t_e,
      [](const CapturedMemento& m, EpochSecond t) {
        return m.memento_datetime < t;
      });
  if (it == captured.begin() || it == captured.end()) return std::nullopt;
  const auto& prev = *(it - 1);
  const auto& next = *it;
  if (!(prev.memento_datetime < t_e && t_e < next.memento_datetime))
    return std::nullopt;

  const EpochSecond h = midpoint(prev.memento_datetime, next.memento_datetime);
  // The midpoint second still negotiates to the earlier memento, so the
  // exposed interval starts one second after it.
  if (h + 1 < t_e && t_e < next.revision_datetime)
    return SpoilerArea{AreaKind::archive_extant, h + 1, t_e, episode_index};
  return std::nullopt;
}

std::vector<SpoilerArea> spoiler_areas(const EventSeries& series,
                                       const PageTimeline& timeline) {
  if (series.empty()) throw Error("event series is empty");
  if (!timeline.captures.first_mapped()) throw NoCapturedMemento();

  const auto zone = potential_spoiler_zone(series);
  std::vector<SpoilerArea> out;
  for (std::size_t i = 0; i < series.events.size(); ++i) {
    for (auto area : {pre_archive_area(series, i, timeline),
                      archive_extant_area(series, i, timeline)}) {
      if (!area) continue;
      area->start = std::max(area->start, zone.start);
      area->end = std::min(area->end, zone.end);
      if (area->start < area->end) out.push_back(*area);
    }
  }
  std::sort(out.begin(), out.end(), [](const SpoilerArea& a, const SpoilerArea& b) {
    return std::tie(a.start, a.end, a.kind, a.episode_index) <
           std::tie(b.start, b.end, b.kind, b.episode_index);
  });
  return out;
}

std::int64_t union_seconds(std::vector<SpoilerArea> areas) {
  std::erase_if(areas, [](const SpoilerArea& a) { return a.start >= a.end; });
  std::sort(areas.begin(), areas.end(),
            [](const SpoilerArea& a, const SpoilerArea& b) {
              return std::tie(a.start, a.end) < std::tie(b.start, b.end);
            });
  std::int64_t total = 0;
  EpochSecond cur_start = 0;
  EpochSecond cur_end = 0;
  bool open = false;
  for (const auto& a : areas) {
    if (!open) {
      cur_start = a.start;
      cur_end = a.end;
      open = true;
    } else if (a.start > cur_end) {
      total += cur_end - cur_start;
      cur_start = a.start;
      cur_end = a.end;
    } else {
      cur_end = std::max(cur_end, a.end);
    }
  }
  if (open) total += cur_end - cur_start;
  return total;
}

ProbabilityResult spoiler_probability(const std::vector<SpoilerArea>& areas,
                                      const PotentialSpoilerZone& zone) {
  ProbabilityResult r;
  r.zone_seconds = zone.width();
  r.spoiler_seconds = union_seconds(areas);
  r.probability = r.zone_seconds > 0
                      ? static_cast<double>(r.spoiler_seconds) /
                            static_cast<double>(r.zone_seconds)
                      : 0.0;
  return r;
}

std::int64_t brute_force_spoiler_seconds(const EventSeries& series,
                                         const PageTimeline& timeline,
                                         std::int64_t zone_cap) {
  const auto zone = potential_spoiler_zone(series);
  if (zone.width() > zone_cap)
    throw ZoneTooLarge("potential spoiler zone of " +
                       std::to_string(zone.width()) +
                       " seconds exceeds the brute-force cap of " +
                       std::to_string(zone_cap));
  if (zone.width() <= 0) return 0;

  const auto captured = captured_mementos(timeline);
  if (captured.empty()) return 0;
  std::vector<EpochSecond> candidates;
  candidates.reserve(captured.size());
  for (const auto& m : captured) candidates.push_back(m.memento_datetime);

  std::int64_t spoilers = 0;
  for (EpochSecond t_a = zone.start; t_a < zone.end; ++t_a) {
    const auto picked = select_mindist(candidates, t_a);
    const EpochSecond t_r = captured[picked.index].revision_datetime;
    for (const auto& e : series.events) {
      if (t_a < e.air_datetime && e.air_datetime < t_r) {
        ++spoilers;
        break;
      }
    }
  }
  return spoilers;
}

namespace {

SpoilerReport analyze_page(const EventSeries& series,
                           const PotentialSpoilerZone& zone,
                           const PageTimeline& t) {
  SpoilerReport r;
  r.page_title = t.page_title;
  r.revision_count = t.revisions.size();
  r.memento_count = t.mementos.size();
  r.missed_update_count = missed_updates(t).size();
  r.redundant_memento_count = redundant_memento_count(t);
  r.zone_seconds = zone.width();
  try {
    r.areas = spoiler_areas(series, t);
    const auto frag = spoiler_probability(r.areas, zone);
    r.spoiler_seconds = frag.spoiler_seconds;
    r.zone_seconds = frag.zone_seconds;
    r.probability = frag.probability;
    r.status = PageStatus::analyzed;
  } catch (const NoCapturedMemento&) {
    r.status = PageStatus::unarchived;
  } catch (const std::exception& e) {
    r.status = PageStatus::failed;
    r.failure = e.what();
  }
  return r;
}

}  // namespace

std::vector<SpoilerReport> analyze_wiki(const EventSeries& series,
                                        const std::vector<PageTimeline>& timelines,
                                        unsigned threads) {
  const auto zone = potential_spoiler_zone(series);
  std::vector<SpoilerReport> out(timelines.size());

  if (threads == 0) threads = std::thread::hardware_concurrency();
  if (threads == 0) threads = 1;
  threads = std::min<unsigned>(threads, static_cast<unsigned>(timelines.size()));

  if (threads <= 1) {
    for (std::size_t i = 0; i < timelines.size(); ++i)
      out[i] = analyze_page(series, zone, timelines[i]);
    return out;
  }

  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (unsigned w = 0; w < threads; ++w) {
    pool.emplace_back([&, w] {
      for (std::size_t i = w; i < timelines.size(); i += threads)
        out[i] = analyze_page(series, zone, timelines[i]);
    });
  }
  for (auto& th : pool) th.join();
  return out;
}

}  // namespace wikimento
