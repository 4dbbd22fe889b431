#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "wikimento/time.hpp"
#include "wikimento/timeline.hpp"

namespace wikimento {

enum class AreaKind { pre_archive, archive_extant };

std::string_view area_kind_name(AreaKind kind);

// Half-open interval [start, end) of seconds during which a mindist
// TimeGate would deliver content revealing the referenced episode.
struct SpoilerArea {
  AreaKind kind = AreaKind::pre_archive;
  EpochSecond start = 0;
  EpochSecond end = 0;
  std::size_t episode_index = 0;

  friend bool operator==(const SpoilerArea&, const SpoilerArea&) = default;
};

// [first episode air datetime, last episode air datetime); the probability
// denominator. Zero width when all episodes air simultaneously.
struct PotentialSpoilerZone {
  EpochSecond start = 0;
  EpochSecond end = 0;

  std::int64_t width() const { return end - start; }

  friend bool operator==(const PotentialSpoilerZone&,
                         const PotentialSpoilerZone&) = default;
};

PotentialSpoilerZone potential_spoiler_zone(const EventSeries& series);

enum class PageStatus { analyzed, unarchived, failed };

std::string_view page_status_name(PageStatus status);

struct SpoilerReport {
  std::string page_title;
  PageStatus status = PageStatus::analyzed;
  double probability = 0.0;
  std::int64_t spoiler_seconds = 0;
  std::int64_t zone_seconds = 0;
  std::vector<SpoilerArea> areas;
  std::size_t revision_count = 0;
  std::size_t memento_count = 0;
  std::size_t missed_update_count = 0;
  std::size_t redundant_memento_count = 0;
  std::string failure;  // non-empty only when status == failed
};

// Area covering requests that predate the archive's first capture: the
// first mapped memento delivers a revision written after the episode, so
// every desired datetime from the series start up to the episode's air
// time is exposed. Returns nothing when the episode is not shielded or
// the interval is zero-width. Throws NoCapturedMemento when the capture
// map is entirely empty.
std::optional<SpoilerArea> pre_archive_area(const EventSeries& series,
                                            std::size_t episode_index,
                                            const PageTimeline& timeline);

// Area between two consecutive captured mementos: past their midpoint
// mindist switches to the later memento, whose revision may postdate an
// episode airing between the two captures. The midpoint second itself is
// safe (ties resolve to the earlier memento), so the area is open at the
// midpoint: [h+1, episode air time).
std::optional<SpoilerArea> archive_extant_area(const EventSeries& series,
                                               std::size_t episode_index,
                                               const PageTimeline& timeline);

// All areas for one page, clipped to the potential spoiler zone, empty
// intervals dropped, sorted by (start, end, kind, episode). Throws
// NoCapturedMemento for pages with no archive presence.
std::vector<SpoilerArea> spoiler_areas(const EventSeries& series,
                                       const PageTimeline& timeline);

// Measure in whole seconds of the union of the areas; overlaps count once.
std::int64_t union_seconds(std::vector<SpoilerArea> areas);

struct ProbabilityResult {
  std::int64_t spoiler_seconds = 0;  // s
  std::int64_t zone_seconds = 0;     // c
  double probability = 0.0;          // s/c, or 0 when c == 0

  friend bool operator==(const ProbabilityResult&,
                         const ProbabilityResult&) = default;
};

ProbabilityResult spoiler_probability(const std::vector<SpoilerArea>& areas,
                                      const PotentialSpoilerZone& zone);

inline constexpr std::int64_t kDefaultZoneCap = 1'000'000;

// Verification oracle: walks every second of the zone, runs mindist over
// the captured mementos, and counts seconds where the delivered revision
// postdates a not-yet-aired episode. Not a production path. Throws
// ZoneTooLarge when the zone exceeds `zone_cap` seconds.
std::int64_t brute_force_spoiler_seconds(
    const EventSeries& series, const PageTimeline& timeline,
    std::int64_t zone_cap = kDefaultZoneCap);

// One report per timeline, in input order. Per-page failures land in the
// report's status, never abort the batch. `threads` 0 picks the hardware
// concurrency; 1 runs sequentially.
std::vector<SpoilerReport> analyze_wiki(const EventSeries& series,
                                        const std::vector<PageTimeline>& timelines,
                                        unsigned threads = 0);

}  // namespace wikimento
