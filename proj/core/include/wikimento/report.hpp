#pragma once

#include <optional>
#include <string>
#include <vector>

#include "wikimento/spoiler.hpp"
#include "wikimento/timeline.hpp"

namespace wikimento {

struct Stats {
  double mean = 0.0;
  std::optional<double> stddev;   // sample, undefined for n < 2
  std::optional<double> rel_err;  // (stddev / sqrt(n)) / mean, mean > 0 only
  std::size_t n = 0;
};

// Deterministic regardless of input order.
Stats compute_stats(std::vector<double> values);

struct WikiAggregate {
  std::string wiki_id;
  std::size_t page_count = 0;        // all reports
  std::size_t analyzed_count = 0;    // status == analyzed
  std::size_t unarchived_count = 0;
  std::size_t failed_count = 0;
  double unavailability = 0.0;       // unarchived / page_count
  Stats probability;                 // over analyzed pages
  Stats revisions_per_day;           // per page: count / span days
  Stats mementos_per_day;
};

// Aggregates one wiki's reports. `timelines` must be index-aligned with
// `reports` (analyze_wiki preserves order); per-day rates use the span
// from a page's first revision to its snapshot datetime and skip pages
// whose span is not positive. Throws Error on empty input.
WikiAggregate aggregate(const std::string& wiki_id,
                        const std::vector<SpoilerReport>& reports,
                        const std::vector<PageTimeline>& timelines);

// Per-page table, Table-2 shape: one row per report.
std::string render_reports_csv(const std::vector<SpoilerReport>& reports);

// One-row wiki summary, Table-3 shape.
std::string render_aggregate_csv(const WikiAggregate& aggregate);

// Plot-ready files, written under `out_dir`:
//   area_timeline.csv      per-page area rows plus revision/memento/episode ticks
//   histogram.csv          20 equal probability bins over [0, 1]
//   cdf.csv                empirical distribution of page probabilities
//   missed_updates.csv     per-page missed updates per day
//   redundant_mementos.csv per-page redundant mementos per day
// All files carry a header row even when empty. Throws IoError.
void write_plot_files(const std::string& out_dir,
                      const std::vector<SpoilerReport>& reports,
                      const std::vector<PageTimeline>& timelines,
                      const EventSeries& series);

void write_text_file(const std::string& path, std::string_view content);

}  // namespace wikimento
