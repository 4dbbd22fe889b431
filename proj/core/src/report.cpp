#include "wikimento/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include "csv.hpp"
#include "wikimento/errors.hpp"

namespace wikimento {

namespace {

std::string fmt(double v) {
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%.6f", v);
  return buffer;
}

std::string fmt_opt(const std::optional<double>& v) {
  return v ? fmt(*v) : "n/a";
}

std::string stats_columns(const Stats& s) {
  std::string out = fmt(s.mean);
  out += "," + fmt_opt(s.stddev);
  out += "," + fmt_opt(s.rel_err);
  return out;
}

// Span from the first revision to the snapshot, in days; nothing when it
// is not positive.
std::optional<double> span_days(const PageTimeline& t) {
  if (t.revisions.empty()) return std::nullopt;
  const auto seconds = t.snapshot_datetime - t.revisions.front().datetime;
  if (seconds <= 0) return std::nullopt;
  return static_cast<double>(seconds) / 86400.0;
}

}  // namespace

Stats compute_stats(std::vector<double> values) {
  Stats s;
  s.n = values.size();
  if (values.empty()) return s;
  std::sort(values.begin(), values.end());
  double sum = 0.0;
  for (double v : values) sum += v;
  s.mean = sum / static_cast<double>(s.n);
  if (s.n >= 2) {
    double squares = 0.0;
    for (double v : values) squares += (v - s.mean) * (v - s.mean);
    const double stddev =
        std::sqrt(squares / static_cast<double>(s.n - 1));
    s.stddev = stddev;
    if (s.mean > 0)
      s.rel_err = stddev / std::sqrt(static_cast<double>(s.n)) / s.mean;
  }
  return s;
}

WikiAggregate aggregate(const std::string& wiki_id,
                        const std::vector<SpoilerReport>& reports,
                        const std::vector<PageTimeline>& timelines) {
  if (reports.empty()) throw Error("no reports to aggregate");
  if (reports.size() != timelines.size())
    throw Error("reports and timelines are not aligned");

  WikiAggregate agg;
  agg.wiki_id = wiki_id;
  agg.page_count = reports.size();

  std::vector<double> probabilities;
  std::vector<double> revision_rates;
  std::vector<double> memento_rates;
  for (std::size_t i = 0; i < reports.size(); ++i) {
    const auto& report = reports[i];
    switch (report.status) {
      case PageStatus::analyzed:
        ++agg.analyzed_count;
        probabilities.push_back(report.probability);
        break;
      case PageStatus::unarchived: ++agg.unarchived_count; break;
      case PageStatus::failed: ++agg.failed_count; break;
    }
    if (const auto days = span_days(timelines[i])) {
      revision_rates.push_back(
          static_cast<double>(report.revision_count) / *days);
      memento_rates.push_back(
          static_cast<double>(report.memento_count) / *days);
    }
  }

  agg.unavailability = static_cast<double>(agg.unarchived_count) /
                       static_cast<double>(agg.page_count);
  agg.probability = compute_stats(std::move(probabilities));
  agg.revisions_per_day = compute_stats(std::move(revision_rates));
  agg.mementos_per_day = compute_stats(std::move(memento_rates));
  return agg;
}

std::string render_reports_csv(const std::vector<SpoilerReport>& reports) {
  std::string out =
      "page,status,probability,spoiler_seconds,zone_seconds,spoiler_areas,"
      "revisions,mementos,missed_updates,redundant_mementos\n";
  for (const auto& r : reports) {
    out += detail::csv_escape(r.page_title);
    out += ",";
    out += page_status_name(r.status);
    out += "," + fmt(r.probability);
    out += "," + std::to_string(r.spoiler_seconds);
    out += "," + std::to_string(r.zone_seconds);
    out += "," + std::to_string(r.areas.size());
    out += "," + std::to_string(r.revision_count);
    out += "," + std::to_string(r.memento_count);
    out += "," + std::to_string(r.missed_update_count);
    out += "," + std::to_string(r.redundant_memento_count);
    out += "\n";
  }
  return out;
}

std::string render_aggregate_csv(const WikiAggregate& agg) {
  std::string out =
      "wiki,pages,analyzed,unarchived,failed,unavailability,"
      "prob_mean,prob_stddev,prob_rel_err,"
      "revisions_per_day_mean,revisions_per_day_stddev,revisions_per_day_rel_err,"
      "mementos_per_day_mean,mementos_per_day_stddev,mementos_per_day_rel_err\n";
  out += detail::csv_escape(agg.wiki_id);
  out += "," + std::to_string(agg.page_count);
  out += "," + std::to_string(agg.analyzed_count);
  out += "," + std::to_string(agg.unarchived_count);
  out += "," + std::to_string(agg.failed_count);
  out += "," + fmt(agg.unavailability);
  out += "," + stats_columns(agg.probability);
  out += "," + stats_columns(agg.revisions_per_day);
  out += "," + stats_columns(agg.mementos_per_day);
  out += "\n";
  return out;
}

void write_text_file(const std::string& path, std::string_view content) {
  const auto parent = std::filesystem::path(path).parent_path();
  if (!parent.empty()) std::filesystem::create_directories(parent);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path);
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) throw IoError("short write to " + path);
}

void write_plot_files(const std::string& out_dir,
                      const std::vector<SpoilerReport>& reports,
                      const std::vector<PageTimeline>& timelines,
                      const EventSeries& series) {
  if (reports.size() != timelines.size())
    throw Error("reports and timelines are not aligned");
  const auto dir = std::filesystem::path(out_dir);

  // Area timelines with event/revision/memento ticks.
  {
    std::string out = "page,row,x,y,tag\n";
    for (const auto& e : series.events) {
      out += ",episode," + std::to_string(e.air_datetime) + "," +
             std::to_string(e.air_datetime) + "," + detail::csv_escape(e.label) +
             "\n";
    }
    for (std::size_t i = 0; i < reports.size(); ++i) {
      const auto& report = reports[i];
      const auto page = detail::csv_escape(report.page_title);
      for (const auto& area : report.areas) {
        const auto label = area.episode_index < series.events.size()
                               ? series.events[area.episode_index].label
                               : "";
        out += page + ",area," + std::to_string(area.start) + "," +
               std::to_string(area.end) + "," +
               detail::csv_escape(std::string(area_kind_name(area.kind)) +
                                  "|" + label) +
               "\n";
      }
      for (const auto& rev : timelines[i].revisions) {
        out += page + ",revision," + std::to_string(rev.datetime) + "," +
               std::to_string(rev.datetime) + ",\n";
      }
      for (const auto& m : timelines[i].mementos) {
        out += page + ",memento," + std::to_string(m.datetime) + "," +
               std::to_string(m.datetime) + ",\n";
      }
    }
    write_text_file((dir / "area_timeline.csv").string(), out);
  }

  std::vector<double> probabilities;
  for (const auto& r : reports)
    if (r.status == PageStatus::analyzed)
      probabilities.push_back(r.probability);
  std::sort(probabilities.begin(), probabilities.end());

  // Histogram: 20 equal bins over [0, 1], top bin closed.
  {
    std::string out = "bin_start,bin_end,count\n";
    if (!probabilities.empty()) {
      constexpr int bins = 20;
      std::vector<std::size_t> counts(bins, 0);
      for (double p : probabilities) {
        auto bin = static_cast<int>(p * bins);
        if (bin >= bins) bin = bins - 1;
        if (bin < 0) bin = 0;
        ++counts[static_cast<std::size_t>(bin)];
      }
      for (int b = 0; b < bins; ++b) {
        char row[96];
        std::snprintf(row, sizeof(row), "%.2f,%.2f,%zu\n",
                      static_cast<double>(b) / bins,
                      static_cast<double>(b + 1) / bins,
                      counts[static_cast<std::size_t>(b)]);
        out += row;
      }
    }
    write_text_file((dir / "histogram.csv").string(), out);
  }

  // Empirical CDF.
  {
    std::string out = "probability,fraction\n";
    const auto n = probabilities.size();
    for (std::size_t i = 0; i < n; ++i) {
      out += fmt(probabilities[i]) + "," +
             fmt(static_cast<double>(i + 1) / static_cast<double>(n)) + "\n";
    }
    write_text_file((dir / "cdf.csv").string(), out);
  }

  // Per-page per-day counts.
  const auto rate_file = [&](const char* name, auto count_of) {
    std::string out = "page,per_day\n";
    for (std::size_t i = 0; i < reports.size(); ++i) {
      const auto days = span_days(timelines[i]);
      if (!days) continue;
      out += detail::csv_escape(reports[i].page_title) + "," +
             fmt(static_cast<double>(count_of(reports[i])) / *days) + "\n";
    }
    write_text_file((dir / name).string(), out);
  };
  rate_file("missed_updates.csv",
            [](const SpoilerReport& r) { return r.missed_update_count; });
  rate_file("redundant_mementos.csv",
            [](const SpoilerReport& r) { return r.redundant_memento_count; });
}

}  // namespace wikimento
