#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "wikimento/heuristics.hpp"
#include "wikimento/ingest.hpp"
#include "wikimento/spoiler.hpp"
#include "wikimento/timeline.hpp"

using namespace wikimento;

namespace {

std::vector<EpochSecond> sorted_datetimes(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<EpochSecond> gap(1, 100'000);
  std::vector<EpochSecond> out;
  out.reserve(n);
  EpochSecond t = 0;
  for (std::size_t i = 0; i < n; ++i) out.push_back(t += gap(rng));
  return out;
}

PageTimeline synthetic_timeline(std::size_t revisions, std::size_t mementos,
                                std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const auto rev_times = sorted_datetimes(revisions, rng());
  std::vector<Revision> revs;
  for (std::size_t i = 0; i < rev_times.size(); ++i)
    revs.push_back({static_cast<std::int64_t>(i + 1), rev_times[i], false});

  std::uniform_int_distribution<std::size_t> pick(0, rev_times.size() - 1);
  std::vector<Memento> mems;
  for (std::size_t i = 0; i < mementos; ++i) {
    const auto at = rev_times[pick(rng)];
    mems.push_back({"http://a.test/web/" + std::to_string(i) + "/p",
                    at + static_cast<EpochSecond>(i % 7)});
  }
  return make_page_timeline("bench page", "http://w.test/wiki/Bench_page",
                            std::move(revs), std::move(mems),
                            rev_times.back() + 1'000'000);
}

EventSeries synthetic_series(std::size_t n, EpochSecond span) {
  std::vector<Event> events;
  for (std::size_t i = 0; i < n; ++i)
    events.push_back({"show", 1, static_cast<int>(i + 1),
                      "e" + std::to_string(i + 1),
                      static_cast<EpochSecond>(i + 1) * span /
                          static_cast<EpochSecond>(n + 1)});
  return make_event_series(std::move(events));
}

void bm_select_mindist(benchmark::State& state) {
  const auto candidates = sorted_datetimes(
      static_cast<std::size_t>(state.range(0)), 7);
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<EpochSecond> pick(0, candidates.back() + 1000);
  for (auto _ : state)
    benchmark::DoNotOptimize(select_mindist(candidates, pick(rng)));
}
BENCHMARK(bm_select_mindist)->Arg(1'000)->Arg(100'000);

void bm_select_minpast(benchmark::State& state) {
  const auto candidates = sorted_datetimes(
      static_cast<std::size_t>(state.range(0)), 7);
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<EpochSecond> pick(0, candidates.back() + 1000);
  for (auto _ : state)
    benchmark::DoNotOptimize(select_minpast(candidates, pick(rng)));
}
BENCHMARK(bm_select_minpast)->Arg(1'000)->Arg(100'000);

void bm_build_capture_map(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto timeline = synthetic_timeline(n, n, 23);
  for (auto _ : state)
    benchmark::DoNotOptimize(
        build_capture_map(timeline.revisions, timeline.mementos));
}
BENCHMARK(bm_build_capture_map)->Arg(1'000)->Arg(50'000);

void bm_spoiler_areas(benchmark::State& state) {
  const auto timeline = synthetic_timeline(
      static_cast<std::size_t>(state.range(0)), 200, 31);
  const auto series =
      synthetic_series(100, timeline.revisions.back().datetime);
  for (auto _ : state)
    benchmark::DoNotOptimize(spoiler_areas(series, timeline));
}
BENCHMARK(bm_spoiler_areas)->Arg(1'000)->Arg(20'000);

void bm_brute_force_oracle(benchmark::State& state) {
  const auto timeline = synthetic_timeline(20, 10, 47);
  const auto series = synthetic_series(
      8, timeline.revisions.back().datetime);
  for (auto _ : state)
    benchmark::DoNotOptimize(
        brute_force_spoiler_seconds(series, timeline, 10'000'000));
}
BENCHMARK(bm_brute_force_oracle);

void bm_parse_timemap(benchmark::State& state) {
  TimeMapDocument doc;
  doc.uri_r = "http://w.test/wiki/Bench_page";
  doc.uri_t = "http://a.test/timemap/link/" + doc.uri_r;
  for (int i = 0; i < 500; ++i)
    doc.entries.push_back(
        {"http://a.test/web/" + std::to_string(i) + "/p",
         static_cast<EpochSecond>(i) * 86'400});
  const auto bytes = serialize_timemap(doc);
  for (auto _ : state) benchmark::DoNotOptimize(parse_timemap(bytes));
}
BENCHMARK(bm_parse_timemap);

}  // namespace

BENCHMARK_MAIN();
