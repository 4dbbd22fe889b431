#include "wikimento/heuristics.hpp"

#include <cstdlib>
#include <random>
#include <tuple>

#include "doctest.h"
#include "wikimento/errors.hpp"

using namespace wikimento;

namespace {

// Exhaustive linear-scan oracles, independent of the binary-search path.
// Distance ties across the midpoint go to the earlier datetime. Within a
// run of candidates sharing one datetime, the representative is the last
// index when the run is at or before t (the page state at that instant)
// and the first index when it is after t (the next state change).
std::size_t oracle_mindist(const std::vector<EpochSecond>& c, EpochSecond t) {
  auto dist = [&](std::size_t i) {
    return c[i] >= t ? static_cast<std::uint64_t>(c[i]) - static_cast<std::uint64_t>(t)
                     : static_cast<std::uint64_t>(t) - static_cast<std::uint64_t>(c[i]);
  };
  auto key = [&](std::size_t i) {
    const bool future = c[i] > t;
    const auto pos = future ? static_cast<std::int64_t>(i)
                            : -static_cast<std::int64_t>(i);
    return std::tuple(dist(i), future, pos);
  };
  std::size_t best = 0;
  for (std::size_t i = 1; i < c.size(); ++i)
    if (key(i) < key(best)) best = i;
  return best;
}

std::optional<std::size_t> oracle_minpast(const std::vector<EpochSecond>& c,
                                          EpochSecond t) {
  std::optional<std::size_t> best;
  for (std::size_t i = 0; i < c.size(); ++i)
    if (c[i] <= t) best = i;
  return best;
}

std::vector<EpochSecond> random_sorted(std::mt19937_64& rng, std::size_t max_n,
                                       EpochSecond lo, EpochSecond hi) {
  std::uniform_int_distribution<std::size_t> nd(1, max_n);
  std::uniform_int_distribution<EpochSecond> td(lo, hi);
  std::vector<EpochSecond> out(nd(rng));
  for (auto& v : out) v = td(rng);
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

TEST_CASE("heuristic names round-trip") {
  CHECK(heuristic_from_name("mindist") == Heuristic::mindist);
  CHECK(heuristic_from_name("minpast") == Heuristic::minpast);
  CHECK(heuristic_from_name("closest") == std::nullopt);
  CHECK(heuristic_name(Heuristic::mindist) == "mindist");
  CHECK(heuristic_name(Heuristic::minpast) == "minpast");
}

TEST_CASE("mindist picks the closest candidate") {
  const std::vector<EpochSecond> c{1000, 2000};
  CHECK(select_mindist(c, 1400) == Selection{0, 1000});
  CHECK(select_mindist(c, 1500) == Selection{0, 1000});  // tie -> earlier
  CHECK(select_mindist(c, 1501) == Selection{1, 2000});
  CHECK(select_mindist(c, 500) == Selection{0, 1000});
  CHECK(select_mindist(c, 99999) == Selection{1, 2000});
  CHECK(select_mindist(c, 1000) == Selection{0, 1000});
  CHECK(select_mindist(c, 2000) == Selection{1, 2000});
}

TEST_CASE("minpast never goes past the desired datetime") {
  const std::vector<EpochSecond> c{1000, 2000};
  CHECK(select_minpast(c, 1999) == Selection{0, 1000});
  CHECK(select_minpast(c, 2000) == Selection{1, 2000});
  CHECK(select_minpast(c, 999) == std::nullopt);
  CHECK(select_minpast(c, 1000) == Selection{0, 1000});
  CHECK(select_minpast(c, 99999) == Selection{1, 2000});
}

TEST_CASE("empty candidate lists are an error") {
  CHECK_THROWS_AS(select_mindist({}, 0), EmptyCandidates);
  CHECK_THROWS_AS(select_minpast({}, 0), EmptyCandidates);
}

TEST_CASE("midpoint floors and validates order") {
  CHECK(midpoint(1000, 2000) == 1500);
  CHECK(midpoint(1000, 2001) == 1500);
  CHECK(midpoint(5, 5) == 5);
  CHECK(midpoint(-3, 0) == -2);  // floor(-1.5), not truncation
  CHECK(midpoint(-2, -1) == -2);
  CHECK_THROWS_AS(midpoint(2, 1), OrderViolation);
}

TEST_CASE("midpoint does not overflow at the epoch range edges") {
  const EpochSecond big = std::numeric_limits<EpochSecond>::max();
  CHECK(midpoint(big - 2, big) == big - 1);
  const EpochSecond small = std::numeric_limits<EpochSecond>::min();
  CHECK(midpoint(small, small + 2) == small + 1);
  CHECK(midpoint(small, big) == -1);  // floor(-0.5)
}

TEST_CASE("mindist agrees with the linear-scan oracle") {
  std::mt19937_64 rng(0x5EED0001);
  std::uniform_int_distribution<EpochSecond> td(-1000, 11000);
  for (int trial = 0; trial < 10000; ++trial) {
    const auto c = random_sorted(rng, 12, 0, 10000);
    const EpochSecond t = td(rng);
    const auto got = select_mindist(c, t);
    const auto want = oracle_mindist(c, t);
    CHECK(got.index == want);
    CHECK(got.datetime == c[got.index]);
  }
}

TEST_CASE("minpast agrees with the linear-scan oracle and never overshoots") {
  std::mt19937_64 rng(0x5EED0002);
  std::uniform_int_distribution<EpochSecond> td(-1000, 11000);
  for (int trial = 0; trial < 10000; ++trial) {
    const auto c = random_sorted(rng, 12, 0, 10000);
    const EpochSecond t = td(rng);
    const auto got = select_minpast(c, t);
    const auto want = oracle_minpast(c, t);
    CHECK(got.has_value() == want.has_value());
    if (got) {
      CHECK(got->index == *want);
      CHECK(got->datetime <= t);  // the no-spoiler guarantee
    }
    if (t >= c.back()) {
      REQUIRE(got.has_value());
      CHECK(got->index == c.size() - 1);
    }
  }
}

TEST_CASE("decision boundary between consecutive candidates") {
  std::mt19937_64 rng(0x5EED0003);
  std::uniform_int_distribution<EpochSecond> start(0, 100000);
  std::uniform_int_distribution<EpochSecond> gap(1, 2000);
  for (int trial = 0; trial < 50; ++trial) {
    const EpochSecond a = start(rng);
    const EpochSecond b = a + gap(rng);
    const std::vector<EpochSecond> c{a, b};
    const EpochSecond h = midpoint(a, b);
    for (EpochSecond t = a; t <= b; ++t) {
      const auto got = select_mindist(c, t);
      if (t <= h)
        CHECK(got.index == 0);
      else
        CHECK(got.index == 1);
    }
  }
}
