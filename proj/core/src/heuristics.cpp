#include "wikimento/heuristics.hpp"

#include <algorithm>
#include <cstdint>
#include <numeric>

#include "wikimento/errors.hpp"

namespace wikimento {

std::optional<Heuristic> heuristic_from_name(std::string_view name) {
  if (name == "mindist") return Heuristic::mindist;
  if (name == "minpast") return Heuristic::minpast;
  return std::nullopt;
}

std::string_view heuristic_name(Heuristic h) {
  return h == Heuristic::mindist ? "mindist" : "minpast";
}

namespace {

// |a - b| without signed overflow for any pair of int64 values.
std::uint64_t distance(EpochSecond a, EpochSecond b) {
  const auto ua = static_cast<std::uint64_t>(a);
  const auto ub = static_cast<std::uint64_t>(b);
  return a >= b ? ua - ub : ub - ua;
}

}  // namespace

Selection select_mindist(const std::vector<EpochSecond>& candidates,
                         EpochSecond desired) {
  if (candidates.empty()) throw EmptyCandidates();

  // First candidate strictly after `desired`; the nearest candidate is
  // either that one or its predecessor.
  const auto it =
      std::upper_bound(candidates.begin(), candidates.end(), desired);
  if (it == candidates.begin())
    return {0, candidates.front()};
  if (it == candidates.end()) {
    const auto i = candidates.size() - 1;
    return {i, candidates[i]};
  }

  const auto after = static_cast<std::size_t>(it - candidates.begin());
  const auto before = after - 1;
  // Ties go to the earlier candidate.
  if (distance(candidates[before], desired) <=
      distance(candidates[after], desired))
    return {before, candidates[before]};
  return {after, candidates[after]};
}

std::optional<Selection> select_minpast(
    const std::vector<EpochSecond>& candidates, EpochSecond desired) {
  if (candidates.empty()) throw EmptyCandidates();

  const auto it =
      std::upper_bound(candidates.begin(), candidates.end(), desired);
  if (it == candidates.begin()) return std::nullopt;
  const auto i = static_cast<std::size_t>(it - candidates.begin()) - 1;
  return Selection{i, candidates[i]};
}

EpochSecond midpoint(EpochSecond earlier, EpochSecond later) {
  if (earlier > later) throw OrderViolation("midpoint: earlier > later");
  return std::midpoint(earlier, later);
}

}  // namespace wikimento
