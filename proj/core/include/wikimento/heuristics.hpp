#pragma once

#include <optional>
#include <string_view>
#include <vector>

#include "wikimento/time.hpp"

namespace wikimento {

// The two datetime-negotiation heuristics a TimeGate can run.
//
// mindist returns the candidate closest to the desired datetime in either
// direction; it is the usual choice for sparse archives but can deliver
// content from after the requested datetime. minpast returns the closest
// candidate at or before the desired datetime, never after, which is the
// safe choice when the candidate list is a complete revision history.
enum class Heuristic { mindist, minpast };

std::optional<Heuristic> heuristic_from_name(std::string_view name);
std::string_view heuristic_name(Heuristic h);

struct Selection {
  std::size_t index = 0;
  EpochSecond datetime = 0;

  friend bool operator==(const Selection&, const Selection&) = default;
};

// Candidate minimizing |candidate - desired|; an exact tie between two
// neighbors resolves to the earlier one. Candidates must be non-empty and
// sorted ascending. Throws EmptyCandidates.
Selection select_mindist(const std::vector<EpochSecond>& candidates,
                         EpochSecond desired);

// Latest candidate at or before `desired` (equality counts as "at").
// Returns nothing when every candidate lies in the future of `desired`,
// i.e. no answer can be given without going past the requested datetime.
// Throws EmptyCandidates.
std::optional<Selection> select_minpast(
    const std::vector<EpochSecond>& candidates, EpochSecond desired);

// floor((earlier + later) / 2); the boundary at which mindist switches
// between two consecutive candidates. Throws OrderViolation when
// earlier > later.
EpochSecond midpoint(EpochSecond earlier, EpochSecond later);

}  // namespace wikimento
