#pragma once

#include <vector>

#include "orderpick/instance.hpp"

namespace orderpick {

inline constexpr int kMaxTourItems = 16;

struct TourResult {
  std::vector<int> order;
  double finish = 0.0;  // depot-return time
  double travel = 0.0;  // walking time only
};

// Held-Karp over item subsets: minimal depot-return time of a single tour from
// `start` at `clock` through all items. Completion times are monotone in the
// arrival time, so keeping the earliest time per (subset, last) is exact.
TourResult best_tour(const Instance& inst, const std::vector<int>& items, const Location& start, double clock,
                     bool respect_releases);

}  // namespace orderpick
