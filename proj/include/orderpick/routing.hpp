#pragma once

#include <vector>

#include "orderpick/instance.hpp"

namespace orderpick {

struct Route {
  Location start = Location::depot();
  std::vector<int> visit_order;  // ends at the depot
  double est_travel = 0.0;       // walking time including the return
};

// Completion time of a route started at `clock`, waiting for unreleased items.
double route_finish(const Instance& inst, const Route& route, double clock);

// Exact minimum depot-return time through all items (at most 16).
Route optimal_route(const Instance& inst, const std::vector<int>& items, const Location& start, double clock);

// Per-block serpentine from the depot: blocks farthest from the depot first
// (upper before lower on ties), aisles left to right in the first block and
// alternating per block, each occupied sub-aisle swept once.
Route s_shape_route(const Instance& inst, const std::vector<int>& items);

// Block index of an in-aisle position (the block whose lower cross-aisle is at or below y).
int block_of(const WarehouseLayout& w, double y);

}  // namespace orderpick
