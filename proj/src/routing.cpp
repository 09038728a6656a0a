#include "orderpick/routing.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "orderpick/tour.hpp"

namespace orderpick {

namespace {

double travel_of(const Instance& inst, const Location& start, const std::vector<int>& order) {
  double len = 0;
  Location here = start;
  for (int s : order) {
    len += inst.length_from(here, s);
    here = inst.item(s).location;
  }
  len += inst.distances().distance(here, Location::depot());
  return len / inst.speed();
}

}  // namespace

double route_finish(const Instance& inst, const Route& route, double clock) {
  Location here = route.start;
  for (int s : route.visit_order) {
    clock = std::max(clock + inst.length_from(here, s) / inst.speed(), inst.release_of_item(s)) + inst.pick_time();
    here = inst.item(s).location;
  }
  return clock + inst.distances().distance(here, Location::depot()) / inst.speed();
}

Route optimal_route(const Instance& inst, const std::vector<int>& items, const Location& start, double clock) {
  TourResult t = best_tour(inst, items, start, clock, true);
  Route r;
  r.start = start;
  r.visit_order = t.order;
  r.est_travel = t.travel;
  return r;
}

int block_of(const WarehouseLayout& w, double y) {
  int blocks = w.num_cross_aisles - 1;
  int b = static_cast<int>(std::upper_bound(w.cross_y.begin(), w.cross_y.end(), y) - w.cross_y.begin()) - 1;
  return std::clamp(b, 0, blocks - 1);
}

Route s_shape_route(const Instance& inst, const std::vector<int>& items) {
  const WarehouseLayout& w = inst.distances().layout();
  const int blocks = w.num_cross_aisles - 1;
  const double depot_y = w.cross_y[w.depot_cross];

  // block -> aisle -> items
  std::map<int, std::map<int, std::vector<int>>> grid;
  for (int s : items) {
    const Location& loc = inst.item(s).location;
    grid[block_of(w, loc.coord)][loc.index].push_back(s);
  }

  std::vector<int> order_blocks;
  for (int b = 0; b < blocks; ++b)
    if (grid.count(b)) order_blocks.push_back(b);
  auto mid_gap = [&](int b) { return std::abs((w.cross_y[b] + w.cross_y[b + 1]) / 2 - depot_y); };
  std::stable_sort(order_blocks.begin(), order_blocks.end(), [&](int a, int b) {
    if (std::abs(mid_gap(a) - mid_gap(b)) > kEps) return mid_gap(a) > mid_gap(b);
    return a > b;
  });

  Route r;
  bool left_to_right = true;
  for (int b : order_blocks) {
    // Sweeps start away from the block boundary nearer the depot.
    bool near_is_low = std::abs(w.cross_y[b] - depot_y) <= std::abs(w.cross_y[b + 1] - depot_y);
    bool upward = near_is_low;
    std::vector<int> aisles;
    for (const auto& [a, its] : grid[b]) aisles.push_back(a);
    if (!left_to_right) std::reverse(aisles.begin(), aisles.end());
    for (int a : aisles) {
      std::vector<int> its = grid[b][a];
      std::stable_sort(its.begin(), its.end(), [&](int x, int y) {
        double yx = inst.item(x).location.coord, yy = inst.item(y).location.coord;
        return upward ? yx < yy : yx > yy;
      });
      r.visit_order.insert(r.visit_order.end(), its.begin(), its.end());
      upward = !upward;
    }
    left_to_right = !left_to_right;
  }
  r.est_travel = travel_of(inst, r.start, r.visit_order);
  return r;
}

}  // namespace orderpick
