#include "orderpick/tour.hpp"

#include <algorithm>
#include <limits>

namespace orderpick {

TourResult best_tour(const Instance& inst, const std::vector<int>& items, const Location& start, double clock,
                     bool respect_releases) {
  int n = static_cast<int>(items.size());
  if (n > kMaxTourItems)
    throw ValidationError("items", "tour of " + std::to_string(n) + " items exceeds limit " +
                                       std::to_string(kMaxTourItems));
  double v = inst.speed();
  double tp = inst.pick_time();
  TourResult res;
  if (n == 0) {
    res.travel = inst.distances().distance(start, Location::depot()) / v;
    res.finish = clock + res.travel;
    return res;
  }
  std::vector<double> from_start(n);
  for (int i = 0; i < n; ++i) from_start[i] = inst.length_from(start, items[i]) / v;
  auto release = [&](int i) { return respect_releases ? inst.release_of_item(items[i]) : 0.0; };

  constexpr double kInf = std::numeric_limits<double>::infinity();
  size_t full = (size_t{1} << n);
  std::vector<double> best(full * n, kInf);
  std::vector<double> walked(full * n, 0.0);
  std::vector<int> parent(full * n, -1);
  for (int i = 0; i < n; ++i) {
    size_t idx = (size_t{1} << i) * n + i;
    best[idx] = std::max(clock + from_start[i], release(i)) + tp;
    walked[idx] = from_start[i];
  }
  for (size_t mask = 1; mask < full; ++mask) {
    for (int last = 0; last < n; ++last) {
      if (!(mask >> last & 1)) continue;
      double t = best[mask * n + last];
      if (t == kInf) continue;
      for (int nx = 0; nx < n; ++nx) {
        if (mask >> nx & 1) continue;
        double leg = inst.travel(items[last], items[nx]);
        double tn = std::max(t + leg, release(nx)) + tp;
        size_t idx = (mask | (size_t{1} << nx)) * n + nx;
        double wn = walked[mask * n + last] + leg;
        if (tn < best[idx] - kEps || (tn < best[idx] + kEps && wn < walked[idx] - kEps)) {
          best[idx] = tn;
          walked[idx] = wn;
          parent[idx] = last;
        }
      }
    }
  }
  size_t mask = full - 1;
  int last = -1;
  double finish = kInf;
  for (int i = 0; i < n; ++i) {
    double f = best[mask * n + i] + inst.travel(items[i], kDepot);
    if (f < finish - kEps) finish = f, last = i;
  }
  res.finish = finish;
  res.travel = walked[mask * n + last] + inst.travel(items[last], kDepot);
  while (last != -1) {
    res.order.push_back(items[last]);
    int p = parent[mask * n + last];
    mask &= ~(size_t{1} << last);
    last = p;
  }
  std::reverse(res.order.begin(), res.order.end());
  return res;
}

}  // namespace orderpick
