#pragma once

#include <string>
#include <vector>

#include "orderpick/instance.hpp"

namespace orderpick {

struct Batch {
  std::vector<int> orders;
  std::vector<int> items;  // picking sequence
  bool operator==(const Batch&) const = default;
};

struct Solution {
  std::vector<Batch> batches;
  std::vector<int> sequence() const;
  bool operator==(const Solution&) const = default;
};

struct Leg {
  int item = 0;
  int batch = 0;
  bool via_depot = false;  // first item of a batch: walk starts at the depot
  double start = 0.0;      // time the picker leaves the previous position
  double walk = 0.0;
  double wait = 0.0;
  double pick = 0.0;
  double completion = 0.0;
};

struct Schedule {
  std::vector<Leg> legs;                 // in picking order
  std::vector<double> completion;        // by item id
  std::vector<double> order_completion;  // by order id
  std::vector<double> batch_start;       // depot departure (before any wait)
  std::vector<double> batch_return;
  double makespan = 0.0;
};

// Empty when the solution is valid.
std::vector<std::string> validate(const Instance& inst, const Solution& sol);

Schedule reconstruct(const Instance& inst, const Solution& sol);
double makespan(const Instance& inst, const Schedule& sched);
std::vector<double> order_completions(const Instance& inst, const Schedule& sched, const Solution& sol);

struct Turnover {
  double average = 0.0;
  double sum_completion = 0.0;
};
Turnover avg_turnover(const Instance& inst, const Schedule& sched, const Solution& sol);

double chi(const Instance& inst, int order);
double chi_items(const Instance& inst, const std::vector<int>& items);
double savings(const Instance& inst, const std::vector<int>& orders);

std::string solution_to_json(const Solution& sol);
Solution solution_from_json(const std::string& text);
std::string schedule_to_csv(const Instance& inst, const Schedule& sched);

}  // namespace orderpick
