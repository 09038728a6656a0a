#include "orderpick/schedule.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "json.hpp"
#include "orderpick/tour.hpp"

namespace orderpick {

using nlohmann::json;

std::vector<int> Solution::sequence() const {
  std::vector<int> seq;
  for (const Batch& b : batches) seq.insert(seq.end(), b.items.begin(), b.items.end());
  return seq;
}

std::vector<std::string> validate(const Instance& inst, const Solution& sol) {
  std::vector<std::string> errors;
  std::vector<int> seen_order(inst.num_orders(), 0);
  for (size_t b = 0; b < sol.batches.size(); ++b) {
    const Batch& batch = sol.batches[b];
    std::string tag = "batch " + std::to_string(b) + ": ";
    if (batch.orders.empty()) errors.push_back(tag + "empty batch");
    if (static_cast<int>(batch.orders.size()) > inst.capacity()) errors.push_back(tag + "capacity exceeded");
    std::multiset<int> expected;
    for (int j : batch.orders) {
      if (j < 0 || j >= inst.num_orders()) {
        errors.push_back(tag + "unknown order " + std::to_string(j));
        continue;
      }
      ++seen_order[j];
      for (int s : inst.order(j).items) expected.insert(s);
    }
    std::multiset<int> got(batch.items.begin(), batch.items.end());
    if (got != expected) errors.push_back(tag + "item sequence does not cover exactly the batch's items");
  }
  for (int j = 0; j < inst.num_orders(); ++j)
    if (seen_order[j] != 1) {
      errors.push_back("order " + std::to_string(j) + ": partition violated");
    }
  return errors;
}

Schedule reconstruct(const Instance& inst, const Solution& sol) {
  auto errors = validate(inst, sol);
  if (!errors.empty()) throw ValidationError("solution", errors.front());
  Schedule sc;
  sc.completion.assign(inst.num_items(), 0.0);
  sc.order_completion.assign(inst.num_orders(), 0.0);
  double t = 0.0;
  for (size_t b = 0; b < sol.batches.size(); ++b) {
    const Batch& batch = sol.batches[b];
    sc.batch_start.push_back(t);
    int prev = kDepot;
    for (int s : batch.items) {
      Leg leg;
      leg.item = s;
      leg.batch = static_cast<int>(b);
      leg.via_depot = prev == kDepot;
      leg.start = t;
      leg.walk = inst.travel(prev, s);
      double arrival = t + leg.walk;
      double r = inst.release_of_item(s);
      leg.wait = std::max(0.0, r - arrival);
      leg.pick = inst.pick_time();
      leg.completion = std::max(arrival, r) + inst.pick_time();
      sc.completion[s] = leg.completion;
      sc.legs.push_back(leg);
      t = leg.completion;
      prev = s;
    }
    t += inst.travel(prev, kDepot);
    sc.batch_return.push_back(t);
    for (int j : batch.orders) sc.order_completion[j] = t;
  }
  sc.makespan = t;
  return sc;
}

double makespan(const Instance& inst, const Schedule& sched) {
  double best = 0.0;
  for (const Leg& leg : sched.legs) best = std::max(best, leg.completion + inst.travel(leg.item, kDepot));
  return best;
}

std::vector<double> order_completions(const Instance& inst, const Schedule& sched, const Solution& sol) {
  std::vector<double> out(inst.num_orders(), 0.0);
  for (const Batch& b : sol.batches) {
    double done = 0.0;
    for (int s : b.items) done = std::max(done, sched.completion[s] + inst.travel(s, kDepot));
    for (int j : b.orders) out[j] = done;
  }
  return out;
}

Turnover avg_turnover(const Instance& inst, const Schedule& sched, const Solution& sol) {
  Turnover res;
  if (inst.num_orders() == 0) return res;
  auto done = order_completions(inst, sched, sol);
  double releases = 0.0;
  for (int j = 0; j < inst.num_orders(); ++j) {
    res.sum_completion += done[j];
    releases += inst.order(j).release;
  }
  res.average = (res.sum_completion - releases) / inst.num_orders();
  return res;
}

double chi_items(const Instance& inst, const std::vector<int>& items) {
  return best_tour(inst, items, Location::depot(), 0.0, false).finish;
}

double chi(const Instance& inst, int order) { return chi_items(inst, inst.order(order).items); }

double savings(const Instance& inst, const std::vector<int>& orders) {
  if (static_cast<int>(orders.size()) > inst.capacity()) throw ValidationError("batch", "capacity exceeded");
  std::vector<int> items;
  double separate = 0.0;
  for (int j : orders) {
    separate += chi(inst, j);
    const auto& its = inst.order(j).items;
    items.insert(items.end(), its.begin(), its.end());
  }
  double joint = chi_items(inst, items);
  if (joint <= 0) return 0.0;
  return (separate - joint) / joint;
}

std::string solution_to_json(const Solution& sol) {
  json batches = json::array();
  for (const Batch& b : sol.batches) batches.push_back({{"orders", b.orders}, {"item_order", b.items}});
  return json{{"batches", batches}}.dump(2);
}

Solution solution_from_json(const std::string& text) {
  Solution sol;
  try {
    json doc = json::parse(text);
    for (const json& b : doc.at("batches"))
      sol.batches.push_back({b.at("orders").get<std::vector<int>>(), b.at("item_order").get<std::vector<int>>()});
  } catch (const json::exception& e) {
    throw ValidationError("solution", e.what());
  }
  return sol;
}

std::string schedule_to_csv(const Instance& inst, const Schedule& sched) {
  std::ostringstream os;
  os.precision(17);
  os << "item,order,batch,completion,wait,walk\n";
  for (const Leg& leg : sched.legs)
    os << leg.item << "," << inst.item(leg.item).order << "," << leg.batch << "," << leg.completion << ","
       << leg.wait << "," << leg.walk << "\n";
  return os.str();
}

}  // namespace orderpick
