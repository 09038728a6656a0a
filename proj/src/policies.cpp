#include "orderpick/policies.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include "json.hpp"
#include "orderpick/routing.hpp"
#include "orderpick/tour.hpp"

namespace orderpick {

using nlohmann::json;

void PolicyConfig::validate() const {
  if (vtw_n < 0) throw ValidationError("vtw", "N must be at least 1 when waiting is enabled");
  if (initial_wait < 0 || !std::isfinite(initial_wait)) throw ValidationError("initial_wait", "must be >= 0");
  if (selection == Selection::LargestThenSavings && batching != Batching::Optimal)
    throw ValidationError("selection", "batch selection needs optimal batching");
}

PolicyConfig PolicyConfig::vtwb() {
  PolicyConfig c;
  c.routing = Routing::SShape;
  c.batching = Batching::Fifo;
  c.vtw_n = 2;
  c.intervention = false;
  c.name = "vtwb";
  return c;
}

PolicyConfig PolicyConfig::fifo() {
  PolicyConfig c;
  c.routing = Routing::Optimal;
  c.batching = Batching::Fifo;
  c.intervention = false;
  c.name = "fifo";
  return c;
}

PolicyConfig PolicyConfig::reopt() {
  PolicyConfig c;
  c.name = "reopt";
  return c;
}

PolicyConfig PolicyConfig::reopt_star() {
  PolicyConfig c;
  c.selection = Selection::LargestThenSavings;
  c.relocation = Relocation::Center;
  c.name = "reopt_star";
  return c;
}

std::vector<PolicyConfig> PolicyConfig::ladder() {
  std::vector<PolicyConfig> out;
  PolicyConfig c = vtwb();
  out.push_back(c);
  c.routing = Routing::Optimal;
  c.name = "opt_routing";
  out.push_back(c);
  c.batching = Batching::Optimal;
  c.name = "opt_batching";
  out.push_back(c);
  c.intervention = true;
  c.name = "intervention";
  out.push_back(c);
  c.vtw_n = 0;
  c.name = "no_wait";
  out.push_back(c);
  out.push_back(reopt_star());
  return out;
}

PolicyConfig PolicyConfig::parse(const std::string& spec) {
  std::vector<std::string> parts;
  std::stringstream ss(spec);
  std::string tok;
  while (std::getline(ss, tok, ','))
    if (!tok.empty()) parts.push_back(tok);
  if (parts.empty()) throw ValidationError("policy", "empty policy spec");

  PolicyConfig c;
  size_t first = 0;
  if (parts[0].find('=') == std::string::npos) {
    const std::string& p = parts[0];
    bool found = false;
    for (const PolicyConfig& l : ladder())
      if (l.name == p) c = l, found = true;
    if (p == "fifo") c = fifo(), found = true;
    if (p == "reopt") c = reopt(), found = true;
    if (p == "reopt*" || p == "reopt_star") c = reopt_star(), found = true;
    if (!found) throw ValidationError("policy", "unknown preset '" + p + "'");
    first = 1;
  }
  if (first < parts.size()) c.name = spec;
  auto onoff = [](const std::string& key, const std::string& v) {
    if (v == "on" || v == "true" || v == "1") return true;
    if (v == "off" || v == "false" || v == "0") return false;
    throw ValidationError(key, "expected on or off, got '" + v + "'");
  };
  for (size_t i = first; i < parts.size(); ++i) {
    auto eq = parts[i].find('=');
    if (eq == std::string::npos) throw ValidationError("policy", "expected key=value, got '" + parts[i] + "'");
    std::string key = parts[i].substr(0, eq), v = parts[i].substr(eq + 1);
    auto bad = [&] { return ValidationError(key, "unknown value '" + v + "'"); };
    if (key == "routing") {
      if (v == "s_shape") c.routing = Routing::SShape;
      else if (v == "optimal") c.routing = Routing::Optimal;
      else throw bad();
    } else if (key == "batching") {
      if (v == "fifo") c.batching = Batching::Fifo;
      else if (v == "optimal") c.batching = Batching::Optimal;
      else throw bad();
    } else if (key == "vtw" || key == "waiting") {
      if (v == "none") c.vtw_n = 0;
      else {
        try {
          size_t used = 0;
          c.vtw_n = std::stoi(v, &used);
          if (used != v.size() || c.vtw_n < 1) throw bad();
        } catch (const std::logic_error&) {
          throw bad();
        }
      }
    } else if (key == "intervention") {
      c.intervention = onoff(key, v);
    } else if (key == "selection") {
      if (v == "fifo") c.selection = Selection::Fifo;
      else if (v == "largest") c.selection = Selection::LargestThenSavings;
      else throw bad();
    } else if (key == "relocation") {
      if (v == "none") c.relocation = Relocation::None;
      else if (v == "center") c.relocation = Relocation::Center;
      else throw bad();
    } else if (key == "initial_wait") {
      try {
        c.initial_wait = std::stod(v);
      } catch (const std::exception&) {
        throw bad();
      }
    } else if (key == "name") {
      c.name = v;
    } else {
      throw ValidationError(key, "unknown policy key");
    }
  }
  c.validate();
  return c;
}

std::string PolicyConfig::describe() const {
  std::ostringstream os;
  os << "routing=" << (routing == Routing::SShape ? "s_shape" : "optimal")
     << ",batching=" << (batching == Batching::Fifo ? "fifo" : "optimal") << ",vtw=" << vtw_n
     << ",intervention=" << (intervention ? "on" : "off")
     << ",selection=" << (selection == Selection::Fifo ? "fifo" : "largest")
     << ",relocation=" << (relocation == Relocation::None ? "none" : "center");
  if (initial_wait > 0) os << ",initial_wait=" << initial_wait;
  return os.str();
}

std::string to_string(EventKind k) {
  switch (k) {
    case EventKind::Arrival: return "arrival";
    case EventKind::DepartDepot: return "depart_depot";
    case EventKind::Walk: return "walk";
    case EventKind::Pick: return "pick";
    case EventKind::Wait: return "wait";
    case EventKind::Idle: return "idle";
    case EventKind::Relocate: return "relocate";
    case EventKind::ReturnDepot: return "return_depot";
    case EventKind::Intervene: return "intervene";
  }
  return "?";
}

namespace {

struct ActiveBatch {
  std::vector<int> orders;
  std::vector<int> remaining;  // unpicked items in visiting order
  std::vector<int> picked;
  std::set<int> at_departure;
};

// First tour of a plan: steps up to and including the first closing step.
std::vector<int> first_segment(const DpPlan& plan) {
  std::vector<int> seg;
  for (const PlanStep& st : plan.steps) {
    seg.push_back(st.item);
    if (st.closes) break;
  }
  return seg;
}

class Simulator {
 public:
  Simulator(const Instance& inst, const PolicyConfig& cfg, Objective obj, const SimOptions& opts)
      : inst_(inst), cfg_(cfg), obj_(obj), opts_(opts) {
    cfg_.validate();
    if (cfg_.routing == PolicyConfig::Routing::SShape && !inst.distances().derived())
      throw ValidationError("routing", "S-shape routing needs a derived layout");
    relocate_ = cfg_.relocation == PolicyConfig::Relocation::Center && inst.distances().derived();
    select_ = cfg_.selection == PolicyConfig::Selection::LargestThenSavings && obj == Objective::Makespan;
    const int n = inst.num_orders();
    commenced_.assign(n, false);
    tr_.order_completion.assign(n, 0.0);
    tr_.vtw_wait.assign(n, 0.0);
  }

  SimResult run() {
    const int n = inst_.num_orders();
    if (cfg_.initial_wait > 0) {
      reveal();
      wait_until(cfg_.initial_wait, "initial");
    }
    while (completed_ < n) {
      reveal();
      if (queue_.empty()) {
        idle_until_arrival();
        continue;
      }
      if (cfg_.vtw_n > 0 && static_cast<int>(queue_.size()) < cfg_.vtw_n && arrived_ < n) {
        wait_until(inst_.order(arrived_).release, "vtw");
        continue;
      }
      ActiveBatch b = form_batch();
      run_batch(b);
    }
    std::stable_sort(tr_.events.begin(), tr_.events.end(),
                     [](const TraceEvent& a, const TraceEvent& b) { return a.time < b.time; });
    tr_.makespan = t_;
    double sum = 0;
    for (int j = 0; j < n; ++j) sum += tr_.order_completion[j] - inst_.order(j).release;
    tr_.avg_turnover = n ? sum / n : 0.0;
    return {tr_, sol_};
  }

 private:
  const Instance& inst_;
  PolicyConfig cfg_;
  Objective obj_;
  SimOptions opts_;
  bool relocate_ = false;
  bool select_ = false;

  double t_ = 0.0;
  Location pos_ = Location::depot();
  int arrived_ = 0;
  int completed_ = 0;
  std::vector<int> queue_;  // revealed, unassigned, by release
  std::vector<bool> commenced_;
  PolicyTrace tr_;
  Solution sol_;

  void log(EventKind kind, double time, double dur, int order = -1, int item = -1, std::string reason = {}) {
    tr_.events.push_back({kind, time, dur, order, item, std::move(reason), pos_});
  }

  bool reveal() {
    bool any = false;
    while (arrived_ < inst_.num_orders() && inst_.order(arrived_).release <= t_ + kEps) {
      tr_.events.push_back({EventKind::Arrival, inst_.order(arrived_).release, 0.0, arrived_, -1, {}, pos_});
      queue_.push_back(arrived_++);
      any = true;
    }
    return any;
  }

  void wait_until(double until, const std::string& reason) {
    if (until <= t_) return;
    log(EventKind::Wait, t_, until - t_, -1, -1, reason);
    if (reason == "vtw")
      for (int j : queue_) tr_.vtw_wait[j] += until - t_;
    t_ = until;
  }

  void idle_until_arrival() {
    const double next = inst_.order(arrived_).release;
    if (relocate_) {
      const WarehouseLayout& w = inst_.distances().layout();
      const Location target = w.center();
      double d = w.distance(pos_, target);
      if (d > kEps && next > t_) {
        double dur = d / inst_.speed();
        if (t_ + dur <= next + kEps) {
          log(EventKind::Relocate, t_, dur);
          t_ += dur;
          pos_ = target;
        } else {
          // Interrupted by the arrival.
          log(EventKind::Relocate, t_, next - t_);
          pos_ = w.point_along(pos_, target, (next - t_) * inst_.speed());
          t_ = next;
          return;
        }
      }
    }
    if (next > t_) {
      log(EventKind::Idle, t_, next - t_);
      t_ = next;
    }
  }

  std::vector<int> items_of(const std::vector<int>& orders) const {
    std::vector<int> out;
    for (int j : orders) out.insert(out.end(), inst_.order(j).items.begin(), inst_.order(j).items.end());
    return out;
  }

  std::vector<int> route(const std::vector<int>& items) const {
    if (items.empty()) return {};
    if (cfg_.routing == PolicyConfig::Routing::SShape) return s_shape_route(inst_, items).visit_order;
    if (static_cast<int>(items.size()) > kMaxTourItems) return items;
    return optimal_route(inst_, items, pos_, t_).visit_order;
  }

  DpPlan solve(const LiveStart& ls) {
    DpOptions o = opts_.dp;
    if (obj_ == Objective::Turnover) o.dominance = opts_.turnover_dominance;
    ++tr_.resolves;
    return run_dp(make_problem(inst_, ls), obj_, o);
  }

  // Largest batch, then highest savings, then earliest release (combinations in release order).
  std::vector<int> select_largest() const {
    const int q = static_cast<int>(queue_.size());
    const int pool = std::min(q, 20);
    const int k = std::min(inst_.capacity(), pool);
    std::vector<int> idx(k);
    for (int i = 0; i < k; ++i) idx[i] = i;
    std::vector<int> best;
    double best_psi = -1e300;
    for (;;) {
      std::vector<int> combo;
      for (int i : idx) combo.push_back(queue_[i]);
      double psi = savings(inst_, combo);
      if (psi > best_psi + kEps) best_psi = psi, best = combo;
      int i = k - 1;
      while (i >= 0 && idx[i] == pool - k + i) --i;
      if (i < 0) break;
      ++idx[i];
      for (int m = i + 1; m < k; ++m) idx[m] = idx[m - 1] + 1;
    }
    return best;
  }

  void take_from_queue(const std::vector<int>& orders) {
    std::set<int> taken(orders.begin(), orders.end());
    std::erase_if(queue_, [&](int j) { return taken.count(j) > 0; });
  }

  std::vector<int> orders_in(const std::vector<int>& items) const {
    std::vector<int> out;
    for (int s : items) {
      int j = inst_.item(s).order;
      if (std::find(out.begin(), out.end(), j) == out.end()) out.push_back(j);
    }
    return out;
  }

  ActiveBatch form_batch() {
    ActiveBatch b;
    if (cfg_.batching == PolicyConfig::Batching::Fifo) {
      int k = std::min<int>(inst_.capacity(), static_cast<int>(queue_.size()));
      b.orders.assign(queue_.begin(), queue_.begin() + k);
      b.remaining = route(items_of(b.orders));
    } else if (select_) {
      b.orders = select_largest();
      b.remaining = route(items_of(b.orders));
    } else {
      LiveStart ls{pos_, t_, {}, {}, queue_};
      std::vector<int> seg = first_segment(solve(ls));
      b.orders = orders_in(seg);
      b.remaining = cfg_.routing == PolicyConfig::Routing::SShape ? route(seg) : seg;
    }
    take_from_queue(b.orders);
    b.at_departure.insert(b.orders.begin(), b.orders.end());
    log(EventKind::DepartDepot, t_, 0.0);
    return b;
  }

  void run_batch(ActiveBatch& b) {
    while (!b.remaining.empty()) {
      const int s = b.remaining.front();
      b.remaining.erase(b.remaining.begin());
      double walk = inst_.length_from(pos_, s) / inst_.speed();
      if (walk > 0) {
        log(EventKind::Walk, t_, walk, -1, s);
        t_ += walk;
      }
      pos_ = inst_.item(s).location;
      const int j = inst_.item(s).order;
      log(EventKind::Pick, t_, inst_.pick_time(), j, s);
      t_ += inst_.pick_time();
      b.picked.push_back(s);
      if (!commenced_[j]) {
        commenced_[j] = true;
        if (!b.at_departure.count(j)) log(EventKind::Intervene, t_, 0.0, j);
      }
      if (reveal() && cfg_.intervention) replan(b);
    }
    double back = inst_.distances().distance(pos_, Location::depot()) / inst_.speed();
    if (back > 0) log(EventKind::Walk, t_, back);
    t_ += back;
    pos_ = Location::depot();
    log(EventKind::ReturnDepot, t_, 0.0);
    for (int j : b.orders) tr_.order_completion[j] = t_;
    completed_ += static_cast<int>(b.orders.size());
    sol_.batches.push_back({b.orders, b.picked});
  }

  void replan(ActiveBatch& b) {
    if (cfg_.batching == PolicyConfig::Batching::Fifo) {
      bool added = false;
      while (static_cast<int>(b.orders.size()) < inst_.capacity() && !queue_.empty()) {
        int j = queue_.front();
        queue_.erase(queue_.begin());
        b.orders.push_back(j);
        b.remaining.insert(b.remaining.end(), inst_.order(j).items.begin(), inst_.order(j).items.end());
        added = true;
      }
      if (added) b.remaining = route(b.remaining);
      return;
    }

    std::vector<int> open, pending;
    for (int j : b.orders) (commenced_[j] ? open : pending).push_back(j);
    pending.insert(pending.end(), queue_.begin(), queue_.end());
    if (pending.empty()) return;
    std::vector<int> open_items;
    for (int s : b.remaining)
      if (commenced_[inst_.item(s).order]) open_items.push_back(s);
    const int uncompleted = static_cast<int>(open.size() + pending.size());

    // Keep picking: the live state continues the batch.
    bool can_continue = !open_items.empty() || static_cast<int>(open.size()) < inst_.capacity();
    // Return now: close the batch here and plan the rest from the depot.
    bool can_return = open_items.empty();
    DpPlan cont, ret;
    double v_cont = 0, v_ret = 0, t_ret = 0;
    if (can_continue) {
      cont = solve(LiveStart{pos_, t_, open, open_items, pending});
      v_cont = obj_ == Objective::Makespan ? cont.clock : cont.comp_plus;
    }
    if (can_return) {
      t_ret = t_ + inst_.distances().distance(pos_, Location::depot()) / inst_.speed();
      ret = solve(LiveStart{Location::depot(), t_ret, {}, {}, pending});
      v_ret = obj_ == Objective::Makespan ? ret.clock : uncompleted * (t_ret - t_) + ret.comp_plus;
    }

    std::vector<int> seg;
    if (can_continue && (!can_return || v_cont < v_ret - kEps)) seg = first_segment(cont);
    std::vector<int> orders = open;
    for (int j : orders_in(seg))
      if (!commenced_[j]) orders.push_back(j);
    b.orders = orders;
    b.remaining = cfg_.routing == PolicyConfig::Routing::SShape ? route(seg) : seg;
    std::set<int> kept(orders.begin(), orders.end());
    queue_.clear();
    for (int j : pending)
      if (!kept.count(j)) queue_.push_back(j);
    std::sort(queue_.begin(), queue_.end());
  }
};

}  // namespace

SimResult simulate(const Instance& inst, const PolicyConfig& cfg, Objective objective, const SimOptions& opts) {
  return Simulator(inst, cfg, objective, opts).run();
}

double objective_value(const PolicyTrace& trace, Objective objective) {
  return objective == Objective::Makespan ? trace.makespan : trace.avg_turnover;
}

ReplayResult replay(const Instance& inst, const PolicyTrace& trace) {
  ReplayResult r;
  const int n = inst.num_orders();
  r.order_completion.assign(n, -1.0);
  std::vector<int> left(n);
  for (int j = 0; j < n; ++j) left[j] = static_cast<int>(inst.order(j).items.size());
  std::vector<int> finished;  // picked out but not yet delivered
  for (const TraceEvent& e : trace.events) {
    switch (e.kind) {
      case EventKind::Pick:
        if (--left[inst.item(e.item).order] == 0) finished.push_back(inst.item(e.item).order);
        r.busy_total += e.duration;
        break;
      case EventKind::ReturnDepot:
        for (int j : finished) {
          if (r.order_completion[j] >= 0) throw ValidationError("trace", "order completed twice");
          r.order_completion[j] = e.time;
        }
        finished.clear();
        r.makespan = std::max(r.makespan, e.time);
        break;
      case EventKind::Walk:
      case EventKind::Wait:
      case EventKind::Idle:
      case EventKind::Relocate:
        r.busy_total += e.duration;
        break;
      default:
        break;
    }
  }
  double sum = 0;
  for (int j = 0; j < n; ++j) {
    if (r.order_completion[j] < 0) throw ValidationError("trace", "order " + std::to_string(j) + " never completed");
    sum += r.order_completion[j] - inst.order(j).release;
  }
  r.avg_turnover = n ? sum / n : 0.0;
  return r;
}

double gap(double alg_value, double star_value) {
  if (!(star_value > 0)) throw ValidationError("star_value", "reference value must be positive");
  return (alg_value - star_value) / star_value;
}

std::string trace_to_jsonl(const PolicyTrace& trace) {
  std::string out;
  for (const TraceEvent& e : trace.events) {
    json j{{"t", e.time}, {"kind", to_string(e.kind)}};
    if (e.duration > 0) j["dur"] = e.duration;
    if (e.order >= 0) j["order"] = e.order;
    if (e.item >= 0) j["item"] = e.item;
    if (!e.reason.empty()) j["reason"] = e.reason;
    j["at"] = to_string(e.where);
    out += j.dump() + "\n";
  }
  return out;
}

}  // namespace orderpick
