#include "orderpick/dp_core.hpp"

#include <algorithm>
#include <bit>
#include <cstdlib>
#include <limits>
#include <numeric>
#include <sstream>
#include <unordered_map>

#include "json.hpp"

namespace orderpick {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

inline bool has(std::uint64_t set, int i) { return (set >> i) & 1u; }
inline std::uint64_t bit(int i) { return std::uint64_t{1} << i; }

template <class F>
void for_bits(std::uint64_t set, F f) {
  while (set) {
    int i = std::countr_zero(set);
    f(i);
    set &= set - 1;
  }
}

struct StateHash {
  std::size_t operator()(const DpState& s) const {
    auto mix = [](std::uint64_t x) {
      x += 0x9e3779b97f4a7c15ull;
      x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
      x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
      return x ^ (x >> 31);
    };
    std::uint64_t h = mix(s.batch);
    h = mix(h ^ s.pending);
    h = mix(h ^ (static_cast<std::uint64_t>(static_cast<std::uint32_t>(s.last)) << 8 | s.open_count));
    return static_cast<std::size_t>(h);
  }
};

}  // namespace

std::size_t default_state_budget() {
  if (const char* env = std::getenv("ORDERPICK_MAX_STATES")) {
    char* end = nullptr;
    unsigned long long v = std::strtoull(env, &end, 10);
    if (end != env && v > 0) return static_cast<std::size_t>(v);
  }
  return 5'000'000;
}

std::string to_string(Action a) {
  switch (a) {
    case Action::ExtendBatch: return "extend";
    case Action::ContinueBatch: return "continue";
    case Action::CloseAfterPick: return "close";
    case Action::OpenNewBatch: return "open";
    case Action::OpenAndCloseSingle: return "open_close";
  }
  return "?";
}

int DpProblem::total_items() const {
  int n = std::popcount(start_batch);
  for_bits(start_pending, [&](int j) { n += order_size[j]; });
  return n;
}

DpProblem make_problem(const Instance& inst) {
  LiveStart start;
  start.pending_orders.resize(inst.num_orders());
  std::iota(start.pending_orders.begin(), start.pending_orders.end(), 0);
  return make_problem(inst, start);
}

DpProblem make_problem(const Instance& inst, const LiveStart& start) {
  DpProblem p;
  std::vector<int> pending = start.pending_orders;
  std::stable_sort(pending.begin(), pending.end(), [&](int a, int b) {
    return inst.order(a).release < inst.order(b).release ||
           (inst.order(a).release == inst.order(b).release && a < b);
  });
  std::vector<int> open_items = start.remaining_items;
  std::sort(open_items.begin(), open_items.end());
  int n = static_cast<int>(open_items.size());
  for (int j : pending) n += static_cast<int>(inst.order(j).items.size());
  if (n > 64 || pending.size() > 64) throw BudgetExceeded(0, static_cast<std::size_t>(n));
  p.n_items = n;
  p.n_orders = static_cast<int>(pending.size());
  p.pick_time = inst.pick_time();
  p.capacity = inst.capacity();
  p.span_time = inst.span() / inst.speed();
  p.start_clock = start.clock;
  p.start_open = static_cast<int>(start.open_orders.size());
  p.origin_is_depot = start.origin == Location::depot();
  if (p.start_open > p.capacity) throw ValidationError("open_orders", "open batch exceeds capacity");
  if (p.start_open == 0 && !open_items.empty()) throw ValidationError("remaining_items", "items without open orders");

  for (int s : open_items) {
    p.start_batch |= bit(static_cast<int>(p.global_item.size()));
    p.global_item.push_back(s);
    p.item_order.push_back(-1);
    p.item_release.push_back(inst.release_of_item(s));
  }
  for (int j : pending) {
    int lj = static_cast<int>(p.global_order.size());
    p.global_order.push_back(j);
    p.release.push_back(inst.order(j).release);
    p.ub_time.push_back(inst.single_order_bound(j) / inst.speed());
    std::uint64_t mask = 0;
    for (int s : inst.order(j).items) {
      mask |= bit(static_cast<int>(p.global_item.size()));
      p.global_item.push_back(s);
      p.item_order.push_back(lj);
      p.item_release.push_back(inst.release_of_item(s));
    }
    p.order_mask.push_back(mask);
    p.order_size.push_back(static_cast<int>(inst.order(j).items.size()));
    p.start_pending |= bit(lj);
  }

  int m = n + 2;
  p.travel.assign(static_cast<std::size_t>(m) * m, 0.0);
  auto set = [&](int a, int b, double v) {
    p.travel[static_cast<std::size_t>(a) * m + b] = v;
    p.travel[static_cast<std::size_t>(b) * m + a] = v;
  };
  for (int a = 0; a < n; ++a) {
    set(0, a + 1, inst.travel(kDepot, p.global_item[a]));
    for (int b = a + 1; b < n; ++b) set(a + 1, b + 1, inst.travel(p.global_item[a], p.global_item[b]));
    set(n + 1, a + 1, inst.length_from(start.origin, p.global_item[a]) / inst.speed());
  }
  set(0, n + 1, inst.distances().distance(start.origin, Location::depot()) / inst.speed());
  return p;
}

DpState root_state(const DpProblem& p) { return {-1, p.start_open, p.start_batch, p.start_pending}; }

int stage_of(const DpProblem& p, const DpState& s) {
  int left = std::popcount(s.batch);
  for_bits(s.pending, [&](int j) { left += p.order_size[j]; });
  return p.total_items() - left;
}

int position_node(const DpProblem& p, const DpState& s) {
  if (s.last == -1) return p.origin_node();
  if (s.batch_completion()) return 0;
  return s.last + 1;
}

namespace {

// Enumerates the transition rules applicable to state `s`; batch items first,
// then pending orders in release order, stopping at the first dominated release.
template <class Emit>
void expand_impl(const DpProblem& p, const DpState& s, double clock, const DpOptions& opts, Emit emit) {
  const int c = p.capacity;
  const bool bc = s.batch_completion();

  if (s.open_count > 0 && s.batch != 0) {
    const int left = std::popcount(s.batch);
    for_bits(s.batch, [&](int i) {
      if (left > 1) {
        int row = s.open_count == c ? 9 : 8;
        emit(Transition{i, Action::ContinueBatch, -1, false, row}, DpState{i, s.open_count, s.batch & ~bit(i), s.pending});
      } else if (s.open_count <= c - 1) {
        if (s.pending != 0)
          emit(Transition{i, Action::ContinueBatch, -1, false, 11}, DpState{i, s.open_count, 0, s.pending});
        emit(Transition{i, Action::CloseAfterPick, -1, true, 12}, DpState{i, 0, 0, s.pending});
      } else {
        emit(Transition{i, Action::CloseAfterPick, -1, true, 13}, DpState{i, 0, 0, s.pending});
      }
    });
  }

  if (!bc && s.open_count >= c) return;
  if (s.pending == 0) return;

  const int jmin = std::countr_zero(s.pending);
  const int pos = position_node(p, s);
  double threshold = kInf;
  bool skip_first = false;
  if (opts.dominance) {
    if (bc) {
      if (pos == 0) {
        threshold = std::max(p.release[jmin], clock) + p.ub_time[jmin] + p.span_time + p.order_size[jmin] * p.pick_time;
        skip_first = true;
      }
    } else if (s.batch != 0) {
      threshold = clock + 2 * p.span_time + p.pick_time;
    } else {
      threshold = clock + 2 * p.span_time;
    }
  }

  bool stop = false;
  for_bits(s.pending, [&](int j) {
    if (stop) return;
    if (opts.fifo_order_start && j != jmin) {
      stop = true;
      return;
    }
    if (!(skip_first && j == jmin) && p.release[j] >= threshold + kEps) {
      stop = true;
      return;
    }
    const std::uint64_t rest = s.pending & ~bit(j);
    const int size = p.order_size[j];
    for_bits(p.order_mask[j], [&](int i) {
      const std::uint64_t after = p.order_mask[j] & ~bit(i);
      if (bc) {
        if (size > 1 || (c >= 2 && rest != 0))
          emit(Transition{i, Action::OpenNewBatch, j, false, 1}, DpState{i, 1, after, rest});
        if (size == 1) emit(Transition{i, Action::OpenAndCloseSingle, j, true, 2}, DpState{i, 0, 0, rest});
      } else if (s.batch == 0) {
        if (s.open_count < c - 1) {
          if (size > 1 || rest != 0)
            emit(Transition{i, Action::ExtendBatch, j, false, 3}, DpState{i, s.open_count + 1, after, rest});
          if (size == 1) emit(Transition{i, Action::ExtendBatch, j, true, 4}, DpState{i, 0, 0, rest});
        } else if (size > 1) {
          emit(Transition{i, Action::ExtendBatch, j, false, 5}, DpState{i, c, after, rest});
        } else {
          emit(Transition{i, Action::ExtendBatch, j, true, 6}, DpState{i, 0, 0, rest});
        }
      } else {
        int row = std::popcount(s.batch) > 1 ? 7 : 10;
        emit(Transition{i, Action::ExtendBatch, j, false, row}, DpState{i, s.open_count + 1, s.batch | after, rest});
      }
    });
  });
}

}  // namespace

std::vector<std::pair<Transition, DpState>> expand(const DpProblem& p, const DpState& s, double clock,
                                                   const DpOptions& opts) {
  std::vector<std::pair<Transition, DpState>> out;
  expand_impl(p, s, clock, opts, [&](const Transition& t, const DpState& n) { out.emplace_back(t, n); });
  return out;
}

double transition_cost(const DpProblem& p, const DpState& s, double clock, const Transition& tr) {
  int from = position_node(p, s);
  int to = tr.next_item + 1;
  double arrive = clock + p.t(from, to);
  double g = std::max(arrive, p.item_release[tr.next_item]) + p.pick_time - clock;
  if (tr.closes) g += p.t(to, 0);
  return g;
}

namespace {

struct Node {
  DpState state;
  double clock;
  double comp;
  int parent;
  Transition via;
};

bool better(Objective obj, double clock, double comp, const Node& cur) {
  if (obj == Objective::Makespan) return clock < cur.clock - kEps;
  if (comp < cur.comp - kEps) return true;
  return comp < cur.comp + kEps && clock < cur.clock - kEps;
}

}  // namespace

DpPlan run_dp(const DpProblem& p, Objective objective, const DpOptions& opts) {
  DpPlan plan;
  const int total = p.total_items();
  const DpState root = root_state(p);
  if (root.open_count > 0 && root.batch == 0 && root.pending == 0)
    throw ValidationError("start", "open batch without remaining or pending items");

  std::vector<Node> arena;
  arena.push_back({root, p.start_clock, 0.0, -1, {}});
  std::vector<int> current{0};

  for (int stage = 0; stage < total; ++stage) {
    std::unordered_map<DpState, int, StateHash> next_index;
    std::vector<int> next;
    for (int idx : current) {
      const DpState st = arena[idx].state;
      const double clock = arena[idx].clock;
      const double comp = arena[idx].comp;
      const int uncompleted = st.open_count + std::popcount(st.pending);
      ++plan.stats.states_expanded;
      expand_impl(p, st, clock, opts, [&](const Transition& tr, const DpState& to) {
        ++plan.stats.transitions;
        double g = transition_cost(p, st, clock, tr);
        double nclock = clock + g;
        double ncomp = comp + g * uncompleted;
        auto [it, inserted] = next_index.try_emplace(to, static_cast<int>(arena.size()));
        if (inserted) {
          if (arena.size() >= opts.max_states) throw BudgetExceeded(stage + 1, arena.size());
          arena.push_back({to, nclock, ncomp, idx, tr});
          next.push_back(it->second);
        } else {
          Node& cur = arena[it->second];
          if (better(objective, nclock, ncomp, cur)) {
            cur.clock = nclock;
            cur.comp = ncomp;
            cur.parent = idx;
            cur.via = tr;
          }
        }
      });
    }
    plan.stats.peak_states = std::max(plan.stats.peak_states, current.size() + next.size());
    current = std::move(next);
    if (current.empty()) throw ValidationError("dp", "no feasible continuation at stage " + std::to_string(stage + 1));
  }

  int best = -1;
  for (int idx : current) {
    const Node& n = arena[idx];
    if (!n.state.batch_completion() || n.state.pending != 0) continue;
    if (best == -1 || better(objective, n.clock, n.comp, arena[best])) best = idx;
  }
  if (best == -1) throw ValidationError("dp", "no terminal state reached");
  plan.clock = arena[best].clock;
  plan.comp_plus = arena[best].comp;
  for (int idx = best; idx != -1; idx = arena[idx].parent) {
    plan.path.push_back(arena[idx].state);
    if (arena[idx].parent != -1) plan.steps.push_back({p.global_item[arena[idx].via.next_item], arena[idx].via.closes});
  }
  std::reverse(plan.path.begin(), plan.path.end());
  std::reverse(plan.steps.begin(), plan.steps.end());
  if (opts.record_trace) {
    plan.trace.reserve(arena.size());
    for (const Node& n : arena) plan.trace.push_back({stage_of(p, n.state), n.state, n.clock, n.comp});
  }
  return plan;
}

Solution plan_to_solution(const Instance& inst, const std::vector<PlanStep>& steps) {
  Solution sol;
  Batch cur;
  for (const PlanStep& st : steps) {
    cur.items.push_back(st.item);
    int j = inst.item(st.item).order;
    if (std::find(cur.orders.begin(), cur.orders.end(), j) == cur.orders.end()) cur.orders.push_back(j);
    if (st.closes) {
      sol.batches.push_back(std::move(cur));
      cur = Batch{};
    }
  }
  if (!cur.items.empty()) sol.batches.push_back(std::move(cur));
  return sol;
}

std::vector<DpState> encode_states(const DpProblem& p, const Solution& sol) {
  std::vector<int> local(*std::max_element(p.global_item.begin(), p.global_item.end()) + 1, -1);
  for (int i = 0; i < p.n_items; ++i) local[p.global_item[i]] = i;
  DpOptions no_pruning;
  no_pruning.dominance = false;
  std::vector<DpState> states{root_state(p)};
  for (const Batch& b : sol.batches) {
    for (size_t k = 0; k < b.items.size(); ++k) {
      int i = local.at(b.items[k]);
      bool closes = k + 1 == b.items.size();
      const DpState& cur = states.back();
      bool found = false;
      for (const auto& [tr, to] : expand(p, cur, 0.0, no_pruning)) {
        if (tr.next_item == i && tr.closes == closes) {
          states.push_back(to);
          found = true;
          break;
        }
      }
      if (!found) throw ValidationError("solution", "step to item " + std::to_string(b.items[k]) + " is not a transition");
    }
  }
  return states;
}

std::string trace_to_jsonl(const DpProblem& p, const std::vector<DpTraceRecord>& trace) {
  std::ostringstream os;
  for (const DpTraceRecord& r : trace) {
    nlohmann::json line;
    line["stage"] = r.stage;
    line["last"] = r.state.last == -1 ? nlohmann::json("origin") : nlohmann::json(p.global_item[r.state.last]);
    line["open_count"] = r.state.open_count;
    std::vector<int> batch, pending;
    for_bits(r.state.batch, [&](int i) { batch.push_back(p.global_item[i]); });
    for_bits(r.state.pending, [&](int j) { pending.push_back(p.global_order[j]); });
    line["batch_items"] = batch;
    line["pending"] = pending;
    line["omega"] = r.clock;
    line["comp_plus"] = r.comp_plus;
    os << line.dump() << "\n";
  }
  return os.str();
}

MakespanResult solve_makespan(const Instance& inst, const DpOptions& opts) {
  DpProblem p = make_problem(inst);
  DpPlan plan = run_dp(p, Objective::Makespan, opts);
  MakespanResult res;
  res.makespan = plan.clock;
  res.solution = plan_to_solution(inst, plan.steps);
  res.stats = plan.stats;
  res.trace = std::move(plan.trace);
  return res;
}

}  // namespace orderpick
