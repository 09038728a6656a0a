#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "orderpick/instance.hpp"
#include "orderpick/schedule.hpp"

namespace orderpick {

class BudgetExceeded : public std::runtime_error {
 public:
  BudgetExceeded(int stage, std::size_t states)
      : std::runtime_error("state budget exceeded at stage " + std::to_string(stage) + " with " +
                           std::to_string(states) + " states"),
        stage_(stage),
        states_(states) {}
  int stage() const { return stage_; }
  std::size_t states() const { return states_; }

 private:
  int stage_;
  std::size_t states_;
};

// Reads ORDERPICK_MAX_STATES, default 5 million.
std::size_t default_state_budget();

struct DpOptions {
  bool dominance = true;
  bool fifo_order_start = false;
  std::size_t max_states = default_state_budget();
  bool record_trace = false;
};

struct DpStats {
  std::size_t states_expanded = 0;
  std::size_t transitions = 0;
  std::size_t peak_states = 0;
};

// Local view of the problem the DP runs on: either a whole instance or the
// revealed remainder of one, starting from a live picker state.
struct DpProblem {
  int n_items = 0;   // local items: open-batch items then pending-order items
  int n_orders = 0;  // local pending orders, sorted by release
  std::vector<int> item_order;  // local pending order of each item, -1 for open-batch items
  std::vector<std::uint64_t> order_mask;
  std::vector<int> order_size;
  std::vector<double> release;   // per local order
  std::vector<double> ub_time;   // single-order walking bound / v
  double span_time = 0.0;        // pairwise distance bound / v
  std::vector<double> item_release;
  double pick_time = 0.0;
  int capacity = 1;

  double start_clock = 0.0;
  int start_open = 0;
  std::uint64_t start_batch = 0;
  std::uint64_t start_pending = 0;
  bool origin_is_depot = true;

  std::vector<int> global_item;
  std::vector<int> global_order;

  // Travel-time matrix over nodes: 0 depot, 1..n_items items, n_items + 1 origin.
  std::vector<double> travel;
  double t(int a, int b) const { return travel[static_cast<std::size_t>(a) * (n_items + 2) + b]; }
  int origin_node() const { return origin_is_depot ? 0 : n_items + 1; }
  int total_items() const;
};

struct LiveStart {
  Location origin = Location::depot();
  double clock = 0.0;
  std::vector<int> open_orders;      // commenced orders of the open batch
  std::vector<int> remaining_items;  // their unpicked items
  std::vector<int> pending_orders;
};

DpProblem make_problem(const Instance& inst);
DpProblem make_problem(const Instance& inst, const LiveStart& start);

struct DpState {
  int last = -1;  // local item, -1 for the root (picker at the origin)
  int open_count = 0;
  std::uint64_t batch = 0;
  std::uint64_t pending = 0;
  bool operator==(const DpState&) const = default;
  bool batch_completion() const { return open_count == 0 && batch == 0; }
};

enum class Action { ExtendBatch, ContinueBatch, CloseAfterPick, OpenNewBatch, OpenAndCloseSingle };
std::string to_string(Action a);

struct Transition {
  int next_item = 0;  // local
  Action action = Action::ContinueBatch;
  int order = -1;      // local pending order started by this pick
  bool closes = false;  // target is a batch-completion state
  int row = 0;          // transition rule 1..13
};

DpState root_state(const DpProblem& p);
int stage_of(const DpProblem& p, const DpState& s);
int position_node(const DpProblem& p, const DpState& s);

std::vector<std::pair<Transition, DpState>> expand(const DpProblem& p, const DpState& s, double clock,
                                                   const DpOptions& opts);
double transition_cost(const DpProblem& p, const DpState& s, double clock, const Transition& tr);

struct DpTraceRecord {
  int stage = 0;
  DpState state;
  double clock = 0.0;
  double comp_plus = 0.0;
};

struct PlanStep {
  int item = 0;  // global
  bool closes = false;
  bool operator==(const PlanStep&) const = default;
};

enum class Objective { Makespan, Turnover };

struct DpPlan {
  std::vector<PlanStep> steps;
  std::vector<DpState> path;  // root to the last picked state
  double clock = 0.0;         // terminal clock
  double comp_plus = 0.0;     // terminal completion label (turnover)
  DpStats stats;
  std::vector<DpTraceRecord> trace;
};

DpPlan run_dp(const DpProblem& p, Objective objective, const DpOptions& opts);

// Groups whole-instance plan steps into batches.
Solution plan_to_solution(const Instance& inst, const std::vector<PlanStep>& steps);
// State sequence a whole-instance solution passes through; throws if a step is not a valid transition.
std::vector<DpState> encode_states(const DpProblem& p, const Solution& sol);

std::string trace_to_jsonl(const DpProblem& p, const std::vector<DpTraceRecord>& trace);

struct MakespanResult {
  double makespan = 0.0;
  Solution solution;
  DpStats stats;
  std::vector<DpTraceRecord> trace;
};

MakespanResult solve_makespan(const Instance& inst, const DpOptions& opts = {});

}  // namespace orderpick
