#pragma once

#include <vector>

#include "orderpick/dp_core.hpp"

namespace orderpick {

enum class Exactness { Exact, Heuristic };

struct TurnoverDpOptions {
  bool dominance = false;  // thresholds are proven for the makespan clock, not the label clock
  bool fifo_order_start = false;
  std::size_t max_states = default_state_budget();
  bool record_trace = false;
};

struct TurnoverResult {
  double avg_turnover = 0.0;      // from the reconstructed schedule
  double sum_completion = 0.0;    // from the reconstructed schedule
  double terminal_label = 0.0;    // comp+ of the terminal state
  Solution solution;
  Exactness exactness = Exactness::Heuristic;
  DpStats stats;
  std::vector<DpTraceRecord> trace;
};

// g^cost scaled by the number of orders still uncompleted at the source state.
double transition_turnover_cost(const DpProblem& p, const DpState& s, double clock, const Transition& tr);

TurnoverResult solve_turnover(const Instance& inst, const TurnoverDpOptions& opts = {});

}  // namespace orderpick
