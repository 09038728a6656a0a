#include "orderpick/dp_turnover.hpp"

#include <bit>

namespace orderpick {

double transition_turnover_cost(const DpProblem& p, const DpState& s, double clock, const Transition& tr) {
  return transition_cost(p, s, clock, tr) * (s.open_count + std::popcount(s.pending));
}

TurnoverResult solve_turnover(const Instance& inst, const TurnoverDpOptions& opts) {
  DpOptions core;
  core.dominance = opts.dominance;
  core.fifo_order_start = opts.fifo_order_start;
  core.max_states = opts.max_states;
  core.record_trace = opts.record_trace;
  DpProblem p = make_problem(inst);
  DpPlan plan = run_dp(p, Objective::Turnover, core);

  TurnoverResult res;
  res.terminal_label = plan.comp_plus;
  res.solution = plan_to_solution(inst, plan.steps);
  Schedule sched = reconstruct(inst, res.solution);
  Turnover tv = avg_turnover(inst, sched, res.solution);
  res.avg_turnover = tv.average;
  res.sum_completion = tv.sum_completion;
  bool waits = false;
  for (const Leg& leg : sched.legs) waits = waits || leg.wait > kEps;
  res.exactness = waits ? Exactness::Heuristic : Exactness::Exact;
  res.stats = plan.stats;
  res.trace = std::move(plan.trace);
  return res;
}

}  // namespace orderpick
