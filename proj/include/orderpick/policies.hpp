#pragma once

#include <string>
#include <vector>

#include "orderpick/dp_core.hpp"
#include "orderpick/instance.hpp"
#include "orderpick/schedule.hpp"

namespace orderpick {

struct PolicyConfig {
  enum class Routing { SShape, Optimal };
  enum class Batching { Fifo, Optimal };
  enum class Selection { Fifo, LargestThenSavings };
  enum class Relocation { None, Center };

  Routing routing = Routing::Optimal;
  Batching batching = Batching::Optimal;
  int vtw_n = 0;  // 0: no waiting, else hold at the depot until N orders queue
  bool intervention = true;
  Selection selection = Selection::Fifo;
  Relocation relocation = Relocation::None;
  double initial_wait = 0.0;  // forced wait at the depot before the first decision
  std::string name = "custom";

  void validate() const;

  static PolicyConfig vtwb();
  static PolicyConfig fifo();    // optimal routing, FIFO batching, no waiting, no intervention
  static PolicyConfig reopt();   // optimal routing and batching, no waiting, intervention
  static PolicyConfig reopt_star();
  // VTWB, +opt routing, +opt batching, +intervention, +no-wait, Reopt*.
  static std::vector<PolicyConfig> ladder();
  // Preset name, or comma-separated key=value overrides on top of a preset:
  // "reopt,intervention=off", "vtwb,vtw=3", "fifo,relocation=center".
  static PolicyConfig parse(const std::string& spec);
  std::string describe() const;
};

enum class EventKind { Arrival, DepartDepot, Walk, Pick, Wait, Idle, Relocate, ReturnDepot, Intervene };
std::string to_string(EventKind k);

struct TraceEvent {
  EventKind kind = EventKind::Idle;
  double time = 0.0;
  double duration = 0.0;
  int order = -1;
  int item = -1;
  std::string reason;  // wait reason: vtw or initial
  Location where;
};

struct PolicyTrace {
  std::vector<TraceEvent> events;  // sorted by time
  std::vector<double> order_completion;
  std::vector<double> vtw_wait;  // per order: depot waiting under vtw while the order queued
  double makespan = 0.0;
  double avg_turnover = 0.0;
  int resolves = 0;
};

struct SimResult {
  PolicyTrace trace;
  Solution solution;  // realized batches and picking sequences
};

struct SimOptions {
  DpOptions dp;  // used by optimal batching re-solves
  bool turnover_dominance = false;
};

SimResult simulate(const Instance& inst, const PolicyConfig& cfg, Objective objective,
                   const SimOptions& opts = {});

double objective_value(const PolicyTrace& trace, Objective objective);

// Objectives recomputed from pick and return events only.
struct ReplayResult {
  double makespan = 0.0;
  double avg_turnover = 0.0;
  std::vector<double> order_completion;
  double busy_total = 0.0;  // walk + pick + wait + idle + relocate
};
ReplayResult replay(const Instance& inst, const PolicyTrace& trace);

// (alg - star) / star; throws on a nonpositive reference.
double gap(double alg_value, double star_value);

std::string trace_to_jsonl(const PolicyTrace& trace);

}  // namespace orderpick
