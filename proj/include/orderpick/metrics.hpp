#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "orderpick/instance.hpp"
#include "orderpick/policies.hpp"
#include "orderpick/schedule.hpp"

namespace orderpick {

enum class SegmentKind { Walk, Pick, Idle, BatchExtension, BetterFit, Relocation };
std::string to_string(SegmentKind k);

struct Segment {
  SegmentKind kind = SegmentKind::Walk;
  double start = 0.0;
  double duration = 0.0;
  int item = -1;   // target item for walks, picks and relocation
  int order = -1;  // order waited for, or picked
};

// Contiguous picker timeline. A wait before the first item of a batch is
// spent at the depot; walking toward an item while no released item is left
// to pick counts as relocation.
struct Timeline {
  std::vector<Segment> segments;
  double makespan = 0.0;
  std::vector<int> relocation_orders;  // orders whose first pick followed relocation
  double total(SegmentKind k) const;
  double total() const;
};

Timeline solution_timeline(const Instance& inst, const Solution& sol);
// Depot waits under vtw are batch-extension waits; policies never wait in the field.
Timeline trace_timeline(const Instance& inst, const PolicyTrace& trace);

struct WaitEpisode {
  SegmentKind kind = SegmentKind::Idle;
  int order = -1;
  double start = 0.0;
  double duration = 0.0;
};

struct WaitReport {
  double idle_total = 0.0;
  double b_ext_total = 0.0;
  double b_fit_total = 0.0;
  int idle_count = 0;
  int b_ext_count = 0;
  int b_fit_count = 0;
  double idle_p80 = 0.0;
  double b_ext_p80 = 0.0;
  double b_fit_p80 = 0.0;
  std::vector<WaitEpisode> episodes;
};

WaitReport classify_waiting(const Instance& inst, const Solution& sol, const Schedule& sched);
WaitReport classify_waiting(const Timeline& timeline);

// Orders released after their batch left the depot (the batch's first order excluded).
int count_interventions(const Instance& inst, const Solution& sol);
int count_interventions(const PolicyTrace& trace);

struct RelocationStats {
  double time = 0.0;
  int orders_with_prior_relocation = 0;
  double share_of_makespan = 0.0;
};
RelocationStats relocation_stats(const Timeline& timeline);

// Vtw-delayed orders whose waiting exceeds their single-order picking time.
int misplaced_waiting(const Instance& inst, const PolicyTrace& trace);

struct SavingsProfile {
  int solution_pairs = 0;           // two-order batches in the solution
  double mean_solution = 0.0;       // mean savings of those batches
  double mean_random = 0.0;         // over the random pair baseline
  double median_random = 0.0;
  double share_above_median = 0.0;  // solution pairs with savings above the baseline median
  int baseline_pairs = 0;
};
// Baseline: all unordered order pairs, or a seeded sample of max_pairs of them.
SavingsProfile batch_savings_profile(const Instance& inst, const Solution& sol, std::uint64_t seed,
                                     int max_pairs = 5000);

// Nearest-rank percentile, p in (0, 100].
double nearest_rank(std::vector<double> values, double p);

}  // namespace orderpick
