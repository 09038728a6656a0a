#include "orderpick/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <set>

namespace orderpick {

std::string to_string(SegmentKind k) {
  switch (k) {
    case SegmentKind::Walk: return "walk";
    case SegmentKind::Pick: return "pick";
    case SegmentKind::Idle: return "idle";
    case SegmentKind::BatchExtension: return "b_ext";
    case SegmentKind::BetterFit: return "b_fit";
    case SegmentKind::Relocation: return "relocation";
  }
  return "?";
}

double Timeline::total(SegmentKind k) const {
  double s = 0;
  for (const Segment& seg : segments)
    if (seg.kind == k) s += seg.duration;
  return s;
}

double Timeline::total() const {
  double s = 0;
  for (const Segment& seg : segments) s += seg.duration;
  return s;
}

Timeline solution_timeline(const Instance& inst, const Solution& sol) {
  Schedule sc = reconstruct(inst, sol);
  Timeline tl;
  tl.makespan = sc.makespan;
  const int n = inst.num_items();
  auto unpicked = [&](int s, double tau) { return sc.completion[s] > tau + kEps; };
  auto released_unpicked = [&](double tau) {
    for (int s = 0; s < n; ++s)
      if (unpicked(s, tau) && inst.release_of_item(s) <= tau + kEps) return true;
    return false;
  };
  // Earliest release among items still unpicked at tau.
  auto first_release = [&](double tau) {
    double best = std::numeric_limits<double>::infinity();
    for (int s = 0; s < n; ++s)
      if (unpicked(s, tau)) best = std::min(best, inst.release_of_item(s));
    return best;
  };
  auto push = [&](SegmentKind k, double start, double dur, int item, int order) {
    if (dur > 0) tl.segments.push_back({k, start, dur, item, order});
  };
  std::set<int> relocated;

  size_t li = 0;
  for (size_t b = 0; b < sol.batches.size(); ++b) {
    std::set<int> commenced;
    double done = sc.batch_start[b];
    for (; li < sc.legs.size() && sc.legs[li].batch == static_cast<int>(b); ++li) {
      const Leg& leg = sc.legs[li];
      const int j = inst.item(leg.item).order;
      double walk_start = leg.start;
      if (leg.via_depot && leg.wait > 0) {
        SegmentKind k = released_unpicked(leg.start) ? SegmentKind::BetterFit : SegmentKind::Idle;
        push(k, leg.start, leg.wait, leg.item, j);
        walk_start += leg.wait;
      }
      double reloc = std::clamp(first_release(walk_start) - walk_start, 0.0, leg.walk);
      push(SegmentKind::Relocation, walk_start, reloc, leg.item, j);
      push(SegmentKind::Walk, walk_start + reloc, leg.walk - reloc, leg.item, j);
      if (reloc > 0 && !commenced.count(j)) relocated.insert(j);
      if (!leg.via_depot && leg.wait > 0) {
        double onset = leg.start + leg.walk;
        bool open_left = false;
        for (int o : commenced)
          for (int s : inst.order(o).items) open_left |= unpicked(s, onset);
        push(open_left ? SegmentKind::BetterFit : SegmentKind::BatchExtension, onset, leg.wait, leg.item, j);
      }
      push(SegmentKind::Pick, leg.completion - leg.pick, leg.pick, leg.item, j);
      commenced.insert(j);
      done = leg.completion;
    }
    push(SegmentKind::Walk, done, sc.batch_return[b] - done, -1, -1);
  }
  tl.relocation_orders.assign(relocated.begin(), relocated.end());
  return tl;
}

Timeline trace_timeline(const Instance& inst, const PolicyTrace& trace) {
  Timeline tl;
  tl.makespan = trace.makespan;
  std::vector<bool> revealed(inst.num_orders(), false), started(inst.num_orders(), false);
  std::set<int> relocated;
  bool moved = false, batch_moved = false;
  for (const TraceEvent& e : trace.events) {
    switch (e.kind) {
      case EventKind::Arrival: revealed[e.order] = true; break;
      case EventKind::Walk: tl.segments.push_back({SegmentKind::Walk, e.time, e.duration, e.item, -1}); break;
      case EventKind::Pick:
        tl.segments.push_back({SegmentKind::Pick, e.time, e.duration, e.item, e.order});
        if (!started[e.order] && batch_moved) relocated.insert(e.order);
        started[e.order] = true;
        break;
      case EventKind::Idle: tl.segments.push_back({SegmentKind::Idle, e.time, e.duration, -1, -1}); break;
      case EventKind::Relocate:
        tl.segments.push_back({SegmentKind::Relocation, e.time, e.duration, -1, -1});
        moved = true;
        break;
      case EventKind::Wait: {
        bool queued = false;
        for (int j = 0; j < inst.num_orders(); ++j) queued |= revealed[j] && !started[j];
        SegmentKind k = e.reason == "vtw" || queued ? SegmentKind::BatchExtension : SegmentKind::Idle;
        tl.segments.push_back({k, e.time, e.duration, -1, -1});
        break;
      }
      case EventKind::DepartDepot:
        batch_moved = moved;
        moved = false;
        break;
      case EventKind::ReturnDepot: batch_moved = false; break;
      case EventKind::Intervene: break;
    }
  }
  tl.relocation_orders.assign(relocated.begin(), relocated.end());
  return tl;
}

double nearest_rank(std::vector<double> values, double p) {
  if (values.empty()) return 0.0;
  std::sort(values.begin(), values.end());
  size_t rank = static_cast<size_t>(std::ceil(p / 100.0 * values.size()));
  rank = std::clamp<size_t>(rank, 1, values.size());
  return values[rank - 1];
}

WaitReport classify_waiting(const Timeline& tl) {
  WaitReport r;
  std::vector<double> idle, ext, fit;
  for (const Segment& s : tl.segments) {
    switch (s.kind) {
      case SegmentKind::Idle: idle.push_back(s.duration); break;
      case SegmentKind::BatchExtension: ext.push_back(s.duration); break;
      case SegmentKind::BetterFit: fit.push_back(s.duration); break;
      default: continue;
    }
    r.episodes.push_back({s.kind, s.order, s.start, s.duration});
  }
  for (double d : idle) r.idle_total += d;
  for (double d : ext) r.b_ext_total += d;
  for (double d : fit) r.b_fit_total += d;
  r.idle_count = static_cast<int>(idle.size());
  r.b_ext_count = static_cast<int>(ext.size());
  r.b_fit_count = static_cast<int>(fit.size());
  r.idle_p80 = nearest_rank(idle, 80);
  r.b_ext_p80 = nearest_rank(ext, 80);
  r.b_fit_p80 = nearest_rank(fit, 80);
  return r;
}

WaitReport classify_waiting(const Instance& inst, const Solution& sol, const Schedule&) {
  return classify_waiting(solution_timeline(inst, sol));
}

int count_interventions(const Instance& inst, const Solution& sol) {
  Schedule sc = reconstruct(inst, sol);
  int count = 0;
  size_t li = 0;
  for (size_t b = 0; b < sol.batches.size(); ++b) {
    if (li >= sc.legs.size()) break;
    const Leg& first = sc.legs[li];
    const double departure = first.start + first.wait;
    const int first_order = inst.item(first.item).order;
    for (int j : sol.batches[b].orders)
      if (j != first_order && inst.order(j).release > departure + kEps) ++count;
    li += sol.batches[b].items.size();
  }
  return count;
}

int count_interventions(const PolicyTrace& trace) {
  return static_cast<int>(std::count_if(trace.events.begin(), trace.events.end(),
                                        [](const TraceEvent& e) { return e.kind == EventKind::Intervene; }));
}

RelocationStats relocation_stats(const Timeline& tl) {
  RelocationStats r;
  r.time = tl.total(SegmentKind::Relocation);
  r.orders_with_prior_relocation = static_cast<int>(tl.relocation_orders.size());
  r.share_of_makespan = tl.makespan > 0 ? r.time / tl.makespan : 0.0;
  return r;
}

int misplaced_waiting(const Instance& inst, const PolicyTrace& trace) {
  int count = 0;
  for (int j = 0; j < inst.num_orders(); ++j)
    if (trace.vtw_wait[j] > 0 && trace.vtw_wait[j] > chi(inst, j) + kEps) ++count;
  return count;
}

SavingsProfile batch_savings_profile(const Instance& inst, const Solution& sol, std::uint64_t seed, int max_pairs) {
  const long n = inst.num_orders();
  if (inst.capacity() < 2) throw ValidationError("capacity", "two-order batches need c >= 2");
  const long all = n * (n - 1) / 2;
  if (all < 2) throw ValidationError("orders", "savings baseline needs at least two order pairs");

  std::vector<double> base;
  if (all <= max_pairs) {
    for (int a = 0; a < n; ++a)
      for (int b = a + 1; b < n; ++b) base.push_back(savings(inst, {a, b}));
  } else {
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> pick(0, static_cast<int>(n) - 1);
    while (static_cast<int>(base.size()) < max_pairs) {
      int a = pick(rng), b = pick(rng);
      if (a != b) base.push_back(savings(inst, {a, b}));
    }
  }
  SavingsProfile p;
  p.baseline_pairs = static_cast<int>(base.size());
  for (double v : base) p.mean_random += v;
  p.mean_random /= base.size();
  std::vector<double> sorted = base;
  std::sort(sorted.begin(), sorted.end());
  const size_t m = sorted.size();
  p.median_random = m % 2 ? sorted[m / 2] : (sorted[m / 2 - 1] + sorted[m / 2]) / 2;

  int above = 0;
  for (const Batch& b : sol.batches) {
    if (b.orders.size() != 2) continue;
    double psi = savings(inst, b.orders);
    p.mean_solution += psi;
    above += psi > p.median_random + kEps;
    ++p.solution_pairs;
  }
  if (p.solution_pairs > 0) {
    p.mean_solution /= p.solution_pairs;
    p.share_above_median = static_cast<double>(above) / p.solution_pairs;
  }
  return p;
}

}  // namespace orderpick
