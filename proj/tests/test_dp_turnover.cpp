#include <gtest/gtest.h>

#include <bit>

#include "oracle.hpp"
#include "orderpick/dp_turnover.hpp"

using namespace orderpick;

namespace {

Instance golden(const std::string& name) { return load(std::string(ORDERPICK_DATA_DIR) + "/" + name); }

TurnoverDpOptions fifo_with_trace() {
  TurnoverDpOptions o;
  o.fifo_order_start = true;
  o.record_trace = true;
  return o;
}

double label_of(const std::vector<DpTraceRecord>& trace, const DpState& s) {
  for (const auto& r : trace)
    if (r.state == s) return r.comp_plus;
  return -1;
}

}  // namespace

TEST(DpTurnover, LabelCostsOfI1) {
  Instance i1 = golden("i1.json");
  DpProblem p = make_problem(i1);
  DpState root = root_state(p);
  TurnoverDpOptions o;
  DpOptions core;
  core.dominance = false;
  for (const auto& [tr, to] : expand(p, root, 0.0, core))
    if (p.global_item[tr.next_item] == 0 && tr.closes) EXPECT_DOUBLE_EQ(transition_turnover_cost(p, root, 0.0, tr), 18.0);
  // Extendable state after s1 at clock 3 with one open order and two pending.
  DpState ext{0, 1, 0, 0b110};
  for (const auto& [tr, to] : expand(p, ext, 3.0, core))
    if (p.global_item[tr.next_item] == 1 && tr.closes)
      EXPECT_DOUBLE_EQ(transition_turnover_cost(p, ext, 3.0, tr), 27.0);
}

TEST(DpTurnover, GoldenI1) {
  Instance i1 = golden("i1.json");
  TurnoverResult r = solve_turnover(i1, fifo_with_trace());
  EXPECT_EQ(r.sum_completion, 40.0);
  EXPECT_DOUBLE_EQ(r.avg_turnover, 40.0 / 3.0);
  EXPECT_EQ(r.terminal_label, 40.0);
  ASSERT_EQ(r.solution.batches.size(), 2u);
  EXPECT_EQ(r.solution.batches[0].orders, (std::vector<int>{0, 1}));
  EXPECT_EQ(r.exactness, Exactness::Exact);
  EXPECT_EQ(label_of(r.trace, DpState{0, 1, 0, 0b110}), 9.0);
  EXPECT_EQ(label_of(r.trace, DpState{0, 0, 0, 0b110}), 18.0);
  EXPECT_EQ(label_of(r.trace, DpState{1, 0, 0, 0b100}), 36.0);
}

TEST(DpTurnover, GoldenI2IsHeuristic) {
  Instance i2 = golden("i2.json");
  TurnoverResult r = solve_turnover(i2, fifo_with_trace());
  EXPECT_EQ(r.terminal_label, 43.0);
  EXPECT_EQ(r.sum_completion, 43.0);
  EXPECT_DOUBLE_EQ(r.avg_turnover, 26.0 / 3.0);
  EXPECT_EQ(r.exactness, Exactness::Heuristic);
  auto bf = oracle::brute_force(i2);
  EXPECT_EQ(bf.sum_completion, 42.0);
}

TEST(DpTurnover, TerminalLabelEqualsScheduleSum) {
  for (std::uint64_t seed = 1; seed <= 120; ++seed) {
    Instance inst = oracle::random_instance(seed, {4, 6, 1 + static_cast<int>(seed % 3)});
    TurnoverResult r = solve_turnover(inst);
    EXPECT_NEAR(r.terminal_label, r.sum_completion, 1e-9);
    auto bf = oracle::brute_force(inst);
    EXPECT_GE(r.sum_completion, bf.sum_completion - 1e-9);
  }
}

TEST(DpTurnover, ExactWithoutReleases) {
  for (std::uint64_t seed = 1; seed <= 120; ++seed) {
    oracle::RandomSpec spec{4, 6, 1 + static_cast<int>(seed % 3)};
    spec.zero_release = true;
    Instance inst = oracle::random_instance(seed, spec);
    TurnoverResult r = solve_turnover(inst);
    EXPECT_NEAR(r.sum_completion, oracle::brute_force(inst).sum_completion, 1e-9) << seed;
    EXPECT_EQ(r.exactness, Exactness::Exact);
  }
}

TEST(DpTurnover, LabelReplayAlongWinningPath) {
  for (std::uint64_t seed = 1; seed <= 50; ++seed) {
    Instance inst = oracle::random_instance(seed, {4, 6, 2});
    DpProblem p = make_problem(inst);
    DpOptions core;
    core.dominance = false;
    DpPlan plan = run_dp(p, Objective::Turnover, core);
    double clock = 0, comp = 0;
    for (size_t k = 0; k + 1 < plan.path.size(); ++k) {
      const DpState& s = plan.path[k];
      bool matched = false;
      for (const auto& [tr, to] : expand(p, s, clock, core)) {
        if (!(to == plan.path[k + 1])) continue;
        double g = transition_cost(p, s, clock, tr);
        EXPECT_GE(comp + g * (s.open_count + std::popcount(s.pending)), clock + g - 1e-9);
        comp += transition_turnover_cost(p, s, clock, tr);
        clock += g;
        matched = true;
        break;
      }
      ASSERT_TRUE(matched);
    }
    EXPECT_NEAR(comp, plan.comp_plus, 1e-9);
    EXPECT_NEAR(clock, plan.clock, 1e-9);
  }
}
