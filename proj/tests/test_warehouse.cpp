#include <gtest/gtest.h>

#include <random>

#include "oracle.hpp"
#include "orderpick/instance.hpp"
#include "orderpick/warehouse.hpp"

using namespace orderpick;

namespace {

Location random_point(const WarehouseLayout& w, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> aisle(0, w.num_aisles - 1);
  std::uniform_int_distribution<int> step(0, static_cast<int>(2 * w.aisle_length));
  return Location::in_aisle(aisle(rng), step(rng) * 0.5);
}

}  // namespace

TEST(Warehouse, IdentityDistanceIsZero) {
  WarehouseLayout w = WarehouseLayout::default_layout();
  Location s = Location::in_aisle(3, 12.5);
  EXPECT_DOUBLE_EQ(w.distance(s, s), 0.0);
  EXPECT_DOUBLE_EQ(w.distance(Location::depot(), Location::depot()), 0.0);
}

TEST(Warehouse, ExplicitGoldenDistances) {
  Instance i1 = load(std::string(ORDERPICK_DATA_DIR) + "/i1.json");
  EXPECT_DOUBLE_EQ(i1.length(kDepot, 0), 3.0);
  EXPECT_DOUBLE_EQ(i1.length(kDepot, 2), 2.0);
  EXPECT_DOUBLE_EQ(i1.length(kDepot, 1), 5.0);
}

TEST(Warehouse, MetricClosureFillsMissingEntry) {
  PartialMatrix m = {{0.0, 3.0, 5.0, 2.0}, {3.0, 0.0, 4.0, std::nullopt}, {5.0, 4.0, 0.0, 7.0},
                     {2.0, std::nullopt, 7.0, 0.0}};
  Matrix d = metric_close(m);
  EXPECT_DOUBLE_EQ(d[1][3], 5.0);
  EXPECT_DOUBLE_EQ(d[3][1], 5.0);
}

TEST(Warehouse, MetricClosureFixedPointAndRepair) {
  PartialMatrix metric = {{0.0, 1.0, 2.0}, {1.0, 0.0, 1.0}, {2.0, 1.0, 0.0}};
  Matrix d = metric_close(metric);
  EXPECT_EQ(d, (Matrix{{0, 1, 2}, {1, 0, 1}, {2, 1, 0}}));
  PartialMatrix broken = {{0.0, 1.0, 9.0}, {1.0, 0.0, 1.0}, {9.0, 1.0, 0.0}};
  EXPECT_TRUE(find_triangle_violation({{0, 1, 9}, {1, 0, 1}, {9, 1, 0}}).has_value());
  EXPECT_DOUBLE_EQ(metric_close(broken)[0][2], 2.0);
  PartialMatrix negative = {{0.0, -1.0}, {-1.0, 0.0}};
  EXPECT_THROW(metric_close(negative), ValidationError);
}

TEST(Warehouse, ExplicitUnknownLocationRejected) {
  DistanceProvider dp(ExplicitMetric{{"depot", "a"}, {{0, 1}, {1, 0}}});
  EXPECT_THROW(dp.distance(Location::depot(), Location::node(5)), ValidationError);
  EXPECT_THROW(dp.distance(Location::depot(), Location::in_aisle(0, 1)), ValidationError);
}

TEST(Warehouse, LayoutValidation) {
  WarehouseLayout w = WarehouseLayout::default_layout();
  w.cross_y[0] = 1.0;
  EXPECT_THROW(w.validate(), ValidationError);
  w = WarehouseLayout::default_layout();
  w.num_cross_aisles = 1;
  EXPECT_THROW(w.validate(), ValidationError);
  w = WarehouseLayout::default_layout();
  std::swap(w.aisle_x[0], w.aisle_x[1]);
  EXPECT_THROW(w.validate(), ValidationError);
}

TEST(Warehouse, MetricPropertiesOnRandomLayouts) {
  for (std::uint64_t seed = 1; seed <= 60; ++seed) {
    WarehouseLayout w = oracle::random_layout(seed);
    std::mt19937_64 rng(seed);
    std::vector<Location> pts{Location::depot()};
    for (int k = 0; k < 8; ++k) pts.push_back(random_point(w, rng));
    for (const auto& a : pts)
      for (const auto& b : pts) {
        EXPECT_NEAR(w.distance(a, b), w.distance(b, a), 1e-12);
        EXPECT_LE(w.distance(a, b), w.cross_aisle_length + w.aisle_length + 1e-9);
        for (const auto& c : pts) EXPECT_LE(w.distance(a, c), w.distance(a, b) + w.distance(b, c) + 1e-9);
      }
  }
}

TEST(Warehouse, AgreesWithGridDijkstra) {
  int checked = 0;
  for (std::uint64_t seed = 1; checked < 1000; ++seed) {
    WarehouseLayout w = oracle::random_layout(seed);
    std::mt19937_64 rng(seed + 1000);
    for (int k = 0; k < 25; ++k, ++checked) {
      Location a = k == 0 ? Location::depot() : random_point(w, rng);
      Location b = random_point(w, rng);
      EXPECT_NEAR(w.distance(a, b), oracle::grid_distance(w, a, b, 0.5), 1e-9) << to_string(a) << " " << to_string(b);
    }
  }
}

TEST(Warehouse, PointAlongFollowsShortestPath) {
  for (std::uint64_t seed = 1; seed <= 40; ++seed) {
    WarehouseLayout w = oracle::random_layout(seed);
    std::mt19937_64 rng(seed);
    Location a = Location::depot();
    Location b = random_point(w, rng);
    double d = w.distance(a, b);
    for (double f : {0.0, 0.25, 0.5, 0.75, 1.0}) {
      Location p = w.point_along(a, b, f * d);
      EXPECT_NEAR(w.distance(a, p), f * d, 1e-9);
      EXPECT_NEAR(w.distance(p, b), (1 - f) * d, 1e-9);
    }
  }
}

TEST(Warehouse, CenterOnCrossAisle) {
  WarehouseLayout w = WarehouseLayout::default_layout();
  Location c = w.center();
  EXPECT_EQ(c.kind, Location::Kind::CrossAisle);
  EXPECT_DOUBLE_EQ(w.x_of(c), 25.0);
  EXPECT_DOUBLE_EQ(w.y_of(c), 34.5);
}
