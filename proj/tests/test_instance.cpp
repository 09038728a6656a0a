#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>

#include "orderpick/instance.hpp"
#include "orderpick/io.hpp"

using namespace orderpick;

namespace {

std::string tmp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / ("orderpick_test_" + name)).string();
}

}  // namespace

TEST(Instance, GoldenI1Loads) {
  Instance i1 = load(std::string(ORDERPICK_DATA_DIR) + "/i1.json");
  EXPECT_EQ(i1.num_orders(), 3);
  EXPECT_EQ(i1.capacity(), 2);
  EXPECT_EQ(i1.pick_time(), 0.0);
  EXPECT_DOUBLE_EQ(i1.length(0, 2), 5.0);
}

TEST(Instance, MeanOrderSize) {
  for (auto [k, mean, tol] : {std::tuple{2, 1.5, 0.01}, std::tuple{4, 2.5, 0.02}}) {
    GeneratorParams p;
    p.n_orders = 100000;
    p.max_order_size = k;
    p.seed = 11;
    Instance inst = generate(p);
    EXPECT_NEAR(static_cast<double>(inst.num_items()) / inst.num_orders(), mean, tol);
  }
}

TEST(Instance, InterArrivalMean) {
  GeneratorParams p;
  p.n_orders = 100000;
  p.seed = 5;
  Instance inst = generate(p);
  double mean = inst.order(inst.num_orders() - 1).release / inst.num_orders();
  EXPECT_NEAR(mean / (28800.0 / 200.0), 1.0, 0.02);
  for (int j = 1; j < inst.num_orders(); ++j) ASSERT_LE(inst.order(j - 1).release, inst.order(j).release);
}

TEST(Instance, ItemsOnlyInAisles) {
  GeneratorParams p;
  p.n_orders = 2000;
  Instance inst = generate(p);
  const auto& w = inst.distances().layout();
  for (const Item& it : inst.items()) {
    ASSERT_EQ(it.location.kind, Location::Kind::InAisle);
    for (double cy : w.cross_y) ASSERT_GT(std::abs(it.location.coord - cy), 1e-9);
  }
}

TEST(Instance, DeterministicAndRoundTrip) {
  GeneratorParams p;
  p.seed = 42;
  Instance a = generate(p), b = generate(p);
  EXPECT_EQ(to_json_string(a), to_json_string(b));
  std::string path = tmp_path("roundtrip.json");
  save(a, path);
  Instance c = load(path);
  EXPECT_TRUE(c == a);
  EXPECT_EQ(to_json_string(c), to_json_string(a));
}

TEST(Instance, LoadErrorsAreDistinct) {
  std::string good = read_file(std::string(ORDERPICK_DATA_DIR) + "/i1.json");
  try {
    from_json_string("{ not json");
    FAIL();
  } catch (const LoadError& e) {
    EXPECT_EQ(e.kind(), LoadError::Kind::Malformed);
  }
  std::string v2 = good;
  v2.replace(v2.find("\"schema_version\": 1"), 19, "\"schema_version\": 9");
  try {
    from_json_string(v2);
    FAIL();
  } catch (const LoadError& e) {
    EXPECT_EQ(e.kind(), LoadError::Kind::SchemaVersion);
  }
  std::string i2 = read_file(std::string(ORDERPICK_DATA_DIR) + "/i2.json");
  std::string unsorted = i2;
  unsorted.replace(unsorted.find("\"release\": 0"), 12, "\"release\": 30");
  try {
    from_json_string(unsorted);
    FAIL();
  } catch (const LoadError& e) {
    EXPECT_EQ(e.kind(), LoadError::Kind::Invariant);
    EXPECT_NE(std::string(e.what()).find("orders not sorted"), std::string::npos);
    EXPECT_EQ(e.field(), "orders[1].release");
  }
  std::string missing = good;
  missing.replace(missing.find("\"t_p\""), 5, "\"tp_\"");
  try {
    from_json_string(missing);
    FAIL();
  } catch (const LoadError& e) {
    EXPECT_EQ(e.kind(), LoadError::Kind::Malformed);
    EXPECT_EQ(e.field(), "picker.t_p");
  }
}

TEST(Instance, TriangleViolationNeedsFlag) {
  std::string doc = R"({"schema_version": 1, "nodes": ["depot", "a", "b"],
    "matrix": [[0, 1, 9], [1, 0, 1], [9, 1, 0]], "picker": {"v": 1, "t_p": 0, "c": 1},
    "orders": [{"id": 0, "release": 0, "items": [{"id": 0, "node": 2}]}]})";
  EXPECT_THROW(from_json_string(doc), LoadError);
  Instance inst = from_json_string(doc, LoadOptions{true});
  EXPECT_DOUBLE_EQ(inst.length(kDepot, 0), 2.0);
}
