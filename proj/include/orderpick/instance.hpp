#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "orderpick/warehouse.hpp"

namespace orderpick {

inline constexpr int kInstanceSchemaVersion = 1;
inline constexpr int kDepot = -1;

struct Item {
  int id = 0;
  int order = 0;
  Location location;
  bool operator==(const Item&) const = default;
};

struct Order {
  int id = 0;
  double release = 0.0;
  std::vector<int> items;
  bool operator==(const Order&) const = default;
};

struct PickerParams {
  double speed = 1.0;      // v
  double pick_time = 0.0;  // t^p
  int capacity = 1;        // c
  bool operator==(const PickerParams&) const = default;
};

class LoadError : public std::runtime_error {
 public:
  enum class Kind { Malformed, SchemaVersion, Invariant };
  LoadError(Kind kind, std::string field, const std::string& what)
      : std::runtime_error(field + ": " + what), kind_(kind), field_(std::move(field)) {}
  Kind kind() const { return kind_; }
  const std::string& field() const { return field_; }

 private:
  Kind kind_;
  std::string field_;
};

// Orders are indexed 0..n^o-1 in release order, items 0..n^i-1.
class Instance {
 public:
  Instance() = default;
  Instance(DistanceProvider distances, PickerParams picker, std::vector<Order> orders,
           std::vector<Item> items);

  const DistanceProvider& distances() const { return distances_; }
  const PickerParams& picker() const { return picker_; }
  double speed() const { return picker_.speed; }
  double pick_time() const { return picker_.pick_time; }
  int capacity() const { return picker_.capacity; }

  int num_orders() const { return static_cast<int>(orders_.size()); }
  int num_items() const { return static_cast<int>(items_.size()); }
  const std::vector<Order>& orders() const { return orders_; }
  const std::vector<Item>& items() const { return items_; }
  const Order& order(int j) const { return orders_.at(j); }
  const Item& item(int s) const { return items_.at(s); }
  double release_of_item(int s) const { return orders_[items_[s].order].release; }

  // Lengths between items; kDepot denotes the depot.
  double length(int a, int b) const {
    if (!dist_.empty()) return dist_[a + 1][b + 1];
    return distances_.distance(location_of(a), location_of(b));
  }
  double travel(int a, int b) const { return length(a, b) / picker_.speed; }
  double length_from(const Location& loc, int b) const;
  Location location_of(int a) const { return a == kDepot ? Location::depot() : items_[a].location; }

  // Bound on any pairwise length (L + W or the largest matrix entry).
  double span() const { return span_; }
  double max_pairwise_length() const;
  // Walking-length bound for a single-order batch: 2L + (a(o)+1)W, or sum of 2 d(l_d, s).
  double single_order_bound(int j) const;
  int occupied_aisles(int j) const;

  bool operator==(const Instance& o) const {
    return distances_ == o.distances_ && picker_ == o.picker_ && orders_ == o.orders_ && items_ == o.items_;
  }

  // Copy with all release times set to zero.
  Instance without_releases() const;
  Instance with_releases(const std::vector<double>& releases) const;

 private:
  DistanceProvider distances_;
  PickerParams picker_;
  std::vector<Order> orders_;
  std::vector<Item> items_;
  std::vector<std::vector<double>> dist_;  // dense only for small instances
  double span_ = 0.0;
};

struct GeneratorParams {
  WarehouseLayout layout = WarehouseLayout::default_layout();
  PickerParams picker{0.8, 10.0, 2};
  int n_orders = 10;
  double arrival_rate = 200.0;  // orders per 8-hour shift
  int max_order_size = 2;
  double slot_pitch = 1.0;
  std::uint64_t seed = 1;
};

Instance generate(const GeneratorParams& params);

struct LoadOptions {
  bool metric_close = false;
};

std::string to_json_string(const Instance& inst);
Instance from_json_string(const std::string& text, const LoadOptions& opts = {});
void save(const Instance& inst, const std::string& path);
Instance load(const std::string& path, const LoadOptions& opts = {});

}  // namespace orderpick
