#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace orderpick {

inline constexpr double kEps = 1e-9;

class ValidationError : public std::runtime_error {
 public:
  ValidationError(std::string field, const std::string& what)
      : std::runtime_error(field.empty() ? what : field + ": " + what), field_(std::move(field)) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

// A point of the walking network. Items live in aisles (or on explicit nodes);
// cross-aisle points only appear for relocation and the depot.
struct Location {
  enum class Kind { Depot, InAisle, CrossAisle, Node };
  Kind kind = Kind::Depot;
  int index = 0;       // aisle, cross-aisle or node index
  double coord = 0.0;  // y inside an aisle, x along a cross-aisle

  static Location depot() { return {}; }
  static Location in_aisle(int aisle, double y) { return {Kind::InAisle, aisle, y}; }
  static Location on_cross_aisle(int cross, double x) { return {Kind::CrossAisle, cross, x}; }
  static Location node(int n) { return {Kind::Node, n, 0.0}; }

  bool operator==(const Location&) const = default;
};

std::string to_string(const Location& loc);

// Vertical aisles span [0, W]; cross-aisles span [0, L] horizontally.
struct WarehouseLayout {
  int num_aisles = 0;
  int num_cross_aisles = 0;
  double aisle_length = 0.0;        // W
  double cross_aisle_length = 0.0;  // L
  std::vector<double> aisle_x;
  std::vector<double> cross_y;
  int depot_cross = 0;
  double depot_x = 0.0;

  // Evenly spaced aisles and cross-aisles, depot on the middle cross-aisle at x = 0.
  static WarehouseLayout regular(int aisles, int cross_aisles, double L, double W);
  static WarehouseLayout default_layout();

  void validate() const;
  bool valid_location(const Location& loc) const;

  double distance(const Location& a, const Location& b) const;
  // Point at walking distance `along` on a shortest path from a to b.
  Location point_along(const Location& a, const Location& b, double along) const;
  Location center() const;

  double x_of(const Location& loc) const;
  double y_of(const Location& loc) const;
  bool operator==(const WarehouseLayout&) const = default;

 private:
  Location normalize(const Location& loc) const;
  std::vector<Location> waypoints(const Location& a, const Location& b) const;
};

using PartialMatrix = std::vector<std::vector<std::optional<double>>>;
using Matrix = std::vector<std::vector<double>>;

// All-pairs shortest-path completion of a partial symmetric length matrix.
Matrix metric_close(const PartialMatrix& m);
// First triple (i, j, k) with d(i,k) > d(i,j) + d(j,k), if any.
std::optional<std::vector<int>> find_triangle_violation(const Matrix& m);

// Node 0 is the depot.
struct ExplicitMetric {
  std::vector<std::string> nodes;
  Matrix matrix;
  bool operator==(const ExplicitMetric&) const = default;
};

class DistanceProvider {
 public:
  DistanceProvider() = default;
  explicit DistanceProvider(WarehouseLayout layout);
  explicit DistanceProvider(ExplicitMetric metric);

  bool derived() const { return std::holds_alternative<WarehouseLayout>(data_); }
  const WarehouseLayout& layout() const;
  const ExplicitMetric& metric() const;

  double distance(const Location& a, const Location& b) const;
  bool valid_location(const Location& loc) const;
  // Bound on any pairwise distance: L + W, or the largest matrix entry.
  double span() const;

  bool operator==(const DistanceProvider&) const = default;

 private:
  int node_index(const Location& loc) const;
  std::variant<WarehouseLayout, ExplicitMetric> data_;
};

}  // namespace orderpick
