#include "orderpick/warehouse.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace orderpick {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

bool strictly_increasing(const std::vector<double>& v) {
  for (size_t i = 1; i < v.size(); ++i)
    if (!(v[i] > v[i - 1])) return false;
  return true;
}

}  // namespace

std::string to_string(const Location& loc) {
  std::ostringstream os;
  switch (loc.kind) {
    case Location::Kind::Depot: os << "depot"; break;
    case Location::Kind::InAisle: os << "aisle" << loc.index << "@" << loc.coord; break;
    case Location::Kind::CrossAisle: os << "cross" << loc.index << "@" << loc.coord; break;
    case Location::Kind::Node: os << "node" << loc.index; break;
  }
  return os.str();
}

WarehouseLayout WarehouseLayout::regular(int aisles, int cross_aisles, double L, double W) {
  WarehouseLayout w;
  w.num_aisles = aisles;
  w.num_cross_aisles = cross_aisles;
  w.cross_aisle_length = L;
  w.aisle_length = W;
  for (int i = 0; i < aisles; ++i) w.aisle_x.push_back(L * (i + 0.5) / aisles);
  for (int c = 0; c < cross_aisles; ++c)
    w.cross_y.push_back(cross_aisles > 1 ? W * c / (cross_aisles - 1) : 0.0);
  w.depot_cross = (cross_aisles - 1) / 2;
  w.depot_x = 0.0;
  w.validate();
  return w;
}

WarehouseLayout WarehouseLayout::default_layout() { return regular(10, 3, 50.0, 69.0); }

void WarehouseLayout::validate() const {
  if (num_aisles < 1) throw ValidationError("num_aisles", "must be at least 1");
  if (num_cross_aisles < 2) throw ValidationError("num_cross_aisles", "must be at least 2");
  if (!(aisle_length > 0)) throw ValidationError("aisle_length", "must be positive");
  if (!(cross_aisle_length > 0)) throw ValidationError("cross_aisle_length", "must be positive");
  if (static_cast<int>(aisle_x.size()) != num_aisles)
    throw ValidationError("aisle_x", "length differs from num_aisles");
  if (static_cast<int>(cross_y.size()) != num_cross_aisles)
    throw ValidationError("cross_y", "length differs from num_cross_aisles");
  if (!strictly_increasing(aisle_x) || aisle_x.front() < 0 || aisle_x.back() > cross_aisle_length)
    throw ValidationError("aisle_x", "must be strictly increasing within [0, L]");
  if (!strictly_increasing(cross_y) || cross_y.front() != 0.0 || cross_y.back() != aisle_length)
    throw ValidationError("cross_y", "must be strictly increasing from 0 to W");
  if (depot_cross < 0 || depot_cross >= num_cross_aisles)
    throw ValidationError("depot", "cross-aisle index out of range");
  if (depot_x < 0 || depot_x > cross_aisle_length)
    throw ValidationError("depot", "x outside [0, L]");
}

bool WarehouseLayout::valid_location(const Location& loc) const {
  switch (loc.kind) {
    case Location::Kind::Depot: return true;
    case Location::Kind::InAisle:
      return loc.index >= 0 && loc.index < num_aisles && loc.coord >= 0 && loc.coord <= aisle_length;
    case Location::Kind::CrossAisle:
      return loc.index >= 0 && loc.index < num_cross_aisles && loc.coord >= 0 &&
             loc.coord <= cross_aisle_length;
    case Location::Kind::Node: return false;
  }
  return false;
}

Location WarehouseLayout::normalize(const Location& loc) const {
  if (loc.kind == Location::Kind::Depot) return Location::on_cross_aisle(depot_cross, depot_x);
  if (!valid_location(loc)) throw ValidationError("location", "invalid for layout: " + to_string(loc));
  return loc;
}

double WarehouseLayout::x_of(const Location& loc) const {
  Location p = normalize(loc);
  return p.kind == Location::Kind::InAisle ? aisle_x[p.index] : p.coord;
}

double WarehouseLayout::y_of(const Location& loc) const {
  Location p = normalize(loc);
  return p.kind == Location::Kind::InAisle ? p.coord : cross_y[p.index];
}

double WarehouseLayout::distance(const Location& a0, const Location& b0) const {
  Location a = normalize(a0), b = normalize(b0);
  bool a_aisle = a.kind == Location::Kind::InAisle;
  bool b_aisle = b.kind == Location::Kind::InAisle;
  if (a_aisle && b_aisle) {
    if (a.index == b.index) return std::abs(a.coord - b.coord);
    double best = kInf;
    for (double cy : cross_y) best = std::min(best, std::abs(a.coord - cy) + std::abs(cy - b.coord));
    return std::abs(aisle_x[a.index] - aisle_x[b.index]) + best;
  }
  if (a_aisle != b_aisle) {
    const Location& p = a_aisle ? a : b;
    const Location& q = a_aisle ? b : a;
    return std::abs(aisle_x[p.index] - q.coord) + std::abs(p.coord - cross_y[q.index]);
  }
  if (a.index == b.index) return std::abs(a.coord - b.coord);
  double best = kInf;
  for (double ax : aisle_x) best = std::min(best, std::abs(a.coord - ax) + std::abs(ax - b.coord));
  return std::abs(cross_y[a.index] - cross_y[b.index]) + best;
}

std::vector<Location> WarehouseLayout::waypoints(const Location& a0, const Location& b0) const {
  Location a = normalize(a0), b = normalize(b0);
  bool a_aisle = a.kind == Location::Kind::InAisle;
  bool b_aisle = b.kind == Location::Kind::InAisle;
  if (a_aisle && b_aisle) {
    if (a.index == b.index) return {a, b};
    int best = 0;
    double best_len = kInf;
    for (int c = 0; c < num_cross_aisles; ++c) {
      double len = std::abs(a.coord - cross_y[c]) + std::abs(cross_y[c] - b.coord);
      if (len < best_len - kEps) best_len = len, best = c;
    }
    return {a, Location::on_cross_aisle(best, aisle_x[a.index]),
            Location::on_cross_aisle(best, aisle_x[b.index]), b};
  }
  if (a_aisle) return {a, Location::on_cross_aisle(b.index, aisle_x[a.index]), b};
  if (b_aisle) return {a, Location::on_cross_aisle(a.index, aisle_x[b.index]), b};
  if (a.index == b.index) return {a, b};
  int best = 0;
  double best_len = kInf;
  for (int k = 0; k < num_aisles; ++k) {
    double len = std::abs(a.coord - aisle_x[k]) + std::abs(aisle_x[k] - b.coord);
    if (len < best_len - kEps) best_len = len, best = k;
  }
  return {a, Location::on_cross_aisle(a.index, aisle_x[best]),
          Location::on_cross_aisle(b.index, aisle_x[best]), b};
}

Location WarehouseLayout::point_along(const Location& a, const Location& b, double along) const {
  std::vector<Location> pts = waypoints(a, b);
  if (along <= 0) return pts.front();
  for (size_t i = 1; i < pts.size(); ++i) {
    const Location& p = pts[i - 1];
    const Location& q = pts[i];
    double len = distance(p, q);
    if (along <= len + kEps && len > 0) {
      double f = std::min(1.0, along / len);
      double x = x_of(p) + f * (x_of(q) - x_of(p));
      double y = y_of(p) + f * (y_of(q) - y_of(p));
      if (std::abs(x_of(p) - x_of(q)) < kEps) {
        // Vertical leg: find the aisle at this x.
        for (int k = 0; k < num_aisles; ++k)
          if (std::abs(aisle_x[k] - x) < kEps) return Location::in_aisle(k, y);
      }
      for (int c = 0; c < num_cross_aisles; ++c)
        if (std::abs(cross_y[c] - y) < kEps) return Location::on_cross_aisle(c, x);
      return q;
    }
    along -= len;
  }
  return pts.back();
}

Location WarehouseLayout::center() const {
  int best = 0;
  for (int c = 1; c < num_cross_aisles; ++c)
    if (std::abs(cross_y[c] - aisle_length / 2) < std::abs(cross_y[best] - aisle_length / 2)) best = c;
  return Location::on_cross_aisle(best, cross_aisle_length / 2);
}

Matrix metric_close(const PartialMatrix& m) {
  size_t n = m.size();
  Matrix d(n, std::vector<double>(n, kInf));
  for (size_t i = 0; i < n; ++i) {
    if (m[i].size() != n) throw ValidationError("matrix", "not square");
    for (size_t j = 0; j < n; ++j) {
      const auto& e = m[i][j];
      if (!e) continue;
      if (*e < 0) throw ValidationError("matrix", "negative entry");
      if (i == j && *e != 0) throw ValidationError("matrix", "nonzero diagonal");
      const auto& t = m[j][i];
      if (t && std::abs(*t - *e) > kEps) throw ValidationError("matrix", "not symmetric");
      d[i][j] = d[j][i] = *e;
    }
    d[i][i] = 0;
  }
  for (size_t k = 0; k < n; ++k)
    for (size_t i = 0; i < n; ++i)
      for (size_t j = 0; j < n; ++j)
        if (d[i][k] + d[k][j] < d[i][j]) d[i][j] = d[i][k] + d[k][j];
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < n; ++j)
      if (d[i][j] == kInf) throw ValidationError("matrix", "disconnected nodes");
  return d;
}

std::optional<std::vector<int>> find_triangle_violation(const Matrix& m) {
  int n = static_cast<int>(m.size());
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        if (m[i][k] > m[i][j] + m[j][k] + kEps) return std::vector<int>{i, j, k};
  return std::nullopt;
}

DistanceProvider::DistanceProvider(WarehouseLayout layout) : data_(std::move(layout)) {
  std::get<WarehouseLayout>(data_).validate();
}

DistanceProvider::DistanceProvider(ExplicitMetric metric) : data_(std::move(metric)) {
  const auto& m = std::get<ExplicitMetric>(data_);
  if (m.matrix.empty()) throw ValidationError("matrix", "empty");
  if (m.nodes.size() != m.matrix.size()) throw ValidationError("nodes", "count differs from matrix size");
}

const WarehouseLayout& DistanceProvider::layout() const {
  if (!derived()) throw ValidationError("layout", "explicit-matrix instance has no geometry");
  return std::get<WarehouseLayout>(data_);
}

const ExplicitMetric& DistanceProvider::metric() const { return std::get<ExplicitMetric>(data_); }

int DistanceProvider::node_index(const Location& loc) const {
  const auto& m = metric();
  if (loc.kind == Location::Kind::Depot) return 0;
  if (loc.kind != Location::Kind::Node || loc.index < 0 || loc.index >= static_cast<int>(m.nodes.size()))
    throw ValidationError("location", "unknown location " + to_string(loc));
  return loc.index;
}

double DistanceProvider::distance(const Location& a, const Location& b) const {
  if (derived()) return layout().distance(a, b);
  return metric().matrix[node_index(a)][node_index(b)];
}

bool DistanceProvider::valid_location(const Location& loc) const {
  if (derived()) return layout().valid_location(loc);
  if (loc.kind == Location::Kind::Depot) return true;
  return loc.kind == Location::Kind::Node && loc.index > 0 &&
         loc.index < static_cast<int>(metric().nodes.size());
}

double DistanceProvider::span() const {
  if (derived()) return layout().cross_aisle_length + layout().aisle_length;
  double best = 0;
  for (const auto& row : metric().matrix)
    for (double v : row) best = std::max(best, v);
  return best;
}

}  // namespace orderpick
