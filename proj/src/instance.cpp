#include "orderpick/instance.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <set>
#include <sstream>

#include "json.hpp"
#include "orderpick/io.hpp"

namespace orderpick {

using nlohmann::json;

Instance::Instance(DistanceProvider distances, PickerParams picker, std::vector<Order> orders,
                   std::vector<Item> items)
    : distances_(std::move(distances)), picker_(picker), orders_(std::move(orders)), items_(std::move(items)) {
  if (!(picker_.speed > 0)) throw ValidationError("picker.v", "speed must be positive");
  if (!(picker_.pick_time >= 0)) throw ValidationError("picker.t_p", "pick time must be nonnegative");
  if (picker_.capacity < 1) throw ValidationError("picker.c", "capacity must be at least 1");
  std::vector<int> owner(items_.size(), -1);
  for (size_t j = 0; j < orders_.size(); ++j) {
    const Order& o = orders_[j];
    std::string field = "orders[" + std::to_string(j) + "]";
    if (o.id != static_cast<int>(j)) throw ValidationError(field + ".id", "order ids must be 0..n-1 in order");
    if (!(o.release >= 0)) throw ValidationError(field + ".release", "release must be nonnegative");
    if (j > 0 && o.release < orders_[j - 1].release)
      throw ValidationError(field + ".release", "orders not sorted");
    if (o.items.empty()) throw ValidationError(field + ".items", "order has no items");
    for (int s : o.items) {
      if (s < 0 || s >= static_cast<int>(items_.size()))
        throw ValidationError(field + ".items", "unknown item " + std::to_string(s));
      if (owner[s] != -1) throw ValidationError(field + ".items", "item listed twice");
      owner[s] = static_cast<int>(j);
    }
  }
  for (size_t s = 0; s < items_.size(); ++s) {
    const Item& it = items_[s];
    std::string field = "items[" + std::to_string(s) + "]";
    if (it.id != static_cast<int>(s)) throw ValidationError(field + ".id", "item ids must be 0..n-1");
    if (owner[s] == -1 || it.order != owner[s]) throw ValidationError(field + ".order", "item not owned by its order");
    if (!distances_.valid_location(it.location)) throw ValidationError(field + ".location", "invalid location");
  }
  span_ = distances_.span();
  size_t n = items_.size() + 1;
  if (n > 2048) return;
  dist_.assign(n, std::vector<double>(n, 0.0));
  for (size_t a = 0; a < n; ++a)
    for (size_t b = a + 1; b < n; ++b) {
      Location la = a == 0 ? Location::depot() : items_[a - 1].location;
      Location lb = items_[b - 1].location;
      dist_[a][b] = dist_[b][a] = distances_.distance(la, lb);
    }
}

double Instance::length_from(const Location& loc, int b) const {
  return distances_.distance(loc, location_of(b));
}

double Instance::max_pairwise_length() const {
  double best = 0;
  for (int a = kDepot; a < num_items(); ++a)
    for (int b = a + 1; b < num_items(); ++b) best = std::max(best, length(a, b));
  return best;
}

int Instance::occupied_aisles(int j) const {
  std::set<int> aisles;
  for (int s : orders_[j].items) aisles.insert(items_[s].location.index);
  return static_cast<int>(aisles.size());
}

double Instance::single_order_bound(int j) const {
  if (distances_.derived()) {
    const auto& w = distances_.layout();
    return 2 * w.cross_aisle_length + (occupied_aisles(j) + 1) * w.aisle_length;
  }
  double sum = 0;
  for (int s : orders_[j].items) sum += 2 * length(kDepot, s);
  return sum;
}

Instance Instance::without_releases() const {
  return with_releases(std::vector<double>(orders_.size(), 0.0));
}

Instance Instance::with_releases(const std::vector<double>& releases) const {
  std::vector<Order> orders = orders_;
  for (size_t j = 0; j < orders.size(); ++j) orders[j].release = releases.at(j);
  return Instance(distances_, picker_, std::move(orders), items_);
}

Instance generate(const GeneratorParams& p) {
  p.layout.validate();
  if (!(p.arrival_rate > 0)) throw ValidationError("arrival_rate", "must be positive");
  if (p.max_order_size < 1) throw ValidationError("max_order_size", "must be at least 1");
  if (p.n_orders < 0) throw ValidationError("n_orders", "must be nonnegative");
  if (!(p.slot_pitch > 0)) throw ValidationError("slot_pitch", "must be positive");

  std::vector<Location> slots;
  int per_aisle = static_cast<int>(std::floor(p.layout.aisle_length / p.slot_pitch + kEps));
  for (int a = 0; a < p.layout.num_aisles; ++a)
    for (int k = 0; k < per_aisle; ++k) {
      double y = (k + 0.5) * p.slot_pitch;
      bool on_cross = std::any_of(p.layout.cross_y.begin(), p.layout.cross_y.end(),
                                  [&](double cy) { return std::abs(cy - y) < kEps; });
      if (!on_cross) slots.push_back(Location::in_aisle(a, y));
    }
  if (slots.empty()) throw ValidationError("slot_pitch", "no admissible picking positions");

  std::mt19937_64 rng(p.seed);
  std::exponential_distribution<double> gap(p.arrival_rate / 28800.0);
  std::uniform_int_distribution<int> size(1, p.max_order_size);
  std::uniform_int_distribution<size_t> slot(0, slots.size() - 1);

  std::vector<Order> orders;
  std::vector<Item> items;
  double t = 0;
  for (int j = 0; j < p.n_orders; ++j) {
    t += gap(rng);
    Order o{j, t, {}};
    int k = size(rng);
    for (int i = 0; i < k; ++i) {
      int id = static_cast<int>(items.size());
      items.push_back({id, j, slots[slot(rng)]});
      o.items.push_back(id);
    }
    orders.push_back(std::move(o));
  }
  return Instance(DistanceProvider(p.layout), p.picker, std::move(orders), std::move(items));
}

namespace {

json layout_to_json(const WarehouseLayout& w) {
  return json{{"num_aisles", w.num_aisles},
              {"num_cross_aisles", w.num_cross_aisles},
              {"aisle_length", w.aisle_length},
              {"cross_aisle_length", w.cross_aisle_length},
              {"aisle_x", w.aisle_x},
              {"cross_y", w.cross_y},
              {"depot", {{"cross_aisle", w.depot_cross}, {"x", w.depot_x}}}};
}

template <class T>
T field(const json& j, const char* key, const std::string& path) {
  if (!j.is_object() || !j.contains(key)) throw LoadError(LoadError::Kind::Malformed, path + "." + key, "missing");
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    throw LoadError(LoadError::Kind::Malformed, path + "." + key, "wrong type");
  }
}

}  // namespace

std::string to_json_string(const Instance& inst) {
  json doc;
  doc["schema_version"] = kInstanceSchemaVersion;
  const auto& dp = inst.distances();
  if (dp.derived()) {
    doc["layout"] = layout_to_json(dp.layout());
  } else {
    doc["nodes"] = dp.metric().nodes;
    doc["matrix"] = dp.metric().matrix;
  }
  doc["picker"] = {{"v", inst.speed()}, {"t_p", inst.pick_time()}, {"c", inst.capacity()}};
  json orders = json::array();
  for (const Order& o : inst.orders()) {
    json items = json::array();
    for (int s : o.items) {
      const Location& loc = inst.item(s).location;
      if (dp.derived())
        items.push_back({{"id", s}, {"aisle", loc.index}, {"y", loc.coord}});
      else
        items.push_back({{"id", s}, {"node", loc.index}});
    }
    orders.push_back({{"id", o.id}, {"release", o.release}, {"items", items}});
  }
  doc["orders"] = orders;
  return doc.dump(2);
}

Instance from_json_string(const std::string& text, const LoadOptions& opts) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw LoadError(LoadError::Kind::Malformed, "document", e.what());
  }
  if (!doc.is_object()) throw LoadError(LoadError::Kind::Malformed, "document", "not an object");
  int version = field<int>(doc, "schema_version", "$");
  if (version != kInstanceSchemaVersion)
    throw LoadError(LoadError::Kind::SchemaVersion, "schema_version", "unsupported version " + std::to_string(version));

  DistanceProvider dp;
  try {
    if (doc.contains("layout")) {
      const json& l = doc["layout"];
      WarehouseLayout w;
      w.num_aisles = field<int>(l, "num_aisles", "layout");
      w.num_cross_aisles = field<int>(l, "num_cross_aisles", "layout");
      w.aisle_length = field<double>(l, "aisle_length", "layout");
      w.cross_aisle_length = field<double>(l, "cross_aisle_length", "layout");
      w.aisle_x = field<std::vector<double>>(l, "aisle_x", "layout");
      w.cross_y = field<std::vector<double>>(l, "cross_y", "layout");
      json depot = field<json>(l, "depot", "layout");
      w.depot_cross = field<int>(depot, "cross_aisle", "layout.depot");
      w.depot_x = field<double>(depot, "x", "layout.depot");
      dp = DistanceProvider(w);
    } else if (doc.contains("matrix")) {
      auto nodes = field<std::vector<std::string>>(doc, "nodes", "$");
      json rows = field<json>(doc, "matrix", "$");
      if (!rows.is_array()) throw LoadError(LoadError::Kind::Malformed, "matrix", "not an array");
      PartialMatrix pm;
      for (const json& row : rows) {
        if (!row.is_array()) throw LoadError(LoadError::Kind::Malformed, "matrix", "row not an array");
        std::vector<std::optional<double>> r;
        for (const json& e : row) {
          if (e.is_null()) r.emplace_back();
          else if (e.is_number()) r.emplace_back(e.get<double>());
          else throw LoadError(LoadError::Kind::Malformed, "matrix", "entry not a number");
        }
        pm.push_back(std::move(r));
      }
      Matrix closed = metric_close(pm);
      if (!opts.metric_close) {
        for (size_t i = 0; i < pm.size(); ++i)
          for (size_t j = 0; j < pm.size(); ++j)
            if (pm[i][j] && closed[i][j] < *pm[i][j] - kEps)
              throw LoadError(LoadError::Kind::Invariant, "matrix",
                              "triangle inequality violated at (" + std::to_string(i) + "," + std::to_string(j) +
                                  "); pass metric_close to repair");
      }
      dp = DistanceProvider(ExplicitMetric{nodes, closed});
    } else {
      throw LoadError(LoadError::Kind::Malformed, "layout", "missing layout or matrix");
    }
  } catch (const ValidationError& e) {
    throw LoadError(LoadError::Kind::Invariant, e.field(), e.what());
  }

  json picker = field<json>(doc, "picker", "$");
  PickerParams pp{field<double>(picker, "v", "picker"), field<double>(picker, "t_p", "picker"),
                  field<int>(picker, "c", "picker")};

  json jorders = field<json>(doc, "orders", "$");
  if (!jorders.is_array()) throw LoadError(LoadError::Kind::Malformed, "orders", "not an array");
  std::vector<Order> orders;
  std::vector<Item> items;
  for (size_t j = 0; j < jorders.size(); ++j) {
    std::string path = "orders[" + std::to_string(j) + "]";
    const json& jo = jorders[j];
    Order o{field<int>(jo, "id", path), field<double>(jo, "release", path), {}};
    json jitems = field<json>(jo, "items", path);
    if (!jitems.is_array()) throw LoadError(LoadError::Kind::Malformed, path + ".items", "not an array");
    for (size_t i = 0; i < jitems.size(); ++i) {
      std::string ipath = path + ".items[" + std::to_string(i) + "]";
      const json& ji = jitems[i];
      Item it;
      it.id = field<int>(ji, "id", ipath);
      it.order = o.id;
      if (dp.derived())
        it.location = Location::in_aisle(field<int>(ji, "aisle", ipath), field<double>(ji, "y", ipath));
      else
        it.location = Location::node(field<int>(ji, "node", ipath));
      o.items.push_back(it.id);
      items.push_back(it);
    }
    orders.push_back(std::move(o));
  }
  std::sort(items.begin(), items.end(), [](const Item& a, const Item& b) { return a.id < b.id; });
  try {
    return Instance(std::move(dp), pp, std::move(orders), std::move(items));
  } catch (const ValidationError& e) {
    throw LoadError(LoadError::Kind::Invariant, e.field(), e.what());
  }
}

void save(const Instance& inst, const std::string& path) { write_file_atomic(path, to_json_string(inst) + "\n"); }

Instance load(const std::string& path, const LoadOptions& opts) {
  std::string text;
  try {
    text = read_file(path);
  } catch (const std::runtime_error& e) {
    throw LoadError(LoadError::Kind::Malformed, "path", e.what());
  }
  return from_json_string(text, opts);
}

}  // namespace orderpick
