#include "orderpick/mip_export.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "orderpick/io.hpp"

namespace orderpick {

namespace {

std::string node(int i) { return i == kDepot ? "d" : "s" + std::to_string(i + 1); }
std::string k_tag(int k) { return "k" + std::to_string(k); }

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

// Shared part of both formulations; batches are 1..K, depot times 1..K+1.
MipModel build_common(const Instance& inst, int K, double M) {
  MipModel m;
  m.K = K;
  m.M = M;
  m.n_items = inst.num_items();
  m.n_orders = inst.num_orders();
  const int n = inst.num_items();
  const double tp = inst.pick_time();
  auto add_var = [&](const std::string& name, MipVar::Type t) { m.vars.push_back({name, t}); };
  auto nodes_with_depot = [&] {
    std::vector<int> v{kDepot};
    for (int s = 0; s < n; ++s) v.push_back(s);
    return v;
  }();

  for (int k = 1; k <= K; ++k)
    for (int i : nodes_with_depot)
      for (int l : nodes_with_depot)
        if (i != l) add_var(y_name(k, i, l), MipVar::Type::Binary);
  for (int k = 1; k <= K; ++k)
    for (int j = 0; j < inst.num_orders(); ++j) add_var(x_name(k, j), MipVar::Type::Binary);
  for (int s = 0; s < n; ++s) add_var(t_name(s), MipVar::Type::Continuous);
  for (int k = 1; k <= K + 1; ++k) add_var(tld_name(k), MipVar::Type::Continuous);

  using S = MipRow::Sense;
  for (int s = 0; s < n; ++s) {
    MipRow r{"eq18_" + node(s), {}, S::EQ, 1.0};
    for (int k = 1; k <= K; ++k)
      for (int i : nodes_with_depot)
        if (i != s) r.terms.push_back({y_name(k, i, s), 1.0});
    m.rows.push_back(r);
  }
  for (int k = 1; k <= K; ++k) {
    MipRow r{"eq19_" + k_tag(k), {}, S::LE, 1.0};
    for (int s = 0; s < n; ++s) r.terms.push_back({y_name(k, s, kDepot), 1.0});
    m.rows.push_back(r);
  }
  for (int s = 0; s < n; ++s)
    for (int k = 1; k <= K; ++k) {
      MipRow r{"eq20_" + node(s) + "_" + k_tag(k), {}, S::LE, 0.0};
      for (int i : nodes_with_depot)
        if (i != s) {
          r.terms.push_back({y_name(k, i, s), 1.0});
          r.terms.push_back({y_name(k, s, i), -1.0});
        }
      m.rows.push_back(r);
    }
  {
    MipRow r{"eq21", {}, S::EQ, 0.0};
    for (int k = 1; k <= K; ++k)
      for (int s = 0; s < n; ++s) {
        r.terms.push_back({y_name(k, s, kDepot), 1.0});
        r.terms.push_back({y_name(k, kDepot, s), -1.0});
      }
    m.rows.push_back(r);
  }
  for (int k = 2; k <= K; ++k) {
    MipRow r{"eq22_" + k_tag(k), {}, S::LE, 0.0};
    for (int s = 0; s < n; ++s) {
      r.terms.push_back({y_name(k, kDepot, s), 1.0});
      r.terms.push_back({y_name(k - 1, kDepot, s), -1.0});
    }
    m.rows.push_back(r);
  }
  // Rows with a_sj = 0 reduce to x_kj >= 0 and are omitted.
  for (int j = 0; j < inst.num_orders(); ++j)
    for (int k = 1; k <= K; ++k)
      for (int s : inst.order(j).items) {
        MipRow r{"eq23_o" + std::to_string(j + 1) + "_" + k_tag(k) + "_" + node(s), {{x_name(k, j), 1.0}}, S::GE, 0.0};
        for (int i : nodes_with_depot)
          if (i != s) r.terms.push_back({y_name(k, i, s), -1.0});
        m.rows.push_back(r);
      }
  for (int j = 0; j < inst.num_orders(); ++j) {
    MipRow r{"eq24_o" + std::to_string(j + 1), {}, S::LE, 1.0};
    for (int k = 1; k <= K; ++k) r.terms.push_back({x_name(k, j), 1.0});
    m.rows.push_back(r);
  }
  for (int k = 1; k <= K; ++k) {
    MipRow r{"eq25_" + k_tag(k), {}, S::LE, static_cast<double>(inst.capacity())};
    for (int j = 0; j < inst.num_orders(); ++j) r.terms.push_back({x_name(k, j), 1.0});
    m.rows.push_back(r);
  }
  for (int s = 0; s < n; ++s)
    for (int i = 0; i < n; ++i) {
      if (i == s) continue;
      MipRow r{"eq26_" + node(s) + "_" + node(i), {{t_name(s), 1.0}, {t_name(i), -1.0}}, S::GE,
               inst.travel(i, s) + tp - M};
      for (int k = 1; k <= K; ++k) r.terms.push_back({y_name(k, i, s), -M});
      m.rows.push_back(r);
    }
  for (int s = 0; s < n; ++s)
    for (int k = 1; k <= K; ++k)
      m.rows.push_back({"eq27_" + node(s) + "_" + k_tag(k),
                        {{t_name(s), 1.0}, {tld_name(k), -1.0}, {y_name(k, kDepot, s), -M}},
                        S::GE,
                        inst.travel(kDepot, s) + tp - M});
  for (int s = 0; s < n; ++s)
    for (int k = 2; k <= K + 1; ++k)
      m.rows.push_back({"eq28_" + node(s) + "_" + k_tag(k),
                        {{tld_name(k), 1.0}, {t_name(s), -1.0}, {y_name(k - 1, s, kDepot), -M}},
                        S::GE,
                        inst.travel(s, kDepot) - M});
  // Rows for non-owning orders read t_s >= t^p and are implied by the owning row.
  for (int s = 0; s < n; ++s)
    m.rows.push_back({"eq29_" + node(s), {{t_name(s), 1.0}}, S::GE, inst.release_of_item(s) + tp});
  return m;
}

double walk_bound(const Instance& inst) {
  const auto& dp = inst.distances();
  if (dp.derived()) {
    const auto& w = dp.layout();
    int per_batch_rounds = (inst.num_orders() + inst.capacity() - 1) / inst.capacity();
    return (2 * w.cross_aisle_length + (w.num_aisles + 1) * w.aisle_length) * per_batch_rounds;
  }
  double sum = 0;
  for (int s = 0; s < inst.num_items(); ++s) sum += 2 * inst.length(kDepot, s);
  return sum;
}

double base_bound(const Instance& inst) {
  double last_release = inst.num_orders() ? inst.order(inst.num_orders() - 1).release : 0.0;
  return last_release + walk_bound(inst) / inst.speed() + inst.num_items() * inst.pick_time();
}

}  // namespace

std::string y_name(int k, int from, int to) { return "y_" + k_tag(k) + "_" + node(from) + "_" + node(to); }
std::string x_name(int k, int order) { return "x_" + k_tag(k) + "_o" + std::to_string(order + 1); }
std::string t_name(int item) { return "t_" + node(item); }
std::string tld_name(int k) { return "tld_" + k_tag(k); }
std::string to_name(int order) { return "to_o" + std::to_string(order + 1); }

int printed_batch_bound(int n_orders, int capacity) { return std::max(1, 2 * n_orders / (capacity + 1)); }

int merge_batch_bound(int n_orders, int capacity) {
  const int c1 = capacity + 1;
  return std::max({1, 2 * (n_orders / c1), 2 * ((n_orders - 1) / c1) + 1});
}

MipModel build_makespan_mip(const Instance& inst, double big_m_scale) {
  int K = merge_batch_bound(inst.num_orders(), inst.capacity());
  double M = (base_bound(inst) + inst.span() / inst.speed()) * big_m_scale;
  MipModel m = build_common(inst, K, M);
  m.kind = MipObjective::Makespan;
  m.vars.push_back({"zmax", MipVar::Type::Continuous});
  for (int k = 1; k <= K + 1; ++k)
    m.rows.push_back({"obj_" + k_tag(k), {{"zmax", 1.0}, {tld_name(k), -1.0}}, MipRow::Sense::GE, 0.0});
  m.objective = {{"zmax", 1.0}};
  return m;
}

MipModel build_turnover_mip(const Instance& inst, double big_m_scale) {
  int K = std::max(1, inst.num_orders());
  double M = (base_bound(inst) + inst.span() / inst.speed()) * big_m_scale;
  MipModel m = build_common(inst, K, M);
  m.kind = MipObjective::Turnover;
  m.N = base_bound(inst) * big_m_scale;
  double releases = 0;
  for (int j = 0; j < inst.num_orders(); ++j) {
    m.vars.push_back({to_name(j), MipVar::Type::Continuous});
    releases += inst.order(j).release;
    for (int k = 1; k <= K; ++k)
      m.rows.push_back({"eqto_o" + std::to_string(j + 1) + "_" + k_tag(k),
                        {{to_name(j), 1.0}, {tld_name(k + 1), -1.0}, {x_name(k, j), -m.N}},
                        MipRow::Sense::GE,
                        -m.N});
    m.objective.push_back({to_name(j), 1.0 / inst.num_orders()});
  }
  m.objective_constant = inst.num_orders() ? -releases / inst.num_orders() : 0.0;
  return m;
}

std::string to_lp(const MipModel& model) {
  std::ostringstream os;
  auto terms = [&](const std::vector<MipTerm>& ts) {
    int col = 0;
    for (size_t i = 0; i < ts.size(); ++i) {
      if (col >= 6) {
        os << "\n   ";
        col = 0;
      }
      double c = ts[i].coef;
      os << (c < 0 ? " - " : (i == 0 ? " " : " + ")) << fmt(std::abs(c)) << " " << ts[i].var;
      ++col;
    }
  };
  os << "\\ " << (model.kind == MipObjective::Makespan ? "makespan" : "turnover") << " model, K = " << model.K
     << ", M = " << fmt(model.M);
  if (model.kind == MipObjective::Turnover) os << ", N = " << fmt(model.N);
  os << "\n\\ objective constant " << fmt(model.objective_constant) << "\n";
  os << "Minimize\n obj:";
  terms(model.objective);
  os << "\nSubject To\n";
  for (const MipRow& r : model.rows) {
    os << " " << r.name << ":";
    terms(r.terms);
    os << (r.sense == MipRow::Sense::LE ? " <= " : r.sense == MipRow::Sense::GE ? " >= " : " = ") << fmt(r.rhs)
       << "\n";
  }
  os << "Bounds\n";
  for (const MipVar& v : model.vars)
    if (v.type == MipVar::Type::Continuous) os << " " << v.name << " >= 0\n";
  os << "Binaries\n";
  for (const MipVar& v : model.vars)
    if (v.type == MipVar::Type::Binary) os << " " << v.name << "\n";
  os << "End\n";
  return os.str();
}

void write_lp(const MipModel& model, const std::string& path) { write_file_atomic(path, to_lp(model)); }

Assignment parse_solution(const MipModel& model, const std::string& text) {
  Assignment a;
  for (const MipVar& v : model.vars) a[v.name] = 0.0;
  std::istringstream in(text);
  std::string line;
  int parsed = 0;
  while (std::getline(in, line)) {
    std::replace(line.begin(), line.end(), '=', ' ');
    std::istringstream ls(line);
    std::string name, value;
    if (!(ls >> name >> value)) continue;
    auto it = a.find(name);
    if (it == a.end()) continue;
    try {
      size_t used = 0;
      double v = std::stod(value, &used);
      if (used != value.size()) continue;
      it->second = v;
      ++parsed;
    } catch (const std::exception&) {
      continue;
    }
  }
  if (parsed == 0) throw SolutionParseError("no `name value` line matches a model variable");
  return a;
}

Assignment read_solution(const MipModel& model, const std::string& path) {
  return parse_solution(model, read_file(path));
}

CheckReport check_solution(const MipModel& model, const Assignment& values, double tol) {
  CheckReport rep;
  auto val = [&](const std::string& name) {
    auto it = values.find(name);
    return it == values.end() ? 0.0 : it->second;
  };
  for (const MipVar& v : model.vars) {
    double x = val(v.name);
    if (x < -tol) rep.violations.push_back(v.name + ": negative value " + fmt(x));
    if (v.type == MipVar::Type::Binary && std::min(std::abs(x), std::abs(x - 1)) > tol)
      rep.violations.push_back(v.name + ": not binary " + fmt(x));
  }
  for (const MipRow& r : model.rows) {
    double lhs = 0;
    for (const MipTerm& t : r.terms) lhs += t.coef * val(t.var);
    double excess = 0;
    if (r.sense == MipRow::Sense::LE) excess = lhs - r.rhs;
    else if (r.sense == MipRow::Sense::GE) excess = r.rhs - lhs;
    else excess = std::abs(lhs - r.rhs);
    double scale = std::max(1.0, std::abs(r.rhs));
    if (excess > tol * scale) rep.violations.push_back(r.name + ": violated by " + fmt(excess));
  }
  for (const MipTerm& t : model.objective) rep.objective += t.coef * val(t.var);
  rep.objective += model.objective_constant;
  rep.feasible = rep.violations.empty();
  return rep;
}

Assignment encode_solution(const Instance& inst, const MipModel& model, const Solution& sol) {
  if (static_cast<int>(sol.batches.size()) > model.K)
    throw ValidationError("solution", "uses more batches than the model's K");
  Schedule sc = reconstruct(inst, sol);
  Assignment a;
  for (const MipVar& v : model.vars) a[v.name] = 0.0;
  for (size_t b = 0; b < sol.batches.size(); ++b) {
    int k = static_cast<int>(b) + 1;
    const Batch& batch = sol.batches[b];
    int prev = kDepot;
    for (int s : batch.items) {
      a[y_name(k, prev, s)] = 1.0;
      prev = s;
    }
    a[y_name(k, prev, kDepot)] = 1.0;
    for (int j : batch.orders) a[x_name(k, j)] = 1.0;
    a[tld_name(k)] = sc.batch_start[b];
  }
  a[tld_name(static_cast<int>(sol.batches.size()) + 1)] = sc.makespan;
  for (int s = 0; s < inst.num_items(); ++s) a[t_name(s)] = sc.completion[s];
  if (model.kind == MipObjective::Makespan) a["zmax"] = sc.makespan;
  else
    for (int j = 0; j < inst.num_orders(); ++j) a[to_name(j)] = sc.order_completion[j];
  return a;
}

Solution decode_solution(const Instance& inst, const MipModel& model, const Assignment& values) {
  auto on = [&](const std::string& name) {
    auto it = values.find(name);
    return it != values.end() && it->second > 0.5;
  };
  Solution sol;
  for (int k = 1; k <= model.K; ++k) {
    int first = -2;
    for (int s = 0; s < inst.num_items(); ++s)
      if (on(y_name(k, kDepot, s))) {
        if (first != -2) throw ValidationError(y_name(k, kDepot, s), "batch leaves the depot twice");
        first = s;
      }
    if (first == -2) continue;
    Batch b;
    int cur = first;
    std::vector<bool> seen(inst.num_items(), false);
    while (cur != kDepot) {
      if (seen[cur]) throw ValidationError(t_name(cur), "subtour in batch " + std::to_string(k));
      seen[cur] = true;
      b.items.push_back(cur);
      int nxt = -2;
      for (int l = kDepot; l < inst.num_items(); ++l)
        if (l != cur && on(y_name(k, cur, l))) {
          if (nxt != -2) throw ValidationError(t_name(cur), "two successors in batch " + std::to_string(k));
          nxt = l;
        }
      if (nxt == -2) throw ValidationError(t_name(cur), "route does not return to the depot");
      cur = nxt;
    }
    for (int s : b.items) {
      int j = inst.item(s).order;
      if (std::find(b.orders.begin(), b.orders.end(), j) == b.orders.end()) b.orders.push_back(j);
    }
    sol.batches.push_back(b);
  }
  auto errors = validate(inst, sol);
  if (!errors.empty()) throw ValidationError("solution", errors.front());
  return sol;
}

}  // namespace orderpick
