#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <iostream>
#include <map>
#include <mutex>
#include <numeric>
#include <set>
#include <sstream>
#include <thread>

#include <sys/wait.h>

#include "orderpick/dp_core.hpp"
#include "orderpick/dp_turnover.hpp"
#include "orderpick/instance.hpp"
#include "orderpick/io.hpp"
#include "orderpick/metrics.hpp"
#include "orderpick/mip_export.hpp"
#include "orderpick/policies.hpp"
#include "orderpick/schedule.hpp"

#ifndef ORDERPICK_TOOLS_DIR
#define ORDERPICK_TOOLS_DIR "tools"
#endif

namespace fs = std::filesystem;
using json = nlohmann::json;
using namespace orderpick;

namespace {

constexpr const char* kVersion = "1.0.0";
constexpr int kManifestSchemaVersion = 1;
constexpr int kResultsSchemaVersion = 1;
constexpr int kTraceSchemaVersion = 1;

constexpr int kExitUsage = 1;
constexpr int kExitValidation = 2;
constexpr int kExitBudget = 3;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(12);
  os << v;
  return os.str();
}

// Exact fraction for a value num/den whose numerator is integral, else decimal.
std::string fraction(double num, int den) {
  double r = std::round(num);
  if (std::abs(num - r) > 1e-9 || den <= 0) return fmt(num / den);
  long long n = static_cast<long long>(r), d = den;
  long long g = std::gcd(std::llabs(n), d);
  n /= g, d /= g;
  return d == 1 ? std::to_string(n) : std::to_string(n) + "/" + std::to_string(d);
}

Objective parse_objective(const std::string& s) {
  if (s == "makespan") return Objective::Makespan;
  if (s == "turnover") return Objective::Turnover;
  throw UsageError("objective must be makespan or turnover, got " + s);
}

std::string objective_name(Objective o) { return o == Objective::Makespan ? "makespan" : "turnover"; }

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) out += ch == '"' ? std::string("\"\"") : std::string(1, ch);
  return out + "\"";
}

std::string csv_row(const std::vector<std::string>& fields) {
  std::string out;
  for (size_t i = 0; i < fields.size(); ++i) out += (i ? "," : "") + csv_field(fields[i]);
  return out + "\n";
}

std::vector<std::vector<std::string>> read_csv(const std::string& path) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(read_file(path));
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> row(1);
    bool quoted = false;
    for (size_t i = 0; i < line.size(); ++i) {
      char ch = line[i];
      if (quoted && ch == '"' && i + 1 < line.size() && line[i + 1] == '"') row.back() += '"', ++i;
      else if (ch == '"') quoted = !quoted;
      else if (ch == ',' && !quoted) row.emplace_back();
      else row.back() += ch;
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

// Rows as header-keyed maps.
std::vector<std::map<std::string, std::string>> read_table(const std::string& path) {
  auto rows = read_csv(path);
  std::vector<std::map<std::string, std::string>> out;
  if (rows.empty()) return out;
  for (size_t r = 1; r < rows.size(); ++r) {
    std::map<std::string, std::string> m;
    for (size_t c = 0; c < rows[0].size() && c < rows[r].size(); ++c) m[rows[0][c]] = rows[r][c];
    out.push_back(std::move(m));
  }
  return out;
}

// Runs task(i) for i in [0, n) on `jobs` threads; rethrows the first failure by index.
void parallel_for(int n, int jobs, const std::function<void(int)>& task) {
  std::vector<std::exception_ptr> errors(n);
  std::atomic<int> next{0};
  auto worker = [&] {
    for (int i = next++; i < n; i = next++) {
      try {
        task(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  for (int t = 1; t < std::max(1, std::min(jobs, n)); ++t) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

double millis_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
}

std::string stem(const std::string& path) { return fs::path(path).stem().string(); }

// ---------------------------------------------------------------- gen

struct GenArgs {
  int orders = 10, capacity = 2, max_order_size = 2, count = 1;
  double rate = 200.0, speed = 0.8, pick_time = 10.0;
  std::uint64_t seed = 1;
  std::string out = ".";
};

int cmd_gen(const GenArgs& a) {
  fs::create_directories(a.out);
  for (int k = 0; k < a.count; ++k) {
    GeneratorParams g;
    g.n_orders = a.orders;
    g.picker = {a.speed, a.pick_time, a.capacity};
    g.arrival_rate = a.rate;
    g.max_order_size = a.max_order_size;
    g.seed = a.seed + k;
    std::string path = (fs::path(a.out) / ("instance_" + std::to_string(g.seed) + ".json")).string();
    save(generate(g), path);
    std::cout << path << "\n";
  }
  return 0;
}

// ---------------------------------------------------------------- solve

struct SolveArgs {
  std::vector<std::string> instances;
  std::string objective = "makespan";
  std::string dominance = "default";
  bool fifo_order_start = false;
  std::string trace;
  std::string out;
  int jobs = 1;
};

struct SolveOutcome {
  std::string line;
  std::string solution_json, schedule_csv, stats_csv, trace_jsonl;
};

SolveOutcome solve_one(const std::string& path, const SolveArgs& a) {
  Instance inst = load(path);
  Objective obj = parse_objective(a.objective);
  const bool record = !a.trace.empty();
  auto t0 = std::chrono::steady_clock::now();
  SolveOutcome out;
  Solution sol;
  DpStats stats;
  std::string value, exactness = "exact";
  std::vector<DpTraceRecord> trace;
  if (obj == Objective::Makespan) {
    DpOptions o;
    o.dominance = a.dominance != "off";
    o.fifo_order_start = a.fifo_order_start;
    o.record_trace = record;
    MakespanResult r = solve_makespan(inst, o);
    sol = r.solution, stats = r.stats, trace = std::move(r.trace);
    value = fmt(r.makespan);
    out.line = stem(path) + " makespan " + value;
  } else {
    TurnoverDpOptions o;
    o.dominance = a.dominance == "on";
    o.fifo_order_start = a.fifo_order_start;
    o.record_trace = record;
    TurnoverResult r = solve_turnover(inst, o);
    sol = r.solution, stats = r.stats, trace = std::move(r.trace);
    double releases = 0;
    for (const Order& ord : inst.orders()) releases += ord.release;
    value = fraction(r.sum_completion - releases, inst.num_orders());
    exactness = r.exactness == Exactness::Exact ? "exact" : "heuristic";
    out.line = stem(path) + " avg_turnover " + value + " (" + exactness + ")";
  }
  const double ms = millis_since(t0);
  out.solution_json = solution_to_json(sol);
  out.schedule_csv = schedule_to_csv(inst, reconstruct(inst, sol));
  out.stats_csv = csv_row({"instance", "objective", "value", "exactness", "states_expanded", "transitions",
                           "peak_states", "batches", "runtime_ms"}) +
                  csv_row({stem(path), a.objective, value, exactness, std::to_string(stats.states_expanded),
                           std::to_string(stats.transitions), std::to_string(stats.peak_states),
                           std::to_string(sol.batches.size()), fmt(ms)});
  if (record) out.trace_jsonl = trace_to_jsonl(make_problem(inst), trace);
  return out;
}

int cmd_solve(const SolveArgs& a) {
  if (a.dominance != "default" && a.dominance != "on" && a.dominance != "off")
    throw UsageError("--dominance must be on or off");
  if (!a.trace.empty() && a.instances.size() > 1) throw UsageError("--trace takes a single instance");
  std::vector<SolveOutcome> results(a.instances.size());
  parallel_for(static_cast<int>(a.instances.size()), a.jobs,
               [&](int i) { results[i] = solve_one(a.instances[i], a); });
  for (size_t i = 0; i < results.size(); ++i) {
    const SolveOutcome& r = results[i];
    std::cout << r.line << "\n";
    if (!a.trace.empty()) write_file_atomic(a.trace, r.trace_jsonl);
    if (!a.out.empty()) {
      fs::create_directories(a.out);
      const std::string base = (fs::path(a.out) / stem(a.instances[i])).string() + "." + a.objective;
      write_file_atomic(base + ".solution.json", r.solution_json);
      write_file_atomic(base + ".schedule.csv", r.schedule_csv);
      write_file_atomic(base + ".stats.csv", r.stats_csv);
    }
  }
  return 0;
}

// ---------------------------------------------------------------- MIP

MipModel build_model(const Instance& inst, Objective obj, double scale) {
  return obj == Objective::Makespan ? build_makespan_mip(inst, scale) : build_turnover_mip(inst, scale);
}

int report_check(const Instance& inst, const MipModel& model, const Assignment& values) {
  CheckReport rep = check_solution(model, values);
  if (!rep.feasible) {
    std::cout << "infeasible\n";
    for (const std::string& v : rep.violations) std::cout << "  " << v << "\n";
    return kExitValidation;
  }
  Solution sol = decode_solution(inst, model, values);
  Schedule sc = reconstruct(inst, sol);
  std::cout << "feasible objective " << fmt(rep.objective) << " batches " << sol.batches.size() << " makespan "
            << fmt(sc.makespan) << "\n";
  return 0;
}

struct MipArgs {
  std::string instance, objective = "makespan", out, solution;
  double scale = 1.0;
  bool solve = false;
  double time_limit = 60;
};

int cmd_export_mip(const MipArgs& a) {
  Instance inst = load(a.instance);
  MipModel model = build_model(inst, parse_objective(a.objective), a.scale);
  write_lp(model, a.out);
  std::cout << a.out << " vars " << model.vars.size() << " rows " << model.rows.size() << " K " << model.K << "\n";
  if (!a.solve) return 0;
  // External solver hook: ORDERPICK_LP_SOLVER "cmd MODEL SOLUTION", else the bundled HiGHS script.
  const std::string sol_path = a.solution.empty() ? a.out + ".sol" : a.solution;
  std::string cmd;
  if (const char* hook = std::getenv("ORDERPICK_LP_SOLVER"); hook && *hook)
    cmd = std::string(hook) + " '" + a.out + "' '" + sol_path + "'";
  else
    cmd = "python3 '" + (fs::path(ORDERPICK_TOOLS_DIR) / "highs_lp_solve.py").string() + "' '" + a.out + "' '" +
          sol_path + "' --time-limit " + fmt(a.time_limit);
  fs::remove(sol_path);
  int status = std::system(cmd.c_str());
  int rc = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  if (rc == 3 && fs::exists(sol_path)) {
    std::cout << "not proven optimal, checking incumbent\n";
    int check = report_check(inst, model, read_solution(model, sol_path));
    return check == 0 ? kExitBudget : check;
  }
  if (rc == 3) {
    std::cerr << "solver found no solution within the limit\n";
    return kExitBudget;
  }
  if (rc != 0) {
    std::cerr << "solver command failed (" << rc << "): " << cmd << "\n";
    return kExitValidation;
  }
  return report_check(inst, model, read_solution(model, sol_path));
}

int cmd_check_solution(const MipArgs& a) {
  Instance inst = load(a.instance);
  MipModel model = build_model(inst, parse_objective(a.objective), a.scale);
  return report_check(inst, model, read_solution(model, a.solution));
}

// ---------------------------------------------------------------- simulate

struct Run {
  PolicyConfig config;
  std::string label;
  Objective objective;
};

struct Manifest {
  std::vector<std::pair<std::string, Instance>> instances;
  std::vector<Run> runs;
  std::map<std::pair<std::string, std::string>, double> provided_cios;
  DpOptions dp;
  TurnoverDpOptions tdp;
  std::string output = "results";
  std::uint64_t seed = 1;
};

Manifest load_manifest(const std::string& path, const std::string& out_override) {
  json doc;
  try {
    doc = json::parse(read_file(path));
  } catch (const json::exception& e) {
    throw ValidationError("manifest", e.what());
  }
  Manifest m;
  try {
    int version = doc.value("schema_version", kManifestSchemaVersion);
    if (version != kManifestSchemaVersion)
      throw ValidationError("schema_version", "unsupported manifest version " + std::to_string(version));
    m.seed = doc.value("seed", std::uint64_t{1});
    m.output = doc.value("output", std::string("results"));
    const fs::path base = fs::path(path).parent_path();
    if (doc.contains("instances"))
      for (const auto& p : doc.at("instances")) {
        fs::path ip = p.get<std::string>();
        if (ip.is_relative()) ip = base / ip;
        if (!fs::exists(ip)) throw ValidationError("instances", "missing file " + ip.string());
        m.instances.emplace_back(ip.stem().string(), load(ip.string()));
      }
    if (doc.contains("generator")) {
      const json& g = doc.at("generator");
      GeneratorParams gp;
      gp.n_orders = g.value("orders", gp.n_orders);
      gp.picker.capacity = g.value("capacity", gp.picker.capacity);
      gp.picker.speed = g.value("speed", gp.picker.speed);
      gp.picker.pick_time = g.value("pick_time", gp.picker.pick_time);
      gp.arrival_rate = g.value("arrival_rate", gp.arrival_rate);
      gp.max_order_size = g.value("max_order_size", gp.max_order_size);
      const int count = g.value("count", 1);
      const std::uint64_t first = g.value("seed", m.seed);
      for (int k = 0; k < count; ++k) {
        gp.seed = first + k;
        m.instances.emplace_back("gen_" + std::to_string(gp.seed), generate(gp));
      }
    }
    if (m.instances.empty()) throw ValidationError("instances", "manifest lists no instances");
    for (const auto& r : doc.at("runs")) {
      Run run{PolicyConfig::parse(r.at("policy").get<std::string>()), "", parse_objective(r.value("objective", "makespan"))};
      run.label = r.value("name", r.at("policy").get<std::string>());
      m.runs.push_back(run);
    }
    if (m.runs.empty()) throw ValidationError("runs", "manifest lists no runs");
    if (doc.contains("solver")) {
      const json& s = doc.at("solver");
      m.dp.dominance = s.value("dominance", true);
      m.tdp.dominance = s.value("turnover_dominance", false);
      if (s.contains("max_states")) m.dp.max_states = m.tdp.max_states = s.at("max_states").get<std::size_t>();
    }
    if (doc.contains("cios"))
      for (const auto& c : doc.at("cios"))
        m.provided_cios[{c.at("instance").get<std::string>(), c.value("objective", "makespan")}] =
            c.at("value").get<double>();
  } catch (const json::exception& e) {
    throw ValidationError("manifest", e.what());
  } catch (const UsageError& e) {
    throw ValidationError("manifest", e.what());
  }
  if (!out_override.empty()) m.output = out_override;
  else if (fs::path(m.output).is_relative()) m.output = (fs::path(path).parent_path() / m.output).string();
  return m;
}

struct CiosOutcome {
  double value = 0;
  std::string exactness = "provided";
  double runtime_ms = 0;
  std::string metrics_row;
};

CiosOutcome solve_cios(const Manifest& m, const std::string& name, const Instance& inst, Objective obj) {
  CiosOutcome c;
  auto key = std::make_pair(name, objective_name(obj));
  auto t0 = std::chrono::steady_clock::now();
  Solution sol;
  if (auto it = m.provided_cios.find(key); it != m.provided_cios.end()) {
    c.value = it->second;
  } else if (obj == Objective::Makespan) {
    MakespanResult r = solve_makespan(inst, m.dp);
    c.value = r.makespan, c.exactness = "exact", sol = r.solution;
  } else {
    TurnoverResult r = solve_turnover(inst, m.tdp);
    c.value = r.avg_turnover, sol = r.solution;
    c.exactness = r.exactness == Exactness::Exact ? "exact" : "heuristic";
  }
  c.runtime_ms = millis_since(t0);
  if (sol.batches.empty()) return c;
  Timeline tl = solution_timeline(inst, sol);
  WaitReport w = classify_waiting(tl);
  RelocationStats rs = relocation_stats(tl);
  std::string share = "", mean_pair = "", mean_random = "";
  if (inst.capacity() >= 2 && inst.num_orders() >= 3) {
    SavingsProfile sp = batch_savings_profile(inst, sol, m.seed);
    share = fmt(sp.share_above_median), mean_pair = fmt(sp.mean_solution), mean_random = fmt(sp.mean_random);
  }
  c.metrics_row = csv_row({name, objective_name(obj), fmt(c.value), fmt(tl.makespan), fmt(w.idle_total),
                           fmt(w.b_ext_total), fmt(w.b_fit_total), fmt(rs.time),
                           std::to_string(rs.orders_with_prior_relocation),
                           std::to_string(count_interventions(inst, sol)), mean_pair, mean_random, share});
  return c;
}

int cmd_simulate(const std::string& manifest_path, const std::string& out_override, int jobs) {
  Manifest m = load_manifest(manifest_path, out_override);
  fs::create_directories(fs::path(m.output) / "traces");
  std::set<Objective> objectives;
  for (const Run& r : m.runs) objectives.insert(r.objective);
  std::vector<Objective> objs(objectives.begin(), objectives.end());

  // Complete-information references first, one task per instance and objective.
  const int ni = static_cast<int>(m.instances.size());
  std::vector<CiosOutcome> cios(ni * objs.size());
  parallel_for(static_cast<int>(cios.size()), jobs, [&](int t) {
    const auto& [name, inst] = m.instances[t / objs.size()];
    cios[t] = solve_cios(m, name, inst, objs[t % objs.size()]);
  });
  auto cios_of = [&](int i, Objective o) -> const CiosOutcome& {
    return cios[i * objs.size() + (std::find(objs.begin(), objs.end(), o) - objs.begin())];
  };

  const int nr = static_cast<int>(m.runs.size());
  std::vector<std::string> result_rows(ni * nr), metric_rows(ni * nr);
  parallel_for(ni * nr, jobs, [&](int t) {
    const int i = t / nr;
    const Run& run = m.runs[t % nr];
    const auto& [name, inst] = m.instances[i];
    auto t0 = std::chrono::steady_clock::now();
    SimOptions so;
    so.dp = m.dp;
    so.turnover_dominance = m.tdp.dominance;
    SimResult sim = simulate(inst, run.config, run.objective, so);
    const double ms = millis_since(t0);
    const double value = objective_value(sim.trace, run.objective);
    const double star = cios_of(i, run.objective).value;
    result_rows[t] = csv_row({name, run.label, objective_name(run.objective), fmt(value), fmt(gap(value, star)),
                              fmt(ms)});
    Timeline tl = trace_timeline(inst, sim.trace);
    WaitReport w = classify_waiting(tl);
    int delayed = 0;
    for (double v : sim.trace.vtw_wait) delayed += v > 0;
    metric_rows[t] = csv_row({name, run.label, objective_name(run.objective), fmt(w.idle_total),
                              fmt(w.b_ext_total), fmt(w.b_fit_total), fmt(relocation_stats(tl).time),
                              std::to_string(count_interventions(sim.trace)), std::to_string(delayed),
                              std::to_string(misplaced_waiting(inst, sim.trace)), std::to_string(sim.trace.resolves)});
    std::string label = run.label;
    std::replace_if(label.begin(), label.end(), [](char ch) { return !std::isalnum(static_cast<unsigned char>(ch)) && ch != '_'; }, '-');
    const fs::path trace_path =
        fs::path(m.output) / "traces" / (name + "__" + label + "__" + objective_name(run.objective) + ".jsonl");
    write_file_atomic(trace_path.string(), trace_to_jsonl(sim.trace));
  });

  std::string results = csv_row({"instance", "policy", "objective", "value", "gap", "runtime_ms"});
  std::string metrics = csv_row({"instance", "policy", "objective", "idle", "b_ext", "b_fit", "relocation",
                                 "interventions", "vtw_delayed", "misplaced", "resolves"});
  for (int t = 0; t < ni * nr; ++t) results += result_rows[t], metrics += metric_rows[t];
  std::string cios_csv = csv_row({"instance", "objective", "value", "exactness", "runtime_ms"});
  std::string cios_metrics = csv_row({"instance", "objective", "value", "makespan", "idle", "b_ext", "b_fit",
                                      "relocation", "relocation_orders", "interventions", "pair_savings",
                                      "random_savings", "share_above_median"});
  for (int i = 0; i < ni; ++i)
    for (Objective o : objs) {
      const CiosOutcome& c = cios_of(i, o);
      cios_csv += csv_row({m.instances[i].first, objective_name(o), fmt(c.value), c.exactness, fmt(c.runtime_ms)});
      cios_metrics += c.metrics_row;
    }
  write_file_atomic((fs::path(m.output) / "results.csv").string(), results);
  write_file_atomic((fs::path(m.output) / "metrics.csv").string(), metrics);
  write_file_atomic((fs::path(m.output) / "cios.csv").string(), cios_csv);
  write_file_atomic((fs::path(m.output) / "cios_metrics.csv").string(), cios_metrics);
  std::cout << m.output << " rows " << ni * nr << "\n";
  return 0;
}

// ---------------------------------------------------------------- report

double num(const std::map<std::string, std::string>& row, const std::string& key) {
  auto it = row.find(key);
  if (it == row.end() || it->second.empty()) return 0.0;
  try {
    return std::stod(it->second);
  } catch (const std::exception&) {
    throw ValidationError(key, "not a number: " + it->second);
  }
}

// Means of the numeric columns per group key, groups in first-seen order.
std::string group_means(const std::vector<std::map<std::string, std::string>>& rows,
                        const std::vector<std::string>& keys, const std::vector<std::string>& cols) {
  std::vector<std::vector<std::string>> order;
  std::map<std::vector<std::string>, std::pair<int, std::vector<double>>> acc;
  for (const auto& r : rows) {
    std::vector<std::string> k;
    for (const std::string& key : keys) k.push_back(r.count(key) ? r.at(key) : "");
    auto [it, fresh] = acc.try_emplace(k, 0, std::vector<double>(cols.size(), 0.0));
    if (fresh) order.push_back(k);
    ++it->second.first;
    for (size_t c = 0; c < cols.size(); ++c) it->second.second[c] += num(r, cols[c]);
  }
  std::vector<std::string> header = keys;
  header.push_back("n");
  for (const std::string& c : cols) header.push_back("mean_" + c);
  std::string out = csv_row(header);
  for (const auto& k : order) {
    const auto& [n, sums] = acc.at(k);
    std::vector<std::string> row = k;
    row.push_back(std::to_string(n));
    for (double s : sums) row.push_back(fmt(s / n));
    out += csv_row(row);
  }
  return out;
}

int cmd_report(const std::string& dir, const std::string& out_dir) {
  const fs::path in(dir), out(out_dir.empty() ? dir : out_dir);
  for (const char* f : {"results.csv", "metrics.csv", "cios_metrics.csv"})
    if (!fs::exists(in / f)) throw ValidationError("results", "missing " + (in / f).string());
  fs::create_directories(out);
  auto results = read_table((in / "results.csv").string());
  auto metrics = read_table((in / "metrics.csv").string());
  auto cios = read_table((in / "cios_metrics.csv").string());
  write_file_atomic((out / "ladder.csv").string(),
                    group_means(results, {"policy", "objective"}, {"value", "gap", "runtime_ms"}));
  write_file_atomic((out / "waiting.csv").string(),
                    group_means(cios, {"objective"}, {"idle", "b_ext", "b_fit", "relocation", "relocation_orders",
                                                      "makespan"}));
  write_file_atomic((out / "interventions.csv").string(),
                    group_means(metrics, {"policy", "objective"},
                                {"interventions", "idle", "b_ext", "relocation", "vtw_delayed", "misplaced"}));
  write_file_atomic((out / "cios_interventions.csv").string(),
                    group_means(cios, {"objective"}, {"interventions", "pair_savings", "random_savings",
                                                      "share_above_median"}));
  std::cout << (out / "ladder.csv").string() << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Order batching, sequencing and routing with release times"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string("orderpick ") + kVersion + " (instance schema " +
                                        std::to_string(kInstanceSchemaVersion) + ", manifest schema " +
                                        std::to_string(kManifestSchemaVersion) + ", results schema " +
                                        std::to_string(kResultsSchemaVersion) + ", trace schema " +
                                        std::to_string(kTraceSchemaVersion) + ")");

  GenArgs ga;
  auto* gen = app.add_subcommand("gen", "Generate random instances");
  gen->add_option("--orders", ga.orders, "Orders per instance")->check(CLI::PositiveNumber);
  gen->add_option("--capacity", ga.capacity, "Cart capacity c")->check(CLI::PositiveNumber);
  gen->add_option("--max-order-size", ga.max_order_size)->check(CLI::PositiveNumber);
  gen->add_option("--arrival-rate", ga.rate, "Orders per 8-hour shift")->check(CLI::PositiveNumber);
  gen->add_option("--speed", ga.speed)->check(CLI::PositiveNumber);
  gen->add_option("--pick-time", ga.pick_time)->check(CLI::NonNegativeNumber);
  gen->add_option("--seed", ga.seed);
  gen->add_option("--count", ga.count)->check(CLI::PositiveNumber);
  gen->add_option("--out", ga.out, "Output directory");

  SolveArgs sa;
  auto* solve = app.add_subcommand("solve", "Complete-information DP");
  solve->add_option("instances", sa.instances)->required()->check(CLI::ExistingFile);
  solve->add_option("--objective", sa.objective)->check(CLI::IsMember({"makespan", "turnover"}));
  solve->add_option("--dominance", sa.dominance, "on or off (default: on for makespan, off for turnover)")
      ->check(CLI::IsMember({"on", "off"}));
  solve->add_flag("--fifo-order-start", sa.fifo_order_start, "New batches start with the earliest pending order");
  solve->add_option("--trace", sa.trace, "DP trace JSONL");
  solve->add_option("--out", sa.out, "Directory for solution, schedule and stats files");
  solve->add_option("--jobs", sa.jobs)->check(CLI::PositiveNumber);

  MipArgs ea;
  auto* exp = app.add_subcommand("export-mip", "Write the MIP in LP format");
  exp->add_option("instance", ea.instance)->required()->check(CLI::ExistingFile);
  exp->add_option("--objective", ea.objective)->check(CLI::IsMember({"makespan", "turnover"}));
  exp->add_option("--out", ea.out)->required();
  exp->add_option("--big-m-scale", ea.scale)->check(CLI::PositiveNumber);
  exp->add_flag("--solve", ea.solve, "Run ORDERPICK_LP_SOLVER or the bundled HiGHS script and check the result");
  exp->add_option("--solution", ea.solution, "Solution file written by --solve");
  exp->add_option("--time-limit", ea.time_limit)->check(CLI::PositiveNumber);

  MipArgs ca;
  auto* check = app.add_subcommand("check-solution", "Check a MIP solution file");
  check->add_option("instance", ca.instance)->required()->check(CLI::ExistingFile);
  check->add_option("--objective", ca.objective)->check(CLI::IsMember({"makespan", "turnover"}));
  check->add_option("--solution", ca.solution)->required()->check(CLI::ExistingFile);
  check->add_option("--big-m-scale", ca.scale)->check(CLI::PositiveNumber);

  std::string manifest, sim_out;
  int sim_jobs = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  auto* sim = app.add_subcommand("simulate", "Run online policies from a manifest");
  sim->add_option("manifest", manifest)->required()->check(CLI::ExistingFile);
  sim->add_option("--out", sim_out, "Override the manifest output directory");
  sim->add_option("--jobs", sim_jobs)->check(CLI::PositiveNumber);

  std::string report_dir, report_out;
  auto* rep = app.add_subcommand("report", "Aggregate a simulate output directory");
  rep->add_option("dir", report_dir)->required()->check(CLI::ExistingDirectory);
  rep->add_option("--out", report_out);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : kExitUsage;
  }

  try {
    if (*gen) return cmd_gen(ga);
    if (*solve) return cmd_solve(sa);
    if (*exp) return cmd_export_mip(ea);
    if (*check) return cmd_check_solution(ca);
    if (*sim) return cmd_simulate(manifest, sim_out, sim_jobs);
    if (*rep) return cmd_report(report_dir, report_out);
  } catch (const UsageError& e) {
    std::cerr << "usage: " << e.what() << "\n";
    return kExitUsage;
  } catch (const BudgetExceeded& e) {
    std::cerr << "budget: " << e.what() << "\n";
    return kExitBudget;
  } catch (const ValidationError& e) {
    std::cerr << "invalid: " << e.what() << "\n";
    return kExitValidation;
  } catch (const LoadError& e) {
    std::cerr << "invalid: " << e.what() << "\n";
    return kExitValidation;
  } catch (const SolutionParseError& e) {
    std::cerr << "invalid: " << e.what() << "\n";
    return kExitValidation;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  }
  return kExitUsage;
}
