#pragma once

#include <map>
#include <string>
#include <vector>

#include "orderpick/instance.hpp"
#include "orderpick/schedule.hpp"

namespace orderpick {

struct MipVar {
  enum class Type { Binary, Continuous };
  std::string name;
  Type type = Type::Continuous;
};

struct MipTerm {
  std::string var;
  double coef = 1.0;
};

struct MipRow {
  enum class Sense { LE, GE, EQ };
  std::string name;
  std::vector<MipTerm> terms;
  Sense sense = Sense::LE;
  double rhs = 0.0;
};

enum class MipObjective { Makespan, Turnover };

struct MipModel {
  MipObjective kind = MipObjective::Makespan;
  int K = 0;
  double M = 0.0;
  double N = 0.0;  // turnover only
  int n_items = 0;
  int n_orders = 0;
  std::vector<MipVar> vars;
  std::vector<MipRow> rows;
  std::vector<MipTerm> objective;
  double objective_constant = 0.0;  // not representable in LP text; added on evaluation
};

using Assignment = std::map<std::string, double>;

// big_m_scale multiplies M and N (used to check that the big-M values are not binding).
// floor(2 n / (c + 1)), clamped to 1.
int printed_batch_bound(int n_orders, int capacity);
// Largest batch count without two consecutive batches that fit one cart:
// batch sizes alternate around c + 1, so 1, c, 1 needs three batches for n = c + 2.
int merge_batch_bound(int n_orders, int capacity);

MipModel build_makespan_mip(const Instance& inst, double big_m_scale = 1.0);
MipModel build_turnover_mip(const Instance& inst, double big_m_scale = 1.0);

std::string to_lp(const MipModel& model);
void write_lp(const MipModel& model, const std::string& path);

class SolutionParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Reads `name value` lines; unknown lines are skipped, absent variables read as 0.
Assignment parse_solution(const MipModel& model, const std::string& text);
Assignment read_solution(const MipModel& model, const std::string& path);

struct CheckReport {
  bool feasible = true;
  std::vector<std::string> violations;  // row names with the amount of violation
  double objective = 0.0;
};

CheckReport check_solution(const MipModel& model, const Assignment& values, double tol = 1e-6);

// Assignment induced by a solution: arcs, order-batch links and earliest-pick times.
Assignment encode_solution(const Instance& inst, const MipModel& model, const Solution& sol);
// Follows y-arcs from the depot in every batch; throws on disconnected or ambiguous arcs.
Solution decode_solution(const Instance& inst, const MipModel& model, const Assignment& values);

// Variable names (1-based indices as in the formulation).
std::string y_name(int k, int from, int to);  // from/to: item id or kDepot
std::string x_name(int k, int order);
std::string t_name(int item);
std::string tld_name(int k);
std::string to_name(int order);

}  // namespace orderpick
