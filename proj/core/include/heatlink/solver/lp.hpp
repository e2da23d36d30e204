#pragma once

#include <cstddef>
#include <limits>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace heatlink::solver {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

enum class Relation { LessEqual, Equal, GreaterEqual };
enum class Sense { Minimise, Maximise };

struct Variable {
  std::string name;
  double lower = 0.0;
  double upper = kInf;
  double objective = 0.0;
};

struct Constraint {
  std::string name;
  std::vector<std::pair<int, double>> terms;  // (variable index, coefficient)
  Relation relation = Relation::LessEqual;
  double rhs = 0.0;
};

struct Diagnostic {
  std::string location;
  std::string message;
};

/// Sparse LP with named rows and columns. Row names are the handle through
/// which dual values are retrieved, so model builders must name any row
/// whose shadow price they intend to read back.
class LinearProgram {
 public:
  int add_variable(std::string name, double lower = 0.0, double upper = kInf,
                   double objective = 0.0) {
    if (var_index_.count(name) > 0)
      throw std::invalid_argument("duplicate variable name: " + name);
    int idx = static_cast<int>(vars_.size());
    var_index_.emplace(name, idx);
    vars_.push_back({std::move(name), lower, upper, objective});
    return idx;
  }

  int add_constraint(std::string name, std::vector<std::pair<int, double>> terms,
                     Relation relation, double rhs) {
    if (row_index_.count(name) > 0)
      throw std::invalid_argument("duplicate constraint name: " + name);
    int idx = static_cast<int>(rows_.size());
    row_index_.emplace(name, idx);
    rows_.push_back({std::move(name), std::move(terms), relation, rhs});
    return idx;
  }

  double& objective_coeff(int var) { return vars_.at(var).objective; }
  void set_rhs(int row, double rhs) { rows_.at(row).rhs = rhs; }
  double rhs(int row) const { return rows_.at(row).rhs; }
  void set_bounds(int var, double lower, double upper) {
    vars_.at(var).lower = lower;
    vars_.at(var).upper = upper;
  }

  int variable_index(const std::string& name) const {
    auto it = var_index_.find(name);
    if (it == var_index_.end())
      throw std::out_of_range("unknown variable: " + name);
    return it->second;
  }
  int constraint_index(const std::string& name) const {
    auto it = row_index_.find(name);
    if (it == row_index_.end())
      throw std::out_of_range("unknown constraint: " + name);
    return it->second;
  }
  bool has_variable(const std::string& name) const { return var_index_.count(name) > 0; }
  bool has_constraint(const std::string& name) const { return row_index_.count(name) > 0; }

  const std::vector<Variable>& variables() const { return vars_; }
  const std::vector<Constraint>& constraints() const { return rows_; }
  std::size_t num_variables() const { return vars_.size(); }
  std::size_t num_constraints() const { return rows_.size(); }

  Sense sense = Sense::Minimise;

 private:
  std::vector<Variable> vars_;
  std::vector<Constraint> rows_;
  std::unordered_map<std::string, int> var_index_;
  std::unordered_map<std::string, int> row_index_;
};

struct MixedIntegerProgram {
  LinearProgram lp;
  std::vector<int> integer_variables;
};

/// Structural checks only; never throws. An empty result means the program
/// satisfies the type invariants and is safe to hand to the solver.
std::vector<Diagnostic> validate_program(const LinearProgram& lp);
std::vector<Diagnostic> validate_program(const MixedIntegerProgram& mip);

/// Dump in CPLEX LP text format for cross-checking with third-party solvers.
std::string to_lp_format(const LinearProgram& lp,
                         const std::vector<int>* integer_variables = nullptr);

}  // namespace heatlink::solver
