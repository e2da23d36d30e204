#pragma once

#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "heatlink/solver/lp.hpp"

namespace heatlink::solver {

enum class SolveStatus { Optimal, Infeasible, Unbounded };

struct SolverConfig {
  double feasibility_tol = 1e-7;
  double optimality_tol = 1e-7;
  double integrality_tol = 1e-6;
  double mip_gap = 1e-3;
  long max_iterations = 200000;
  long max_nodes = 100000;
};

struct LpSolution {
  SolveStatus status = SolveStatus::Infeasible;
  std::vector<double> primal;  // per declared variable
  std::vector<double> dual;    // per declared constraint, d(objective)/d(rhs)
  double objective = 0.0;
  long iterations = 0;

  double value(const LinearProgram& lp, const std::string& var) const {
    return primal.at(static_cast<std::size_t>(lp.variable_index(var)));
  }
  double dual_of(const LinearProgram& lp, const std::string& row) const {
    return dual.at(static_cast<std::size_t>(lp.constraint_index(row)));
  }
};

struct MipSolution {
  SolveStatus status = SolveStatus::Infeasible;
  std::vector<double> primal;
  double objective = 0.0;
  double gap = 0.0;              // relative optimality gap achieved
  bool node_budget_exhausted = false;
  long nodes = 0;

  double value(const LinearProgram& lp, const std::string& var) const {
    return primal.at(static_cast<std::size_t>(lp.variable_index(var)));
  }
};

/// Thrown for malformed programs and for numerical failures that exhaust the
/// retry budget (the latter usually means the instance needs scaling).
struct SolverError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Bounded-variable two-phase revised simplex. Deterministic: Dantzig pricing
/// with lowest-index tie-breaking, Bland's rule after a stall.
LpSolution solve_lp(const LinearProgram& lp, const SolverConfig& config = {});

/// Re-solves one LinearProgram under changing variable-bound overrides while
/// keeping the factored basis between calls. Branch and bound leans on this:
/// a child node differs from its parent by a single bound, so a warm solve
/// usually needs a handful of pivots where a cold solve needs thousands.
class WarmLpSolver {
 public:
  /// variable index -> (lower, upper) replacing the base bounds for one solve
  using BoundOverride = std::pair<int, std::pair<double, double>>;

  WarmLpSolver(const LinearProgram& lp, const SolverConfig& config);
  ~WarmLpSolver();
  WarmLpSolver(WarmLpSolver&&) noexcept;
  WarmLpSolver& operator=(WarmLpSolver&&) noexcept;

  LpSolution solve(const std::vector<BoundOverride>& overrides);

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

/// Branch and bound on the simplex relaxation: most-fractional branching,
/// best-bound node selection, fix-and-resolve rounding for incumbents.
MipSolution solve_mip(const MixedIntegerProgram& mip, const SolverConfig& config = {});
MipSolution solve_mip(const MixedIntegerProgram& mip, double gap_target);

}  // namespace heatlink::solver
