#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <queue>
#include <vector>

#include "heatlink/solver/simplex.hpp"

namespace heatlink::solver {

namespace {

using BoundOverride = WarmLpSolver::BoundOverride;

struct Node {
  double bound;                 // relaxation objective in internal (min) space
  long seq;                     // insertion order, breaks ties deterministically
  std::vector<BoundOverride> bound_overrides;
};

struct NodeOrder {
  bool operator()(const Node& a, const Node& b) const {
    if (a.bound != b.bound) return a.bound > b.bound;  // best bound first
    return a.seq > b.seq;
  }
};

int most_fractional(const std::vector<double>& x, const std::vector<int>& ints,
                    double tol) {
  int pick = -1;
  double best = tol;
  for (int v : ints) {
    double f = x[v] - std::floor(x[v]);
    double frac_dist = std::min(f, 1.0 - f);
    if (frac_dist > best + 1e-12) {
      best = frac_dist;
      pick = v;
    }
  }
  return pick;
}

}  // namespace

MipSolution solve_mip(const MixedIntegerProgram& mip, const SolverConfig& config) {
  auto diags = validate_program(mip);
  if (!diags.empty())
    throw SolverError("malformed-program: " + diags.front().location + ": " +
                      diags.front().message);

  const std::vector<Variable> original_vars = mip.lp.variables();
  const double sign = mip.lp.sense == Sense::Minimise ? 1.0 : -1.0;
  const std::vector<int>& ints = mip.integer_variables;
  const bool trace = std::getenv("HEATLINK_MIP_TRACE") != nullptr;

  WarmLpSolver warm(mip.lp, config);

  MipSolution out;
  double incumbent = kInf;  // internal (min) space
  std::vector<double> incumbent_x;
  long nodes = 0;
  long seq = 0;

  auto try_incumbent = [&](const std::vector<double>& x, double internal_obj) {
    if (internal_obj < incumbent - 1e-12) {
      incumbent = internal_obj;
      incumbent_x = x;
    }
  };

  auto solve_node = [&](const std::vector<BoundOverride>& overrides,
                        LpSolution& sol) {
    try {
      sol = warm.solve(overrides);
      return true;
    } catch (const SolverError&) {
      return false;
    }
  };

  // clamp a proposed integer value into the variable's effective bounds
  auto clamped = [&](int v, double val, const std::vector<BoundOverride>& ov) {
    double lo = original_vars[v].lower;
    double up = original_vars[v].upper;
    for (const auto& [var, lu] : ov)
      if (var == v) {
        lo = lu.first;
        up = lu.second;
      }
    return std::clamp(val, std::ceil(lo), std::floor(up));
  };

  // Fix fractional integers one at a time to their nearest value, re-solving
  // in between; far better incumbents than rounding everything at once, and
  // cheap because every step is a warm re-solve.
  auto dive = [&](const Node& from, const std::vector<double>& relax_x) {
    std::vector<BoundOverride> ov = from.bound_overrides;
    std::vector<double> x = relax_x;
    LpSolution s;
    bool have = false;
    for (std::size_t step = 0; step < ints.size() + 4; ++step) {
      int v = most_fractional(x, ints, config.integrality_tol);
      if (v < 0) break;
      double val = clamped(v, std::round(x[v]), ov);
      double alt = clamped(v, x[v] > val ? val + 1.0 : val - 1.0, ov);
      ov.push_back({v, {val, val}});
      if (!solve_node(ov, s) || s.status != SolveStatus::Optimal) {
        // nearest value infeasible: retry once rounding the other way
        if (alt == val) return;
        ov.back().second = {alt, alt};
        if (!solve_node(ov, s) || s.status != SolveStatus::Optimal) return;
      }
      x = s.primal;
      have = true;
    }
    if (have && most_fractional(x, ints, config.integrality_tol) < 0)
      try_incumbent(x, sign * s.objective);
  };

  std::priority_queue<Node, std::vector<Node>, NodeOrder> open;

  LpSolution root;
  if (!solve_node({}, root))
    throw SolverError("numerical-failure: root relaxation did not solve");
  out.nodes = 1;
  if (root.status == SolveStatus::Infeasible) {
    out.status = SolveStatus::Infeasible;
    return out;
  }
  if (root.status == SolveStatus::Unbounded) {
    out.status = SolveStatus::Unbounded;
    return out;
  }
  double best_bound = sign * root.objective;

  if (most_fractional(root.primal, ints, config.integrality_tol) < 0) {
    out.status = SolveStatus::Optimal;
    out.primal = root.primal;
    out.objective = root.objective;
    out.gap = 0.0;
    return out;
  }
  dive({best_bound, seq, {}}, root.primal);

  open.push({best_bound, seq++, {}});

  auto rel_gap = [&](double bound) {
    if (incumbent == kInf) return kInf;
    return (incumbent - bound) / std::max(1.0, std::fabs(incumbent));
  };

  while (!open.empty()) {
    Node node = open.top();
    open.pop();
    best_bound = node.bound;
    if (rel_gap(best_bound) <= config.mip_gap) break;
    if (node.bound >= incumbent - 1e-12) break;  // queue is bound-sorted
    if (++nodes > config.max_nodes) {
      out.node_budget_exhausted = true;
      break;
    }

    LpSolution relax;
    if (!solve_node(node.bound_overrides, relax)) continue;
    if (trace)
      std::fprintf(stderr,
                   "[mip] node=%ld depth=%zu bound=%.8g incumbent=%.8g iters=%ld\n",
                   nodes, node.bound_overrides.size(), node.bound,
                   incumbent == kInf ? 0.0 : incumbent, relax.iterations);
    if (relax.status != SolveStatus::Optimal) continue;
    double bound = sign * relax.objective;
    if (bound >= incumbent - 1e-12) continue;

    int branch_var = most_fractional(relax.primal, ints, config.integrality_tol);
    if (branch_var < 0) {
      try_incumbent(relax.primal, bound);
      continue;
    }
    if (nodes % 16 == 0) dive(node, relax.primal);

    double v = relax.primal[branch_var];
    double lo = original_vars[branch_var].lower;
    double up = original_vars[branch_var].upper;
    for (const auto& [var, lu] : node.bound_overrides)
      if (var == branch_var) {
        lo = lu.first;
        up = lu.second;
      }
    Node down = node, upn = node;
    down.bound = bound;
    down.seq = seq++;
    down.bound_overrides.push_back({branch_var, {lo, std::floor(v)}});
    upn.bound = bound;
    upn.seq = seq++;
    upn.bound_overrides.push_back({branch_var, {std::ceil(v), up}});
    if (std::floor(v) >= lo) open.push(down);
    if (std::ceil(v) <= up) open.push(upn);
  }

  out.nodes = nodes + 1;
  if (incumbent == kInf) {
    out.status = SolveStatus::Infeasible;
    return out;
  }
  if (open.empty() && !out.node_budget_exhausted) best_bound = incumbent;
  out.status = SolveStatus::Optimal;
  out.primal = incumbent_x;
  for (int v : ints) out.primal[v] = std::round(out.primal[v]);
  out.objective = sign * incumbent;
  out.gap = std::max(0.0, rel_gap(best_bound));
  return out;
}

MipSolution solve_mip(const MixedIntegerProgram& mip, double gap_target) {
  if (!(gap_target > 0.0 && gap_target <= 1.0))
    throw SolverError("gap target must lie in (0, 1]");
  SolverConfig cfg;
  cfg.mip_gap = gap_target;
  return solve_mip(mip, cfg);
}

}  // namespace heatlink::solver
