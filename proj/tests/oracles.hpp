// Test-only reference implementations, independent of the simplex path:
// vertex enumeration for small LPs and exhaustive enumeration for pure-binary
// MIPs. Deliberately brute force.
#pragma once

#include <cmath>
#include <optional>
#include <vector>

#include "heatlink/solver/lp.hpp"

namespace heatlink::oracle {

using solver::LinearProgram;
using solver::MixedIntegerProgram;
using solver::Relation;
using solver::Sense;

inline bool solve_square(std::vector<std::vector<double>> a, std::vector<double> b,
                         std::vector<double>& x) {
  const int n = static_cast<int>(b.size());
  for (int col = 0; col < n; ++col) {
    int piv = col;
    for (int r = col + 1; r < n; ++r)
      if (std::fabs(a[r][col]) > std::fabs(a[piv][col])) piv = r;
    if (std::fabs(a[piv][col]) < 1e-10) return false;
    std::swap(a[piv], a[col]);
    std::swap(b[piv], b[col]);
    for (int r = 0; r < n; ++r) {
      if (r == col) continue;
      double f = a[r][col] / a[col][col];
      if (f == 0.0) continue;
      for (int c = col; c < n; ++c) a[r][c] -= f * a[col][c];
      b[r] -= f * b[col];
    }
  }
  x.resize(n);
  for (int i = 0; i < n; ++i) x[i] = b[i] / a[i][i];
  return true;
}

inline bool feasible_point(const LinearProgram& lp, const std::vector<double>& x,
                           double tol) {
  const int n = static_cast<int>(lp.num_variables());
  for (int j = 0; j < n; ++j)
    if (x[j] < lp.variables()[j].lower - tol || x[j] > lp.variables()[j].upper + tol)
      return false;
  for (const auto& row : lp.constraints()) {
    double lhs = 0.0;
    for (auto [j, a] : row.terms) lhs += a * x[j];
    switch (row.relation) {
      case Relation::LessEqual:
        if (lhs > row.rhs + tol) return false;
        break;
      case Relation::Equal:
        if (std::fabs(lhs - row.rhs) > tol) return false;
        break;
      case Relation::GreaterEqual:
        if (lhs < row.rhs - tol) return false;
        break;
    }
  }
  return true;
}

inline double objective_at(const LinearProgram& lp, const std::vector<double>& x) {
  double v = 0.0;
  for (std::size_t j = 0; j < lp.num_variables(); ++j)
    v += lp.variables()[j].objective * x[j];
  return v;
}

/// Optimal objective by enumerating every vertex of the feasible polytope.
/// Requires finite variable bounds (the region is then a polytope and any
/// optimum sits on a vertex). Returns nullopt when no feasible vertex exists.
inline std::optional<double> vertex_enumeration(const LinearProgram& lp,
                                                double tol = 1e-7) {
  const int n = static_cast<int>(lp.num_variables());
  const int m = static_cast<int>(lp.num_constraints());

  // Candidate tight sets: each row as an equality, plus each variable bound.
  struct Plane {
    std::vector<double> a;
    double b;
  };
  std::vector<Plane> planes;
  for (const auto& row : lp.constraints()) {
    Plane p{std::vector<double>(n, 0.0), row.rhs};
    for (auto [j, c] : row.terms) p.a[j] += c;
    planes.push_back(std::move(p));
  }
  for (int j = 0; j < n; ++j) {
    Plane lo{std::vector<double>(n, 0.0), lp.variables()[j].lower};
    lo.a[j] = 1.0;
    planes.push_back(lo);
    Plane hi{std::vector<double>(n, 0.0), lp.variables()[j].upper};
    hi.a[j] = 1.0;
    planes.push_back(hi);
  }

  std::optional<double> best;
  std::vector<int> pick(n);
  const int total = static_cast<int>(planes.size());
  std::vector<int> comb;
  // iterate all n-subsets of planes
  std::vector<int> idx(n);
  for (int i = 0; i < n; ++i) idx[i] = i;
  while (true) {
    std::vector<std::vector<double>> a(n);
    std::vector<double> b(n);
    for (int i = 0; i < n; ++i) {
      a[i] = planes[idx[i]].a;
      b[i] = planes[idx[i]].b;
    }
    std::vector<double> x;
    if (solve_square(a, b, x) && feasible_point(lp, x, tol)) {
      double v = objective_at(lp, x);
      if (!best || (lp.sense == Sense::Minimise ? v < *best : v > *best)) best = v;
    }
    // next combination
    int pos = n - 1;
    while (pos >= 0 && idx[pos] == total - n + pos) --pos;
    if (pos < 0) break;
    ++idx[pos];
    for (int k = pos + 1; k < n; ++k) idx[k] = idx[k - 1] + 1;
  }
  (void)m;
  return best;
}

/// Optimal objective of a pure-binary program by trying all 2^k assignments.
inline std::optional<double> binary_enumeration(const MixedIntegerProgram& mip,
                                                double tol = 1e-7) {
  const auto& lp = mip.lp;
  const int k = static_cast<int>(mip.integer_variables.size());
  std::optional<double> best;
  for (long mask = 0; mask < (1L << k); ++mask) {
    std::vector<double> x(lp.num_variables(), 0.0);
    for (std::size_t j = 0; j < lp.num_variables(); ++j)
      x[j] = lp.variables()[j].lower;
    for (int i = 0; i < k; ++i)
      x[mip.integer_variables[i]] = (mask >> i) & 1 ? 1.0 : 0.0;
    if (!feasible_point(lp, x, tol)) continue;
    double v = objective_at(lp, x);
    if (!best || (lp.sense == Sense::Minimise ? v < *best : v > *best)) best = v;
  }
  return best;
}

}  // namespace heatlink::oracle
