// Deterministic random program generators shared by the unit and acceptance
// suites. Bounds are kept finite so the vertex-enumeration oracle applies.
#pragma once

#include <random>

#include "heatlink/solver/lp.hpp"

namespace heatlink::testgen {

using solver::LinearProgram;
using solver::MixedIntegerProgram;
using solver::Relation;
using solver::Sense;

inline double round1(double v) { return std::round(v * 10.0) / 10.0; }

inline LinearProgram random_lp(std::mt19937& rng) {
  std::uniform_int_distribution<int> nd(1, 6), md(0, 6), coef(-5, 5), rel(0, 2);
  std::uniform_real_distribution<double> ub(0.5, 10.0), obj(-10.0, 10.0),
      rhs(-8.0, 12.0);
  LinearProgram lp;
  lp.sense = rng() % 2 == 0 ? Sense::Minimise : Sense::Maximise;
  const int n = nd(rng);
  const int m = md(rng);
  for (int j = 0; j < n; ++j)
    lp.add_variable("x" + std::to_string(j), 0.0, round1(ub(rng)), round1(obj(rng)));
  for (int i = 0; i < m; ++i) {
    std::vector<std::pair<int, double>> terms;
    for (int j = 0; j < n; ++j) {
      int c = coef(rng);
      if (c != 0) terms.push_back({j, static_cast<double>(c)});
    }
    if (terms.empty()) terms.push_back({0, 1.0});
    lp.add_constraint("c" + std::to_string(i), std::move(terms),
                      static_cast<Relation>(rel(rng)), round1(rhs(rng)));
  }
  return lp;
}

inline MixedIntegerProgram random_binary_mip(std::mt19937& rng) {
  std::uniform_int_distribution<int> nd(1, 12), md(1, 6), coef(-5, 5), rel(0, 9);
  std::uniform_real_distribution<double> obj(-10.0, 10.0);
  std::uniform_int_distribution<int> rhs(-6, 10);
  MixedIntegerProgram mip;
  mip.lp.sense = rng() % 2 == 0 ? Sense::Minimise : Sense::Maximise;
  const int n = nd(rng);
  const int m = md(rng);
  for (int j = 0; j < n; ++j) {
    mip.lp.add_variable("b" + std::to_string(j), 0.0, 1.0, round1(obj(rng)));
    mip.integer_variables.push_back(j);
  }
  for (int i = 0; i < m; ++i) {
    std::vector<std::pair<int, double>> terms;
    for (int j = 0; j < n; ++j) {
      int c = coef(rng);
      if (c != 0) terms.push_back({j, static_cast<double>(c)});
    }
    if (terms.empty()) terms.push_back({0, 1.0});
    // equality rows are rarely satisfiable over binaries; keep them scarce
    int r = rel(rng);
    Relation relation = r == 0   ? Relation::Equal
                        : r < 6  ? Relation::LessEqual
                                 : Relation::GreaterEqual;
    mip.lp.add_constraint("c" + std::to_string(i), std::move(terms), relation,
                          static_cast<double>(rhs(rng)));
  }
  return mip;
}

}  // namespace heatlink::testgen
