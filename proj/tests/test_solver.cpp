#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "heatlink/solver/simplex.hpp"
#include "oracles.hpp"
#include "random_programs.hpp"

using namespace heatlink::solver;

namespace {

double row_activity(const LinearProgram& lp, const Constraint& row,
                    const std::vector<double>& x) {
  double v = 0.0;
  for (auto [j, a] : row.terms) v += a * x[j];
  return v;
}

void check_certificates(const LinearProgram& lp, const LpSolution& sol) {
  REQUIRE(sol.status == SolveStatus::Optimal);
  const double tol = 1e-6;
  // primal feasibility
  REQUIRE(heatlink::oracle::feasible_point(lp, sol.primal, tol));
  // strong duality: c'x == y'b + reduced-cost contribution of bound-tight vars.
  // With duals defined as d(obj)/d(rhs) the dual objective is y'b plus the
  // value picked up at variable bounds; verify via complementary slackness and
  // the Lagrangian identity instead of reconstructing reduced costs:
  //   obj == sum_i y_i * activity_i + sum_j (c_j - sum_i y_i a_ij) x_j
  // and for every row, y_i * slack_i == 0.
  double scale = 1.0 + std::fabs(sol.objective);
  double lagr = 0.0;
  std::vector<double> reduced(lp.num_variables());
  for (std::size_t j = 0; j < lp.num_variables(); ++j)
    reduced[j] = lp.variables()[j].objective;
  for (std::size_t i = 0; i < lp.num_constraints(); ++i) {
    const auto& row = lp.constraints()[i];
    double act = row_activity(lp, row, sol.primal);
    double slack = row.rhs - act;
    CHECK(std::fabs(sol.dual[i] * slack) <= 1e-6 * scale);  // compl. slackness
    lagr += sol.dual[i] * row.rhs;
    for (auto [j, a] : row.terms) reduced[j] -= sol.dual[i] * a;
  }
  // dual objective = y'b + bound terms picked up by reduced costs
  for (std::size_t j = 0; j < lp.num_variables(); ++j) {
    const auto& v = lp.variables()[j];
    if (std::fabs(reduced[j]) < 1e-7) continue;
    double bound_val = (lp.sense == Sense::Minimise ? reduced[j] > 0 : reduced[j] < 0)
                           ? v.lower
                           : v.upper;
    CHECK(std::fabs(sol.primal[j] - bound_val) <= 1e-5 * (1.0 + std::fabs(bound_val)));
    lagr += reduced[j] * bound_val;
  }
  CHECK(std::fabs(lagr - sol.objective) <= 1e-6 * scale);  // strong duality
}

}  // namespace

TEST_CASE("single constraint identity: max x, x <= 5") {
  LinearProgram lp;
  lp.sense = Sense::Maximise;
  int x = lp.add_variable("x", 0.0, kInf, 1.0);
  lp.add_constraint("cap", {{x, 1.0}}, Relation::LessEqual, 5.0);
  LpSolution sol = solve_lp(lp);
  REQUIRE(sol.status == SolveStatus::Optimal);
  CHECK(sol.primal[0] == doctest::Approx(5.0));
  CHECK(sol.objective == doctest::Approx(5.0));
  CHECK(sol.dual_of(lp, "cap") == doctest::Approx(1.0));
}

TEST_CASE("two-generator dispatch: balance dual equals marginal cost") {
  auto build = [](double demand) {
    LinearProgram lp;
    int cheap = lp.add_variable("cheap", 0.0, 10.0, 20.0);
    int dear = lp.add_variable("dear", 0.0, kInf, 50.0);
    lp.add_constraint("balance", {{cheap, 1.0}, {dear, 1.0}}, Relation::Equal, demand);
    return lp;
  };
  LinearProgram lp = build(15.0);
  LpSolution sol = solve_lp(lp);
  REQUIRE(sol.status == SolveStatus::Optimal);
  CHECK(sol.value(lp, "cheap") == doctest::Approx(10.0));
  CHECK(sol.value(lp, "dear") == doctest::Approx(5.0));
  CHECK(sol.dual_of(lp, "balance") == doctest::Approx(50.0));
  // perturbation oracle: +1 on demand raises cost by the dual
  LpSolution bumped = solve_lp(build(16.0));
  CHECK(bumped.objective - sol.objective == doctest::Approx(50.0).epsilon(1e-9));
  check_certificates(lp, sol);
}

TEST_CASE("infeasible system x <= 1, x >= 2") {
  LinearProgram lp;
  int x = lp.add_variable("x", 0.0, kInf, 1.0);
  lp.add_constraint("lo", {{x, 1.0}}, Relation::LessEqual, 1.0);
  lp.add_constraint("hi", {{x, 1.0}}, Relation::GreaterEqual, 2.0);
  CHECK(solve_lp(lp).status == SolveStatus::Infeasible);
}

TEST_CASE("unbounded detection") {
  LinearProgram lp;
  lp.sense = Sense::Maximise;
  lp.add_variable("x", 0.0, kInf, 1.0);
  CHECK(solve_lp(lp).status == SolveStatus::Unbounded);

  LinearProgram lp2;
  lp2.sense = Sense::Maximise;
  int x = lp2.add_variable("x", 0.0, kInf, 1.0);
  int y = lp2.add_variable("y", 0.0, kInf, 0.0);
  lp2.add_constraint("c", {{x, 1.0}, {y, -1.0}}, Relation::LessEqual, 3.0);
  CHECK(solve_lp(lp2).status == SolveStatus::Unbounded);
}

TEST_CASE("free and negative-bound variables") {
  // min x + 2y, x free, y in [-4, -1], x + y >= 3
  LinearProgram lp;
  int x = lp.add_variable("x", -kInf, kInf, 1.0);
  int y = lp.add_variable("y", -4.0, -1.0, 2.0);
  lp.add_constraint("c", {{x, 1.0}, {y, 1.0}}, Relation::GreaterEqual, 3.0);
  LpSolution sol = solve_lp(lp);
  REQUIRE(sol.status == SolveStatus::Optimal);
  CHECK(sol.primal[y] == doctest::Approx(-4.0));
  CHECK(sol.primal[x] == doctest::Approx(7.0));
  CHECK(sol.objective == doctest::Approx(-1.0));
}

TEST_CASE("validate_program diagnostics") {
  LinearProgram ok;
  int x = ok.add_variable("x", 0.0, 1.0, 1.0);
  ok.add_constraint("c", {{x, 1.0}}, Relation::LessEqual, 1.0);
  CHECK(validate_program(ok).empty());

  LinearProgram dangling = ok;
  dangling.add_constraint("bad", {{7, 1.0}}, Relation::LessEqual, 1.0);
  auto diags = validate_program(dangling);
  REQUIRE(diags.size() == 1);
  CHECK(diags[0].message.find("dangling") != std::string::npos);

  LinearProgram inverted;
  inverted.add_variable("x", 2.0, 1.0, 0.0);
  diags = validate_program(inverted);
  REQUIRE(diags.size() == 1);
  CHECK(diags[0].message.find("inverted bounds") != std::string::npos);

  CHECK_THROWS_AS(solve_lp(dangling), SolverError);
}

TEST_CASE("knapsack MIP: values (6,5,4), weights (3,2,2), capacity 4") {
  MixedIntegerProgram mip;
  mip.lp.sense = Sense::Maximise;
  for (int j = 0; j < 3; ++j) {
    mip.lp.add_variable("item" + std::to_string(j), 0.0, 1.0,
                        std::vector<double>{6.0, 5.0, 4.0}[j]);
    mip.integer_variables.push_back(j);
  }
  mip.lp.add_constraint("cap", {{0, 3.0}, {1, 2.0}, {2, 2.0}}, Relation::LessEqual, 4.0);
  MipSolution sol = solve_mip(mip, 1e-6);
  REQUIRE(sol.status == SolveStatus::Optimal);
  CHECK(sol.objective == doctest::Approx(9.0));
  CHECK(sol.primal[0] == doctest::Approx(0.0));
  CHECK(sol.primal[1] == doctest::Approx(1.0));
  CHECK(sol.primal[2] == doctest::Approx(1.0));
  CHECK(*heatlink::oracle::binary_enumeration(mip) == doctest::Approx(9.0));
}

TEST_CASE("all-continuous MIP equals LP solve") {
  LinearProgram lp;
  int x = lp.add_variable("x", 0.0, 4.0, -3.0);
  int y = lp.add_variable("y", 0.0, 4.0, -2.0);
  lp.add_constraint("c", {{x, 1.0}, {y, 2.0}}, Relation::LessEqual, 6.0);
  MixedIntegerProgram mip{lp, {}};
  LpSolution ls = solve_lp(lp);
  MipSolution ms = solve_mip(mip, 1e-3);
  REQUIRE(ms.status == SolveStatus::Optimal);
  CHECK(ms.objective == doctest::Approx(ls.objective));
}

TEST_CASE("integer rounding: max x, x integer in [0, 2.5]") {
  MixedIntegerProgram mip;
  mip.lp.sense = Sense::Maximise;
  mip.lp.add_variable("x", 0.0, 2.5, 1.0);
  mip.integer_variables.push_back(0);
  MipSolution sol = solve_mip(mip, 1e-6);
  REQUIRE(sol.status == SolveStatus::Optimal);
  CHECK(sol.objective == doctest::Approx(2.0));
}

TEST_CASE("invalid gap target rejected") {
  MixedIntegerProgram mip;
  mip.lp.add_variable("x", 0.0, 1.0, 1.0);
  CHECK_THROWS_AS(solve_mip(mip, 0.0), SolverError);
  CHECK_THROWS_AS(solve_mip(mip, 1.5), SolverError);
}

TEST_CASE("random LPs match vertex enumeration oracle") {
  std::mt19937 rng(20260826);
  int optimal = 0, infeasible = 0;
  for (int trial = 0; trial < 200; ++trial) {
    LinearProgram lp = heatlink::testgen::random_lp(rng);
    LpSolution sol = solve_lp(lp);
    auto best = heatlink::oracle::vertex_enumeration(lp);
    if (!best.has_value()) {
      CHECK(sol.status == SolveStatus::Infeasible);
      ++infeasible;
      continue;
    }
    REQUIRE(sol.status == SolveStatus::Optimal);
    CHECK(sol.objective ==
          doctest::Approx(*best).epsilon(1e-6).scale(1.0 + std::fabs(*best)));
    check_certificates(lp, sol);
    ++optimal;
  }
  CHECK(optimal > 50);  // generator exercises both outcomes
  CHECK(infeasible > 10);
}

TEST_CASE("random binary MIPs match exhaustive enumeration") {
  std::mt19937 rng(77);
  int optimal = 0;
  for (int trial = 0; trial < 60; ++trial) {
    MixedIntegerProgram mip = heatlink::testgen::random_binary_mip(rng);
    MipSolution sol = solve_mip(mip, 1e-6);
    auto best = heatlink::oracle::binary_enumeration(mip);
    if (!best.has_value()) {
      CHECK(sol.status == SolveStatus::Infeasible);
      continue;
    }
    REQUIRE(sol.status == SolveStatus::Optimal);
    CHECK(sol.objective ==
          doctest::Approx(*best).epsilon(1e-6).scale(1.0 + std::fabs(*best)));
    ++optimal;
  }
  CHECK(optimal > 20);
}

TEST_CASE("determinism: identical input gives bit-identical outcome") {
  std::mt19937 rng(5);
  LinearProgram lp = heatlink::testgen::random_lp(rng);
  LpSolution a = solve_lp(lp);
  LpSolution b = solve_lp(lp);
  CHECK(a.status == b.status);
  CHECK(std::memcmp(&a.objective, &b.objective, sizeof(double)) == 0);
  CHECK(a.primal == b.primal);
  CHECK(a.dual == b.dual);
}

TEST_CASE("LP format dump round-trips the structure textually") {
  LinearProgram lp;
  int x = lp.add_variable("gen[ccgt,r1,0]", 0.0, 10.0, 20.0);
  lp.add_constraint("balance[r1,0]", {{x, 1.0}}, Relation::Equal, 5.0);
  std::string text = to_lp_format(lp);
  CHECK(text.find("Minimize") != std::string::npos);
  CHECK(text.find("balance_r1_0_") != std::string::npos);
  CHECK(text.find("Subject To") != std::string::npos);
  CHECK(text.find("End") != std::string::npos);
}
