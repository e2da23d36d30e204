#include "heatlink/solver/simplex.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <numeric>
#include <cstdio>
#include <cstdlib>

namespace heatlink::solver {

namespace {

constexpr double kPivotTol = 1e-9;

enum class ColState : unsigned char { Basic, AtLower, AtUpper, Free };

// Internal computational form: min c.x  s.t.  A x + s = b,  l <= x,s <= u,
// with one artificial column per row for phase 1.
struct Tableau {
  int m = 0;            // rows
  int n_struct = 0;     // structural columns
  int n_total = 0;      // struct + slack + artificial
  // sparse columns
  std::vector<std::vector<std::pair<int, double>>> cols;
  std::vector<double> lower, upper, cost, phase1_cost;
  std::vector<double> x;            // current value of every column
  std::vector<ColState> state;
  std::vector<int> basis;           // column basic in each row
  std::vector<double> binv;         // column-major: binv[i*m + k] = B^-1[k][i]
  std::vector<double> b;
  // geometric-mean equilibration factors, rounded to powers of two so the
  // rescaling is exact in floating point
  std::vector<double> row_scale, col_scale;

  int art_begin() const { return n_total - m; }
  bool is_artificial(int j) const { return j >= art_begin(); }
};

double pow2_round(double s) {
  if (!(s > 0.0) || !std::isfinite(s)) return 1.0;
  return std::exp2(std::round(std::log2(s)));
}

// Two rounds of row/column geometric-mean scaling over the structural part.
void equilibrate(Tableau& t) {
  const int m = t.m;
  const int n = t.n_struct;
  t.row_scale.assign(m, 1.0);
  t.col_scale.assign(n, 1.0);
  for (int round = 0; round < 2; ++round) {
    std::vector<double> rmin(m, kInf), rmax(m, 0.0);
    for (int j = 0; j < n; ++j)
      for (auto [i, a] : t.cols[j]) {
        double v = std::fabs(a) * t.row_scale[i] * t.col_scale[j];
        rmin[i] = std::min(rmin[i], v);
        rmax[i] = std::max(rmax[i], v);
      }
    for (int i = 0; i < m; ++i)
      if (rmax[i] > 0.0) t.row_scale[i] = pow2_round(t.row_scale[i] / std::sqrt(rmin[i] * rmax[i]));
    for (int j = 0; j < n; ++j) {
      double cmin = kInf, cmax = 0.0;
      for (auto [i, a] : t.cols[j]) {
        double v = std::fabs(a) * t.row_scale[i] * t.col_scale[j];
        cmin = std::min(cmin, v);
        cmax = std::max(cmax, v);
      }
      if (cmax > 0.0) t.col_scale[j] = pow2_round(t.col_scale[j] / std::sqrt(cmin * cmax));
    }
  }
  for (int j = 0; j < n; ++j) {
    double cj = t.col_scale[j];
    for (auto& [i, a] : t.cols[j]) a *= t.row_scale[i] * cj;
    t.cost[j] *= cj;
    if (std::isfinite(t.lower[j])) t.lower[j] /= cj;
    if (std::isfinite(t.upper[j])) t.upper[j] /= cj;
  }
  // slack for row i keeps coefficient 1: its value is implicitly scaled by
  // row_scale[i], and slack bounds are only 0 or +-inf, both invariant
  for (int i = 0; i < m; ++i) t.b[i] *= t.row_scale[i];
}

double nonbasic_start(double lo, double up) {
  if (std::isfinite(lo)) return lo;
  if (std::isfinite(up)) return up;
  return 0.0;
}

Tableau build_tableau(const LinearProgram& lp, double sense_sign) {
  Tableau t;
  t.m = static_cast<int>(lp.num_constraints());
  t.n_struct = static_cast<int>(lp.num_variables());
  t.n_total = t.n_struct + 2 * t.m;
  t.cols.resize(t.n_total);
  t.lower.assign(t.n_total, 0.0);
  t.upper.assign(t.n_total, kInf);
  t.cost.assign(t.n_total, 0.0);
  t.phase1_cost.assign(t.n_total, 0.0);
  t.b.resize(t.m);

  for (int j = 0; j < t.n_struct; ++j) {
    const Variable& v = lp.variables()[j];
    t.lower[j] = v.lower;
    t.upper[j] = v.upper;
    t.cost[j] = sense_sign * v.objective;
  }
  for (int i = 0; i < t.m; ++i) {
    const Constraint& row = lp.constraints()[i];
    t.b[i] = row.rhs;
    for (auto [j, a] : row.terms)
      if (a != 0.0) t.cols[j].push_back({i, a});
    int slack = t.n_struct + i;
    t.cols[slack].push_back({i, 1.0});
    switch (row.relation) {
      case Relation::LessEqual:
        t.lower[slack] = 0.0;
        t.upper[slack] = kInf;
        break;
      case Relation::Equal:
        t.lower[slack] = 0.0;
        t.upper[slack] = 0.0;
        break;
      case Relation::GreaterEqual:
        t.lower[slack] = -kInf;
        t.upper[slack] = 0.0;
        break;
    }
  }
  return t;
}

class Simplex {
 public:
  Simplex(Tableau& t, const SolverConfig& cfg) : t_(t), cfg_(cfg) {}

  // Places all non-artificial columns at a bound, artificials in the basis.
  void initialise() {
    const int m = t_.m;
    t_.x.assign(t_.n_total, 0.0);
    t_.state.assign(t_.n_total, ColState::AtLower);
    for (int j = 0; j < t_.art_begin(); ++j) {
      if (t_.lower[j] == -kInf && t_.upper[j] == kInf) {
        t_.state[j] = ColState::Free;
        t_.x[j] = 0.0;
      } else if (std::isfinite(t_.lower[j])) {
        t_.state[j] = ColState::AtLower;
        t_.x[j] = t_.lower[j];
      } else {
        t_.state[j] = ColState::AtUpper;
        t_.x[j] = t_.upper[j];
      }
    }
    std::vector<double> r = t_.b;
    for (int j = 0; j < t_.art_begin(); ++j) {
      if (t_.x[j] == 0.0) continue;
      for (auto [i, a] : t_.cols[j]) r[i] -= a * t_.x[j];
    }
    t_.basis.resize(m);
    t_.binv.assign(static_cast<std::size_t>(m) * m, 0.0);
    for (int i = 0; i < m; ++i) {
      int art = t_.art_begin() + i;
      int slack = t_.n_struct + i;
      // Prefer the row's own slack as the starting basic column whenever it
      // can absorb the residual; this leaves phase 1 with artificials only on
      // rows that start genuinely infeasible (typically the equalities).
      if (t_.lower[slack] < t_.upper[slack] && r[i] >= t_.lower[slack] &&
          r[i] <= t_.upper[slack]) {
        t_.cols[art] = {{i, 1.0}};
        t_.lower[art] = t_.upper[art] = 0.0;  // never enters
        t_.phase1_cost[art] = 0.0;
        t_.basis[i] = slack;
        t_.state[slack] = ColState::Basic;
        t_.x[slack] = r[i];
        t_.binv[static_cast<std::size_t>(i) * m + i] = 1.0;
        continue;
      }
      // slack stays at its bound; the nonbasic sweep above already priced its
      // contribution into nothing (slack starts at zero)
      double sign = r[i] >= 0.0 ? 1.0 : -1.0;
      t_.cols[art] = {{i, sign}};
      t_.lower[art] = 0.0;
      t_.upper[art] = kInf;
      t_.phase1_cost[art] = 1.0;
      t_.basis[i] = art;
      t_.state[art] = ColState::Basic;
      t_.x[art] = std::fabs(r[i]);
      t_.binv[static_cast<std::size_t>(i) * m + i] = sign;
    }
  }

  // Runs one simplex phase. Returns false if unbounded (phase 2 only).
  bool run(const std::vector<double>& cost) {
    const int m = t_.m;
    std::vector<double> y(m), w(m), cb(m);
    bool bland = false;
    long stall = 0;
    double last_obj = objective(cost);
    for (int k = 0; k < m; ++k) cb[k] = cost[t_.basis[k]];
    bool y_stale = true;
    // Devex reference weights: approximate steepest-edge pricing cheaply.
    std::vector<double> dw(t_.n_total, 1.0);
    std::vector<double> vrow(m);

    while (true) {
      if (++iterations_ > cfg_.max_iterations)
        throw SolverError("numerical-failure: simplex iteration limit reached; "
                          "the instance may need scaling");
      if (std::getenv("HEATLINK_LP_TRACE") && iterations_ % 2000 == 0)
        std::fprintf(stderr, "[lp] iter=%ld obj=%.8g bland=%d stall=%ld\n",
                     iterations_, objective(cost), (int)bland, stall);

      // y = c_B B^-1; unchanged across bound-flip iterations
      if (y_stale) {
        for (int i = 0; i < m; ++i) {
          const double* col = &t_.binv[static_cast<std::size_t>(i) * m];
          double acc = 0.0;
          for (int k = 0; k < m; ++k) acc += cb[k] * col[k];
          y[i] = acc;
        }
        y_stale = false;
      }

      // price nonbasic columns
      int enter = -1;
      double best = 0.0;
      int dir = 0;
      for (int j = 0; j < t_.n_total; ++j) {
        if (t_.state[j] == ColState::Basic) continue;
        if (t_.lower[j] == t_.upper[j]) continue;  // fixed, never enters
        double d = cost[j];
        for (auto [i, a] : t_.cols[j]) d -= y[i] * a;
        int cand_dir = 0;
        if (t_.state[j] == ColState::AtLower && d < -cfg_.optimality_tol) cand_dir = 1;
        else if (t_.state[j] == ColState::AtUpper && d > cfg_.optimality_tol) cand_dir = -1;
        else if (t_.state[j] == ColState::Free && std::fabs(d) > cfg_.optimality_tol)
          cand_dir = d < 0.0 ? 1 : -1;
        if (cand_dir == 0) continue;
        if (bland) { enter = j; dir = cand_dir; break; }
        double score = d * d / dw[j];
        if (score > best + 1e-12) { best = score; enter = j; dir = cand_dir; }
      }
      if (enter < 0) return true;  // optimal for this phase

      // w = B^-1 a_enter
      std::fill(w.begin(), w.end(), 0.0);
      for (auto [i, a] : t_.cols[enter]) {
        const double* col = &t_.binv[static_cast<std::size_t>(i) * m];
        for (int k = 0; k < m; ++k) w[k] += a * col[k];
      }

      // Two-pass ratio test (Harris): first find the tolerance-relaxed step
      // bound, then among rows whose true ratio fits choose the largest
      // pivot magnitude. Pivoting on near-zero elements is what destroys
      // the explicit inverse, so stability outranks the textbook minimum.
      double span = t_.upper[enter] - t_.lower[enter];
      double theta_max = std::isfinite(span) ? span : kInf;
      for (int k = 0; k < m; ++k) {
        double delta = dir * w[k];
        double absd = std::fabs(delta);
        if (absd <= kPivotTol) continue;
        int jb = t_.basis[k];
        double dist;
        if (delta > 0.0)
          dist = std::isfinite(t_.lower[jb]) ? t_.x[jb] - t_.lower[jb] : kInf;
        else
          dist = std::isfinite(t_.upper[jb]) ? t_.upper[jb] - t_.x[jb] : kInf;
        if (!std::isfinite(dist)) continue;
        dist = std::max(dist, 0.0);
        theta_max = std::min(theta_max, (dist + cfg_.feasibility_tol) / absd);
      }
      if (theta_max == kInf) return false;  // unbounded direction

      double limit = std::isfinite(span) ? span : kInf;
      int leave_row = -1;
      double best_piv = 0.0;
      for (int k = 0; k < m; ++k) {
        double delta = dir * w[k];
        double absd = std::fabs(delta);
        if (absd <= kPivotTol) continue;
        int jb = t_.basis[k];
        double dist;
        if (delta > 0.0)
          dist = std::isfinite(t_.lower[jb]) ? t_.x[jb] - t_.lower[jb] : kInf;
        else
          dist = std::isfinite(t_.upper[jb]) ? t_.upper[jb] - t_.x[jb] : kInf;
        if (!std::isfinite(dist)) continue;
        dist = std::max(dist, 0.0);
        double ratio = dist / absd;
        if (ratio > theta_max) continue;
        if (absd > best_piv + 1e-12 ||
            (leave_row >= 0 && absd > best_piv - 1e-12 &&
             t_.basis[k] < t_.basis[leave_row])) {
          best_piv = absd;
          leave_row = k;
          limit = ratio;
        }
      }
      if (leave_row < 0 && !std::isfinite(span)) return false;  // unbounded

      // apply the step
      for (int k = 0; k < m; ++k) t_.x[t_.basis[k]] -= dir * limit * w[k];
      t_.x[enter] += dir * limit;

      if (leave_row < 0) {
        // bound flip, basis unchanged
        t_.state[enter] = dir > 0 ? ColState::AtUpper : ColState::AtLower;
        t_.x[enter] = dir > 0 ? t_.upper[enter] : t_.lower[enter];
      } else {
        int leaving = t_.basis[leave_row];
        double wl = w[leave_row];
        t_.state[leaving] = dir * wl > 0.0 ? ColState::AtLower : ColState::AtUpper;
        if (!std::isfinite(t_.lower[leaving]) && t_.state[leaving] == ColState::AtLower)
          t_.state[leaving] = ColState::AtUpper;  // can only have hit the finite bound
        if (!std::isfinite(t_.upper[leaving]) && t_.state[leaving] == ColState::AtUpper)
          t_.state[leaving] = ColState::AtLower;
        t_.x[leaving] = t_.state[leaving] == ColState::AtLower ? t_.lower[leaving]
                                                               : t_.upper[leaving];
        // Devex update: alpha_j = (row r of B^-1) . a_j for nonbasic j
        if (!bland) {
          const double wq = dw[enter];
          const double inv_wl2 = 1.0 / (wl * wl);
          for (int i = 0; i < m; ++i)
            vrow[i] = t_.binv[static_cast<std::size_t>(i) * m + leave_row];
          for (int j = 0; j < t_.n_total; ++j) {
            if (j == enter || t_.state[j] == ColState::Basic) continue;
            if (t_.lower[j] == t_.upper[j]) continue;
            double alpha = 0.0;
            for (auto [i, a] : t_.cols[j]) alpha += vrow[i] * a;
            if (alpha == 0.0) continue;
            double cand = alpha * alpha * inv_wl2 * wq;
            if (cand > dw[j]) dw[j] = cand;
          }
          dw[leaving] = std::max(wq * inv_wl2, 1.0);
          if (dw[enter] > 1e7) std::fill(dw.begin(), dw.end(), 1.0);
        }
        t_.basis[leave_row] = enter;
        t_.state[enter] = ColState::Basic;
        cb[leave_row] = cost[enter];
        y_stale = true;
        update_inverse(w, leave_row);
        if (++pivots_since_refresh_ >= 256) refresh_basics();
      }

      double obj = objective(cost);
      if (obj < last_obj - 1e-12) {
        stall = 0;
        last_obj = obj;
      } else if (!bland && ++stall > 2L * (t_.m + t_.n_total)) {
        bland = true;  // anti-cycling fallback
      }
    }
  }

  double objective(const std::vector<double>& cost) const {
    double v = 0.0;
    for (int j = 0; j < t_.n_total; ++j)
      if (cost[j] != 0.0) v += cost[j] * t_.x[j];
    return v;
  }

  void duals(const std::vector<double>& cost, std::vector<double>& y) const {
    const int m = t_.m;
    y.assign(m, 0.0);
    std::vector<double> cb(m);
    for (int k = 0; k < m; ++k) cb[k] = cost[t_.basis[k]];
    for (int i = 0; i < m; ++i) {
      const double* col = &t_.binv[static_cast<std::size_t>(i) * m];
      double acc = 0.0;
      for (int k = 0; k < m; ++k) acc += cb[k] * col[k];
      y[i] = acc;
    }
  }

  // After phase 1: fix artificials at zero and try to drive basic ones out.
  void retire_artificials() {
    const int m = t_.m;
    for (int j = t_.art_begin(); j < t_.n_total; ++j) {
      t_.lower[j] = 0.0;
      t_.upper[j] = 0.0;
    }
    std::vector<double> w(m);
    for (int r = 0; r < m; ++r) {
      if (!t_.is_artificial(t_.basis[r])) continue;
      for (int j = 0; j < t_.art_begin(); ++j) {
        if (t_.state[j] == ColState::Basic) continue;
        double wr = 0.0;
        for (auto [i, a] : t_.cols[j])
          wr += a * t_.binv[static_cast<std::size_t>(i) * m + r];
        if (std::fabs(wr) <= 1e-7) continue;
        std::fill(w.begin(), w.end(), 0.0);
        for (auto [i, a] : t_.cols[j]) {
          const double* col = &t_.binv[static_cast<std::size_t>(i) * m];
          for (int k = 0; k < m; ++k) w[k] += a * col[k];
        }
        int art = t_.basis[r];
        t_.state[art] = ColState::AtLower;
        t_.x[art] = 0.0;
        t_.basis[r] = j;
        t_.state[j] = ColState::Basic;
        update_inverse(w, r);
        break;  // redundant rows keep their zero artificial basic
      }
    }
    refresh_basics();
  }

  long iterations() const { return iterations_; }
  void reset_iterations() { iterations_ = 0; }

  // Recompute basic values after external bound edits (warm restarts).
  void resync() { refresh_basics(); }

 private:
  void update_inverse(const std::vector<double>& w, int r) {
    const int m = t_.m;
    const double wr = w[r];
    for (int i = 0; i < m; ++i) {
      double* col = &t_.binv[static_cast<std::size_t>(i) * m];
      double piv = col[r] / wr;
      if (piv == 0.0) continue;
      for (int k = 0; k < m; ++k) col[k] -= w[k] * piv;
      col[r] = piv;
    }
  }

  // Recompute basic values from the inverse to limit drift.
  void refresh_basics() {
    pivots_since_refresh_ = 0;
    const int m = t_.m;
    std::vector<double> r = t_.b;
    for (int j = 0; j < t_.n_total; ++j) {
      if (t_.state[j] == ColState::Basic || t_.x[j] == 0.0) continue;
      for (auto [i, a] : t_.cols[j]) r[i] -= a * t_.x[j];
    }
    for (int k = 0; k < m; ++k) {
      double acc = 0.0;
      for (int i = 0; i < m; ++i)
        acc += t_.binv[static_cast<std::size_t>(i) * m + k] * r[i];
      t_.x[t_.basis[k]] = acc;
    }
  }

  Tableau& t_;
  const SolverConfig& cfg_;
  long iterations_ = 0;
  int pivots_since_refresh_ = 0;
};

LpSolution solve_unconstrained(const LinearProgram& lp, double sign) {
  LpSolution sol;
  sol.primal.assign(lp.num_variables(), 0.0);
  double obj = 0.0;
  for (std::size_t j = 0; j < lp.num_variables(); ++j) {
    const Variable& v = lp.variables()[j];
    double c = sign * v.objective;
    double xv;
    if (c > 0.0) xv = v.lower;
    else if (c < 0.0) xv = v.upper;
    else xv = nonbasic_start(v.lower, v.upper);
    if (!std::isfinite(xv)) {
      sol.status = SolveStatus::Unbounded;
      return sol;
    }
    sol.primal[j] = xv;
    obj += v.objective * xv;
  }
  sol.status = SolveStatus::Optimal;
  sol.objective = obj;
  return sol;
}

LpSolution extract_solution(const Tableau& t, const Simplex& engine, double sign) {
  LpSolution sol;
  sol.iterations = engine.iterations();
  sol.status = SolveStatus::Optimal;
  sol.primal.resize(t.n_struct);
  for (int j = 0; j < t.n_struct; ++j) sol.primal[j] = t.x[j] * t.col_scale[j];
  sol.objective = sign * engine.objective(t.cost);
  std::vector<double> y;
  engine.duals(t.cost, y);
  sol.dual.resize(t.m);
  for (int i = 0; i < t.m; ++i) sol.dual[i] = sign * y[i] * t.row_scale[i];
  return sol;
}

// Full two-phase run on a freshly initialised tableau.
LpSolution run_two_phase(Tableau& t, Simplex& engine, const SolverConfig& config,
                         double sign) {
  engine.run(t.phase1_cost);  // bounded below by zero, never "unbounded"
  LpSolution sol;
  sol.iterations = engine.iterations();
  // judge residual infeasibility row by row so one large-rhs row cannot
  // mask a genuine shortfall elsewhere
  for (int i = 0; i < t.m; ++i) {
    double art = std::fabs(t.x[t.art_begin() + i]);
    if (art > config.feasibility_tol * (1.0 + std::fabs(t.b[i])) * 10.0) {
      sol.status = SolveStatus::Infeasible;
      return sol;
    }
  }
  engine.retire_artificials();

  if (!engine.run(t.cost)) {
    sol.status = SolveStatus::Unbounded;
    sol.iterations = engine.iterations();
    return sol;
  }
  return extract_solution(t, engine, sign);
}

}  // namespace

LpSolution solve_lp(const LinearProgram& lp, const SolverConfig& config) {
  auto diags = validate_program(lp);
  if (!diags.empty())
    throw SolverError("malformed-program: " + diags.front().location + ": " +
                      diags.front().message);

  const double sign = lp.sense == Sense::Minimise ? 1.0 : -1.0;
  if (lp.num_constraints() == 0) return solve_unconstrained(lp, sign);

  Tableau t = build_tableau(lp, sign);
  equilibrate(t);
  Simplex engine(t, config);
  engine.initialise();
  return run_two_phase(t, engine, config, sign);
}

struct WarmLpSolver::Impl {
  SolverConfig cfg;
  double sign;
  LinearProgram lp;  // kept for the constraint-free path
  Tableau t;
  Simplex engine;
  std::vector<double> base_lower, base_upper;
  bool basis_valid = false;

  Impl(const LinearProgram& in, const SolverConfig& c)
      : cfg(c),
        sign(in.sense == Sense::Minimise ? 1.0 : -1.0),
        lp(in),
        t(build_tableau(lp, sign)),
        engine(t, cfg) {
    equilibrate(t);
    base_lower = t.lower;
    base_upper = t.upper;
    // artificials only ever live inside a cold start
    for (int j = t.art_begin(); j < t.n_total; ++j)
      base_lower[j] = base_upper[j] = 0.0;
  }

  LpSolution cold() {
    engine.reset_iterations();
    engine.initialise();
    basis_valid = true;
    return run_two_phase(t, engine, cfg, sign);
  }

  LpSolution solve(const std::vector<BoundOverride>& overrides) {
    if (t.m == 0) {
      LinearProgram copy = lp;
      for (const auto& [j, lu] : overrides) copy.set_bounds(j, lu.first, lu.second);
      return solve_unconstrained(copy, sign);
    }
    std::copy(base_lower.begin(), base_lower.end(), t.lower.begin());
    std::copy(base_upper.begin(), base_upper.end(), t.upper.begin());
    for (const auto& [j, lu] : overrides) {
      double cs = t.col_scale[j];
      t.lower[j] = std::isfinite(lu.first) ? lu.first / cs : lu.first;
      t.upper[j] = std::isfinite(lu.second) ? lu.second / cs : lu.second;
    }
    if (!basis_valid) return cold();
    try {
      return warm();
    } catch (const SolverError&) {
      basis_valid = false;
      throw;
    }
  }

  // Put every nonbasic column back on a bound consistent with its state and
  // the current (possibly overridden) bounds. Returns true if any x moved.
  bool realign_nonbasics() {
    bool moved = false;
    for (int j = 0; j < t.n_total; ++j) {
      double before = t.x[j];
      switch (t.state[j]) {
        case ColState::Basic:
          continue;
        case ColState::Free:
          if (t.x[j] < t.lower[j]) {
            t.state[j] = ColState::AtLower;
            t.x[j] = t.lower[j];
          } else if (t.x[j] > t.upper[j]) {
            t.state[j] = ColState::AtUpper;
            t.x[j] = t.upper[j];
          }
          break;
        case ColState::AtLower:
          if (std::isfinite(t.lower[j])) {
            t.x[j] = t.lower[j];
          } else if (std::isfinite(t.upper[j])) {
            t.state[j] = ColState::AtUpper;
            t.x[j] = t.upper[j];
          } else {
            t.state[j] = ColState::Free;
          }
          break;
        case ColState::AtUpper:
          if (std::isfinite(t.upper[j])) {
            t.x[j] = t.upper[j];
          } else if (std::isfinite(t.lower[j])) {
            t.state[j] = ColState::AtLower;
            t.x[j] = t.lower[j];
          } else {
            t.state[j] = ColState::Free;
          }
          break;
      }
      if (t.x[j] != before) moved = true;
    }
    return moved;
  }

  LpSolution warm() {
    engine.reset_iterations();
    double prev_total = kInf;

    // Repair pass: relax every violated basic's bound to its current value
    // and minimise the combined violation, so that during the run no basic
    // ever sits outside its working bounds (a violated basic chosen as the
    // leaving row would be snapped to its bound and break Ax = b). For a
    // single violated variable "still violating at the minimum" is an exact
    // infeasibility certificate: the relaxed problem is a superset of the
    // true one. With several, iterate while total violation shrinks and let
    // a cold solve arbitrate when it stalls.
    for (int round = 0; round < 40; ++round) {
      if (realign_nonbasics() || round == 0) engine.resync();

      std::vector<int> viol;
      double total = 0.0;
      for (int k = 0; k < t.m; ++k) {
        int j = t.basis[k];
        double tol_u = cfg.feasibility_tol * (1.0 + std::fabs(t.upper[j])) * 10.0;
        double tol_l = cfg.feasibility_tol * (1.0 + std::fabs(t.lower[j])) * 10.0;
        if (t.x[j] > t.upper[j] + tol_u) {
          viol.push_back(j);
          total += t.x[j] - t.upper[j];
        } else if (t.x[j] < t.lower[j] - tol_l) {
          viol.push_back(j);
          total += t.lower[j] - t.x[j];
        }
      }
      if (viol.empty()) {
        if (!engine.run(t.cost)) {
          LpSolution s;
          s.status = SolveStatus::Unbounded;
          s.iterations = engine.iterations();
          return s;
        }
        return extract_solution(t, engine, sign);
      }
      if (round > 0 && total >= prev_total - 1e-9) return cold();
      prev_total = total;

      std::vector<double> rc(t.n_total, 0.0);
      std::vector<std::pair<double, double>> saved(viol.size());
      std::vector<bool> above(viol.size());
      for (std::size_t v = 0; v < viol.size(); ++v) {
        int j = viol[v];
        saved[v] = {t.lower[j], t.upper[j]};
        above[v] = t.x[j] > t.upper[j];
        if (above[v]) {
          rc[j] = 1.0;
          t.upper[j] = t.x[j];
          if (!std::isfinite(saved[v].first))
            t.lower[j] = saved[v].second - 1e6 * (1.0 + std::fabs(saved[v].second));
        } else {
          rc[j] = -1.0;
          t.lower[j] = t.x[j];
          if (!std::isfinite(saved[v].second))
            t.upper[j] = saved[v].first + 1e6 * (1.0 + std::fabs(saved[v].first));
        }
      }
      engine.run(rc);
      for (std::size_t v = 0; v < viol.size(); ++v) {
        int j = viol[v];
        t.lower[j] = saved[v].first;
        t.upper[j] = saved[v].second;
        // a nonbasic left on a synthetic bound is re-seated on a true bound
        // by realign_nonbasics() at the top of the next round
      }
      if (viol.size() == 1) {
        int j = viol[0];
        double tol = cfg.feasibility_tol *
                     (1.0 + std::fabs(above[0] ? saved[0].second : saved[0].first)) * 10.0;
        bool still = above[0] ? t.x[j] > saved[0].second + tol
                              : t.x[j] < saved[0].first - tol;
        if (still && t.state[j] == ColState::Basic) {
          LpSolution s;
          s.status = SolveStatus::Infeasible;
          s.iterations = engine.iterations();
          return s;
        }
      }
    }
    return cold();
  }
};

WarmLpSolver::WarmLpSolver(const LinearProgram& lp, const SolverConfig& config) {
  auto diags = validate_program(lp);
  if (!diags.empty())
    throw SolverError("malformed-program: " + diags.front().location + ": " +
                      diags.front().message);
  impl_ = std::make_unique<Impl>(lp, config);
}

WarmLpSolver::~WarmLpSolver() = default;
WarmLpSolver::WarmLpSolver(WarmLpSolver&&) noexcept = default;
WarmLpSolver& WarmLpSolver::operator=(WarmLpSolver&&) noexcept = default;

LpSolution WarmLpSolver::solve(const std::vector<BoundOverride>& overrides) {
  return impl_->solve(overrides);
}

}  // namespace heatlink::solver
