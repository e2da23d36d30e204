#include <heatlink/coupler/loop.hpp>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>

namespace heatlink::coupler {

using rtn::TimeSliceCalendar;

ReconstructedDemand reconstruct_power_demands(
    const RegionalState& state, const rtn::HydrogenPlan& plan, int period,
    const std::vector<std::string>& regions,
    const std::vector<std::vector<double>>& heat_demand_mw,
    const std::vector<double>& cop_by_hour, const rtn::ReducedCalendar& calendar,
    const rtn::RtnInstance& rtn_instance, const RegionMapping& mapping,
    double h2_boiler_efficiency) {
  const std::size_t R = regions.size();
  const std::size_t H = calendar.weights.size();
  if (heat_demand_mw.size() != R)
    throw CouplerError("heat demand series count does not match the regions");
  if (cop_by_hour.size() != H)
    throw CouplerError("COP series length does not match the calendar");

  ReconstructedDemand out;
  out.heat_electric_mw.assign(R, std::vector<double>(H, 0.0));
  out.h2_electricity_mw.assign(R, std::vector<double>(H, 0.0));
  out.h2_heat_mw.assign(R, std::vector<double>(H, 0.0));
  out.gas_heat_mw.assign(R, std::vector<double>(H, 0.0));

  const auto modes = rtn::heat_modes(rtn_instance.catalog);
  for (std::size_t r = 0; r < R; ++r) {
    if (heat_demand_mw[r].size() != H)
      throw CouplerError("heat demand series for region " + regions[r] +
                         " does not match the calendar");
    for (std::size_t h = 0; h < H; ++h) {
      int s = calendar.slice_of_hour[h];
      double heat = heat_demand_mw[r][h];
      if (heat == 0.0) continue;
      for (const auto& m : modes) {
        double share = state.share(period, regions[r], s, m.name);
        if (share <= 0) continue;
        switch (m.fuel) {
          case rtn::Fuel::Electricity: {
            if (cop_by_hour[h] <= 0)
              throw CouplerError("COP must be positive at hour " + std::to_string(h));
            out.heat_electric_mw[r][h] += heat * share / cop_by_hour[h];
            break;
          }
          case rtn::Fuel::Hydrogen:
            out.h2_heat_mw[r][h] += heat * share / h2_boiler_efficiency;
            break;
          case rtn::Fuel::Gas:
            out.gas_heat_mw[r][h] += heat * share;
            break;
        }
      }
    }
  }

  // hydrogen-production electricity: slice-level dispatch is an average MW,
  // so spreading it uniformly keeps the same MW at every member hour
  std::map<std::pair<std::string, int>, double> elec_mw;
  for (const auto& d : plan.dispatch) {
    if (d.period != period) continue;
    const rtn::ConversionTechnology* tech = nullptr;
    for (const auto& t : rtn_instance.catalog.conversion)
      if (t.name == d.technology) tech = &t;
    if (!tech || tech->electricity_per_mwh == 0) continue;
    elec_mw[{mapping.region_of(d.cell), d.slice}] += d.mw * tech->electricity_per_mwh;
  }
  for (std::size_t r = 0; r < R; ++r)
    for (std::size_t h = 0; h < H; ++h) {
      auto it = elec_mw.find({regions[r], calendar.slice_of_hour[h]});
      if (it != elec_mw.end()) out.h2_electricity_mw[r][h] += it->second;
    }
  return out;
}

std::pair<double, double> convergence_metrics(const IterationRecord& prev,
                                              const IterationRecord& next) {
  double dshare = 0.0;
  std::set<std::tuple<int, std::string, int, std::string>> keys;
  for (const auto& e : prev.regional.mix) keys.insert({e.period, e.region, e.slice, e.mode});
  for (const auto& e : next.regional.mix) keys.insert({e.period, e.region, e.slice, e.mode});
  for (const auto& [p, region, s, mode] : keys)
    dshare = std::max(dshare, std::fabs(next.regional.share(p, region, s, mode) -
                                        prev.regional.share(p, region, s, mode)));

  if (prev.retail_price_per_mwh.size() != next.retail_price_per_mwh.size())
    throw CouplerError("iteration records cover different period counts");
  double dprice = 0.0;
  for (std::size_t p = 0; p < prev.retail_price_per_mwh.size(); ++p) {
    const auto& a = prev.retail_price_per_mwh[p];
    const auto& b = next.retail_price_per_mwh[p];
    if (a.size() != b.size()) throw CouplerError("iteration records disagree on slices");
    for (std::size_t s = 0; s < a.size(); ++s)
      dprice = std::max(dprice, std::fabs(b[s] - a[s]) / std::max(std::fabs(a[s]), 1e-9));
  }
  return {dshare, dprice};
}

namespace {

void dump_model(const std::string& dump_dir, const std::string& label,
                const solver::LinearProgram& lp) {
  if (dump_dir.empty()) return;
  std::filesystem::create_directories(dump_dir);
  std::ofstream f(dump_dir + "/" + label + ".lp");
  f << solver::to_lp_format(lp);
}

double mean_gas_price(const rtn::RtnInstance& in) {
  double num = 0.0, den = 0.0;
  for (int s = 0; s < TimeSliceCalendar::kSlices; ++s) {
    double h = in.calendar.slice_member_hours(s);
    num += h * in.gas_price_per_mwh[s / TimeSliceCalendar::kDayPeriods];
    den += h;
  }
  return num / den;
}

}  // namespace

CouplingState run_coupled(const CoupledScenario& sc, int max_iterations,
                          double threshold, const solver::SolverConfig& config,
                          const std::string& dump_dir, const ProgressFn& progress) {
  if (max_iterations < 1) throw CouplerError("need at least one iteration");
  const int P = static_cast<int>(sc.power.size());
  if (P == 0) throw CouplerError("scenario has no power periods");
  if (static_cast<int>(sc.heat_demand_mw.size()) != P)
    throw CouplerError("heat demand periods do not match power periods");
  if (sc.rtn.periods != P)
    throw CouplerError("RTN horizon does not match the power periods");

  std::vector<std::string> regions;
  for (const auto& r : sc.power.front().regions) regions.push_back(r.name);
  sc.mapping.validate(sc.rtn.cells, regions);
  sc.calendar.validate(sc.rtn.calendar);

  CouplingState state;
  for (int iter = 1; iter <= max_iterations; ++iter) {
    IterationRecord rec;
    rec.iteration = iter;
    const IterationRecord* last = state.history.empty() ? nullptr : &state.history.back();

    // -------- power side, one LP per period --------
    for (int p = 0; p < P; ++p) {
      power::PowerSystemInstance inst = sc.power[p];
      const std::size_t H = sc.calendar.weights.size();
      if (last == nullptr) {
        // the bootstrap run assumes fully electrified heat
        for (std::size_t r = 0; r < regions.size(); ++r)
          for (std::size_t h = 0; h < H; ++h)
            inst.heat_electric_demand_mw[r][h] =
                sc.heat_demand_mw[p][r][h] / sc.cop_by_hour[h];
      } else {
        ReconstructedDemand rd = reconstruct_power_demands(
            last->regional, last->plan, p, regions, sc.heat_demand_mw[p],
            sc.cop_by_hour, sc.calendar, sc.rtn, sc.mapping, sc.h2_boiler_efficiency);
        for (std::size_t r = 0; r < regions.size(); ++r)
          for (std::size_t h = 0; h < H; ++h) {
            inst.heat_electric_demand_mw[r][h] = rd.heat_electric_mw[r][h];
            inst.h2_electricity_demand_mw[r][h] = rd.h2_electricity_mw[r][h];
          }
        // hydrogen for power draws on RTN production headroom at the
        // cheapest installed route's marginal operating cost
        double headroom_mwh = 0.0;
        double marginal = -1.0;
        double retail_mean = 0.0;
        for (int s = 0; s < TimeSliceCalendar::kSlices; ++s)
          retail_mean += sc.rtn.calendar.slice_member_hours(s) *
                         last->retail_price_per_mwh[p][s] / 8760.0;
        for (const auto& tech : sc.rtn.catalog.conversion) {
          double cap_gw = last->plan.capacity_gw(tech.name, p);
          if (cap_gw <= 0) continue;
          double dispatched = 0.0;
          for (const auto& d : last->plan.dispatch)
            if (d.technology == tech.name && d.period == p)
              dispatched += d.mw * sc.rtn.calendar.slice_member_hours(d.slice);
          headroom_mwh += std::max(0.0, cap_gw * 1000.0 * 8760.0 - dispatched);
          double op = tech.gas_per_mwh * mean_gas_price(sc.rtn) +
                      tech.electricity_per_mwh * retail_mean +
                      tech.biomass_per_mwh * sc.rtn.biomass_price_per_mwh;
          if (marginal < 0 || op < marginal) marginal = op;
        }
        inst.h2_budget_mwh = headroom_mwh;
        if (marginal > 0) inst.h2_price_per_mwh = marginal;
      }

      solver::LinearProgram lp = power::build_power_model(inst, sc.power_catalog);
      solver::LpSolution sol;
      try {
        sol = solve_lp(lp, config);
      } catch (const solver::SolverError& e) {
        sol.status = solver::SolveStatus::Infeasible;
      }
      if (sol.status != solver::SolveStatus::Optimal) {
        dump_model(dump_dir, "power_p" + std::to_string(p) + "_failed", lp);
        state.failed = true;
        state.failure = "power model for period " + std::to_string(p) +
                        " failed at iteration " + std::to_string(iter);
        return state;
      }
      rec.power.push_back(power::summarise(lp, sol, inst, sc.power_catalog));

      auto prices = power::extract_hourly_prices(lp, sol, inst);
      std::vector<double> mean_hourly(sc.calendar.weights.size(), 0.0);
      for (std::size_t h = 0; h < mean_hourly.size(); ++h) {
        for (std::size_t r = 0; r < regions.size(); ++r)
          mean_hourly[h] += prices[r][h];
        mean_hourly[h] /= static_cast<double>(regions.size());
      }
      auto wholesale = aggregate_to_slices(clamp_negative(mean_hourly), sc.calendar);
      rec.wholesale_slice_price.push_back(wholesale);
      RetailTransform retail;
      std::vector<double> rp(wholesale.size());
      for (std::size_t s = 0; s < wholesale.size(); ++s) rp[s] = retail(wholesale[s]);
      rec.retail_price_per_mwh.push_back(rp);

      double twh = 0.0;
      for (std::size_t r = 0; r < regions.size(); ++r)
        for (std::size_t h = 0; h < sc.calendar.weights.size(); ++h)
          twh += sc.calendar.weights[h] * inst.heat_electric_demand_mw[r][h] * 1e-6;
      rec.total_heat_electric_twh += twh;
    }

    // -------- RTN side --------
    rtn::RtnInstance rtn_in = sc.rtn;
    rtn_in.retail_price_per_mwh = rec.retail_price_per_mwh;
    solver::MixedIntegerProgram mip = rtn::build_rtn_model(rtn_in);
    solver::MipSolution msol;
    try {
      msol = solve_mip(mip, config);
    } catch (const solver::SolverError&) {
      msol.status = solver::SolveStatus::Infeasible;
    }
    if (msol.status != solver::SolveStatus::Optimal) {
      dump_model(dump_dir, "rtn_failed", mip.lp);
      state.failed = true;
      state.failure = "RTN model failed at iteration " + std::to_string(iter);
      return state;
    }
    rec.mix = rtn::extract_heat_mix(mip.lp, msol, rtn_in);
    rec.plan = rtn::extract_hydrogen_plan(mip.lp, msol, rtn_in);
    rec.regional = aggregate_cells_to_regions(rec.plan, rec.mix, sc.mapping, sc.rtn);

    if (last != nullptr) {
      auto [ds, dp] = convergence_metrics(*last, rec);
      rec.max_dshare = ds;
      rec.max_dprice = dp;
    }
    state.history.push_back(std::move(rec));
    if (progress) progress(state.history.back());
    if (iter >= 2 && state.history.back().max_dshare < threshold &&
        state.history.back().max_dprice < threshold) {
      state.converged = true;
      break;
    }
  }
  return state;
}

}  // namespace heatlink::coupler
