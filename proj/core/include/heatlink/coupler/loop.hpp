#pragma once

#include <heatlink/coupler/regions.hpp>
#include <heatlink/coupler/transform.hpp>
#include <heatlink/power/catalog.hpp>
#include <heatlink/power/model.hpp>
#include <heatlink/rtn/model.hpp>

#include <functional>
#include <string>
#include <utility>
#include <vector>

namespace heatlink::coupler {

struct ReconstructedDemand {
  std::vector<std::vector<double>> heat_electric_mw;   // [region][hour]
  std::vector<std::vector<double>> h2_electricity_mw;  // [region][hour]
  std::vector<std::vector<double>> h2_heat_mw;         // [region][hour], MW of H2
  std::vector<std::vector<double>> gas_heat_mw;        // [region][hour], heat left on gas
};

// Everything the coupling loop needs; the scenario module materialises this
// from a scenario directory.
struct CoupledScenario {
  std::string name;
  power::PowerCatalog power_catalog;
  // one instance per planning period, heat-related series zeroed; the loop
  // fills them from the latest RTN mix
  std::vector<power::PowerSystemInstance> power;
  rtn::RtnInstance rtn;  // retail prices filled per iteration
  rtn::ReducedCalendar calendar;
  RegionMapping mapping;
  std::vector<std::vector<std::vector<double>>> heat_demand_mw;  // [period][region][hour]
  std::vector<double> cop_by_hour;
  double h2_boiler_efficiency = 0.9;
};

ReconstructedDemand reconstruct_power_demands(
    const RegionalState& state, const rtn::HydrogenPlan& plan, int period,
    const std::vector<std::string>& regions,
    const std::vector<std::vector<double>>& heat_demand_mw,
    const std::vector<double>& cop_by_hour, const rtn::ReducedCalendar& calendar,
    const rtn::RtnInstance& rtn_instance, const RegionMapping& mapping,
    double h2_boiler_efficiency);

struct IterationRecord {
  int iteration = 0;  // 1-based
  std::vector<std::vector<double>> wholesale_slice_price;  // [period][slice]
  std::vector<std::vector<double>> retail_price_per_mwh;   // [period][slice]
  rtn::HeatSupplyMix mix;
  rtn::HydrogenPlan plan;
  RegionalState regional;
  std::vector<power::PowerSolutionSummary> power;  // per period
  double total_heat_electric_twh = 0.0;
  double max_dshare = 0.0;
  double max_dprice = 0.0;
};

struct CouplingState {
  std::vector<IterationRecord> history;
  bool converged = false;
  bool failed = false;
  std::string failure;
};

// (max |share change|, max relative |price change|) over shared keys.
std::pair<double, double> convergence_metrics(const IterationRecord& prev,
                                              const IterationRecord& next);

using ProgressFn = std::function<void(const IterationRecord&)>;

// The soft-linking loop. Iteration 1 bootstraps the power model with fully
// electrified heat; each later iteration feeds RTN prices forward and the
// resulting mix back. Stops at max_iterations or when both convergence
// metrics fall below threshold. On an infeasible sub-solve the state carries
// a failure marker and the offending model is dumped under dump_dir.
CouplingState run_coupled(const CoupledScenario& sc, int max_iterations,
                          double threshold,
                          const solver::SolverConfig& config = {},
                          const std::string& dump_dir = "",
                          const ProgressFn& progress = nullptr);

}  // namespace heatlink::coupler
