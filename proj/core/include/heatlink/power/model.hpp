#pragma once

#include <map>
#include <string>
#include <vector>

#include "heatlink/power/catalog.hpp"
#include "heatlink/solver/simplex.hpp"

namespace heatlink::power {

struct Region {
  std::string name;
};

struct Corridor {
  int from = 0;
  int to = 0;
  double capacity_mw = 0.0;
  double reinforcement_cost_per_mw_yr = 0.0;  // stands in for distribution detail
};

/// One snapshot-period electricity system: co-optimised investment plus
/// hourly operation over the instance's (possibly weighted, reduced) calendar.
struct PowerSystemInstance {
  std::string period;  // "2030-2040", "2040-2050" or "2050-2060"
  std::vector<Region> regions;
  std::vector<Corridor> corridors;

  std::vector<double> hour_weights;  // length H, sums to the represented year
  std::vector<int> day_starts;       // storage cycles close within each block

  // [region][hour], MW
  std::vector<std::vector<double>> baseline_demand_mw;
  std::vector<std::vector<double>> heat_electric_demand_mw;
  std::vector<std::vector<double>> h2_electricity_demand_mw;
  // [technology name] -> hourly capacity factor in [0,1]
  std::map<std::string, std::vector<double>> renewable_profiles;

  double carbon_cap_g_per_kwh = 0.0;
  double adequacy_margin = 0.10;
  double reserve_demand_fraction = 0.03;
  double reserve_renewable_fraction = 0.10;
  double value_of_lost_load_per_mwh = 6000.0;
  double interconnector_capacity_mw = 0.0;
  int interconnector_region = 0;
  bool interconnector_energy_neutral = true;
  double h2_budget_mwh = 0.0;     // hydrogen available annually to the power sector
  double h2_price_per_mwh = 0.0;  // marginal cost of that hydrogen

  std::size_t hours() const { return hour_weights.size(); }
  double demand(std::size_t r, std::size_t h) const {
    return baseline_demand_mw[r][h] + heat_electric_demand_mw[r][h] +
           h2_electricity_demand_mw[r][h];
  }
};

struct PowerSolutionSummary {
  std::map<std::string, double> capacity_gw;       // per generation technology
  std::map<std::string, double> energy_twh;        // per generation technology
  double battery_gw = 0.0;
  double unserved_twh = 0.0;
  double emissions_mt = 0.0;
  double intensity_g_per_kwh = 0.0;
  std::vector<std::vector<double>> prices;  // [region][hour], £/MWh
  double mean_price = 0.0;                  // non-weighted mean over hours/regions
  double total_cost = 0.0;                  // annuitised £/yr
};

struct ModelError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

solver::LinearProgram build_power_model(const PowerSystemInstance& instance,
                                        const PowerCatalog& catalog);

/// Wholesale price per region and hour: the balance-row dual normalised by the
/// hour weight. Throws ModelError when the model lacks named balance rows.
std::vector<std::vector<double>> extract_hourly_prices(
    const solver::LinearProgram& lp, const solver::LpSolution& solution,
    const PowerSystemInstance& instance);

struct EmissionsReport {
  double mt_per_year = 0.0;
  double g_per_kwh = 0.0;
};
EmissionsReport compute_emissions(const solver::LinearProgram& lp,
                                  const solver::LpSolution& solution,
                                  const PowerSystemInstance& instance,
                                  const PowerCatalog& catalog);

/// Firm-capacity requirement (MW): peak demand scaled by the adequacy margin,
/// the deterministic stand-in for the LOLE criterion.
double adequacy_requirement(const PowerSystemInstance& instance);

PowerSolutionSummary summarise(const solver::LinearProgram& lp,
                               const solver::LpSolution& solution,
                               const PowerSystemInstance& instance,
                               const PowerCatalog& catalog);

}  // namespace heatlink::power
