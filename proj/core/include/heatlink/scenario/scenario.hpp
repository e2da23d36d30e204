#pragma once

#include <filesystem>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "heatlink/coupler/loop.hpp"
#include "heatlink/power/catalog.hpp"
#include "heatlink/rtn/catalog.hpp"
#include "heatlink/rtn/model.hpp"

namespace heatlink::scenario {

struct ScenarioError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Columnar view of one spatial cell as stored in cells.csv: coordinates,
/// site flags, and the cell's share of its region's sectoral heat demand.
struct CellRecord {
  std::string id;
  double x = 0.0;
  double y = 0.0;
  bool cavern_site = false;
  bool co2_site = false;
  double domestic_share = 0.0;   // of the region's domestic heat demand
  double commercial_share = 0.0; // of the region's commercial heat demand
};

struct CorridorRecord {
  std::string from;
  std::string to;
  double capacity_mw = 0.0;
  double reinforcement_cost_per_mw_yr = 0.0;
};

/// Everything a study needs, fully materialised from a scenario directory:
/// catalogs, topology, profiles, and policy scalars.
struct Scenario {
  std::string name;
  int base_year = 2020;
  int periods = 3;
  std::vector<int> period_start_years{2030, 2040, 2050};
  std::vector<std::string> regions;

  power::PowerCatalog power_catalog;
  rtn::RtnCatalog rtn_catalog;

  std::vector<CellRecord> cells;
  std::vector<rtn::Adjacency> adjacency;
  std::map<std::string, std::string> region_of_cell;
  std::vector<CorridorRecord> corridors;

  // Calendar: "full_year" or "representative_day"; profiles carry one row
  // per calendar hour.
  std::string calendar_kind = "representative_day";
  rtn::TimeSliceCalendar calendar;

  // Profiles, [region][hour] in MW (or capacity factor for renewables).
  std::vector<std::vector<double>> baseline_demand_mw;
  std::vector<std::vector<double>> heat_domestic_mw;
  std::vector<std::vector<double>> heat_commercial_mw;
  std::vector<double> cop_by_hour;
  std::map<std::string, std::vector<double>> renewable_profiles;

  // Policies and prices.
  double heat_demand_2020_twh = 541.0;
  double heat_demand_2050_twh = 476.0;
  std::vector<double> carbon_cap_g_per_kwh;  // power sector, per period
  double heat_emission_baseline_mt = 90.0;
  double build_limit_gw_per_yr = 8.0;
  double discount_rate = 0.035;
  std::vector<double> gas_price_per_mwh{17.71, 16.76, 15.81, 17.71};
  double biomass_price_per_mwh = 30.0;
  std::vector<double> legacy_gas_factor{1.0, 0.5, 0.0};
  double retail_ratio = 2.2;
  double retail_cap_per_mwh = 528.0;
  double adequacy_margin = 0.10;
  double value_of_lost_load_per_mwh = 6000.0;
  double reserve_demand_fraction = 0.03;
  double reserve_renewable_fraction = 0.10;
  double interconnector_capacity_mw = 0.0;
  std::string interconnector_region;
  double h2_boiler_efficiency = 0.9;
};

struct ValidationIssue {
  enum class Severity { Error, Warning };
  Severity severity = Severity::Error;
  std::string location;  // file or logical field the problem lives in
  std::string message;
};

struct ValidationReport {
  std::vector<ValidationIssue> issues;  // sorted by (location, message)
  std::size_t error_count() const;
  bool ok() const { return error_count() == 0; }
};

/// Annual GB heat demand in TWh: linear between the 2020 and 2050 anchors,
/// flat from 2050 to 2060. Throws ScenarioError outside [2020, 2060].
double heat_demand_trajectory(int year, double twh_2020 = 541.0,
                              double twh_2050 = 476.0);

Scenario load_scenario(const std::filesystem::path& root);
void save_scenario(const Scenario& sc, const std::filesystem::path& root);
ValidationReport validate(const Scenario& sc);

/// Expands a validated Scenario into the solver-facing coupled form:
/// per-period power instances, the RTN instance, and the reduced calendar.
/// An explicit calendar overrides the manifest's calendar_kind; profiles
/// must then match its hour count.
coupler::CoupledScenario to_coupled(const Scenario& sc);
coupler::CoupledScenario to_coupled(const Scenario& sc,
                                    const rtn::ReducedCalendar& calendar);

/// Load a reduced calendar from CSV (hour, weight, slice, day_start).
rtn::ReducedCalendar load_reduced_calendar(const std::filesystem::path& file);

/// Persist a coupling run: one directory per iteration holding capacities,
/// prices, heat mix, and hydrogen plan CSVs, plus a run-level manifest.
/// Refuses a non-empty directory unless force is set.
void write_results(const coupler::CouplingState& state,
                   const std::filesystem::path& out, bool force = false);

}  // namespace heatlink::scenario
