#pragma once

#include <heatlink/rtn/calendar.hpp>
#include <heatlink/rtn/catalog.hpp>
#include <heatlink/solver/lp.hpp>
#include <heatlink/solver/simplex.hpp>

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace heatlink::rtn {

inline constexpr int kSectors = 2;  // 0 = domestic, 1 = commercial
std::string sector_name(int sector);

enum class Fuel { Electricity, Hydrogen, Gas };

// One dispatchable end-use mode; hybrids contribute two (electric and H2).
struct HeatMode {
  std::size_t tech = 0;
  std::string name;
  Fuel fuel = Fuel::Electricity;
  double cop = 0.0;
  double efficiency = 0.0;
  double capacity_factor = 1.0;  // hybrid sub-units carry half the rating
};

std::vector<HeatMode> heat_modes(const RtnCatalog& cat);

struct Cell {
  std::string id;
  double x = 0.0, y = 0.0;
  bool cavern_site = false;
  bool co2_site = false;
  std::string region;
  // average MW of heat demand, [sector][period][slice]
  std::vector<std::vector<std::vector<double>>> heat_demand_mw;
};

struct Adjacency {
  std::string a, b;
  double km = 0.0;
};

struct RtnInstance {
  TimeSliceCalendar calendar;
  std::vector<Cell> cells;
  std::vector<Adjacency> edges;
  RtnCatalog catalog;
  int periods = 3;
  std::vector<int> period_start_years{2030, 2040, 2050};
  EmissionTrajectory emissions;
  double discount_rate = 0.035;
  double build_limit_gw_per_yr = 8.0;
  // [season]: winter, autumn/spring, summer, winter-peak
  std::vector<double> gas_price_per_mwh{17.71, 16.76, 15.81, 17.71};
  double biomass_price_per_mwh = 30.0;
  double gas_emission_t_per_mwh = 0.184;
  // legacy gas boiler headroom as a share of cell peak demand, per period
  std::vector<double> legacy_gas_factor{1.0, 0.5, 0.0};
  // [period][slice] retail electricity price from the coupling loop
  std::vector<std::vector<double>> retail_price_per_mwh;

  std::size_t cell_index(const std::string& id) const;
};

struct MixEntry {
  int period = 0;
  std::string cell;
  int sector = 0;
  int slice = 0;
  std::string mode;  // technology, or hybrid_electric / hybrid_h2
  double share = 0.0;
};

struct HeatSupplyMix {
  std::vector<MixEntry> entries;
};

struct HydrogenPlan {
  struct Production {
    std::string technology, cell;
    int period = 0;
    double capacity_gw = 0.0;
  };
  struct Storage {
    std::string type, cell;
    int period = 0;
    double units = 0.0;
  };
  struct Pipeline {
    std::string carrier, diameter_class, a, b;
    int period = 0;
    double units = 0.0;
  };
  struct Dispatch {
    std::string technology, cell;
    int period = 0, slice = 0;
    double mw = 0.0;
  };
  std::vector<Production> production;
  std::vector<Storage> storage;
  std::vector<Pipeline> pipelines;
  std::vector<Dispatch> dispatch;

  bool empty() const {
    return production.empty() && storage.empty() && pipelines.empty();
  }
  double capacity_gw(const std::string& technology, int period) const;
};

class RtnModelError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

solver::MixedIntegerProgram build_rtn_model(const RtnInstance& in);

HeatSupplyMix extract_heat_mix(const solver::LinearProgram& lp,
                               const solver::MipSolution& sol,
                               const RtnInstance& in);
HydrogenPlan extract_hydrogen_plan(const solver::LinearProgram& lp,
                                   const solver::MipSolution& sol,
                                   const RtnInstance& in);

// Residual emissions net of negative-emission offsets, recomputed from
// dispatch independently of the model's cap row. [period], Mt/yr.
std::vector<double> audit_emissions(const solver::LinearProgram& lp,
                                    const solver::MipSolution& sol,
                                    const RtnInstance& in);

// New production capacity added per period, GW.
std::vector<double> audit_build_rate(const solver::LinearProgram& lp,
                                     const solver::MipSolution& sol,
                                     const RtnInstance& in);

}  // namespace heatlink::rtn
