#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace heatlink::rtn {

// MWh of hydrogen per kg (LHV ~120 MJ/kg); converts pipeline kg/s to MW
inline constexpr double kH2MwhPerKg = 0.0333;
inline constexpr double kH2MwPerKgPerS = kH2MwhPerKg * 3600.0;  // ~120 MW per kg/s

// A gas-, electricity- or biomass-fed hydrogen production route. All
// per-MWh coefficients are per MWh of hydrogen output.
struct ConversionTechnology {
  std::string name;
  double unit_capacity_gw = 0.0;
  std::vector<double> capex_per_kw;  // one entry per planning period
  double gas_per_mwh = 0.0;
  double electricity_per_mwh = 0.0;
  double biomass_per_mwh = 0.0;
  double co2_captured_t_per_mwh = 0.0;
  double co2_residual_t_per_mwh = 0.0;  // negative for biomass with CCS
  int lifetime_years = 30;
};

struct HeatTechnology {
  std::string name;
  double capex_per_kwth = 0.0;
  double efficiency = 0.0;    // fuel-burning sub-unit; 0 when absent
  double cop = 0.0;           // heat-pump sub-unit; 0 when absent
  bool uses_gas = false;      // fuel is natural gas rather than hydrogen
  bool is_hybrid = false;     // both sub-units present, each rated at half capacity
  double max_capacity_share = -1.0;  // cap vs cell peak demand; <0 means none
};

struct StorageAsset {
  std::string name;
  enum class Kind { HydrogenStore, Co2Well } kind = Kind::HydrogenStore;
  double capex_m_per_unit = 0.0;
  double capacity_gwh = 0.0;        // per unit; 0 for wells (unbounded store)
  double max_injectivity_mw = 0.0;  // wells: converted from Mt/yr by the loader
  double max_deliverability_mw = 0.0;
  bool requires_cavern_site = false;
  bool intra_day_only = false;  // pressurised vessels cycle within a day
  double well_mt_per_year = 0.0;
};

enum class PipelineCarrier { Hydrogen, Co2Onshore, Co2Offshore };

struct PipelineOption {
  std::string name;
  PipelineCarrier carrier = PipelineCarrier::Hydrogen;
  double capex_k_per_km = 0.0;
  double max_flow_kg_s = 0.0;
  double loss_pct_per_km = 0.0;
};

struct EmissionTrajectory {
  double baseline_mt = 0.0;
  std::vector<double> caps_mt;
};

class CatalogError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Linear descent from the 2020 baseline to zero at the 2050 period start:
// caps at period starts 2030/2040/2050 are 2/3, 1/3 and 0 of baseline.
std::vector<double> emission_caps(double baseline_mt, int periods = 3);

// Discounts a per-period (decade) cost stream to the base year.
double npv(const std::vector<double>& cost_per_period, double annual_rate);

struct RtnCatalog {
  std::vector<ConversionTechnology> conversion;
  std::vector<HeatTechnology> heat;
  std::vector<StorageAsset> storage;
  std::vector<PipelineOption> pipelines;
};

}  // namespace heatlink::rtn
