#pragma once

#include <cmath>
#include <limits>
#include <string>
#include <vector>

namespace heatlink::power {

struct GenerationTechnology {
  std::string name;
  double capital_cost_per_kw = 0.0;
  double fixed_om_per_kw_yr = 0.0;
  double discount_rate = 0.0;
  double lifetime_years = 1.0;
  double carbon_kg_per_mwh = 0.0;
  double variable_cost_per_mwh = 0.0;
  double derating = 0.0;  // firm-capacity contribution
  bool is_hydrogen_fuelled = false;
  bool is_renewable = false;  // output follows an hourly capacity-factor profile
  double h2_per_mwh_el = 0.0;  // MWh of hydrogen burned per MWh electricity
  double max_build_mw = std::numeric_limits<double>::infinity();
};

struct StorageTechnology {
  std::string name = "battery";
  double capital_cost_per_kw = 395.0;
  double discount_rate = 0.07;
  double lifetime_years = 20.0;
  double duration_hours = 4.0;
  double round_trip_efficiency = 0.85;
  double max_build_mw = std::numeric_limits<double>::infinity();
};

struct PowerCatalog {
  std::vector<GenerationTechnology> generation;
  std::vector<StorageTechnology> storage;

  const GenerationTechnology* find(const std::string& name) const {
    for (const auto& g : generation)
      if (g.name == name) return &g;
    return nullptr;
  }
};

/// Capital recovery factor r / (1 - (1+r)^-L); degenerates to 1/L at r = 0.
inline double annuity_factor(double rate, double lifetime_years) {
  if (rate == 0.0) return 1.0 / lifetime_years;
  return rate / (1.0 - std::pow(1.0 + rate, -lifetime_years));
}

inline double annual_capacity_cost_per_mw(double capital_per_kw, double rate,
                                          double lifetime_years,
                                          double fixed_om_per_kw_yr = 0.0) {
  return 1000.0 * (capital_per_kw * annuity_factor(rate, lifetime_years) +
                   fixed_om_per_kw_yr);
}

}  // namespace heatlink::power
