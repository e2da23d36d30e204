#include <heatlink/rtn/catalog.hpp>

#include <cmath>

namespace heatlink::rtn {

std::vector<double> emission_caps(double baseline_mt, int periods) {
  if (baseline_mt < 0) throw CatalogError("emission baseline must be non-negative");
  if (periods < 1) throw CatalogError("need at least one planning period");
  std::vector<double> caps(periods);
  for (int p = 0; p < periods; ++p) {
    double frac = 1.0 - static_cast<double>(p + 1) / periods;
    caps[p] = baseline_mt * frac;
  }
  caps.back() = 0.0;
  return caps;
}

double npv(const std::vector<double>& cost_per_period, double annual_rate) {
  if (annual_rate < 0) throw CatalogError("discount rate must be non-negative");
  double total = 0.0;
  for (std::size_t p = 0; p < cost_per_period.size(); ++p)
    total += cost_per_period[p] * std::pow(1.0 + annual_rate, -10.0 * static_cast<double>(p));
  return total;
}

}  // namespace heatlink::rtn
