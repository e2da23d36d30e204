#include "heatlink/power/model.hpp"

#include <algorithm>
#include <cmath>

namespace heatlink::power {

using solver::LinearProgram;
using solver::LpSolution;
using solver::Relation;
using solver::kInf;

namespace {

std::string key(const std::string& stem, const std::string& a) {
  return stem + "[" + a + "]";
}
std::string key(const std::string& stem, const std::string& a, std::size_t h) {
  return stem + "[" + a + "," + std::to_string(h) + "]";
}
std::string key2(const std::string& stem, const std::string& a,
                 const std::string& b) {
  return stem + "[" + a + "," + b + "]";
}
std::string key(const std::string& stem, const std::string& a, const std::string& b,
                std::size_t h) {
  return stem + "[" + a + "," + b + "," + std::to_string(h) + "]";
}

void check_instance(const PowerSystemInstance& in, const PowerCatalog& catalog) {
  if (catalog.generation.empty())
    throw ModelError("empty technology catalog");
  if (in.regions.empty()) throw ModelError("instance has no regions");
  const std::size_t H = in.hours();
  if (H == 0) throw ModelError("instance has no hours");
  auto check_series = [&](const std::vector<std::vector<double>>& s, const char* what) {
    if (s.size() != in.regions.size())
      throw ModelError(std::string(what) + ": expected one series per region");
    for (const auto& v : s)
      if (v.size() != H)
        throw ModelError("inconsistent-profile-length: " + std::string(what));
  };
  check_series(in.baseline_demand_mw, "baseline demand");
  check_series(in.heat_electric_demand_mw, "heat-electric demand");
  check_series(in.h2_electricity_demand_mw, "hydrogen-production demand");
  for (const auto& g : catalog.generation) {
    if (!g.is_renewable) continue;
    auto it = in.renewable_profiles.find(g.name);
    if (it == in.renewable_profiles.end())
      throw ModelError("missing renewable profile for " + g.name);
    if (it->second.size() != H)
      throw ModelError("inconsistent-profile-length: profile " + g.name);
  }
}

// Day block containing hour h starts at day_starts entry; defaults to one
// block spanning the whole calendar.
std::vector<int> day_blocks(const PowerSystemInstance& in) {
  if (in.day_starts.empty()) return {0};
  return in.day_starts;
}

int block_start_of(const std::vector<int>& starts, int h) {
  int s = starts.front();
  for (int b : starts)
    if (b <= h) s = b;
  return s;
}

int previous_hour(const PowerSystemInstance& in, const std::vector<int>& starts,
                  int h) {
  int start = block_start_of(starts, h);
  if (h > start) return h - 1;
  // wrap to the last hour of this block
  int end = static_cast<int>(in.hours()) - 1;
  for (int b : starts)
    if (b > h) {
      end = b - 1;
      break;
    }
  return end;
}

double battery_derating(const StorageTechnology& s) {
  return std::min(1.0, s.duration_hours / 4.0) * 0.95;
}

}  // namespace

double adequacy_requirement(const PowerSystemInstance& instance) {
  double peak = 0.0;
  for (std::size_t h = 0; h < instance.hours(); ++h) {
    double total = 0.0;
    for (std::size_t r = 0; r < instance.regions.size(); ++r)
      total += instance.demand(r, h);
    peak = std::max(peak, total);
  }
  return peak * (1.0 + instance.adequacy_margin);
}

LinearProgram build_power_model(const PowerSystemInstance& in,
                                const PowerCatalog& catalog) {
  check_instance(in, catalog);
  const std::size_t H = in.hours();
  const std::size_t R = in.regions.size();
  LinearProgram lp;

  const bool has_batt = !catalog.storage.empty();
  const StorageTechnology batt = has_batt ? catalog.storage.front()
                                          : StorageTechnology{};
  const double eta = std::sqrt(batt.round_trip_efficiency);

  // --- investment variables ---
  for (const auto& g : catalog.generation)
    for (std::size_t r = 0; r < R; ++r)
      lp.add_variable(key2("cap", g.name, in.regions[r].name),
                      0.0, g.max_build_mw,
                      annual_capacity_cost_per_mw(g.capital_cost_per_kw,
                                                  g.discount_rate, g.lifetime_years,
                                                  g.fixed_om_per_kw_yr));
  if (has_batt)
    for (std::size_t r = 0; r < R; ++r)
      lp.add_variable(key("scap", in.regions[r].name), 0.0, batt.max_build_mw,
                      annual_capacity_cost_per_mw(batt.capital_cost_per_kw,
                                                  batt.discount_rate,
                                                  batt.lifetime_years));
  for (std::size_t c = 0; c < in.corridors.size(); ++c)
    lp.add_variable(key("texp", std::to_string(c)), 0.0, kInf,
                    in.corridors[c].reinforcement_cost_per_mw_yr);

  // --- operation variables ---
  for (std::size_t h = 0; h < H; ++h) {
    const double w = in.hour_weights[h];
    for (const auto& g : catalog.generation) {
      double vc = g.variable_cost_per_mwh + g.h2_per_mwh_el * in.h2_price_per_mwh;
      for (std::size_t r = 0; r < R; ++r)
        lp.add_variable(key("gen", g.name, in.regions[r].name, h), 0.0, kInf, w * vc);
    }
    if (has_batt)
      for (std::size_t r = 0; r < R; ++r) {
        lp.add_variable(key("ch", in.regions[r].name, h), 0.0, kInf, 0.0);
        lp.add_variable(key("dis", in.regions[r].name, h), 0.0, kInf, 0.0);
        lp.add_variable(key("soc", in.regions[r].name, h), 0.0, kInf, 0.0);
      }
    for (std::size_t c = 0; c < in.corridors.size(); ++c)
      lp.add_variable(key("flow", std::to_string(c), h), -kInf, kInf, 0.0);
    if (in.interconnector_capacity_mw > 0.0) {
      lp.add_variable(key("imp", std::to_string(h)), 0.0,
                      in.interconnector_capacity_mw, 0.0);
      lp.add_variable(key("exp", std::to_string(h)), 0.0,
                      in.interconnector_capacity_mw, 0.0);
    }
    for (std::size_t r = 0; r < R; ++r)
      lp.add_variable(key("uns", in.regions[r].name, h), 0.0, kInf,
                      w * in.value_of_lost_load_per_mwh);
  }

  auto var = [&lp](const std::string& name) { return lp.variable_index(name); };
  const std::vector<int> starts = day_blocks(in);

  // --- per-hour rows ---
  for (std::size_t h = 0; h < H; ++h) {
    for (std::size_t r = 0; r < R; ++r) {
      const std::string& rn = in.regions[r].name;
      std::vector<std::pair<int, double>> bal;
      for (const auto& g : catalog.generation)
        bal.push_back({var(key("gen", g.name, rn, h)), 1.0});
      if (has_batt) {
        bal.push_back({var(key("dis", rn, h)), 1.0});
        bal.push_back({var(key("ch", rn, h)), -1.0});
      }
      for (std::size_t c = 0; c < in.corridors.size(); ++c) {
        if (in.corridors[c].to == static_cast<int>(r))
          bal.push_back({var(key("flow", std::to_string(c), h)), 1.0});
        if (in.corridors[c].from == static_cast<int>(r))
          bal.push_back({var(key("flow", std::to_string(c), h)), -1.0});
      }
      if (in.interconnector_capacity_mw > 0.0 &&
          in.interconnector_region == static_cast<int>(r)) {
        bal.push_back({var(key("imp", std::to_string(h))), 1.0});
        bal.push_back({var(key("exp", std::to_string(h))), -1.0});
      }
      bal.push_back({var(key("uns", rn, h)), 1.0});
      lp.add_constraint(key("balance", rn, h), std::move(bal), Relation::Equal,
                        in.demand(r, h));

      // generation within available capacity
      for (const auto& g : catalog.generation) {
        double avail = 1.0;
        if (g.is_renewable) avail = in.renewable_profiles.at(g.name)[h];
        int gv = var(key("gen", g.name, rn, h));
        if (avail <= 0.0) {
          lp.set_bounds(gv, 0.0, 0.0);
          continue;
        }
        lp.add_constraint(key("gcap", g.name, rn, h),
                          {{gv, 1.0}, {var(key2("cap", g.name, rn)), -avail}},
                          Relation::LessEqual, 0.0);
      }

      if (has_batt) {
        int prev = previous_hour(in, starts, static_cast<int>(h));
        lp.add_constraint(key("sbal", rn, h),
                          {{var(key("soc", rn, h)), 1.0},
                           {var(key("soc", rn, static_cast<std::size_t>(prev))), -1.0},
                           {var(key("ch", rn, h)), -eta},
                           {var(key("dis", rn, h)), 1.0 / eta}},
                          Relation::Equal, 0.0);
        lp.add_constraint(key("scap_e", rn, h),
                          {{var(key("soc", rn, h)), 1.0},
                           {var(key("scap", rn)), -batt.duration_hours}},
                          Relation::LessEqual, 0.0);
        lp.add_constraint(key("scap_c", rn, h),
                          {{var(key("ch", rn, h)), 1.0}, {var(key("scap", rn)), -1.0}},
                          Relation::LessEqual, 0.0);
        lp.add_constraint(key("scap_d", rn, h),
                          {{var(key("dis", rn, h)), 1.0}, {var(key("scap", rn)), -1.0}},
                          Relation::LessEqual, 0.0);
      }
    }

    // corridor limits with reinforcement headroom
    for (std::size_t c = 0; c < in.corridors.size(); ++c) {
      int fv = var(key("flow", std::to_string(c), h));
      int ev = var(key("texp", std::to_string(c)));
      lp.add_constraint(key("tfwd", std::to_string(c), h), {{fv, 1.0}, {ev, -1.0}},
                        Relation::LessEqual, in.corridors[c].capacity_mw);
      lp.add_constraint(key("trev", std::to_string(c), h), {{fv, -1.0}, {ev, -1.0}},
                        Relation::LessEqual, in.corridors[c].capacity_mw);
    }

    // spinning reserve: dispatchable and battery headroom covers a demand
    // share plus a share of instantaneous renewable output
    std::vector<std::pair<int, double>> res;
    double rhs = 0.0;
    for (std::size_t r = 0; r < R; ++r) {
      const std::string& rn = in.regions[r].name;
      rhs += in.reserve_demand_fraction * in.demand(r, h);
      for (const auto& g : catalog.generation) {
        if (g.is_renewable) {
          res.push_back({var(key("gen", g.name, rn, h)),
                         -in.reserve_renewable_fraction});
        } else {
          res.push_back({var(key2("cap", g.name, rn)), 1.0});
          res.push_back({var(key("gen", g.name, rn, h)), -1.0});
        }
      }
      if (has_batt) {
        res.push_back({var(key("scap", rn)), 1.0});
        res.push_back({var(key("dis", rn, h)), -1.0});
      }
    }
    // shortfall priced at VoLL keeps all-renewable systems solvable
    res.push_back({lp.add_variable(key("rsl", std::to_string(h)), 0.0, kInf,
                                   in.hour_weights[h] *
                                       in.value_of_lost_load_per_mwh),
                   1.0});
    lp.add_constraint(key("reserve", std::to_string(h)), std::move(res),
                      Relation::GreaterEqual, rhs);
  }

  // --- annual rows ---
  std::vector<std::pair<int, double>> adequacy;
  for (const auto& g : catalog.generation)
    for (std::size_t r = 0; r < R; ++r)
      adequacy.push_back({var(key2("cap", g.name, in.regions[r].name)),
                          g.derating});
  if (has_batt)
    for (std::size_t r = 0; r < R; ++r)
      adequacy.push_back({var(key("scap", in.regions[r].name)), battery_derating(batt)});
  double year_hours = 0.0;
  for (double w : in.hour_weights) year_hours += w;
  // priced as a year of lost load per MW short, so it only absorbs
  // genuinely unmeetable firm-capacity requirements
  adequacy.push_back({lp.add_variable("adq_slack", 0.0, kInf,
                                      in.value_of_lost_load_per_mwh * year_hours),
                      1.0});
  lp.add_constraint("adequacy", std::move(adequacy), Relation::GreaterEqual,
                    adequacy_requirement(in));

  std::vector<std::pair<int, double>> carbon;
  double supplied = 0.0;
  for (std::size_t h = 0; h < H; ++h) {
    for (std::size_t r = 0; r < R; ++r) {
      supplied += in.hour_weights[h] * in.demand(r, h);
      for (const auto& g : catalog.generation)
        if (g.carbon_kg_per_mwh != 0.0)
          carbon.push_back({var(key("gen", g.name, in.regions[r].name, h)),
                            in.hour_weights[h] * g.carbon_kg_per_mwh});
    }
  }
  if (!carbon.empty())
    lp.add_constraint("carbon", std::move(carbon), Relation::LessEqual,
                      in.carbon_cap_g_per_kwh * supplied);

  if (in.interconnector_capacity_mw > 0.0 && in.interconnector_energy_neutral) {
    std::vector<std::pair<int, double>> neutral;
    for (std::size_t h = 0; h < H; ++h) {
      neutral.push_back({var(key("imp", std::to_string(h))), in.hour_weights[h]});
      neutral.push_back({var(key("exp", std::to_string(h))), -in.hour_weights[h]});
    }
    lp.add_constraint("ic_neutral", std::move(neutral), Relation::Equal, 0.0);
  }

  std::vector<std::pair<int, double>> h2;
  for (std::size_t h = 0; h < H; ++h)
    for (std::size_t r = 0; r < R; ++r)
      for (const auto& g : catalog.generation)
        if (g.is_hydrogen_fuelled && g.h2_per_mwh_el > 0.0)
          h2.push_back({var(key("gen", g.name, in.regions[r].name, h)),
                        in.hour_weights[h] * g.h2_per_mwh_el});
  if (!h2.empty())
    lp.add_constraint("h2_fuel", std::move(h2), Relation::LessEqual, in.h2_budget_mwh);

  return lp;
}

std::vector<std::vector<double>> extract_hourly_prices(
    const LinearProgram& lp, const LpSolution& solution,
    const PowerSystemInstance& in) {
  if (solution.status != solver::SolveStatus::Optimal)
    throw ModelError("prices require an optimal solution");
  std::vector<std::vector<double>> prices(in.regions.size(),
                                          std::vector<double>(in.hours()));
  for (std::size_t r = 0; r < in.regions.size(); ++r)
    for (std::size_t h = 0; h < in.hours(); ++h) {
      std::string row = key("balance", in.regions[r].name, h);
      if (!lp.has_constraint(row))
        throw ModelError("missing-row: " + row +
                         " (model built without named balance rows)");
      prices[r][h] = solution.dual_of(lp, row) / in.hour_weights[h];
    }
  return prices;
}

EmissionsReport compute_emissions(const LinearProgram& lp, const LpSolution& solution,
                                  const PowerSystemInstance& in,
                                  const PowerCatalog& catalog) {
  if (solution.status != solver::SolveStatus::Optimal)
    throw ModelError("emissions require an optimal solution");
  double kg = 0.0, supplied = 0.0;
  for (std::size_t h = 0; h < in.hours(); ++h)
    for (std::size_t r = 0; r < in.regions.size(); ++r) {
      supplied += in.hour_weights[h] * in.demand(r, h);
      for (const auto& g : catalog.generation)
        kg += in.hour_weights[h] * g.carbon_kg_per_mwh *
              solution.value(lp, key("gen", g.name, in.regions[r].name, h));
    }
  EmissionsReport rep;
  rep.mt_per_year = kg * 1e-9;
  rep.g_per_kwh = supplied > 0.0 ? kg / supplied : 0.0;
  return rep;
}

PowerSolutionSummary summarise(const LinearProgram& lp, const LpSolution& solution,
                               const PowerSystemInstance& in,
                               const PowerCatalog& catalog) {
  if (solution.status != solver::SolveStatus::Optimal)
    throw ModelError("summary requires an optimal solution");
  PowerSolutionSummary s;
  for (const auto& g : catalog.generation) {
    double cap = 0.0, energy = 0.0;
    for (std::size_t r = 0; r < in.regions.size(); ++r) {
      cap += solution.value(lp, key2("cap", g.name, in.regions[r].name));
      for (std::size_t h = 0; h < in.hours(); ++h)
        energy += in.hour_weights[h] *
                  solution.value(lp, key("gen", g.name, in.regions[r].name, h));
    }
    s.capacity_gw[g.name] = cap * 1e-3;
    s.energy_twh[g.name] = energy * 1e-6;
  }
  if (!catalog.storage.empty())
    for (std::size_t r = 0; r < in.regions.size(); ++r)
      s.battery_gw += solution.value(lp, key("scap", in.regions[r].name)) * 1e-3;
  for (std::size_t h = 0; h < in.hours(); ++h)
    for (std::size_t r = 0; r < in.regions.size(); ++r)
      s.unserved_twh += in.hour_weights[h] *
                        solution.value(lp, key("uns", in.regions[r].name, h)) * 1e-6;
  EmissionsReport rep = compute_emissions(lp, solution, in, catalog);
  s.emissions_mt = rep.mt_per_year;
  s.intensity_g_per_kwh = rep.g_per_kwh;
  s.prices = extract_hourly_prices(lp, solution, in);
  double acc = 0.0;
  std::size_t count = 0;
  for (const auto& series : s.prices)
    for (double p : series) {
      acc += p;
      ++count;
    }
  s.mean_price = count > 0 ? acc / static_cast<double>(count) : 0.0;
  s.total_cost = solution.objective;
  return s;
}

}  // namespace heatlink::power
