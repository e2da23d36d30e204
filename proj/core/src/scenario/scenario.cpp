#include "heatlink/scenario/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "heatlink/csv.hpp"

namespace heatlink::scenario {
namespace fs = std::filesystem;

namespace {

std::string fmt(double v) { return csv::format_number(v); }

double parse_double(const std::string& s, const std::string& where) {
  if (s == "inf") return std::numeric_limits<double>::infinity();
  try {
    std::size_t pos = 0;
    double v = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ScenarioError(where + ": not a number: '" + s + "'");
  }
}

int parse_int(const std::string& s, const std::string& where) {
  double v = parse_double(s, where);
  if (v != std::floor(v)) throw ScenarioError(where + ": not an integer: '" + s + "'");
  return static_cast<int>(v);
}

bool parse_bool(const std::string& s, const std::string& where) {
  if (s == "1" || s == "true") return true;
  if (s == "0" || s == "false") return false;
  throw ScenarioError(where + ": not a boolean (0/1): '" + s + "'");
}

std::vector<std::string> split(const std::string& line, char sep = ',') {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream is(line);
  while (std::getline(is, cur, sep)) out.push_back(cur);
  if (!line.empty() && line.back() == sep) out.push_back("");
  return out;
}

// Thin adapter over csv::Table adding boolean parsing, inf-aware numbers,
// and a short "file row N column 'x'" locator for error messages.
struct CsvTable {
  csv::Table table;
  std::string file;

  std::size_t size() const { return table.rows.size(); }
  std::size_t column(const std::string& name) const {
    return static_cast<std::size_t>(table.require_column(name));
  }
  const std::string& at(std::size_t row, std::size_t col) const {
    return table.cell(row, static_cast<int>(col));
  }
  std::string where(std::size_t row, std::size_t col) const {
    return file + " row " + std::to_string(row + 2) + " column '" +
           table.header[col] + "'";
  }
  double num(std::size_t row, std::size_t col) const {
    return parse_double(at(row, col), where(row, col));
  }
  bool flag(std::size_t row, std::size_t col) const {
    return parse_bool(at(row, col), where(row, col));
  }
};

CsvTable read_csv(const fs::path& path) {
  CsvTable t{csv::read_file(path), path.filename().string()};
  for (std::size_t r = 0; r < t.table.rows.size(); ++r)
    if (t.table.rows[r].size() != t.table.header.size())
      throw ScenarioError(t.file + " row " + std::to_string(r + 2) + ": expected " +
                          std::to_string(t.table.header.size()) + " fields, got " +
                          std::to_string(t.table.rows[r].size()));
  return t;
}

// Key-value manifest: 'key=value' lines, '#' comments; repeatable keys
// (corridors) are collected in order.
struct Manifest {
  std::map<std::string, std::string> scalar;
  std::vector<std::string> corridors;

  const std::string& require(const std::string& key) const {
    auto it = scalar.find(key);
    if (it == scalar.end()) throw ScenarioError("manifest: missing key '" + key + "'");
    return it->second;
  }
  std::string get(const std::string& key, const std::string& dflt) const {
    auto it = scalar.find(key);
    return it == scalar.end() ? dflt : it->second;
  }
  double num(const std::string& key, double dflt) const {
    auto it = scalar.find(key);
    return it == scalar.end() ? dflt
                              : parse_double(it->second, "manifest key '" + key + "'");
  }
  std::vector<double> nums(const std::string& key) const {
    std::vector<double> out;
    for (const auto& part : split(require(key)))
      out.push_back(parse_double(part, "manifest key '" + key + "'"));
    return out;
  }
};

Manifest read_manifest(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw ScenarioError("missing manifest: " + path.string());
  Manifest m;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ScenarioError("manifest: malformed line '" + line + "'");
    std::string key = line.substr(0, eq), value = line.substr(eq + 1);
    if (key == "corridor")
      m.corridors.push_back(value);
    else
      m.scalar[key] = value;
  }
  return m;
}

rtn::PipelineCarrier parse_carrier(const std::string& s, const std::string& where) {
  if (s == "h2") return rtn::PipelineCarrier::Hydrogen;
  if (s == "co2_onshore") return rtn::PipelineCarrier::Co2Onshore;
  if (s == "co2_offshore") return rtn::PipelineCarrier::Co2Offshore;
  throw ScenarioError(where + ": unknown carrier '" + s + "'");
}

std::string carrier_name(rtn::PipelineCarrier c) {
  switch (c) {
    case rtn::PipelineCarrier::Hydrogen: return "h2";
    case rtn::PipelineCarrier::Co2Onshore: return "co2_onshore";
    default: return "co2_offshore";
  }
}

// One hourly profile column per region (or per renewable technology).
std::vector<std::vector<double>> read_profile_columns(
    const fs::path& path, const std::vector<std::string>& columns) {
  CsvTable t = read_csv(path);
  std::vector<std::size_t> idx;
  for (const auto& c : columns) idx.push_back(t.column(c));
  std::vector<std::vector<double>> out(columns.size());
  for (std::size_t r = 0; r < t.size(); ++r)
    for (std::size_t c = 0; c < idx.size(); ++c)
      out[c].push_back(t.num(r, idx[c]));
  return out;
}

void write_lines(const fs::path& path, const std::vector<std::string>& lines) {
  std::ofstream out(path);
  if (!out) throw ScenarioError("cannot write " + path.string());
  for (const auto& l : lines) out << l << "\n";
}

std::string join(const std::vector<std::string>& parts, char sep = ',') {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out += sep;
    out += parts[i];
  }
  return out;
}

}  // namespace

std::size_t ValidationReport::error_count() const {
  std::size_t n = 0;
  for (const auto& i : issues)
    if (i.severity == ValidationIssue::Severity::Error) ++n;
  return n;
}

double heat_demand_trajectory(int year, double twh_2020, double twh_2050) {
  if (year < 2020 || year > 2060)
    throw ScenarioError("heat demand trajectory is defined for 2020-2060, got " +
                        std::to_string(year));
  if (year >= 2050) return twh_2050;
  double frac = (year - 2020) / 30.0;
  return twh_2020 + frac * (twh_2050 - twh_2020);
}

Scenario load_scenario(const fs::path& root) {
  if (!fs::is_directory(root))
    throw ScenarioError("scenario directory does not exist: " + root.string());
  Manifest m = read_manifest(root / "manifest");

  Scenario sc;
  sc.name = m.require("name");
  sc.base_year = parse_int(m.require("base_year"), "manifest key 'base_year'");
  sc.periods = parse_int(m.require("periods"), "manifest key 'periods'");
  sc.period_start_years.clear();
  for (const auto& y : split(m.require("period_start_years")))
    sc.period_start_years.push_back(parse_int(y, "manifest key 'period_start_years'"));
  sc.regions = split(m.require("regions"));
  sc.calendar_kind = m.get("calendar", "representative_day");
  sc.discount_rate = m.num("discount_rate", sc.discount_rate);
  sc.build_limit_gw_per_yr = m.num("build_limit_gw_per_yr", sc.build_limit_gw_per_yr);
  sc.gas_price_per_mwh = m.nums("gas_price_per_mwh");
  sc.biomass_price_per_mwh = m.num("biomass_price_per_mwh", sc.biomass_price_per_mwh);
  sc.legacy_gas_factor = m.nums("legacy_gas_factor");
  sc.carbon_cap_g_per_kwh = m.nums("carbon_cap_g_per_kwh");
  sc.heat_emission_baseline_mt =
      m.num("heat_emission_baseline_mt", sc.heat_emission_baseline_mt);
  sc.heat_demand_2020_twh = m.num("heat_demand_2020_twh", sc.heat_demand_2020_twh);
  sc.heat_demand_2050_twh = m.num("heat_demand_2050_twh", sc.heat_demand_2050_twh);
  sc.retail_ratio = m.num("retail_ratio", sc.retail_ratio);
  sc.retail_cap_per_mwh = m.num("retail_cap_per_mwh", sc.retail_cap_per_mwh);
  sc.adequacy_margin = m.num("adequacy_margin", sc.adequacy_margin);
  sc.value_of_lost_load_per_mwh =
      m.num("value_of_lost_load_per_mwh", sc.value_of_lost_load_per_mwh);
  sc.reserve_demand_fraction =
      m.num("reserve_demand_fraction", sc.reserve_demand_fraction);
  sc.reserve_renewable_fraction =
      m.num("reserve_renewable_fraction", sc.reserve_renewable_fraction);
  sc.interconnector_capacity_mw =
      m.num("interconnector_capacity_mw", sc.interconnector_capacity_mw);
  sc.interconnector_region = m.get("interconnector_region", "");
  sc.h2_boiler_efficiency = m.num("h2_boiler_efficiency", sc.h2_boiler_efficiency);

  for (const auto& line : m.corridors) {
    auto parts = split(line);
    if (parts.size() != 4)
      throw ScenarioError("manifest corridor needs from,to,capacity_mw,cost: '" +
                          line + "'");
    CorridorRecord c;
    c.from = parts[0];
    c.to = parts[1];
    c.capacity_mw = parse_double(parts[2], "manifest corridor capacity");
    c.reinforcement_cost_per_mw_yr = parse_double(parts[3], "manifest corridor cost");
    sc.corridors.push_back(c);
  }

  {
    CsvTable t = read_csv(root / "generation.csv");
    auto name = t.column("name"), cap = t.column("capital_cost_per_kw"),
         om = t.column("fixed_om_per_kw_yr"), dr = t.column("discount_rate_pct"),
         life = t.column("lifetime_years"), co2 = t.column("carbon_kg_per_mwh"),
         var = t.column("variable_cost_per_mwh"), der = t.column("derating"),
         h2f = t.column("is_hydrogen_fuelled"), ren = t.column("is_renewable"),
         h2r = t.column("h2_per_mwh_el"), mb = t.column("max_build_mw");
    for (std::size_t r = 0; r < t.size(); ++r) {
      power::GenerationTechnology g;
      g.name = t.at(r, name);
      g.capital_cost_per_kw = t.num(r, cap);
      g.fixed_om_per_kw_yr = t.num(r, om);
      g.discount_rate = t.num(r, dr) / 100.0;
      g.lifetime_years = t.num(r, life);
      g.carbon_kg_per_mwh = t.num(r, co2);
      g.variable_cost_per_mwh = t.num(r, var);
      g.derating = t.num(r, der);
      g.is_hydrogen_fuelled = t.flag(r, h2f);
      g.is_renewable = t.flag(r, ren);
      g.h2_per_mwh_el = t.num(r, h2r);
      g.max_build_mw = t.num(r, mb);
      sc.power_catalog.generation.push_back(g);
    }
  }

  {
    CsvTable t = read_csv(root / "conversion.csv");
    auto name = t.column("name"), ucap = t.column("unit_capacity_gw"),
         gas = t.column("gas_per_mwh"), ele = t.column("electricity_per_mwh"),
         bio = t.column("biomass_per_mwh"), capt = t.column("co2_captured_t_per_mwh"),
         resid = t.column("co2_residual_t_per_mwh"), life = t.column("lifetime_years");
    std::vector<std::size_t> capex;
    for (int p = 0; p < sc.periods; ++p)
      capex.push_back(t.column("capex_" + std::to_string(sc.period_start_years[p]) +
                               "_per_kw"));
    for (std::size_t r = 0; r < t.size(); ++r) {
      rtn::ConversionTechnology c;
      c.name = t.at(r, name);
      c.unit_capacity_gw = t.num(r, ucap);
      for (auto col : capex) c.capex_per_kw.push_back(t.num(r, col));
      c.gas_per_mwh = t.num(r, gas);
      c.electricity_per_mwh = t.num(r, ele);
      c.biomass_per_mwh = t.num(r, bio);
      c.co2_captured_t_per_mwh = t.num(r, capt);
      c.co2_residual_t_per_mwh = t.num(r, resid);
      c.lifetime_years = parse_int(t.at(r, life), t.where(r, life));
      sc.rtn_catalog.conversion.push_back(c);
    }
  }

  {
    CsvTable t = read_csv(root / "heat_tech.csv");
    auto name = t.column("name"), cap = t.column("capex_per_kwth"),
         eff = t.column("efficiency"), cop = t.column("cop"),
         gas = t.column("uses_gas"), hyb = t.column("is_hybrid"),
         share = t.column("max_capacity_share");
    for (std::size_t r = 0; r < t.size(); ++r) {
      rtn::HeatTechnology h;
      h.name = t.at(r, name);
      h.capex_per_kwth = t.num(r, cap);
      h.efficiency = t.num(r, eff);
      h.cop = t.num(r, cop);
      h.uses_gas = t.flag(r, gas);
      h.is_hybrid = t.flag(r, hyb);
      h.max_capacity_share = t.num(r, share);
      sc.rtn_catalog.heat.push_back(h);
    }
  }

  {
    CsvTable t = read_csv(root / "storage.csv");
    auto name = t.column("name"), domain = t.column("domain"),
         capex = t.column("capex"), dr = t.column("discount_rate_pct"),
         life = t.column("lifetime_years"), dur = t.column("duration_hours"),
         rte = t.column("round_trip_efficiency"), cap = t.column("capacity_gwh"),
         inj = t.column("max_injectivity_mw"), del = t.column("max_deliverability_mw"),
         cav = t.column("requires_cavern_site"), intr = t.column("intra_day_only"),
         well = t.column("well_mt_per_year");
    for (std::size_t r = 0; r < t.size(); ++r) {
      const std::string& d = t.at(r, domain);
      if (d == "power") {
        power::StorageTechnology s;
        s.name = t.at(r, name);
        s.capital_cost_per_kw = t.num(r, capex);  // £/kW for batteries
        s.discount_rate = t.num(r, dr) / 100.0;
        s.lifetime_years = t.num(r, life);
        s.duration_hours = t.num(r, dur);
        s.round_trip_efficiency = t.num(r, rte);
        sc.power_catalog.storage.push_back(s);
      } else if (d == "hydrogen" || d == "co2") {
        rtn::StorageAsset s;
        s.name = t.at(r, name);
        s.kind = d == "co2" ? rtn::StorageAsset::Kind::Co2Well
                            : rtn::StorageAsset::Kind::HydrogenStore;
        s.capex_m_per_unit = t.num(r, capex);  // £m/unit for stores and wells
        s.capacity_gwh = t.num(r, cap);
        s.max_injectivity_mw = t.num(r, inj);
        s.max_deliverability_mw = t.num(r, del);
        s.requires_cavern_site = t.flag(r, cav);
        s.intra_day_only = t.flag(r, intr);
        s.well_mt_per_year = t.num(r, well);
        sc.rtn_catalog.storage.push_back(s);
      } else {
        throw ScenarioError(t.where(r, domain) +
                            ": domain must be power, hydrogen or co2, got '" + d + "'");
      }
    }
  }

  {
    CsvTable t = read_csv(root / "pipelines.csv");
    auto name = t.column("name"), carrier = t.column("carrier"),
         capex = t.column("capex_k_per_km"), flow = t.column("max_flow_kg_s"),
         loss = t.column("loss_pct_per_km");
    for (std::size_t r = 0; r < t.size(); ++r) {
      rtn::PipelineOption p;
      p.name = t.at(r, name);
      p.carrier = parse_carrier(t.at(r, carrier), t.where(r, carrier));
      p.capex_k_per_km = t.num(r, capex);
      p.max_flow_kg_s = t.num(r, flow);
      p.loss_pct_per_km = t.num(r, loss);
      sc.rtn_catalog.pipelines.push_back(p);
    }
  }

  {
    CsvTable t = read_csv(root / "cells.csv");
    auto id = t.column("id"), x = t.column("x"), y = t.column("y"),
         cav = t.column("cavern_site"), co2 = t.column("co2_site"),
         dom = t.column("domestic_share"), com = t.column("commercial_share");
    for (std::size_t r = 0; r < t.size(); ++r) {
      CellRecord c;
      c.id = t.at(r, id);
      c.x = t.num(r, x);
      c.y = t.num(r, y);
      c.cavern_site = t.flag(r, cav);
      c.co2_site = t.flag(r, co2);
      c.domestic_share = t.num(r, dom);
      c.commercial_share = t.num(r, com);
      sc.cells.push_back(c);
    }
  }

  {
    CsvTable t = read_csv(root / "adjacency.csv");
    auto a = t.column("a"), b = t.column("b"), km = t.column("km");
    for (std::size_t r = 0; r < t.size(); ++r)
      sc.adjacency.push_back({t.at(r, a), t.at(r, b), t.num(r, km)});
  }

  {
    CsvTable t = read_csv(root / "region_map.csv");
    auto cell = t.column("cell"), region = t.column("region");
    for (std::size_t r = 0; r < t.size(); ++r)
      sc.region_of_cell[t.at(r, cell)] = t.at(r, region);
  }

  sc.baseline_demand_mw =
      read_profile_columns(root / "profiles" / "baseline_demand.csv", sc.regions);
  {
    std::vector<std::string> dom_cols, com_cols;
    for (const auto& r : sc.regions) {
      dom_cols.push_back(r + "_domestic");
      com_cols.push_back(r + "_commercial");
    }
    sc.heat_domestic_mw =
        read_profile_columns(root / "profiles" / "heat_demand.csv", dom_cols);
    sc.heat_commercial_mw =
        read_profile_columns(root / "profiles" / "heat_demand.csv", com_cols);
  }
  sc.cop_by_hour =
      read_profile_columns(root / "profiles" / "cop.csv", {"cop"}).front();
  {
    std::vector<std::string> cols;
    for (const auto& g : sc.power_catalog.generation)
      if (g.is_renewable) cols.push_back(g.name);
    if (!cols.empty()) {
      auto profiles =
          read_profile_columns(root / "profiles" / "renewables.csv", cols);
      for (std::size_t i = 0; i < cols.size(); ++i)
        sc.renewable_profiles[cols[i]] = profiles[i];
    }
  }
  return sc;
}

void save_scenario(const Scenario& sc, const fs::path& root) {
  fs::create_directories(root / "profiles");

  std::vector<std::string> man;
  man.push_back("name=" + sc.name);
  man.push_back("base_year=" + std::to_string(sc.base_year));
  man.push_back("periods=" + std::to_string(sc.periods));
  {
    std::vector<std::string> ys;
    for (int y : sc.period_start_years) ys.push_back(std::to_string(y));
    man.push_back("period_start_years=" + join(ys));
  }
  man.push_back("regions=" + join(sc.regions));
  man.push_back("calendar=" + sc.calendar_kind);
  auto num_list = [](const std::vector<double>& v) {
    std::vector<std::string> s;
    for (double x : v) s.push_back(fmt(x));
    return join(s);
  };
  man.push_back("discount_rate=" + fmt(sc.discount_rate));
  man.push_back("build_limit_gw_per_yr=" + fmt(sc.build_limit_gw_per_yr));
  man.push_back("gas_price_per_mwh=" + num_list(sc.gas_price_per_mwh));
  man.push_back("biomass_price_per_mwh=" + fmt(sc.biomass_price_per_mwh));
  man.push_back("legacy_gas_factor=" + num_list(sc.legacy_gas_factor));
  man.push_back("carbon_cap_g_per_kwh=" + num_list(sc.carbon_cap_g_per_kwh));
  man.push_back("heat_emission_baseline_mt=" + fmt(sc.heat_emission_baseline_mt));
  man.push_back("heat_demand_2020_twh=" + fmt(sc.heat_demand_2020_twh));
  man.push_back("heat_demand_2050_twh=" + fmt(sc.heat_demand_2050_twh));
  man.push_back("retail_ratio=" + fmt(sc.retail_ratio));
  man.push_back("retail_cap_per_mwh=" + fmt(sc.retail_cap_per_mwh));
  man.push_back("adequacy_margin=" + fmt(sc.adequacy_margin));
  man.push_back("value_of_lost_load_per_mwh=" + fmt(sc.value_of_lost_load_per_mwh));
  man.push_back("reserve_demand_fraction=" + fmt(sc.reserve_demand_fraction));
  man.push_back("reserve_renewable_fraction=" + fmt(sc.reserve_renewable_fraction));
  man.push_back("interconnector_capacity_mw=" + fmt(sc.interconnector_capacity_mw));
  if (!sc.interconnector_region.empty())
    man.push_back("interconnector_region=" + sc.interconnector_region);
  man.push_back("h2_boiler_efficiency=" + fmt(sc.h2_boiler_efficiency));
  for (const auto& c : sc.corridors)
    man.push_back("corridor=" + c.from + "," + c.to + "," + fmt(c.capacity_mw) + "," +
                  fmt(c.reinforcement_cost_per_mw_yr));
  write_lines(root / "manifest", man);

  {
    std::vector<std::string> lines = {
        "name,capital_cost_per_kw,fixed_om_per_kw_yr,discount_rate_pct,"
        "lifetime_years,carbon_kg_per_mwh,variable_cost_per_mwh,derating,"
        "is_hydrogen_fuelled,is_renewable,h2_per_mwh_el,max_build_mw"};
    for (const auto& g : sc.power_catalog.generation)
      lines.push_back(join({g.name, fmt(g.capital_cost_per_kw),
                            fmt(g.fixed_om_per_kw_yr), fmt(g.discount_rate * 100.0),
                            fmt(g.lifetime_years), fmt(g.carbon_kg_per_mwh),
                            fmt(g.variable_cost_per_mwh), fmt(g.derating),
                            g.is_hydrogen_fuelled ? "1" : "0",
                            g.is_renewable ? "1" : "0", fmt(g.h2_per_mwh_el),
                            fmt(g.max_build_mw)}));
    write_lines(root / "generation.csv", lines);
  }

  {
    std::string header = "name,unit_capacity_gw";
    for (int p = 0; p < sc.periods; ++p)
      header += ",capex_" + std::to_string(sc.period_start_years[p]) + "_per_kw";
    header +=
        ",gas_per_mwh,electricity_per_mwh,biomass_per_mwh,"
        "co2_captured_t_per_mwh,co2_residual_t_per_mwh,lifetime_years";
    std::vector<std::string> lines = {header};
    for (const auto& c : sc.rtn_catalog.conversion) {
      std::vector<std::string> f = {c.name, fmt(c.unit_capacity_gw)};
      for (double x : c.capex_per_kw) f.push_back(fmt(x));
      f.insert(f.end(), {fmt(c.gas_per_mwh), fmt(c.electricity_per_mwh),
                         fmt(c.biomass_per_mwh), fmt(c.co2_captured_t_per_mwh),
                         fmt(c.co2_residual_t_per_mwh),
                         std::to_string(c.lifetime_years)});
      lines.push_back(join(f));
    }
    write_lines(root / "conversion.csv", lines);
  }

  {
    std::vector<std::string> lines = {
        "name,capex_per_kwth,efficiency,cop,uses_gas,is_hybrid,max_capacity_share"};
    for (const auto& h : sc.rtn_catalog.heat)
      lines.push_back(join({h.name, fmt(h.capex_per_kwth), fmt(h.efficiency),
                            fmt(h.cop), h.uses_gas ? "1" : "0",
                            h.is_hybrid ? "1" : "0", fmt(h.max_capacity_share)}));
    write_lines(root / "heat_tech.csv", lines);
  }

  {
    std::vector<std::string> lines = {
        "name,domain,capex,discount_rate_pct,lifetime_years,duration_hours,"
        "round_trip_efficiency,capacity_gwh,max_injectivity_mw,"
        "max_deliverability_mw,requires_cavern_site,intra_day_only,"
        "well_mt_per_year"};
    for (const auto& s : sc.power_catalog.storage)
      lines.push_back(join({s.name, "power", fmt(s.capital_cost_per_kw),
                            fmt(s.discount_rate * 100.0), fmt(s.lifetime_years),
                            fmt(s.duration_hours), fmt(s.round_trip_efficiency), "0",
                            "0", "0", "0", "0", "0"}));
    for (const auto& s : sc.rtn_catalog.storage)
      lines.push_back(join(
          {s.name, s.kind == rtn::StorageAsset::Kind::Co2Well ? "co2" : "hydrogen",
           fmt(s.capex_m_per_unit), "0", "0", "0", "0", fmt(s.capacity_gwh),
           fmt(s.max_injectivity_mw), fmt(s.max_deliverability_mw),
           s.requires_cavern_site ? "1" : "0", s.intra_day_only ? "1" : "0",
           fmt(s.well_mt_per_year)}));
    write_lines(root / "storage.csv", lines);
  }

  {
    std::vector<std::string> lines = {
        "name,carrier,capex_k_per_km,max_flow_kg_s,loss_pct_per_km"};
    for (const auto& p : sc.rtn_catalog.pipelines)
      lines.push_back(join({p.name, carrier_name(p.carrier), fmt(p.capex_k_per_km),
                            fmt(p.max_flow_kg_s), fmt(p.loss_pct_per_km)}));
    write_lines(root / "pipelines.csv", lines);
  }

  {
    std::vector<std::string> lines = {
        "id,x,y,cavern_site,co2_site,domestic_share,commercial_share"};
    for (const auto& c : sc.cells)
      lines.push_back(join({c.id, fmt(c.x), fmt(c.y), c.cavern_site ? "1" : "0",
                            c.co2_site ? "1" : "0", fmt(c.domestic_share),
                            fmt(c.commercial_share)}));
    write_lines(root / "cells.csv", lines);
  }

  {
    std::vector<std::string> lines = {"a,b,km"};
    for (const auto& e : sc.adjacency)
      lines.push_back(join({e.a, e.b, fmt(e.km)}));
    write_lines(root / "adjacency.csv", lines);
  }

  {
    std::vector<std::string> lines = {"cell,region"};
    for (const auto& [cell, region] : sc.region_of_cell)
      lines.push_back(cell + "," + region);
    write_lines(root / "region_map.csv", lines);
  }

  std::size_t H = sc.cop_by_hour.size();
  auto write_profile = [&](const std::string& file,
                           const std::vector<std::string>& cols,
                           const std::vector<const std::vector<double>*>& data) {
    std::vector<std::string> lines = {"hour," + join(cols)};
    for (std::size_t h = 0; h < H; ++h) {
      std::vector<std::string> f = {std::to_string(h)};
      for (const auto* col : data) f.push_back(fmt((*col)[h]));
      lines.push_back(join(f));
    }
    write_lines(root / "profiles" / file, lines);
  };

  {
    std::vector<const std::vector<double>*> data;
    for (const auto& v : sc.baseline_demand_mw) data.push_back(&v);
    write_profile("baseline_demand.csv", sc.regions, data);
  }
  {
    std::vector<std::string> cols;
    std::vector<const std::vector<double>*> data;
    for (std::size_t r = 0; r < sc.regions.size(); ++r) {
      cols.push_back(sc.regions[r] + "_domestic");
      data.push_back(&sc.heat_domestic_mw[r]);
    }
    for (std::size_t r = 0; r < sc.regions.size(); ++r) {
      cols.push_back(sc.regions[r] + "_commercial");
      data.push_back(&sc.heat_commercial_mw[r]);
    }
    write_profile("heat_demand.csv", cols, data);
  }
  write_profile("cop.csv", {"cop"}, {&sc.cop_by_hour});
  if (!sc.renewable_profiles.empty()) {
    std::vector<std::string> cols;
    std::vector<const std::vector<double>*> data;
    for (const auto& [name, profile] : sc.renewable_profiles) {
      cols.push_back(name);
      data.push_back(&profile);
    }
    write_profile("renewables.csv", cols, data);
  }
}

ValidationReport validate(const Scenario& sc) {
  ValidationReport report;
  auto error = [&](const std::string& where, const std::string& msg) {
    report.issues.push_back({ValidationIssue::Severity::Error, where, msg});
  };
  auto warning = [&](const std::string& where, const std::string& msg) {
    report.issues.push_back({ValidationIssue::Severity::Warning, where, msg});
  };

  try {
    sc.calendar.validate();
  } catch (const std::exception& e) {
    error("calendar", e.what());
  }
  if (sc.calendar.days_in_year() != 365)
    error("calendar", "season days must satisfy the 365-day identity, got " +
                          std::to_string(sc.calendar.days_in_year()));

  if (sc.regions.empty()) error("manifest", "no regions declared");
  if (sc.periods < 1) error("manifest", "periods must be >= 1");
  if (static_cast<int>(sc.period_start_years.size()) != sc.periods)
    error("manifest", "period_start_years must list one year per period");
  if (static_cast<int>(sc.carbon_cap_g_per_kwh.size()) != sc.periods)
    error("manifest", "carbon_cap_g_per_kwh must list one value per period");
  if (static_cast<int>(sc.legacy_gas_factor.size()) != sc.periods)
    error("manifest", "legacy_gas_factor must list one value per period");
  if (sc.gas_price_per_mwh.size() != 4)
    error("manifest", "gas_price_per_mwh must list four seasonal values");
  if (sc.heat_demand_2020_twh <= 0 || sc.heat_demand_2050_twh <= 0)
    error("manifest", "heat demand trajectory anchors must be positive");
  if (sc.calendar_kind != "full_year" && sc.calendar_kind != "representative_day" &&
      sc.calendar_kind != "slice_day")
    error("manifest",
          "calendar must be full_year, representative_day or slice_day, got '" +
              sc.calendar_kind + "'");

  std::size_t hours = sc.calendar_kind == "full_year"          ? 8760u
                      : sc.calendar_kind == "representative_day" ? 96u
                                                                 : 16u;
  auto check_profile = [&](const std::string& file,
                           const std::vector<double>& profile) {
    if (profile.size() != hours)
      error("profiles/" + file, "expected " + std::to_string(hours) +
                                    " rows for the " + sc.calendar_kind +
                                    " calendar, got " +
                                    std::to_string(profile.size()));
  };
  for (std::size_t r = 0; r < sc.regions.size(); ++r) {
    if (r < sc.baseline_demand_mw.size())
      check_profile("baseline_demand.csv", sc.baseline_demand_mw[r]);
    if (r < sc.heat_domestic_mw.size())
      check_profile("heat_demand.csv", sc.heat_domestic_mw[r]);
    if (r < sc.heat_commercial_mw.size())
      check_profile("heat_demand.csv", sc.heat_commercial_mw[r]);
  }
  check_profile("cop.csv", sc.cop_by_hour);
  if (sc.baseline_demand_mw.size() != sc.regions.size())
    error("profiles/baseline_demand.csv", "one column per region required");

  for (const auto& g : sc.power_catalog.generation) {
    if (g.capital_cost_per_kw < 0)
      error("generation.csv", g.name + ": negative capital cost");
    if (g.is_renewable && !sc.renewable_profiles.count(g.name))
      error("profiles/renewables.csv", "missing profile for " + g.name);
  }
  for (const auto& [name, profile] : sc.renewable_profiles) {
    check_profile("renewables.csv", profile);
    for (double v : profile)
      if (v < 0.0 || v > 1.0) {
        error("profiles/renewables.csv",
              name + ": capacity factors must lie in [0, 1]");
        break;
      }
  }
  for (const auto& c : sc.rtn_catalog.conversion) {
    if (static_cast<int>(c.capex_per_kw.size()) != sc.periods)
      error("conversion.csv", c.name + ": capex must list one value per period");
    for (double x : c.capex_per_kw)
      if (x < 0) error("conversion.csv", c.name + ": negative capital cost");
    if (c.unit_capacity_gw <= 0)
      error("conversion.csv", c.name + ": unit capacity must be positive");
  }
  if (sc.rtn_catalog.heat.empty()) error("heat_tech.csv", "no heat technologies");
  for (const auto& h : sc.rtn_catalog.heat)
    if (h.capex_per_kwth < 0)
      error("heat_tech.csv", h.name + ": negative capital cost");
  for (const auto& s : sc.rtn_catalog.storage)
    if (s.capex_m_per_unit < 0)
      error("storage.csv", s.name + ": negative capital cost");
  for (const auto& p : sc.rtn_catalog.pipelines)
    if (p.capex_k_per_km < 0)
      error("pipelines.csv", p.name + ": negative capital cost");

  std::map<std::string, int> region_cells;
  for (const auto& c : sc.cells) {
    auto it = sc.region_of_cell.find(c.id);
    if (it == sc.region_of_cell.end())
      error("region_map.csv", "cell " + c.id + " is not mapped to a region");
    else if (std::find(sc.regions.begin(), sc.regions.end(), it->second) ==
             sc.regions.end())
      error("region_map.csv",
            "cell " + c.id + " maps to unknown region " + it->second);
    else
      ++region_cells[it->second];
  }
  for (const auto& r : sc.regions)
    if (!region_cells.count(r))
      error("region_map.csv", "region " + r + " has no cells");
  for (const auto& r : sc.regions) {
    double dom = 0.0, com = 0.0;
    for (const auto& c : sc.cells)
      if (sc.region_of_cell.count(c.id) && sc.region_of_cell.at(c.id) == r) {
        dom += c.domestic_share;
        com += c.commercial_share;
      }
    if (std::fabs(dom - 1.0) > 1e-6 || std::fabs(com - 1.0) > 1e-6)
      warning("cells.csv", "region " + r + " heat shares sum to " + fmt(dom) +
                               " / " + fmt(com) + ", expected 1");
  }
  for (const auto& e : sc.adjacency) {
    bool a_ok = false, b_ok = false;
    for (const auto& c : sc.cells) {
      a_ok = a_ok || c.id == e.a;
      b_ok = b_ok || c.id == e.b;
    }
    if (!a_ok || !b_ok)
      error("adjacency.csv", "edge " + e.a + "-" + e.b + " references unknown cell");
    if (e.km <= 0)
      error("adjacency.csv", "edge " + e.a + "-" + e.b + " has non-positive length");
  }
  bool any_capture = false;
  for (const auto& c : sc.rtn_catalog.conversion)
    any_capture = any_capture || c.co2_captured_t_per_mwh > 0;
  bool any_co2_site = false;
  for (const auto& c : sc.cells) any_co2_site = any_co2_site || c.co2_site;
  if (any_capture && !any_co2_site)
    error("cells.csv", "carbon capture routes exist but no cell is a CO2 site");

  std::sort(report.issues.begin(), report.issues.end(),
            [](const ValidationIssue& a, const ValidationIssue& b) {
              if (a.location != b.location) return a.location < b.location;
              if (a.message != b.message) return a.message < b.message;
              return a.severity < b.severity;
            });
  return report;
}

coupler::CoupledScenario to_coupled(const Scenario& sc) {
  if (sc.calendar_kind == "full_year")
    return to_coupled(sc, rtn::full_year_calendar(sc.calendar));
  if (sc.calendar_kind == "representative_day")
    return to_coupled(sc, rtn::representative_day_calendar(sc.calendar));
  return to_coupled(sc, rtn::slice_day_calendar(sc.calendar));
}

coupler::CoupledScenario to_coupled(const Scenario& sc,
                                    const rtn::ReducedCalendar& calendar) {
  ValidationReport report = validate(sc);
  if (!report.ok()) {
    const ValidationIssue* first = nullptr;
    for (const auto& i : report.issues)
      if (i.severity == ValidationIssue::Severity::Error) {
        first = &i;
        break;
      }
    throw ScenarioError("scenario invalid (" +
                        std::to_string(report.error_count()) + " errors), first: " +
                        first->location + ": " + first->message);
  }
  calendar.validate(sc.calendar);
  std::size_t H = calendar.weights.size();
  if (sc.cop_by_hour.size() != H)
    throw ScenarioError("profiles carry " + std::to_string(sc.cop_by_hour.size()) +
                        " hours but the calendar has " + std::to_string(H));

  coupler::CoupledScenario out;
  out.name = sc.name;
  out.power_catalog = sc.power_catalog;
  out.calendar = calendar;
  out.cop_by_hour = sc.cop_by_hour;
  out.h2_boiler_efficiency = sc.h2_boiler_efficiency;
  out.mapping.cell_to_region = sc.region_of_cell;

  double base_twh =
      heat_demand_trajectory(sc.base_year, sc.heat_demand_2020_twh,
                             sc.heat_demand_2050_twh);
  std::vector<double> scale(sc.periods);
  for (int p = 0; p < sc.periods; ++p)
    scale[p] = heat_demand_trajectory(sc.period_start_years[p],
                                      sc.heat_demand_2020_twh,
                                      sc.heat_demand_2050_twh) /
               base_twh;

  // RTN cell demands: regional sector profiles aggregated to slices, split by
  // cell shares, scaled to the period's trajectory point.
  rtn::RtnInstance& rtn = out.rtn;
  rtn.calendar = sc.calendar;
  rtn.periods = sc.periods;
  rtn.period_start_years = sc.period_start_years;
  rtn.emissions.baseline_mt = sc.heat_emission_baseline_mt;
  rtn.emissions.caps_mt = rtn::emission_caps(sc.heat_emission_baseline_mt, sc.periods);
  rtn.discount_rate = sc.discount_rate;
  rtn.build_limit_gw_per_yr = sc.build_limit_gw_per_yr;
  rtn.gas_price_per_mwh = sc.gas_price_per_mwh;
  rtn.biomass_price_per_mwh = sc.biomass_price_per_mwh;
  rtn.legacy_gas_factor = sc.legacy_gas_factor;
  rtn.catalog = sc.rtn_catalog;
  rtn.edges = sc.adjacency;
  rtn.retail_price_per_mwh.assign(sc.periods, std::vector<double>(16, 0.0));

  std::vector<std::vector<double>> dom_slices, com_slices;  // [region][slice]
  for (std::size_t r = 0; r < sc.regions.size(); ++r) {
    dom_slices.push_back(coupler::aggregate_to_slices(sc.heat_domestic_mw[r], calendar));
    com_slices.push_back(
        coupler::aggregate_to_slices(sc.heat_commercial_mw[r], calendar));
  }
  for (const auto& rec : sc.cells) {
    rtn::Cell cell;
    cell.id = rec.id;
    cell.x = rec.x;
    cell.y = rec.y;
    cell.cavern_site = rec.cavern_site;
    cell.co2_site = rec.co2_site;
    cell.region = sc.region_of_cell.at(rec.id);
    std::size_t r = std::find(sc.regions.begin(), sc.regions.end(), cell.region) -
                    sc.regions.begin();
    cell.heat_demand_mw.assign(
        rtn::kSectors,
        std::vector<std::vector<double>>(sc.periods, std::vector<double>(16, 0.0)));
    for (int p = 0; p < sc.periods; ++p)
      for (int s = 0; s < 16; ++s) {
        cell.heat_demand_mw[0][p][s] = dom_slices[r][s] * rec.domestic_share * scale[p];
        cell.heat_demand_mw[1][p][s] =
            com_slices[r][s] * rec.commercial_share * scale[p];
      }
    rtn.cells.push_back(std::move(cell));
  }

  // Per-period power instances with heat series zeroed; the loop fills them.
  std::vector<int> day_starts(calendar.day_starts.begin(), calendar.day_starts.end());
  for (int p = 0; p < sc.periods; ++p) {
    power::PowerSystemInstance inst;
    inst.period = std::to_string(sc.period_start_years[p]) + "-" +
                  std::to_string(sc.period_start_years[p] + 10);
    for (const auto& r : sc.regions) inst.regions.push_back({r});
    for (const auto& c : sc.corridors) {
      auto index_of = [&](const std::string& name) {
        auto it = std::find(sc.regions.begin(), sc.regions.end(), name);
        if (it == sc.regions.end())
          throw ScenarioError("corridor references unknown region " + name);
        return static_cast<int>(it - sc.regions.begin());
      };
      inst.corridors.push_back({index_of(c.from), index_of(c.to), c.capacity_mw,
                                c.reinforcement_cost_per_mw_yr});
    }
    inst.hour_weights = calendar.weights;
    inst.day_starts = day_starts;
    inst.baseline_demand_mw = sc.baseline_demand_mw;
    inst.heat_electric_demand_mw.assign(sc.regions.size(),
                                        std::vector<double>(H, 0.0));
    inst.h2_electricity_demand_mw.assign(sc.regions.size(),
                                         std::vector<double>(H, 0.0));
    inst.renewable_profiles = sc.renewable_profiles;
    inst.carbon_cap_g_per_kwh = sc.carbon_cap_g_per_kwh[p];
    inst.adequacy_margin = sc.adequacy_margin;
    inst.reserve_demand_fraction = sc.reserve_demand_fraction;
    inst.reserve_renewable_fraction = sc.reserve_renewable_fraction;
    inst.value_of_lost_load_per_mwh = sc.value_of_lost_load_per_mwh;
    inst.interconnector_capacity_mw = sc.interconnector_capacity_mw;
    if (!sc.interconnector_region.empty()) {
      auto it = std::find(sc.regions.begin(), sc.regions.end(),
                          sc.interconnector_region);
      if (it == sc.regions.end())
        throw ScenarioError("interconnector_region " + sc.interconnector_region +
                            " is not a declared region");
      inst.interconnector_region = static_cast<int>(it - sc.regions.begin());
    }
    out.power.push_back(std::move(inst));
  }

  // Total regional heat per hour, scaled per period, for demand reconstruction.
  out.heat_demand_mw.assign(
      sc.periods, std::vector<std::vector<double>>(
                      sc.regions.size(), std::vector<double>(H, 0.0)));
  for (int p = 0; p < sc.periods; ++p)
    for (std::size_t r = 0; r < sc.regions.size(); ++r)
      for (std::size_t h = 0; h < H; ++h)
        out.heat_demand_mw[p][r][h] =
            (sc.heat_domestic_mw[r][h] + sc.heat_commercial_mw[r][h]) * scale[p];

  return out;
}

rtn::ReducedCalendar load_reduced_calendar(const fs::path& file) {
  CsvTable t = read_csv(file);
  auto hour = t.column("hour"), weight = t.column("weight"),
       slice = t.column("slice"), day = t.column("day_start");
  rtn::ReducedCalendar cal;
  for (std::size_t r = 0; r < t.size(); ++r) {
    if (parse_int(t.at(r, hour), t.where(r, hour)) != static_cast<int>(r))
      throw ScenarioError(t.file + ": hours must be consecutive from 0");
    cal.weights.push_back(t.num(r, weight));
    cal.slice_of_hour.push_back(parse_int(t.at(r, slice), t.where(r, slice)));
    if (t.flag(r, day)) cal.day_starts.push_back(r);
  }
  if (cal.day_starts.empty() || cal.day_starts.front() != 0)
    throw ScenarioError(t.file + ": hour 0 must start a day block");
  return cal;
}

}  // namespace heatlink::scenario
