#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <heatlink/rtn/calendar.hpp>
#include <heatlink/rtn/model.hpp>

#include <cmath>
#include <map>

using namespace heatlink;
using namespace heatlink::rtn;
using namespace heatlink::solver;

namespace {

HeatTechnology ashp() { return {"ashp", 412.0, 0.0, 3.04, false, false, -1.0}; }
HeatTechnology h2_boiler() { return {"h2_boiler", 48.0, 0.9, 0.0, false, false, -1.0}; }
HeatTechnology gas_boiler() { return {"gas_boiler", 48.0, 0.9, 0.0, true, false, -1.0}; }
HeatTechnology hybrid() { return {"hybrid_ashp_h2", 209.0, 0.9, 3.03, false, true, -1.0}; }

ConversionTechnology smr() {
  ConversionTechnology t;
  t.name = "smr_syngas";
  t.unit_capacity_gw = 1.0;
  t.capex_per_kw = {280, 239, 199};
  t.gas_per_mwh = 1.35;
  t.electricity_per_mwh = 0.02;
  t.co2_captured_t_per_mwh = 0.2236;
  t.co2_residual_t_per_mwh = 0.0249;
  return t;
}

ConversionTechnology biomass_ccs() {
  ConversionTechnology t;
  t.name = "biomass_ccs";
  t.unit_capacity_gw = 0.2;
  t.capex_per_kw = {851, 713, 574};
  t.biomass_per_mwh = 1.6;
  t.electricity_per_mwh = 0.05;
  t.co2_captured_t_per_mwh = 0.29;
  t.co2_residual_t_per_mwh = -0.26;
  return t;
}

StorageAsset co2_well() {
  StorageAsset w;
  w.name = "co2_well";
  w.kind = StorageAsset::Kind::Co2Well;
  w.capex_m_per_unit = 66.0;
  w.well_mt_per_year = 1.5;
  return w;
}

PipelineOption h2_pipe_18() {
  return {"h2_18in", PipelineCarrier::Hydrogen, 870.0, 7.1, 0.005};
}
PipelineOption co2_pipe_12() {
  return {"co2_12in_onshore", PipelineCarrier::Co2Onshore, 600.0, 88.0, 0.002};
}

Cell flat_cell(const std::string& id, int periods, double dom_mw, double com_mw) {
  Cell c;
  c.id = id;
  c.co2_site = true;
  c.cavern_site = true;
  c.region = "r0";
  for (int sec = 0; sec < kSectors; ++sec) {
    std::vector<std::vector<double>> per;
    for (int p = 0; p < periods; ++p)
      per.push_back(std::vector<double>(16, sec == 0 ? dom_mw : com_mw));
    c.heat_demand_mw.push_back(per);
  }
  return c;
}

RtnInstance one_cell(int periods, double dom_mw, double com_mw) {
  RtnInstance in;
  in.periods = periods;
  in.cells = {flat_cell("c0", periods, dom_mw, com_mw)};
  in.emissions.baseline_mt = 1000.0;
  in.emissions.caps_mt.assign(periods, 1000.0);
  in.legacy_gas_factor.assign(periods, 1.0);
  in.retail_price_per_mwh.assign(periods, std::vector<double>(16, 100.0));
  return in;
}

std::map<std::string, double> mode_shares(const HeatSupplyMix& mix, int period, int slice) {
  std::map<std::string, double> out;
  for (const auto& e : mix.entries)
    if (e.period == period && e.slice == slice && e.sector == 0) out[e.mode] += e.share;
  return out;
}

}  // namespace

TEST_CASE("calendar identities") {
  TimeSliceCalendar cal;
  cal.validate();
  CHECK(cal.days_in_year() == 365);
  CHECK(124 + 85 + 155 + 1 == 365);
  std::vector<int> count(TimeSliceCalendar::kSlices, 0);
  for (int h = 0; h < 8760; ++h) ++count[cal.slice_of_hour(h)];
  for (int s = 0; s < TimeSliceCalendar::kSlices; ++s)
    CHECK(count[s] == cal.slice_member_hours(s));
  int winter_night =
      TimeSliceCalendar::slice_index(Season::Winter, DayPeriod::Night);
  CHECK(cal.slice_member_hours(winter_night) == 124 * 7);
  CHECK(cal.slice_member_hours(winter_night) == 868);

  TimeSliceCalendar broken = cal;
  broken.season_days[0] = 123;
  CHECK_THROWS_AS(broken.validate(), CalendarError);
}

TEST_CASE("reduced calendars cover the year") {
  TimeSliceCalendar cal;
  full_year_calendar(cal).validate(cal);
  ReducedCalendar rep = representative_day_calendar(cal);
  rep.validate(cal);
  CHECK(rep.weights.size() == 96);
  CHECK(rep.day_starts.size() == 4);
  // four representative days weighted by their season day counts
  CHECK(rep.weights[0] == 124.0);
  CHECK(rep.weights[95] == 1.0);
}

TEST_CASE("emission caps descend linearly to zero") {
  auto caps = emission_caps(90.0);
  REQUIRE(caps.size() == 3);
  CHECK(caps[0] == doctest::Approx(60.0));
  CHECK(caps[1] == doctest::Approx(30.0));
  CHECK(caps[2] == 0.0);
  for (double c : emission_caps(0.0)) CHECK(c == 0.0);
  CHECK(emission_caps(123.4).back() == 0.0);
  CHECK_THROWS_AS(emission_caps(-1.0), CatalogError);
}

TEST_CASE("npv discounting") {
  CHECK(npv({10, 20, 30}, 0.0) == doctest::Approx(60.0));
  CHECK(npv({0, 100}, 0.035) == doctest::Approx(100.0 * std::pow(1.035, -10)));
  CHECK(npv({0, 100}, 0.035) == doctest::Approx(70.89).epsilon(1e-3));
  CHECK(npv({}, 0.05) == 0.0);
}

TEST_CASE("forced ASHP sizes to peak and owns the mix") {
  RtnInstance in = one_cell(1, 100.0, 20.0);
  in.catalog.heat = {ashp()};
  MixedIntegerProgram mip = build_rtn_model(in);
  MipSolution sol = solve_mip(mip);
  REQUIRE(sol.status == SolveStatus::Optimal);
  CHECK(sol.value(mip.lp, "hk[ashp,c0,domestic,0]") == doctest::Approx(100.0));
  CHECK(sol.value(mip.lp, "hk[ashp,c0,commercial,0]") == doctest::Approx(20.0));
  HeatSupplyMix mix = extract_heat_mix(mip.lp, sol, in);
  for (const auto& e : mix.entries) CHECK(e.share == doctest::Approx(1.0));
}

TEST_CASE("zero final cap with SMR-only catalog kills hydrogen heat") {
  RtnInstance in = one_cell(1, 100.0, 0.0);
  in.emissions.caps_mt = {0.0};
  in.catalog.heat = {ashp(), h2_boiler()};
  in.catalog.conversion = {smr()};
  in.catalog.storage = {co2_well()};
  MixedIntegerProgram mip = build_rtn_model(in);
  MipSolution sol = solve_mip(mip);
  REQUIRE(sol.status == SolveStatus::Optimal);
  HeatSupplyMix mix = extract_heat_mix(mip.lp, sol, in);
  for (const auto& e : mix.entries) {
    if (e.mode == "h2_boiler") CHECK(e.share == doctest::Approx(0.0));
    if (e.mode == "ashp") CHECK(e.share == doctest::Approx(1.0));
  }
}

TEST_CASE("gas import cost carries the seasonal price spread") {
  RtnInstance in = one_cell(1, 50.0, 0.0);
  in.catalog.heat = {h2_boiler()};
  in.catalog.conversion = {smr()};
  in.catalog.storage = {co2_well()};
  MixedIntegerProgram mip = build_rtn_model(in);
  const LinearProgram& lp = mip.lp;
  TimeSliceCalendar cal;
  int winter_night = TimeSliceCalendar::slice_index(Season::Winter, DayPeriod::Night);
  int summer_night = TimeSliceCalendar::slice_index(Season::Summer, DayPeriod::Night);
  double cw = lp.variables()[lp.variable_index("imp_gas[c0,0," +
                                               std::to_string(winter_night) + "]")]
                  .objective;
  double cs = lp.variables()[lp.variable_index("imp_gas[c0,0," +
                                               std::to_string(summer_night) + "]")]
                  .objective;
  // per MWh of gas, per year of the decade
  double per_mwh_winter = cw / (10.0 * cal.slice_member_hours(winter_night));
  double per_mwh_summer = cs / (10.0 * cal.slice_member_hours(summer_night));
  CHECK(per_mwh_winter == doctest::Approx(17.71));
  CHECK(per_mwh_summer == doctest::Approx(15.81));
  // a reformer's gas bill per MWh H2 differs across seasons by delta x coefficient
  CHECK(1.35 * (per_mwh_winter - per_mwh_summer) ==
        doctest::Approx(1.35 * (17.71 - 15.81)));
}

TEST_CASE("hydrogen plan reports whole SMR units") {
  RtnInstance in = one_cell(1, 50.0, 0.0);
  in.catalog.heat = {h2_boiler()};
  in.catalog.conversion = {smr()};
  in.catalog.storage = {co2_well()};
  MixedIntegerProgram mip = build_rtn_model(in);
  MipSolution sol = solve_mip(mip);
  REQUIRE(sol.status == SolveStatus::Optimal);
  HydrogenPlan plan = extract_hydrogen_plan(mip.lp, sol, in);
  // 50 MW of heat at 90% boiler efficiency needs ~55.6 MW of H2: one 1 GW unit
  CHECK(plan.capacity_gw("smr_syngas", 0) == doctest::Approx(1.0));
  for (const auto& pr : plan.production) {
    double units = pr.capacity_gw / 1.0;
    CHECK(units == doctest::Approx(std::round(units)));
  }
  for (const auto& d : plan.dispatch) CHECK(d.mw <= 1000.0 + 1e-6);
}

TEST_CASE("no hydrogen demand leaves an empty plan") {
  RtnInstance in = one_cell(1, 100.0, 0.0);
  in.catalog.heat = {ashp()};
  in.catalog.conversion = {smr()};
  in.catalog.storage = {co2_well()};
  MixedIntegerProgram mip = build_rtn_model(in);
  MipSolution sol = solve_mip(mip);
  REQUIRE(sol.status == SolveStatus::Optimal);
  CHECK(extract_hydrogen_plan(mip.lp, sol, in).empty());
}

TEST_CASE("remote demand pulls a hydrogen pipeline") {
  RtnInstance in = one_cell(1, 0.0, 0.0);
  in.cells[0].heat_demand_mw[0][0].assign(16, 60.0);
  Cell c1 = flat_cell("c1", 1, 60.0, 0.0);
  c1.co2_site = false;
  c1.cavern_site = false;
  in.cells.push_back(c1);
  in.edges = {{"c0", "c1", 50.0}};
  in.catalog.heat = {h2_boiler()};
  in.catalog.conversion = {smr()};
  in.catalog.storage = {co2_well()};
  in.catalog.pipelines = {h2_pipe_18(), co2_pipe_12()};
  MixedIntegerProgram mip = build_rtn_model(in);
  MipSolution sol = solve_mip(mip, SolverConfig{});
  REQUIRE(sol.status == SolveStatus::Optimal);
  HydrogenPlan plan = extract_hydrogen_plan(mip.lp, sol, in);
  bool has_h2_segment = false;
  for (const auto& seg : plan.pipelines)
    if (seg.carrier == "H2") has_h2_segment = true;
  CHECK(has_h2_segment);
  // one unit serves both cells; a second would cost far more than the link
  double units = 0.0;
  for (const auto& pr : plan.production) units += pr.capacity_gw;
  CHECK(units == doctest::Approx(1.0));
}

TEST_CASE("capped ASHP splits the peak day with the hydrogen boiler") {
  RtnInstance in = one_cell(1, 100.0, 0.0);
  // cheap electricity keeps the heat pump ahead of reformed hydrogen per MWh
  in.retail_price_per_mwh.assign(1, std::vector<double>(16, 20.0));
  for (int s = 12; s < 16; ++s) in.cells[0].heat_demand_mw[0][0][s] = 200.0;
  HeatTechnology capped = ashp();
  capped.max_capacity_share = 0.5;
  in.catalog.heat = {capped, h2_boiler()};
  in.catalog.conversion = {smr()};
  in.catalog.storage = {co2_well()};
  MixedIntegerProgram mip = build_rtn_model(in);
  MipSolution sol = solve_mip(mip);
  REQUIRE(sol.status == SolveStatus::Optimal);
  HeatSupplyMix mix = extract_heat_mix(mip.lp, sol, in);
  for (int s = 12; s < 16; ++s) {
    auto shares = mode_shares(mix, 0, s);
    CHECK(shares["ashp"] == doctest::Approx(0.5));
    CHECK(shares["h2_boiler"] == doctest::Approx(0.5));
  }
}

TEST_CASE("mix rows close to one on demand slices") {
  RtnInstance in = one_cell(1, 80.0, 15.0);
  in.catalog.heat = {ashp(), h2_boiler(), hybrid()};
  in.catalog.conversion = {smr()};
  in.catalog.storage = {co2_well()};
  MixedIntegerProgram mip = build_rtn_model(in);
  MipSolution sol = solve_mip(mip);
  REQUIRE(sol.status == SolveStatus::Optimal);
  HeatSupplyMix mix = extract_heat_mix(mip.lp, sol, in);
  std::map<std::string, double> sums;
  for (const auto& e : mix.entries) {
    CHECK(e.share >= -1e-9);
    CHECK(e.share <= 1.0 + 1e-9);
    sums[e.cell + "|" + std::to_string(e.sector) + "|" + std::to_string(e.period) + "|" +
         std::to_string(e.slice)] += e.share;
  }
  for (const auto& [key, total] : sums) CHECK(total == doctest::Approx(1.0));
}

TEST_CASE("solution audits: emissions, build rate, relaxation bound") {
  RtnInstance in = one_cell(1, 60.0, 0.0);
  in.emissions.caps_mt = {0.5};
  in.catalog.heat = {ashp(), h2_boiler()};
  in.catalog.conversion = {smr(), biomass_ccs()};
  in.catalog.storage = {co2_well()};
  MixedIntegerProgram mip = build_rtn_model(in);
  MipSolution sol = solve_mip(mip);
  REQUIRE(sol.status == SolveStatus::Optimal);

  auto mt = audit_emissions(mip.lp, sol, in);
  for (int p = 0; p < in.periods; ++p) CHECK(mt[p] <= in.emissions.caps_mt[p] + 1e-6);
  auto gw = audit_build_rate(mip.lp, sol, in);
  for (double g : gw) CHECK(g <= in.build_limit_gw_per_yr * 10.0 + 1e-9);

  LpSolution relax = solve_lp(mip.lp);
  REQUIRE(relax.status == SolveStatus::Optimal);
  CHECK(relax.objective <= sol.objective + 1e-6 * std::abs(sol.objective));

  // resource conservation recomputed row by row from the primal point
  for (const auto& row : mip.lp.constraints()) {
    if (row.name.rfind("h2[", 0) != 0 && row.name.rfind("co2[", 0) != 0) continue;
    double lhs = 0.0;
    for (auto [v, coef] : row.terms) lhs += coef * sol.primal[v];
    CHECK(lhs == doctest::Approx(row.rhs).epsilon(1e-6));
  }
}

TEST_CASE("tight build limit binds with a positive shadow price") {
  // hydrogen is the cheap route but demand wants far more than one
  // decade-GW of reformers, so the ceiling binds even in the relaxation
  RtnInstance in = one_cell(1, 2000.0, 0.0);
  in.retail_price_per_mwh.assign(1, std::vector<double>(16, 300.0));
  in.build_limit_gw_per_yr = 0.1;
  in.catalog.heat = {ashp(), h2_boiler()};
  in.catalog.conversion = {smr()};
  in.catalog.storage = {co2_well()};
  MixedIntegerProgram mip = build_rtn_model(in);
  MipSolution sol = solve_mip(mip);
  REQUIRE(sol.status == SolveStatus::Optimal);
  auto gw = audit_build_rate(mip.lp, sol, in);
  CHECK(gw[0] == doctest::Approx(in.build_limit_gw_per_yr * 10.0));
  LpSolution relax = solve_lp(mip.lp);
  REQUIRE(relax.status == SolveStatus::Optimal);
  // min problem, <= row: relaxing the limit lowers cost, so the dual is negative
  // and the shadow price -dual is positive
  CHECK(-relax.dual_of(mip.lp, "build_rate[0]") > 0.0);
}

TEST_CASE("model rejects defective instances") {
  RtnInstance in = one_cell(1, 50.0, 0.0);
  in.catalog.heat = {ashp()};
  in.retail_price_per_mwh[0].resize(15);
  CHECK_THROWS_AS(build_rtn_model(in), RtnModelError);

  RtnInstance orphan = one_cell(1, 50.0, 0.0);
  orphan.catalog.heat = {h2_boiler()};
  orphan.catalog.conversion = {smr()};
  orphan.catalog.storage = {co2_well()};
  Cell far = flat_cell("island", 1, 10.0, 0.0);
  far.co2_site = false;
  orphan.cells.push_back(far);  // no edge to the injection site
  CHECK_THROWS_AS(build_rtn_model(orphan), RtnModelError);

  RtnInstance nosite = one_cell(1, 50.0, 0.0);
  nosite.cells[0].co2_site = false;
  nosite.catalog.heat = {h2_boiler()};
  nosite.catalog.conversion = {smr()};
  CHECK_THROWS_AS(build_rtn_model(nosite), RtnModelError);
}
