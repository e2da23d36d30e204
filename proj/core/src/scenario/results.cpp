#include "heatlink/scenario/scenario.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

namespace heatlink::scenario {
namespace fs = std::filesystem;

namespace {

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

std::ofstream open_out(const fs::path& path) {
  std::ofstream out(path);
  if (!out) throw ScenarioError("cannot write " + path.string());
  return out;
}

void write_iteration(const coupler::IterationRecord& rec, const fs::path& dir) {
  fs::create_directories(dir);

  {
    auto out = open_out(dir / "capacities.csv");
    out << "domain,period,technology,capacity_gw\n";
    for (std::size_t p = 0; p < rec.power.size(); ++p) {
      for (const auto& [tech, gw] : rec.power[p].capacity_gw)
        out << "power," << p << "," << tech << "," << fmt(gw) << "\n";
      out << "power," << p << ",battery," << fmt(rec.power[p].battery_gw) << "\n";
    }
    for (const auto& e : rec.regional.plan)
      out << "hydrogen," << e.period << "," << e.technology << ","
          << fmt(e.capacity_gw) << "\n";
  }

  {
    auto out = open_out(dir / "prices.csv");
    out << "period,slice,wholesale_per_mwh,retail_per_mwh\n";
    for (std::size_t p = 0; p < rec.wholesale_slice_price.size(); ++p)
      for (std::size_t s = 0; s < rec.wholesale_slice_price[p].size(); ++s)
        out << p << "," << s << "," << fmt(rec.wholesale_slice_price[p][s]) << ","
            << fmt(rec.retail_price_per_mwh[p][s]) << "\n";
  }

  {
    auto out = open_out(dir / "heat_mix.csv");
    out << "period,region,slice,mode,share\n";
    for (const auto& e : rec.regional.mix)
      out << e.period << "," << e.region << "," << e.slice << "," << e.mode << ","
          << fmt(e.share) << "\n";
  }

  {
    auto out = open_out(dir / "hydrogen_plan.csv");
    out << "kind,name,a,b,period,slice,value\n";
    for (const auto& e : rec.plan.production)
      out << "production," << e.technology << "," << e.cell << ",," << e.period
          << ",-1," << fmt(e.capacity_gw) << "\n";
    for (const auto& e : rec.plan.storage)
      out << "storage," << e.type << "," << e.cell << ",," << e.period << ",-1,"
          << fmt(e.units) << "\n";
    for (const auto& e : rec.plan.pipelines)
      out << "pipeline," << e.carrier << ":" << e.diameter_class << "," << e.a << ","
          << e.b << "," << e.period << ",-1," << fmt(e.units) << "\n";
    for (const auto& e : rec.plan.dispatch)
      out << "dispatch," << e.technology << "," << e.cell << ",," << e.period << ","
          << e.slice << "," << fmt(e.mw) << "\n";
  }

  {
    auto out = open_out(dir / "summary.csv");
    out << "metric,period,value\n";
    out << "iteration,-1," << rec.iteration << "\n";
    out << "total_heat_electric_twh,-1," << fmt(rec.total_heat_electric_twh) << "\n";
    out << "max_dshare,-1," << fmt(rec.max_dshare) << "\n";
    out << "max_dprice,-1," << fmt(rec.max_dprice) << "\n";
    for (std::size_t p = 0; p < rec.power.size(); ++p) {
      out << "mean_wholesale_per_mwh," << p << "," << fmt(rec.power[p].mean_price)
          << "\n";
      out << "emissions_mt," << p << "," << fmt(rec.power[p].emissions_mt) << "\n";
      out << "unserved_twh," << p << "," << fmt(rec.power[p].unserved_twh) << "\n";
      out << "total_cost," << p << "," << fmt(rec.power[p].total_cost) << "\n";
    }
  }
}

}  // namespace

void write_results(const coupler::CouplingState& state, const fs::path& out,
                   bool force) {
  if (fs::exists(out) && !fs::is_empty(out) && !force)
    throw ScenarioError("output directory " + out.string() +
                        " is not empty; pass force to overwrite");
  fs::create_directories(out);

  for (const auto& rec : state.history) {
    char name[32];
    std::snprintf(name, sizeof(name), "iter_%03d", rec.iteration);
    write_iteration(rec, out / name);
  }

  auto man = open_out(out / "manifest");
  man << "iterations=" << state.history.size() << "\n";
  man << "converged=" << (state.converged ? "1" : "0") << "\n";
  man << "failed=" << (state.failed ? "1" : "0") << "\n";
  if (!state.failure.empty()) man << "failure=" << state.failure << "\n";
}

}  // namespace heatlink::scenario
