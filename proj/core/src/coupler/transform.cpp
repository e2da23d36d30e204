#include <heatlink/coupler/regions.hpp>
#include <heatlink/coupler/transform.hpp>

#include <algorithm>
#include <map>
#include <set>
#include <tuple>

namespace heatlink::coupler {

std::vector<double> clamp_negative(std::vector<double> prices) {
  for (double& p : prices)
    if (p < 0) p = 0.0;
  return prices;
}

std::vector<double> aggregate_to_slices(const std::vector<double>& hourly,
                                        const rtn::ReducedCalendar& calendar) {
  if (hourly.size() != calendar.weights.size())
    throw CouplerError("price series length " + std::to_string(hourly.size()) +
                       " does not match the calendar's " +
                       std::to_string(calendar.weights.size()) + " hours");
  std::vector<double> num(rtn::TimeSliceCalendar::kSlices, 0.0);
  std::vector<double> den(rtn::TimeSliceCalendar::kSlices, 0.0);
  for (std::size_t h = 0; h < hourly.size(); ++h) {
    int s = calendar.slice_of_hour[h];
    if (s < 0 || s >= rtn::TimeSliceCalendar::kSlices)
      throw CouplerError("hour " + std::to_string(h) + " is unmapped (calendar defect)");
    num[s] += calendar.weights[h] * hourly[h];
    den[s] += calendar.weights[h];
  }
  std::vector<double> out(rtn::TimeSliceCalendar::kSlices, 0.0);
  for (int s = 0; s < rtn::TimeSliceCalendar::kSlices; ++s) {
    if (den[s] <= 0)
      throw CouplerError("slice " + rtn::slice_name(s) + " has no member hours");
    out[s] = num[s] / den[s];
  }
  return out;
}

void RegionMapping::validate(const std::vector<rtn::Cell>& cells,
                             const std::vector<std::string>& regions) const {
  std::set<std::string> seen;
  for (const auto& c : cells) seen.insert(region_of(c.id));
  for (const auto& r : regions)
    if (seen.count(r) == 0)
      throw CouplerError("region " + r + " has no member cells");
}

double RegionalState::share(int period, const std::string& region, int slice,
                            const std::string& mode) const {
  for (const auto& e : mix)
    if (e.period == period && e.region == region && e.slice == slice && e.mode == mode)
      return e.share;
  return 0.0;
}

RegionalState aggregate_cells_to_regions(const rtn::HydrogenPlan& plan,
                                         const rtn::HeatSupplyMix& mix,
                                         const RegionMapping& mapping,
                                         const rtn::RtnInstance& in) {
  RegionalState out;

  std::map<std::tuple<std::string, std::string, int>, double> caps;
  for (const auto& p : plan.production)
    caps[{p.technology, mapping.region_of(p.cell), p.period}] += p.capacity_gw;
  for (const auto& [key, gw] : caps)
    out.plan.push_back({std::get<0>(key), std::get<1>(key), std::get<2>(key), gw});

  // shares combine as demand-weighted means across member cells and sectors
  std::map<std::tuple<int, std::string, int, std::string>, double> num;
  std::map<std::tuple<int, std::string, int>, double> den;
  for (const auto& e : mix.entries) {
    const auto& cell = in.cells[in.cell_index(e.cell)];
    double demand = cell.heat_demand_mw[e.sector][e.period][e.slice];
    if (demand <= 0) demand = 1e-9;  // zero-demand slices carry token weight
    const std::string& region = mapping.region_of(e.cell);
    num[{e.period, region, e.slice, e.mode}] += demand * e.share;
  }
  for (const auto& cell : in.cells) {
    const std::string& region = mapping.region_of(cell.id);
    for (int sec = 0; sec < rtn::kSectors; ++sec)
      for (int p = 0; p < in.periods; ++p)
        for (int s = 0; s < rtn::TimeSliceCalendar::kSlices; ++s) {
          double demand = cell.heat_demand_mw[sec][p][s];
          den[{p, region, s}] += demand > 0 ? demand : 1e-9;
        }
  }
  for (const auto& [key, weighted] : num) {
    auto [p, region, s, mode] = key;
    double total = den[{p, region, s}];
    if (total > 0) out.mix.push_back({p, region, s, mode, weighted / total});
  }
  return out;
}

}  // namespace heatlink::coupler
