#pragma once

#include <heatlink/coupler/transform.hpp>
#include <heatlink/rtn/model.hpp>

#include <map>
#include <string>
#include <vector>

namespace heatlink::coupler {

struct RegionMapping {
  std::map<std::string, std::string> cell_to_region;

  const std::string& region_of(const std::string& cell) const {
    auto it = cell_to_region.find(cell);
    if (it == cell_to_region.end()) throw CouplerError("unmapped cell: " + cell);
    return it->second;
  }
  void validate(const std::vector<rtn::Cell>& cells,
                const std::vector<std::string>& regions) const;
};

struct RegionalMixEntry {
  int period = 0;
  std::string region;
  int slice = 0;
  std::string mode;
  double share = 0.0;
};

struct RegionalPlanEntry {
  std::string technology, region;
  int period = 0;
  double capacity_gw = 0.0;
};

struct RegionalState {
  std::vector<RegionalMixEntry> mix;
  std::vector<RegionalPlanEntry> plan;

  double share(int period, const std::string& region, int slice,
               const std::string& mode) const;
};

// Capacities sum over member cells; shares combine as demand-weighted means.
RegionalState aggregate_cells_to_regions(const rtn::HydrogenPlan& plan,
                                         const rtn::HeatSupplyMix& mix,
                                         const RegionMapping& mapping,
                                         const rtn::RtnInstance& in);

}  // namespace heatlink::coupler
