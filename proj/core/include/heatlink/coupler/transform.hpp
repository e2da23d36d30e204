#pragma once

#include <heatlink/rtn/calendar.hpp>

#include <stdexcept>
#include <vector>

namespace heatlink::coupler {

class CouplerError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RetailTransform {
  double ratio = 2.2;
  double cap_per_mwh = 528.0;

  double operator()(double wholesale_per_mwh) const {
    if (wholesale_per_mwh < 0)
      throw CouplerError("wholesale price must be non-negative; clamp duals first");
    double retail = ratio * wholesale_per_mwh;
    return retail < cap_per_mwh ? retail : cap_per_mwh;
  }
};

// Curtailment hours can carry negative duals; the retail transform only
// accepts prices clamped at zero.
std::vector<double> clamp_negative(std::vector<double> prices);

// Weighted mean over the member hours of each of the 16 slices.
std::vector<double> aggregate_to_slices(const std::vector<double>& hourly,
                                        const rtn::ReducedCalendar& calendar);

}  // namespace heatlink::coupler
