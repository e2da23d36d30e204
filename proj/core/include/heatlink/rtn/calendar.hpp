#pragma once

#include <array>
#include <stdexcept>
#include <string>
#include <vector>

namespace heatlink::rtn {

// Seasons in chronological storage order: winter runs first, the single
// winter-peak day sits at the end of winter, then autumn/spring, then summer.
enum class Season : int { Winter = 0, AutumnSpring = 1, Summer = 2, WinterPeak = 3 };
enum class DayPeriod : int { Night = 0, Day = 1, Peak = 2, Evening = 3 };

class CalendarError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct TimeSliceCalendar {
  static constexpr int kSeasons = 4;
  static constexpr int kDayPeriods = 4;
  static constexpr int kSlices = kSeasons * kDayPeriods;

  std::array<int, kSeasons> season_days{124, 85, 155, 1};
  // half-open hour-of-day windows: night [0,7), day [7,17), peak [17,20),
  // evening [20,24)
  std::array<int, kDayPeriods + 1> period_starts{0, 7, 17, 20, 24};

  int days_in_year() const {
    int total = 0;
    for (int d : season_days) total += d;
    return total;
  }

  static int slice_index(Season s, DayPeriod p) {
    return static_cast<int>(s) * kDayPeriods + static_cast<int>(p);
  }
  static Season slice_season(int slice) { return static_cast<Season>(slice / kDayPeriods); }
  static DayPeriod slice_period(int slice) { return static_cast<DayPeriod>(slice % kDayPeriods); }

  int period_length_hours(DayPeriod p) const {
    int i = static_cast<int>(p);
    return period_starts[i + 1] - period_starts[i];
  }

  Season season_of_day(int day_of_year) const;
  DayPeriod period_of_hour_of_day(int hour_of_day) const;
  int slice_of_hour(int hour_of_year) const;

  // hours of the year belonging to a slice (e.g. winter-night: 124 x 7 = 868)
  int slice_member_hours(int slice) const {
    return season_days[slice / kDayPeriods] *
           period_length_hours(static_cast<DayPeriod>(slice % kDayPeriods));
  }

  void validate() const;
};

std::string slice_name(int slice);

// A compressed hourly series: hour i stands for `weights[i]` year-hours and
// belongs to time slice `slice_of_hour[i]`.
struct ReducedCalendar {
  std::vector<double> weights;
  std::vector<int> slice_of_hour;
  std::vector<std::size_t> day_starts;

  void validate(const TimeSliceCalendar& cal) const;
};

// Identity reduction: 8,760 hours, weight 1 each, slices from the calendar.
ReducedCalendar full_year_calendar(const TimeSliceCalendar& cal);

// One 24-hour representative day per season, weighted by the season day count.
ReducedCalendar representative_day_calendar(const TimeSliceCalendar& cal);

// Coarsest reduction: one step per (season, day period) — 16 steps, each
// weighted by its slice's member hours. Day blocks are the four steps of a
// season, so storage cycles close within each season's representative day.
ReducedCalendar slice_day_calendar(const TimeSliceCalendar& cal);

}  // namespace heatlink::rtn
