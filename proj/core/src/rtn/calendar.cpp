#include <heatlink/rtn/calendar.hpp>

#include <cmath>

namespace heatlink::rtn {

Season TimeSliceCalendar::season_of_day(int day_of_year) const {
  if (day_of_year < 0 || day_of_year >= days_in_year())
    throw CalendarError("day " + std::to_string(day_of_year) + " outside the calendar year");
  int winter = season_days[static_cast<int>(Season::Winter)];
  int shoulder = season_days[static_cast<int>(Season::AutumnSpring)];
  if (day_of_year < winter) return Season::Winter;
  if (day_of_year == winter) return Season::WinterPeak;
  if (day_of_year < winter + 1 + shoulder) return Season::AutumnSpring;
  return Season::Summer;
}

DayPeriod TimeSliceCalendar::period_of_hour_of_day(int hour_of_day) const {
  for (int p = 0; p < kDayPeriods; ++p)
    if (hour_of_day >= period_starts[p] && hour_of_day < period_starts[p + 1])
      return static_cast<DayPeriod>(p);
  throw CalendarError("hour-of-day " + std::to_string(hour_of_day) + " unmapped");
}

int TimeSliceCalendar::slice_of_hour(int hour_of_year) const {
  if (hour_of_year < 0 || hour_of_year >= days_in_year() * 24)
    throw CalendarError("hour " + std::to_string(hour_of_year) + " outside the calendar year");
  return slice_index(season_of_day(hour_of_year / 24),
                     period_of_hour_of_day(hour_of_year % 24));
}

void TimeSliceCalendar::validate() const {
  if (days_in_year() != 365)
    throw CalendarError("season day counts sum to " + std::to_string(days_in_year()) +
                        ", expected 365");
  for (int d : season_days)
    if (d <= 0) throw CalendarError("season day count must be positive");
  if (period_starts.front() != 0 || period_starts.back() != 24)
    throw CalendarError("daily periods must cover 0-24h");
  for (int p = 0; p < kDayPeriods; ++p)
    if (period_starts[p + 1] <= period_starts[p])
      throw CalendarError("daily period boundaries must increase");
}

std::string slice_name(int slice) {
  static const char* seasons[] = {"winter", "autumn_spring", "summer", "winter_peak"};
  static const char* periods[] = {"night", "day", "peak", "evening"};
  return std::string(seasons[slice / TimeSliceCalendar::kDayPeriods]) + "_" +
         periods[slice % TimeSliceCalendar::kDayPeriods];
}

void ReducedCalendar::validate(const TimeSliceCalendar& cal) const {
  if (weights.size() != slice_of_hour.size())
    throw CalendarError("reduced calendar weight/slice length mismatch");
  if (weights.empty()) throw CalendarError("reduced calendar is empty");
  std::vector<double> hours(TimeSliceCalendar::kSlices, 0.0);
  for (std::size_t i = 0; i < weights.size(); ++i) {
    if (weights[i] <= 0) throw CalendarError("hour weights must be positive");
    int s = slice_of_hour[i];
    if (s < 0 || s >= TimeSliceCalendar::kSlices)
      throw CalendarError("hour " + std::to_string(i) + " maps to no slice");
    hours[s] += weights[i];
  }
  for (int s = 0; s < TimeSliceCalendar::kSlices; ++s) {
    double expect = cal.slice_member_hours(s);
    if (std::abs(hours[s] - expect) > 1e-6 * expect + 1e-9)
      throw CalendarError("slice " + slice_name(s) + " carries " + std::to_string(hours[s]) +
                          " weighted hours, calendar expects " + std::to_string(expect));
  }
  for (std::size_t d : day_starts)
    if (d >= weights.size()) throw CalendarError("day start beyond series end");
}

ReducedCalendar full_year_calendar(const TimeSliceCalendar& cal) {
  ReducedCalendar rc;
  int hours = cal.days_in_year() * 24;
  rc.weights.assign(hours, 1.0);
  rc.slice_of_hour.resize(hours);
  for (int h = 0; h < hours; ++h) rc.slice_of_hour[h] = cal.slice_of_hour(h);
  for (int d = 0; d < cal.days_in_year(); ++d) rc.day_starts.push_back(d * 24);
  return rc;
}

ReducedCalendar representative_day_calendar(const TimeSliceCalendar& cal) {
  ReducedCalendar rc;
  for (int s = 0; s < TimeSliceCalendar::kSeasons; ++s) {
    rc.day_starts.push_back(rc.weights.size());
    for (int h = 0; h < 24; ++h) {
      rc.weights.push_back(cal.season_days[s]);
      rc.slice_of_hour.push_back(TimeSliceCalendar::slice_index(
          static_cast<Season>(s), cal.period_of_hour_of_day(h)));
    }
  }
  return rc;
}

ReducedCalendar slice_day_calendar(const TimeSliceCalendar& cal) {
  ReducedCalendar rc;
  for (int s = 0; s < TimeSliceCalendar::kSeasons; ++s) {
    rc.day_starts.push_back(rc.weights.size());
    for (int p = 0; p < TimeSliceCalendar::kDayPeriods; ++p) {
      int slice = TimeSliceCalendar::slice_index(static_cast<Season>(s),
                                                 static_cast<DayPeriod>(p));
      rc.weights.push_back(cal.slice_member_hours(slice));
      rc.slice_of_hour.push_back(slice);
    }
  }
  return rc;
}

}  // namespace heatlink::rtn
