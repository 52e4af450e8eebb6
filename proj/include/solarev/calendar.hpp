#pragma once

#include <cstddef>

namespace solarev {

inline constexpr std::size_t kHoursPerDay = 24;
inline constexpr std::size_t kDaysPerYear = 365;
inline constexpr std::size_t kHoursPerYear = kHoursPerDay * kDaysPerYear;  // 8760, leap days excluded

inline constexpr std::size_t hour_of_day(std::size_t hour_index) { return hour_index % kHoursPerDay; }
inline constexpr std::size_t day_of(std::size_t hour_index) { return hour_index / kHoursPerDay; }

}  // namespace solarev
