#pragma once

#include "solarev/profiles.hpp"

namespace solarev {

struct PvConfig {
    double capacity_kw = 0.0;
    double annual_degradation = 0.005;
    double max_capacity_kw = 10.0;

    void validate() const;
};

/// Rooftop area to installable capacity at a panel density of `m2_per_kw`.
double max_capacity_from_rooftop(double rooftop_m2, double m2_per_kw = 8.29);

/// Scales a capacity-factor profile so its annual mean hits `target_annual_cf`.
/// Values are clipped at 1 after scaling; the scale is then refined (at most 5
/// times) until the clipped mean is within 1e-4 of the target. Throws
/// InputError with the achieved mean when the target cannot be reached.
HourlyProfile calibrate_cf(const HourlyProfile& profile, double target_annual_cf);

/// Hourly energy for `cfg.capacity_kw` in project year `project_year` (0-based).
HourlyProfile generation(const HourlyProfile& cf, const PvConfig& cfg, int project_year);

/// Multiplier (1 - degradation)^year.
double degradation_factor(double annual_degradation, int project_year);

}  // namespace solarev
