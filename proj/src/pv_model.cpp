#include "solarev/pv_model.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

namespace solarev {

namespace {

constexpr double kCalibrationTolerance = 1e-4;
constexpr int kMaxRefinements = 5;

double clipped_mean(const std::vector<double>& base, double scale) {
    double sum = 0.0;
    for (double v : base) sum += std::min(1.0, v * scale);
    return sum / static_cast<double>(base.size());
}

// Slope of clipped_mean at `scale`: contribution of the hours not yet clipped.
double clipped_slope(const std::vector<double>& base, double scale) {
    double sum = 0.0;
    for (double v : base)
        if (v * scale < 1.0) sum += v;
    return sum / static_cast<double>(base.size());
}

}  // namespace

void PvConfig::validate() const {
    if (!(capacity_kw >= 0.0)) throw InputError("pv capacity must be >= 0");
    if (!(max_capacity_kw > 0.0)) throw InputError("pv max capacity must be > 0");
    if (capacity_kw > max_capacity_kw * (1.0 + 1e-12))
        throw InputError(fmt::format("pv capacity {} kW exceeds rooftop limit {} kW", capacity_kw, max_capacity_kw));
    if (!(annual_degradation >= 0.0 && annual_degradation < 1.0))
        throw InputError("pv annual degradation must be in [0, 1)");
}

double max_capacity_from_rooftop(double rooftop_m2, double m2_per_kw) {
    if (!(rooftop_m2 >= 0.0) || !(m2_per_kw > 0.0)) throw InputError("invalid rooftop area or density");
    return rooftop_m2 / m2_per_kw;
}

HourlyProfile calibrate_cf(const HourlyProfile& profile, double target_annual_cf) {
    if (profile.unit() != UnitTag::capacity_factor) throw InputError("calibrate_cf needs a capacity-factor profile");
    if (!(target_annual_cf > 0.0 && target_annual_cf < 1.0))
        throw InputError("target annual capacity factor must be in (0, 1)");
    const auto base = profile.dense();
    const double mean = profile.mean();
    if (!(mean > 0.0)) throw InputError("capacity-factor profile has zero mean");

    // The clipped mean is concave and increasing in the scale, so Newton steps
    // started from the unclipped estimate approach the target from below.
    double scale = target_annual_cf / mean;
    double achieved = clipped_mean(base, scale);
    for (int i = 0; i < kMaxRefinements && std::abs(achieved - target_annual_cf) > kCalibrationTolerance; ++i) {
        const double slope = clipped_slope(base, scale);
        if (slope <= 0.0) break;
        scale += (target_annual_cf - achieved) / slope;
        achieved = clipped_mean(base, scale);
    }
    if (std::abs(achieved - target_annual_cf) > kCalibrationTolerance)
        throw InputError(fmt::format("capacity factor target {} unreachable after clipping; achieved mean {:.6f}",
                                     target_annual_cf, achieved));

    std::vector<double> out(base.size());
    std::transform(base.begin(), base.end(), out.begin(), [scale](double v) { return std::min(1.0, v * scale); });
    return HourlyProfile(out, UnitTag::capacity_factor, profile.start_date());
}

double degradation_factor(double annual_degradation, int project_year) {
    return std::pow(1.0 - annual_degradation, project_year);
}

HourlyProfile generation(const HourlyProfile& cf, const PvConfig& cfg, int project_year) {
    if (cf.unit() != UnitTag::capacity_factor) throw InputError("generation needs a capacity-factor profile");
    cfg.validate();
    if (project_year < 0) throw InputError("project year must be >= 0");
    const double k = cfg.capacity_kw * degradation_factor(cfg.annual_degradation, project_year);
    auto values = cf.dense();
    for (double& v : values) v *= k;
    return HourlyProfile(values, UnitTag::energy_kwh, cf.start_date());
}

}  // namespace solarev
