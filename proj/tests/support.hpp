#pragma once

#include <cmath>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include "solarev/dispatch.hpp"
#include "solarev/rng.hpp"

namespace testing {

using namespace solarev;

/// Fresh empty directory under the system temp dir, removed on destruction.
class TempDir {
public:
    explicit TempDir(const std::string& tag) {
        static int counter = 0;
        path_ = std::filesystem::temp_directory_path() /
                ("solarev_test_" + tag + "_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
        std::filesystem::remove_all(path_);
        std::filesystem::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    const std::filesystem::path& path() const { return path_; }
    std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

private:
    std::filesystem::path path_;
};

inline std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline void spit(const std::filesystem::path& p, const std::string& text) {
    std::ofstream out(p, std::ios::binary);
    out << text;
}

inline std::vector<double> flat(std::size_t n, double v) { return std::vector<double>(n, v); }

/// A randomized dispatch problem; EV instances keep daily driving within the reserve.
struct DispatchInstance {
    std::vector<double> demand, pv;
    StorageConfig storage;
    double health = 1.0;
    std::optional<double> initial_soc;
};

inline DispatchInstance random_instance(Rng& rng, std::size_t hours) {
    DispatchInstance in;
    in.demand.resize(hours);
    in.pv.resize(hours);
    const double peak = rng.uniform(0.5, 8.0);
    for (std::size_t h = 0; h < hours; ++h) {
        in.demand[h] = rng.uniform() < 0.05 ? 0.0 : rng.uniform(0.0, 3.0);
        const double sun = std::sin((static_cast<double>(h % 24) - 6.0) / 12.0 * 3.141592653589793);
        // Some instances put generation at night too, to exercise the midnight rules.
        const bool odd = rng.uniform() < 0.1;
        in.pv[h] = (sun > 0.0 || odd) ? std::max(0.0, peak * (odd ? rng.uniform() : sun) * rng.uniform(0.3, 1.0)) : 0.0;
    }
    auto& s = in.storage;
    const auto kind = rng.below(4);
    s.kind = kind == 0 ? StorageKind::none
             : kind == 1 ? StorageKind::stationary
             : kind == 2 ? StorageKind::ev_individual
                         : StorageKind::ev_pooled;
    s.nominal_kwh = rng.uniform() < 0.05 ? 0.0 : rng.uniform(0.5, 40.0);
    s.charge_efficiency = rng.uniform() < 0.3 ? 1.0 : rng.uniform(0.7, 1.0);
    s.discharge_efficiency = rng.uniform() < 0.3 ? 1.0 : rng.uniform(0.7, 1.0);
    if (rng.uniform() < 0.4) s.power_limit_kw = rng.uniform(0.0, 5.0);
    if (rng.uniform() < 0.6) {
        s.availability.resize(hours);
        for (auto& a : s.availability) a = rng.uniform() < 0.2 ? 0.0 : rng.uniform() < 0.3 ? 1.0 : rng.uniform();
    }
    if (s.is_ev()) {
        s.soc_floor_kwh = s.nominal_kwh * rng.uniform(0.0, 0.8);
        if (rng.uniform() < 0.8 && s.soc_floor_kwh > 0.0) {
            s.driving_kwh.assign(hours, 0.0);
            for (std::size_t day = 0; day * 24 < hours; ++day) {
                double budget = s.soc_floor_kwh * rng.uniform(0.0, 1.0);
                for (std::size_t h = day * 24; h < std::min(hours, day * 24 + 24) && budget > 0.0; ++h) {
                    if (rng.uniform() < 0.15) {
                        const double d = std::min(budget, rng.uniform(0.0, 3.0));
                        s.driving_kwh[h] = d;
                        budget -= d;
                    }
                }
            }
        }
    }
    in.health = rng.uniform() < 0.5 ? 1.0 : rng.uniform(0.5, 1.0);
    if (s.has_storage() && rng.uniform() < 0.5)
        in.initial_soc = rng.uniform(s.soc_floor_kwh, std::max(s.soc_floor_kwh, in.health * s.nominal_kwh));
    return in;
}

/// Houses sharing one availability profile, and the same houses as one pooled site.
/// With `trips`, each EV also draws its own trip energy.
struct PoolingInstance {
    std::vector<std::vector<double>> demand, pv;
    std::vector<StorageConfig> storage;
    std::vector<double> pooled_demand, pooled_pv;
    StorageConfig pooled;
};

inline PoolingInstance random_pooling_instance(Rng& rng, std::size_t hours, std::size_t houses, bool trips = false) {
    PoolingInstance in;
    const bool ev = rng.uniform() < 0.5;
    std::vector<double> shared;
    if (rng.uniform() < 0.7) {
        shared.resize(hours);
        for (std::size_t h = 0; h < hours; ++h) {
            const auto hod = h % 24;
            shared[h] = (hod >= 7 && hod < 19) ? rng.uniform(0.3, 1.0) : 1.0;
        }
    }
    const double eta_c = rng.uniform(0.8, 1.0), eta_d = rng.uniform(0.8, 1.0);
    const bool limited = rng.uniform() < 0.3;
    in.pooled_demand.assign(hours, 0.0);
    in.pooled_pv.assign(hours, 0.0);
    in.pooled.kind = ev ? StorageKind::ev_pooled : StorageKind::stationary;
    in.pooled.charge_efficiency = eta_c;
    in.pooled.discharge_efficiency = eta_d;
    in.pooled.availability = shared;
    if (limited) in.pooled.power_limit_kw = 0.0;
    if (ev && trips) in.pooled.driving_kwh.assign(hours, 0.0);
    for (std::size_t i = 0; i < houses; ++i) {
        std::vector<double> d(hours), g(hours);
        const double size = rng.uniform(0.5, 6.0);
        const double phase = rng.uniform(-3.0, 3.0);
        for (std::size_t h = 0; h < hours; ++h) {
            const double hod = static_cast<double>(h % 24);
            d[h] = rng.uniform(0.05, 1.0) * (1.0 + std::cos((hod - 19.0 + phase) / 24.0 * 6.283185307179586));
            const double sun = std::sin((hod - 6.0) / 12.0 * 3.141592653589793);
            g[h] = sun > 0.0 ? size * sun * rng.uniform(0.2, 1.0) : 0.0;
            in.pooled_demand[h] += d[h];
            in.pooled_pv[h] += g[h];
        }
        StorageConfig s;
        s.kind = ev ? StorageKind::ev_individual : StorageKind::stationary;
        s.nominal_kwh = rng.uniform(1.0, 20.0);
        s.charge_efficiency = eta_c;
        s.discharge_efficiency = eta_d;
        s.availability = shared;
        if (limited) s.power_limit_kw = rng.uniform(0.5, 5.0);
        if (ev) {
            s.soc_floor_kwh = s.nominal_kwh * rng.uniform(0.2, 0.6);
        }
        if (ev && trips) {
            s.driving_kwh.assign(hours, 0.0);
            for (std::size_t day = 0; day * 24 < hours; ++day)
                for (int trip = 0; trip < 3; ++trip) {
                    const std::size_t h = day * 24 + 7 + rng.below(12);
                    if (h < hours) s.driving_kwh[h] += s.soc_floor_kwh / 4.0;
                }
            for (std::size_t h = 0; h < hours; ++h) in.pooled.driving_kwh[h] += s.driving_kwh[h];
        }
        in.pooled.nominal_kwh += s.nominal_kwh;
        in.pooled.soc_floor_kwh += s.soc_floor_kwh;
        if (limited) *in.pooled.power_limit_kw += *s.power_limit_kw;
        in.demand.push_back(std::move(d));
        in.pv.push_back(std::move(g));
        in.storage.push_back(std::move(s));
    }
    return in;
}

}  // namespace testing
