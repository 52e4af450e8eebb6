#pragma once

// Brute-force reference for one year of greedy dispatch, written from the
// dispatch rules alone. Kept free of library code on purpose.

#include <algorithm>
#include <cstddef>
#include <optional>
#include <vector>

namespace oracle {

struct Storage {
    bool ev = false;
    double nominal = 0.0;
    double floor = 0.0;
    double eta_c = 1.0;
    double eta_d = 1.0;
    std::optional<double> limit;
    std::vector<double> plugged;  // empty: always 1
    std::vector<double> drive;    // empty: none
};

struct Hour {
    double pv_to_load = 0, pv_to_batt = 0, batt_to_load = 0, grid_to_batt = 0, imp = 0, exp = 0, soc = 0;
};

inline double lesser(double a, double b) { return b < a ? b : a; }

inline std::vector<Hour> step_all(const std::vector<double>& load, const std::vector<double>& pv, const Storage& st,
                                  double health, std::optional<double> soc0) {
    std::vector<Hour> out(load.size());
    const bool has = st.nominal > 0.0;
    const double cap = has ? health * st.nominal : 0.0;
    const double floor = has ? st.floor : 0.0;
    double soc = has ? (soc0 ? *soc0 : floor) : 0.0;
    for (std::size_t h = 0; h < load.size(); ++h) {
        Hour& o = out[h];
        const double a = st.plugged.empty() ? 1.0 : st.plugged[h];
        if (has && st.ev && !st.drive.empty()) soc = soc - std::min(st.drive[h], std::max(0.0, soc));

        // PV to load.
        double left_pv = pv[h];
        double left_load = load[h];
        o.pv_to_load = lesser(left_pv, left_load);
        left_pv = left_pv - o.pv_to_load;
        left_load = left_load - o.pv_to_load;

        // PV surplus into the plugged-in share.
        if (has && left_pv > 0.0) {
            double headroom = a * (cap - soc);
            if (headroom < 0.0) headroom = 0.0;
            double stored = left_pv * st.eta_c;
            stored = lesser(stored, headroom);
            if (st.limit) stored = lesser(stored, *st.limit * st.eta_c);
            o.pv_to_batt = stored / st.eta_c;
            soc = soc + stored;
        }
        // Midnight: refill the driving reserve, spare PV before grid.
        const double reserve = lesser(floor, cap);
        if (has && st.ev && h % 24 == 0 && soc < reserve) {
            double spare = (left_pv - o.pv_to_batt) * st.eta_c;
            double gap = reserve - soc;
            double from_pv = lesser(gap, spare);
            if (from_pv > 0.0) {
                o.pv_to_batt = o.pv_to_batt + from_pv / st.eta_c;
                soc = soc + from_pv;
            }
            if (soc < reserve) {
                o.grid_to_batt = (reserve - soc) / st.eta_c;
                soc = reserve;
            }
        }
        // Deficit from storage above the floor.
        if (has && left_load > 0.0) {
            double usable = a * (soc - floor);
            if (usable < 0.0) usable = 0.0;
            double give = lesser(left_load, usable * st.eta_d);
            if (st.limit) give = lesser(give, *st.limit);
            o.batt_to_load = give;
            soc = soc - give / st.eta_d;
        }
        o.exp = left_pv - o.pv_to_batt;
        o.imp = left_load - o.batt_to_load + o.grid_to_batt;
        o.soc = soc;
    }
    return out;
}

}  // namespace oracle
