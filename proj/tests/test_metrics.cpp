#include <doctest.h>

#include "solarev/metrics.hpp"
#include "solarev/rng.hpp"
#include "support.hpp"

using namespace solarev;

TEST_CASE("energy indices") {
    DispatchResult d;
    d.e_pv = 100.0;
    d.e_pv_to_load = 30.0;
    d.e_batt_to_load = 20.0;
    d.e_load = 80.0;
    const auto e = energy_indices(d);
    CHECK(e.sc_pct == doctest::Approx(50.0));
    CHECK(e.ss_pct == doctest::Approx(62.5));
    CHECK(e.es_pct == doctest::Approx(125.0));

    d = {};
    d.e_load = 10.0;
    CHECK(energy_indices(d).sc_pct == 100.0);
    d.e_load = 0.0;
    CHECK_THROWS_AS(energy_indices(d), InputError);
}

TEST_CASE("no storage and PV below load: SC is 100 and SS equals ES") {
    Rng rng(3);
    std::vector<double> load(24 * 30), pv(load.size());
    for (std::size_t h = 0; h < load.size(); ++h) {
        load[h] = rng.uniform(0.5, 2.0);
        pv[h] = load[h] * rng.uniform(0.0, 1.0);
    }
    const auto e = energy_indices(simulate_year(load, pv, StorageConfig{}, Tariff{0.22, 0.09}, 1.0));
    CHECK(e.sc_pct == doctest::Approx(100.0));
    CHECK(e.ss_pct == doctest::Approx(e.es_pct));
}

TEST_CASE("index identities on random dispatch") {
    Rng rng(99);
    for (int i = 0; i < 200; ++i) {
        const auto in = testing::random_instance(rng, 24 + rng.below(24 * 20));
        const auto d = simulate_year(in.demand, in.pv, in.storage, Tariff{0.22, 0.09}, in.health,
                                     {.initial_soc_kwh = in.initial_soc});
        if (!(d.e_load > 0.0)) continue;
        const auto e = energy_indices(d);
        CHECK(e.ss_pct <= 100.0 + 1e-9);
        CHECK(e.ss_pct >= 0.0);
        CHECK(e.es_pct >= 0.0);
        if (d.e_pv > 0.0) {
            CHECK(e.sc_pct <= 100.0 + 1e-9 + 100.0 * d.soc_start_kwh / d.e_pv);
            CHECK(e.sc_pct * d.e_pv == doctest::Approx(e.ss_pct * d.e_load).epsilon(1e-12));
        }
    }
}

TEST_CASE("cost saving") {
    FinancialSummary s;
    s.npv_total = 0.0;
    CHECK(cost_saving(s, 1953.0, 25) == 0.0);
    s.npv_total = 14826.0;
    CHECK(cost_saving(s, 1301.0 + 652.0, 25) == doctest::Approx(30.37).epsilon(1e-3));
    const double once = cost_saving(s, 1953.0, 25);
    s.npv_total *= 2.0;
    CHECK(cost_saving(s, 1953.0, 25) == doctest::Approx(2.0 * once));
    // Currency rescaling leaves CS unchanged.
    s.npv_total *= 110.0;
    CHECK(cost_saving(s, 1953.0 * 110.0, 25) == doctest::Approx(2.0 * once).epsilon(1e-12));
    CHECK_THROWS_AS(cost_saving(s, 0.0, 25), InputError);
    CHECK_THROWS_AS(cost_saving(s, 1.0, 0), InputError);
}

TEST_CASE("co2") {
    DispatchResult base, sys;
    base.e_import = 5915.0;
    const TransportParams t;
    const EmissionFactors f;

    const auto ev = co2(base, base, f, t, true);
    CHECK(ev.emi_base_kg == doctest::Approx(4250.0).epsilon(5.0 / 4250.0));
    CHECK(ev.emi_base_kg == doctest::Approx(5915.0 * 0.522 + 6368.0 / 12.6 * 2.3));

    CHECK(co2(base, base, f, t, false).reduction_pct == doctest::Approx(0.0));

    sys.e_import = 500.0;
    const auto r = co2(base, sys, f, t, true);
    CHECK(r.emi_system_kg == doctest::Approx(261.0));
    CHECK(r.reduction_pct == doctest::Approx(93.9).epsilon(1e-3));

    sys.e_import = 0.0;
    CHECK(co2(base, sys, f, t, true).reduction_pct == 100.0);

    const EmissionFactors kyoto{0.352, 2.3};
    CHECK(co2(base, base, kyoto, t, false).emi_base_kg == doctest::Approx(5915.0 * 0.352));

    base.e_import = 0.0;
    CHECK_THROWS_AS(co2(base, sys, f, t, false), InputError);
}
