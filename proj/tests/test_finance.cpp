#include <doctest.h>

#include <cmath>
#include <numeric>

#include "solarev/finance.hpp"
#include "solarev/rng.hpp"

using namespace solarev;

namespace {

const TechnologyCostSchedule kCosts{};

/// Net present value by direct summation, independent of the library helpers.
double direct_npv(const std::vector<double>& flows, double capex, double rate) {
    double v = -capex;
    for (std::size_t n = 0; n < flows.size(); ++n) v += flows[n] / std::pow(1.0 + rate, static_cast<double>(n + 1));
    return v;
}

DispatchResult flows_of(double imported, double exported) {
    DispatchResult d;
    d.e_import = imported;
    d.e_export = exported;
    return d;
}

}  // namespace

TEST_CASE("cost trajectories") {
    CHECK(cost_at_year(kCosts, CostComponent::pv, 2030) / 1000.0 == doctest::Approx(1.01).epsilon(0.005 / 1.01));
    CHECK(cost_at_year(kCosts, CostComponent::battery, 2030) == doctest::Approx(636.6).epsilon(1e-3));
    CHECK(cost_at_year(kCosts, CostComponent::ev_add, 2030) == doctest::Approx(24.3).epsilon(2e-3));
    CHECK(cost_at_year(kCosts, CostComponent::ev_add, 2040) == doctest::Approx(2.96).epsilon(5e-3));
    CHECK(kCosts.replacement_per_kwh(2032) == doctest::Approx(562.5).epsilon(1e-3));
    CHECK_THROWS_AS(cost_at_year(kCosts, CostComponent::pv, 2019), InputError);

    SUBCASE("base year is exact and the log decline is constant") {
        CHECK(cost_at_year(kCosts, CostComponent::pv, 2020) == 2200.0);
        CHECK(cost_at_year(kCosts, CostComponent::battery, 2020) == 1182.0);
        CHECK(cost_at_year(kCosts, CostComponent::ev_add, 2020) == 200.0);
        for (auto c : {CostComponent::pv, CostComponent::battery, CostComponent::ev_add}) {
            const double step = std::log(cost_at_year(kCosts, c, 2021)) - std::log(cost_at_year(kCosts, c, 2020));
            for (int y = 2021; y < 2050; ++y)
                CHECK(std::log(cost_at_year(kCosts, c, y + 1)) - std::log(cost_at_year(kCosts, c, y)) ==
                      doctest::Approx(step).epsilon(1e-9));
        }
    }
    SUBCASE("fixed replacement price") {
        auto s = kCosts;
        s.r_battery_mode = ReplacementCost::fixed;
        CHECK(s.replacement_per_kwh(2040) == 1182.0);
        s.r_battery_fixed = 300.0;
        CHECK(s.replacement_per_kwh(2040) == 300.0);
    }
}

TEST_CASE("system_cost") {
    CHECK(system_cost(0.0, 0.0, 2030, kCosts) == 0.0);
    CHECK(system_cost(10.0, 0.0, 2030, kCosts) == doctest::Approx(10.0 * cost_at_year(kCosts, CostComponent::pv, 2030)));
    CHECK(system_cost(10.0, 0.0, 2030, kCosts) == doctest::Approx(10100.0).epsilon(0.005));
    CHECK(system_cost(0.0, 5.0, 2020, kCosts) == doctest::Approx(5910.0));
    // 20 kWh usable of a 40 kWh vehicle, premium on the whole pack.
    CHECK(system_cost(0.0, 20.0, 2020, kCosts, Technology::pv_plus_ev, 0.5) == doctest::Approx(8000.0));
    CHECK_THROWS_AS(system_cost(-1.0, 0.0, 2030, kCosts), InputError);
}

TEST_CASE("annual_electricity_cost") {
    const Tariff t{0.22, 0.09};
    CHECK(annual_electricity_cost(flows_of(5915.0, 0.0), t, 0.0, 0.0, kCosts, 2020, 2020, false) ==
          doctest::Approx(1301.30));
    CHECK(annual_electricity_cost(flows_of(0.0, 1000.0), t, 0.0, 0.0, kCosts, 2020, 2020, false) ==
          doctest::Approx(-90.0));
    const double with = annual_electricity_cost(flows_of(0.0, 0.0), t, 0.0, 20.0, kCosts, 2020, 2032, true);
    const double without = annual_electricity_cost(flows_of(0.0, 0.0), t, 0.0, 20.0, kCosts, 2020, 2032, false);
    CHECK(with - without == doctest::Approx(20.0 * cost_at_year(kCosts, CostComponent::battery, 2032)));
    CHECK(with - without == doctest::Approx(11240.0).epsilon(2e-3));
    // Maintenance is 1% of the start-year PV cost per kW.
    CHECK(annual_electricity_cost(flows_of(0.0, 0.0), t, 4.0, 0.0, kCosts, 2020, 2030, false) ==
          doctest::Approx(4.0 * 22.0));
}

TEST_CASE("present value helpers") {
    CHECK(annuity_factor(0.03, 25) == doctest::Approx(17.4131).epsilon(1e-5));
    double oracle = 0.0;
    for (int n = 1; n <= 25; ++n) oracle += 1.0 / std::pow(1.03, n);
    CHECK(annuity_factor(0.03, 25) == doctest::Approx(oracle).epsilon(1e-12));

    const FinanceParams one{0.03, 1, 2020};
    const std::vector<double> base{100.0}, sys{0.0};
    CHECK(std::abs(npv_electricity(base, sys, 100.0 / 1.03, one)) < 1e-9);
    CHECK(npv_electricity(std::vector<double>(25, 5.0), std::vector<double>(25, 5.0), 0.0, FinanceParams{}) == 0.0);
    const std::vector<double> flows(25, 652.0);
    CHECK(present_value(flows, 0.03) == doctest::Approx(11353.0).epsilon(5.0 / 11353.0));
}

TEST_CASE("gasoline") {
    TransportParams t;
    CHECK(t.annual_gasoline_litres() * t.gasoline_price == doctest::Approx(652.0).epsilon(0.5 / 652.0));
    CHECK(npv_gasoline(t, FinanceParams{}) == doctest::Approx(11353.0).epsilon(5.0 / 11353.0));
    t.n_vehicles = 0;
    CHECK(npv_gasoline(t, FinanceParams{}) == 0.0);
    t.n_vehicles = 50;
    CHECK(npv_gasoline(t, FinanceParams{}) == doctest::Approx(567700.0).epsilon(1e-3));
    t.gasoline_km_per_l = 0.0;
    CHECK_THROWS_AS(npv_gasoline(t, FinanceParams{}), InputError);
}

TEST_CASE("irr") {
    const std::vector<double> one{110.0};
    REQUIRE(irr(one, 100.0));
    CHECK(*irr(one, 100.0) == doctest::Approx(0.10).epsilon(1e-9));

    // Oracle: bisect 100 = 50/(1+d) + 50/(1+d)^2 + 50/(1+d)^3 on [0, 1].
    double lo = 0.0, hi = 1.0;
    while (hi - lo > 1e-12) {
        const double mid = 0.5 * (lo + hi);
        (direct_npv({50, 50, 50}, 100.0, mid) > 0.0 ? lo : hi) = mid;
    }
    const auto d = irr(std::vector<double>{50, 50, 50}, 100.0);
    REQUIRE(d);
    CHECK(*d == doctest::Approx(lo).epsilon(1e-9));
    CHECK(*d == doctest::Approx(0.2338).epsilon(1e-3));

    CHECK_FALSE(irr(std::vector<double>{-5.0, 0.0, -1.0}, 100.0));
    CHECK_FALSE(irr(std::vector<double>{0.0, 0.0}, 100.0));
}

TEST_CASE("spb") {
    CHECK(*spb(std::vector<double>(25, 50.0), 100.0) == doctest::Approx(2.0));
    CHECK(*spb(std::vector<double>(25, 30.0), 100.0) == doctest::Approx(10.0 / 3.0));
    CHECK_FALSE(spb(std::vector<double>(25, 0.0), 100.0));
    CHECK(*spb(std::vector<double>(3, 0.0), 0.0) == 0.0);
}

TEST_CASE("finance properties on random cash flows") {
    Rng rng(77);
    for (int i = 0; i < 500; ++i) {
        const int years = 1 + static_cast<int>(rng.below(30));
        std::vector<double> base(years), sys(years), gas(years);
        for (int n = 0; n < years; ++n) {
            // Savings most years, with an occasional replacement that makes the flow negative.
            base[n] = rng.uniform(500.0, 5000.0);
            sys[n] = base[n] * rng.uniform(-0.2, 0.9) + (rng.uniform() < 0.1 ? rng.uniform(0.0, 10000.0) : 0.0);
            gas[n] = rng.uniform() < 0.5 ? 0.0 : rng.uniform(0.0, 1000.0);
        }
        const double capex = rng.uniform(1.0, 50000.0);
        const FinanceParams params{rng.uniform(0.0, 0.1), years, 2020};
        const auto s = summarize(base, sys, gas, capex, params);
        CHECK(s.npv_total == s.npv_electricity + s.npv_gasoline);
        CHECK(s.npv_total == doctest::Approx(direct_npv(s.cash_flows, capex, params.discount_rate)).epsilon(1e-9));
        if (s.irr) {
            // Deeply negative roots amplify rounding by (1+d)^-N, so there the residual is
            // judged against the size of the discounted terms being summed.
            double scale = capex;
            for (std::size_t n = 0; n < s.cash_flows.size(); ++n)
                scale += std::abs(s.cash_flows[n]) / std::pow(1.0 + *s.irr, static_cast<double>(n + 1));
            const double residual = std::abs(direct_npv(s.cash_flows, capex, *s.irr));
            if (*s.irr > -0.5)
                CHECK_MESSAGE(residual < 1e-6 * capex, *s.irr);
            else
                CHECK_MESSAGE(residual < 1e-9 * scale, *s.irr);
        }

        const FinanceParams zero{0.0, years, 2020};
        const double undiscounted = std::accumulate(base.begin(), base.end(), 0.0) -
                                    std::accumulate(sys.begin(), sys.end(), 0.0) - capex;
        CHECK(npv_electricity(base, sys, capex, zero) == doctest::Approx(undiscounted).epsilon(1e-12));

        std::vector<double> positive(years);
        for (auto& f : positive) f = rng.uniform(1.0, 1000.0);
        CHECK(direct_npv(positive, capex, 0.05) < direct_npv(positive, capex, 0.04));
        CHECK(present_value(positive, 0.05) < present_value(positive, 0.04));
    }
}

TEST_CASE("summarize validation") {
    CHECK_THROWS_AS(summarize({1.0}, {1.0, 2.0}, {}, 0.0, FinanceParams{}), InputError);
    CHECK_THROWS_AS(summarize({1.0}, {1.0}, {}, 0.0, FinanceParams{-2.0, 1, 2020}), InputError);
}
