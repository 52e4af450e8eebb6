#include <doctest.h>

#include <array>
#include <numeric>
#include <set>

#include "solarev/ev_fleet.hpp"

using namespace solarev;

TEST_CASE("sample_trips draws distinct daytime hours") {
    const auto s = sample_trips(17, 400, 3);
    REQUIRE(s.n_days() == 400);
    for (const auto& day : s.hours_by_day) {
        REQUIRE(day.size() == 3);
        REQUIRE(std::set<int>(day.begin(), day.end()).size() == 3);
        for (int h : day) REQUIRE((h >= 7 && h < 19));
    }
    CHECK(sample_trips(17, 400, 3).hours_by_day == s.hours_by_day);
    CHECK(sample_trips(18, 400, 3).hours_by_day != s.hours_by_day);
}

TEST_CASE("sample_trips hour frequencies match uniform sampling") {
    const int days = 10000;
    const auto s = sample_trips(2024, days, 3);
    std::array<int, 24> count{};
    for (const auto& day : s.hours_by_day)
        for (int h : day) ++count[static_cast<std::size_t>(h)];
    for (int h = 7; h < 19; ++h) CHECK(static_cast<double>(count[static_cast<std::size_t>(h)]) / days == doctest::Approx(0.25).epsilon(0.04));
    for (int h = 0; h < 7; ++h) CHECK(count[static_cast<std::size_t>(h)] == 0);
}

TEST_CASE("sample_trips limits") {
    CHECK_THROWS_AS(sample_trips(1, 10, 13), InputError);
    CHECK_THROWS_AS(sample_trips(1, -1, 3), InputError);
    CHECK(sample_trips(1, 5, 12).hours_by_day.front().size() == 12);
    CHECK(sample_trips(1, 5, 0).hours_by_day.front().empty());
}

TEST_CASE("individual availability follows the schedule") {
    TripSchedule s;
    s.hours_by_day = {{8, 12, 15}};
    const auto a = availability_from_schedule(s);
    REQUIRE(a.values.size() == 24);
    for (int h = 0; h < 24; ++h) CHECK(a.values[static_cast<std::size_t>(h)] == ((h == 8 || h == 12 || h == 15) ? 0.0 : 1.0));
}

TEST_CASE("pooled availability") {
    FleetConfig f;
    f.n_ev = 50;
    const auto p = availability_profile(f, FleetMode::pooled);
    REQUIRE(p.size() == 1);
    REQUIRE(p.front().values.size() == kHoursPerYear);
    for (std::size_t i = 0; i < kHoursPerYear; ++i) {
        const auto h = hour_of_day(i);
        REQUIRE(p.front().values[i] == ((h >= 7 && h < 19) ? 0.75 : 1.0));
    }
    f.n_ev = 0;
    CHECK_THROWS_AS(availability_profile(f, FleetMode::pooled), InputError);
}

TEST_CASE("individual availability averages to 1 - trips/12") {
    FleetConfig f;
    f.n_ev = 50;
    f.seed = 99;
    const auto profiles = availability_profile(f, FleetMode::individual);
    REQUIRE(profiles.size() == 50);
    double sum = 0.0;
    std::size_t n = 0;
    for (const auto& p : profiles)
        for (std::size_t i = 0; i < p.values.size(); ++i)
            if (hour_of_day(i) >= 7 && hour_of_day(i) < 19) {
                sum += p.values[i];
                ++n;
            }
    CHECK(sum / static_cast<double>(n) == doctest::Approx(0.75).epsilon(0.01 / 0.75));
}

TEST_CASE("vehicle schedules depend only on seed and vehicle id") {
    FleetConfig small, big;
    small.n_ev = 3;
    big.n_ev = 40;
    small.seed = big.seed = 5;
    const auto a = availability_profile(small, FleetMode::individual);
    const auto b = availability_profile(big, FleetMode::individual);
    for (std::size_t v = 0; v < a.size(); ++v) CHECK(a[v].values == b[v].values);
    CHECK(vehicle_schedule(small, 0).hours_by_day != vehicle_schedule(small, 1).hours_by_day);
}

TEST_CASE("fleet experiment") {
    const auto rows = min_availability_experiment({1, 2, 5, 10, 20, 40, 50, 100}, 1000, 3);
    REQUIRE(rows.size() == 8);
    CHECK(rows.front().n_ev == 1);
    CHECK(rows.front().mean_daily_min_availability == 0.0);
    for (const auto& r : rows) CHECK(r.mean_daytime_availability == doctest::Approx(0.75).epsilon(0.02 / 0.75));
    CHECK(rows[6].mean_daily_min_availability >= 0.55);
    CHECK(rows[7].mean_daily_min_availability >= 0.58);
    CHECK(rows[7].mean_daily_min_availability <= 0.70);

    // Same fleet sizes in another order report the same numbers.
    const auto reordered = min_availability_experiment({100, 1}, 1000, 3);
    CHECK(reordered[0].mean_daily_min_availability == rows[7].mean_daily_min_availability);

    CHECK_THROWS_AS(min_availability_experiment({0}, 10, 1), InputError);
    CHECK_THROWS_AS(min_availability_experiment({1}, 0, 1), InputError);
}

TEST_CASE("daily-minimum availability rises with fleet size") {
    std::vector<int> sizes(100);
    std::iota(sizes.begin(), sizes.end(), 1);
    const auto rows = min_availability_experiment(sizes, 1000, 77);
    int ok = 0;
    for (std::size_t i = 1; i < rows.size(); ++i)
        if (rows[i].mean_daily_min_availability >= rows[i - 1].mean_daily_min_availability) ++ok;
    CHECK(static_cast<double>(ok) / static_cast<double>(rows.size() - 1) >= 0.95);
}

TEST_CASE("driving draw") {
    const auto s = sample_trips(4, 1, 3);
    const auto d = driving_draw(s);
    CHECK(std::accumulate(d.begin(), d.end(), 0.0) == doctest::Approx(3.3));

    FleetConfig f;
    f.n_ev = 50;
    const auto pooled = driving_draw_pooled(f, 1);
    CHECK(std::accumulate(pooled.begin(), pooled.end(), 0.0) == doctest::Approx(165.0));
    CHECK(pooled[10] == doctest::Approx(13.75));
    CHECK(pooled[3] == 0.0);

    const auto year = driving_draw_pooled(f);
    CHECK(std::accumulate(year.begin(), year.end(), 0.0) == doctest::Approx(50 * 3 * 1.1 * 365).epsilon(1e-12));
    FleetConfig one;
    const auto vy = driving_draw(vehicle_schedule(one, 0));
    CHECK(std::accumulate(vy.begin(), vy.end(), 0.0) == doctest::Approx(3 * 1.1 * 365).epsilon(1e-12));

    CHECK(annual_driving_km(FleetConfig{}) == doctest::Approx(6351.0));
}

TEST_CASE("fleet config validation") {
    FleetConfig f;
    CHECK_NOTHROW(f.validate());
    f.v2h_fraction = 1.5;
    CHECK_THROWS_AS(f.validate(), InputError);
    f = {};
    f.daytime_start = 19;
    f.daytime_end = 7;
    CHECK_THROWS_AS(f.validate(), InputError);
    f = {};
    f.trips_per_day = 13;
    CHECK_THROWS_AS(f.validate(), InputError);
    FleetConfig g;
    g.n_ev = 50;
    CHECK(g.nominal_kwh() == 2000.0);
    CHECK(g.v2h_usable_kwh() == 1000.0);
    CHECK(g.driving_reserve_kwh() == 1000.0);
}
