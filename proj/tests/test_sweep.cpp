#include <doctest.h>

#include <cmath>

#include "qtm/panels.hpp"
#include "qtm/sweep.hpp"

using namespace qtm;

TEST_CASE("reversibility point of the fridge") {
    const double e1 = reversibility_point_fridge(10, 5, 4, 1.0);
    CHECK(e1 == doctest::Approx(0.5).epsilon(1e-12));
    // substitute back: E1/T1 + E3/T3 = (E1+E3)/T2
    CHECK(e1 / 10 + 1.0 / 4 == doctest::Approx((e1 + 1.0) / 5).epsilon(1e-12));

    // no free-energy source when hot meets room: the design point runs away
    CHECK(reversibility_point_fridge(5.0 + 1e-9, 5.0, 4.0, 1.0) > 1e6);
    CHECK_THROWS_AS(reversibility_point_fridge(4, 5, 3, 1.0), std::invalid_argument);
}

TEST_CASE("carnot COP") {
    CHECK(carnot_cop(10, 5, 4) == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(carnot_cop(100, 50, 25) == doctest::Approx(0.5).epsilon(1e-14));
    // zero-cost cooling as the cold and room baths merge
    CHECK(carnot_cop(10, 4.0 + 1e-9, 4.0) > 1e8);
    CHECK_THROWS_AS(carnot_cop(5, 10, 4), std::invalid_argument);

    SUBCASE("consistency with the reversibility design point") {
        SpecSampler sampler(23);
        for (int i = 0; i < 40; ++i) {
            const double t3 = sampler.uniform(0.5, 4.0);
            const double t2 = t3 * sampler.uniform(1.2, 3.0);
            const double t1 = t2 * sampler.uniform(1.2, 3.0);
            const double e3 = sampler.log_uniform(0.1, 3.0);
            const double cop = e3 / reversibility_point_fridge(t1, t2, t3, e3);
            CHECK(cop == doctest::Approx(carnot_cop(t1, t2, t3)).epsilon(1e-12));
        }
    }
}

TEST_CASE("carnot efficiency of the engine") {
    CHECK(carnot_efficiency_engine(10, 5) == 0.5);
    CHECK(carnot_efficiency_engine(10, 10 - 1e-12) == doctest::Approx(0.0).epsilon(1e-10));
    CHECK(carnot_efficiency_engine(10, 1e-12) == doctest::Approx(1.0));
    CHECK_THROWS_AS(carnot_efficiency_engine(5, 10), std::invalid_argument);
}

TEST_CASE("E1 sweep brackets and refines the working-regime boundary") {
    FridgeSettings base;
    base.E3 = 1.0;
    base.T = {10, 5, 4};
    base.p = {1e-3, 1e-3, 1e-3};
    base.g = 0.01;

    std::vector<double> grid;
    for (int i = 0; i < 10; ++i) grid.push_back(0.1 + 0.1 * i);
    const SweepTable table = sweep_fridge(base, "E1", grid);
    REQUIRE(table.rows.size() == 10);

    SUBCASE("rows are ordered and solved") {
        for (std::size_t i = 0; i < table.rows.size(); ++i) {
            CHECK(table.rows[i].param == doctest::Approx(grid[i]));
            CHECK(table.rows[i].status == "ok");
            REQUIRE(table.rows[i].report.has_value());
        }
    }
    SUBCASE("the cold current changes sign at the design point") {
        CHECK(table.rows.front().report->bath_current[2] < 0);   // E1 = 0.1
        CHECK(table.rows.back().report->bath_current[2] > 0);    // E1 = 1.0
        const double zero = locate_q3_zero(base, 0.4, 0.6, 1e-7);
        CHECK(std::abs(zero - 0.5) <= 1e-6);
    }
    SUBCASE("COP column is fixed by the level design") {
        for (const SweepRow& row : table.rows) {
            if (std::abs(row.report->bath_current[0]) < 1e-16 * row.param) continue;
            CHECK(row.report->cop_or_eff ==
                  doctest::Approx(base.E3 / row.param).epsilon(1e-9));
        }
    }
}

TEST_CASE("coupling sweep leaves sign and COP unchanged") {
    FridgeSettings base;   // E1 = E3 = 1, working regime
    base.p = {1e-3, 1e-3, 1e-3};
    std::vector<double> grid{1e-4, 1e-3, 1e-2, 5e-2, 1e-1};
    const SweepTable table = sweep_fridge(base, "g", grid);
    for (const SweepRow& row : table.rows) {
        REQUIRE(row.report.has_value());
        CHECK(row.report->bath_current[2] > 0);
        CHECK(row.report->cop_or_eff == doctest::Approx(1.0).epsilon(1e-9));
    }
}

TEST_CASE("sweep records failed points in-row") {
    FridgeSettings base;
    const SweepTable table = sweep_fridge(base, "E1", {1.0, -2.0, 0.5});
    REQUIRE(table.rows.size() == 3);
    CHECK(table.rows[0].status == "ok");
    CHECK(!table.rows[1].report.has_value());
    CHECK(table.rows[1].status != "ok");
    CHECK(table.rows[2].status == "ok");

    CHECK_THROWS_AS(sweep_fridge(base, "E9", {1.0}), std::invalid_argument);
}

TEST_CASE("fridge carnot check") {
    SUBCASE("worked example") {
        const CarnotCheck check = carnot_check_fridge(10, 5, 4, 1.0, 1e-3, {1e-3, 1e-3, 1e-3});
        CHECK(check.passed);
        CHECK(check.reversibility_value == doctest::Approx(0.5).epsilon(1e-12));
        CHECK(check.limit_performance == doctest::Approx(2.0).epsilon(1e-9));
        CHECK(check.carnot_performance == doctest::Approx(2.0).epsilon(1e-14));
        CHECK(check.current_at_point <= 1e-12 * 1e-3 * 1.5);
    }
    SUBCASE("second temperature triple") {
        const CarnotCheck check = carnot_check_fridge(20, 10, 8, 1.0, 1e-3, {1e-3, 1e-3, 1e-3});
        CHECK(check.passed);
        CHECK(check.carnot_performance == doctest::Approx(2.0).epsilon(1e-14));
    }
    SUBCASE("one step into the working regime cools, just below the Carnot COP") {
        FridgeSettings near;
        near.E3 = 1.0;
        near.T = {10, 5, 4};
        near.p = {1e-3, 1e-3, 1e-3};
        near.g = 1e-3;
        const double e1_star = reversibility_point_fridge(10, 5, 4, 1.0);
        const FridgeSpec inside = near.with("E1", e1_star * (1 + 1e-3)).build();
        const CurrentsReport rep = fridge_report(inside, solve_fridge_steady(inside));
        CHECK(rep.bath_current[2] > 0);
        CHECK(rep.cop_or_eff < carnot_cop(10, 5, 4));
        CHECK(rep.cop_or_eff == doctest::Approx(2.0 / (1 + 1e-3)).epsilon(1e-6));

        // mirrored step leaves the working regime: the current direction flips
        const FridgeSpec outside = near.with("E1", e1_star * (1 - 1e-3)).build();
        const CurrentsReport rev = fridge_report(outside, solve_fridge_steady(outside));
        CHECK(rev.bath_current[2] < 0);
    }
}

TEST_CASE("engine carnot check approaches the Carnot efficiency") {
    // small, fast configuration; the acceptance suite runs the full-size one
    EngineRunConfig config;
    config.horizon = 250.0;
    config.window_begin = 150.0;
    const double e3_star = 1.0 * (10.0 / 5.0 - 1.0);
    const std::vector<double> grid{0.1 * e3_star, 0.5 * e3_star};
    const EngineCarnotResult result =
        carnot_check_engine(10, 5, 1.0, grid, 0.05, {0.05, 0.05}, 21, 10, config);

    CHECK(result.check.passed);
    CHECK(result.check.reversibility_value == doctest::Approx(1.0));
    CHECK(result.check.limit_performance == doctest::Approx(0.5));
    CHECK(result.check.carnot_performance == doctest::Approx(0.5));
    CHECK(result.check.current_at_point <= 1e-12 * e3_star * 0.05);

    REQUIRE(result.table.rows.size() == 2);
    double previous = 0.0;
    for (const SweepRow& row : result.table.rows) {
        REQUIRE(row.report.has_value());
        CHECK(row.status == "ok");
        const double design = row.param / (1.0 + row.param);
        CHECK(row.report->cop_or_eff == doctest::Approx(design).epsilon(0.02));
        CHECK(row.report->cop_or_eff <= result.check.carnot_performance * 1.02);
        CHECK(row.report->cop_or_eff > previous);   // monotone toward Carnot
        previous = row.report->cop_or_eff;
    }

    SUBCASE("grid points outside the working regime are rejected in-row") {
        const EngineCarnotResult bad =
            carnot_check_engine(10, 5, 1.0, {1.5 * e3_star}, 0.05, {0.05, 0.05}, 21, 10, config);
        CHECK(!bad.check.passed);
        CHECK(!bad.table.rows[0].report.has_value());
    }
}
