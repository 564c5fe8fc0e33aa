#include <cmath>
#include <limits>

#include "doctest.h"
#include "rsq/constants.hpp"
#include "rsq/errors.hpp"
#include "rsq/rates.hpp"
#include "rsq/sweeps.hpp"

using namespace rsq;

namespace {

constexpr double tau = constants::two_pi;
const double kInfNeg = -std::numeric_limits<double>::infinity();

double db(double x) { return 10.0 * std::log10(x); }

ProcessToggles dp_only()
{
    ProcessToggles t;
    t.sp_sfwm = t.bs_fwm = t.hp_sfwm = false;
    return t;
}

ProcessToggles dp_sp()
{
    ProcessToggles t = dp_only();
    t.sp_sfwm = true;
    return t;
}

} // namespace

TEST_CASE("unit conversions and axis grids are exact")
{
    CHECK(dbm_to_watt(15.0) == doctest::Approx(1e-3 * std::pow(10.0, 1.5)).epsilon(1e-15));
    CHECK(dbm_to_watt(0.0) == doctest::Approx(1e-3).epsilon(1e-15));
    CHECK(dbm_to_watt(kInfNeg) == 0.0);
    CHECK(watt_to_dbm(dbm_to_watt(7.3)) == doctest::Approx(7.3).epsilon(1e-12));
    CHECK(std::isinf(watt_to_dbm(0.0)));
    CHECK(watt_to_dbm(0.0) < 0.0);

    const AxisSpec ax{-1.0, 3.0, 5};
    const std::vector<double> g = axis_grid(ax);
    REQUIRE(g.size() == 5);
    CHECK(g.front() == -1.0);
    CHECK(g.back() == 3.0);
    CHECK(g[2] == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(axis_grid({2.0, 2.0, 1}) == std::vector<double>{2.0});

    CHECK_THROWS_AS((void)axis_grid({0.0, 1.0, 0}), ConfigError);
    CHECK_THROWS_AS((void)axis_grid({1.0, 0.0, 3}), ConfigError);
    CHECK_THROWS_AS((void)axis_grid({1.0, 1.0, 3}), ConfigError);
    CHECK_THROWS_AS((void)axis_grid({0.0, std::numeric_limits<double>::infinity(), 3}),
                    ConfigError);
}

TEST_CASE("sweep specs are validated")
{
    SweepSpec spec;
    spec.kind = SweepKind::detuning_map;
    spec.axis1 = {-1.0, 1.0, 11};
    spec.axis2 = {-2.0, 2.0, 11};
    CHECK_NOTHROW(validate_sweep_spec(spec));

    SweepSpec bad = spec;
    bad.axis2.count = -3;
    CHECK_THROWS_AS(validate_sweep_spec(bad), ConfigError);

    bad = spec;
    bad.constraint = {ConstraintKind::fixed_total_energy, -1.0};
    CHECK_THROWS_AS(validate_sweep_spec(bad), ConfigError);

    bad = spec;
    bad.kind = SweepKind::symmetric_constrained;
    bad.constraint.kind = ConstraintKind::none;
    CHECK_THROWS_AS(validate_sweep_spec(bad), ConfigError);

    bad = spec;
    bad.omegas = {0.0, std::numeric_limits<double>::quiet_NaN()};
    CHECK_THROWS_AS(validate_sweep_spec(bad), ConfigError);
}

TEST_CASE("power sweep reproduces the frozen hot operating points")
{
    const SystemConfig cfg = default_config();
    const double gbar_s = derive_rates(cfg).gamma_bar[2];
    const auto rows = sweep_power(cfg, {11.0, 13.0, 15.0, kInfNeg}, {gbar_s});
    REQUIRE(rows.size() == 4);
    for (const auto& row : rows) {
        CHECK(row.ok);
        // the evaluation grid always gains a leading Omega = 0 alongside the
        // requested sideband
        REQUIRE(row.spectrum.omega_grid.size() == 2);
        CHECK(row.spectrum.omega_grid[0] == 0.0);
        CHECK(row.spectrum.omega_grid[1] == gbar_s);
    }

    const double frozen_hot[3][2] = {{-48.1964, -48.2630},
                                     {-76.3861, -76.4917},
                                     {-121.0639, -121.2311}}; // MHz
    for (int i = 0; i < 3; ++i)
        for (int l = 0; l < 2; ++l)
            CHECK(rows[i].hot_detuning[l] / (tau * 1e6) ==
                  doctest::Approx(frozen_hot[i][l]).epsilon(1e-5));

    CHECK(rows[2].s_min0 == doctest::Approx(0.69230773).epsilon(1e-6));
    CHECK(rows[2].s_max0 == doctest::Approx(1.82543443).epsilon(1e-6));

    // squeezing and anti-squeezing both deepen with power
    CHECK(rows[0].s_min0 > rows[1].s_min0);
    CHECK(rows[1].s_min0 > rows[2].s_min0);
    CHECK(rows[0].s_max0 < rows[1].s_max0);
    CHECK(rows[1].s_max0 < rows[2].s_max0);

    // the zero-power row is exact shot noise on the undriven hot resonance
    CHECK(rows[3].power_watt == 0.0);
    CHECK(rows[3].hot_detuning[0] == 0.0);
    CHECK(rows[3].hot_detuning[1] == 0.0);
    CHECK(rows[3].s_min0 == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(rows[3].s_max0 == doctest::Approx(1.0).epsilon(1e-12));

    CHECK_THROWS_AS(
        (void)sweep_power(cfg, {std::numeric_limits<double>::quiet_NaN()}),
        ConfigError);
}

TEST_CASE("ablation labels and standard combos are canonical")
{
    CHECK(ablation_label(ProcessToggles{}) == "all");
    CHECK(ablation_label(dp_only()) == "dp");
    CHECK(ablation_label(dp_sp()) == "dp_sp");
    ProcessToggles t = dp_only();
    t.bs_fwm = true;
    CHECK(ablation_label(t) == "dp_bs");
    t = ProcessToggles{};
    t.hp_sfwm = false;
    CHECK(ablation_label(t) == "no_hp");
    t = dp_only();
    t.hp_sfwm = true;
    CHECK(ablation_label(t) == "dp_hp");
    t = ProcessToggles{};
    t.spm = false;
    CHECK(ablation_label(t) == "all_no_spm");

    const auto combos = standard_ablation_combos();
    REQUIRE(combos.size() == 5);
    const char* expected[] = {"dp", "dp_sp", "dp_bs", "no_hp", "all"};
    for (size_t i = 0; i < combos.size(); ++i)
        CHECK(ablation_label(combos[i]) == expected[i]);
}

TEST_CASE("process ablations reproduce the frozen extreme table")
{
    const SystemConfig cfg = default_config();
    const auto rows = ablate_processes(cfg, standard_ablation_combos());
    REQUIRE(rows.size() == 5);

    struct Frozen {
        const char* label;
        double smin_db, smax_db;
    };
    const Frozen frozen[] = {{"dp", -2.1520, 2.4646},
                             {"dp_sp", -1.7629, 2.8361},
                             {"dp_bs", -1.9133, 2.2337},
                             {"no_hp", -1.7040, 2.5630},
                             {"all", -1.5970, 2.6137}};
    for (size_t i = 0; i < rows.size(); ++i) {
        CHECK(rows[i].label == frozen[i].label);
        CHECK(std::abs(db(rows[i].s_min0) - frozen[i].smin_db) < 2e-4);
        CHECK(std::abs(db(rows[i].s_max0) - frozen[i].smax_db) < 2e-4);
    }

    // orderings: adding the single-pump pathway trades squeezing for
    // anti-squeezing; frequency conversion damps both; the hyper-parametric
    // pathway slightly trades squeezing for anti-squeezing
    const auto& dp = rows[0];
    const auto& dpsp = rows[1];
    const auto& dpbs = rows[2];
    const auto& nohp = rows[3];
    const auto& all = rows[4];
    CHECK(dp.s_min0 < dpsp.s_min0);
    CHECK(dp.s_max0 < dpsp.s_max0);
    CHECK(dp.s_min0 < dpbs.s_min0);
    CHECK(dpbs.s_max0 < dp.s_max0);
    CHECK(nohp.s_min0 < all.s_min0);
    CHECK(nohp.s_max0 < all.s_max0);

    ProcessToggles no_dp = ProcessToggles{};
    no_dp.dp_sfwm = false;
    CHECK_THROWS_AS((void)ablate_processes(cfg, {no_dp}), ConfigError);
    ProcessToggles no_spm = ProcessToggles{};
    no_spm.spm = false;
    CHECK_THROWS_AS((void)ablate_processes(cfg, {no_spm}), ConfigError);
}

TEST_CASE("detuning map finds the frozen optimum and stays nearly symmetric")
{
    SystemConfig cfg = default_config();
    cfg.pump_total_power = dbm_to_watt(16.0);
    cfg.toggles = dp_only();

    const AxisSpec ax{-tau * 50e6, tau * 50e6, 21};
    const DetuningMap map = map_detuning(cfg, ax, ax);
    REQUIRE(map.delta1.size() == 21);
    REQUIRE(map.delta2.size() == 21);
    CHECK(map.failures == 0);
    CHECK(map.warnings.empty());

    // grid argmin lands on the node nearest the true optimum
    CHECK(map.best_delta1 == doctest::Approx(-tau * 25e6).epsilon(1e-12));
    CHECK(map.best_delta2 == doctest::Approx(-tau * 25e6).epsilon(1e-12));
    CHECK(std::abs(db(map.best_s_min0) - (-2.6603)) < 2e-3);

    // near-symmetry under swapping the pump offsets (weakly broken by
    // dispersion and the mode dependence of the decay rates)
    double asym = 0.0;
    for (size_t i = 0; i < map.delta1.size(); ++i)
        for (size_t j = 0; j < map.delta2.size(); ++j)
            asym = std::max(asym, std::abs(map.s_min0[i][j] - map.s_min0[j][i]));
    CHECK(asym < 2e-5);

    for (const auto& line : map.s_min0)
        for (double v : line) {
            CHECK(std::isfinite(v));
            CHECK(v > 0.0);
            CHECK(v <= 1.0);
        }
}

TEST_CASE("infeasible grid points become gaps, not exceptions")
{
    SystemConfig cfg = default_config();
    cfg.pump_total_power = dbm_to_watt(26.0);
    const AxisSpec ax{-tau * 10e6, tau * 10e6, 3};
    const DetuningMap map = map_detuning(cfg, ax, ax);
    CHECK(map.failures == 9);
    CHECK(map.warnings.size() == 9);
    CHECK(std::isnan(map.best_s_min0));
    for (const auto& line : map.s_min0)
        for (double v : line) CHECK(std::isnan(v));
    for (const auto& w : map.warnings) CHECK(!w.empty());
}

TEST_CASE("the map is identical for any worker count")
{
    const SystemConfig cfg = default_config();
    const AxisSpec ax{-tau * 30e6, tau * 30e6, 7};
    const DetuningMap a = map_detuning(cfg, ax, ax, 1);
    const DetuningMap b = map_detuning(cfg, ax, ax, 4);
    CHECK(a.failures == b.failures);
    CHECK(a.warnings == b.warnings);
    REQUIRE(a.s_min0.size() == b.s_min0.size());
    for (size_t i = 0; i < a.s_min0.size(); ++i)
        for (size_t j = 0; j < a.s_min0[i].size(); ++j) {
            CHECK(a.s_min0[i][j] == b.s_min0[i][j]);
            CHECK(a.s_max0[i][j] == b.s_max0[i][j]);
        }
    CHECK(a.best_delta1 == b.best_delta1);
    CHECK(a.best_delta2 == b.best_delta2);
    CHECK(a.best_s_min0 == b.best_s_min0);
}

TEST_CASE("zero nonlinearity maps to uniform shot noise")
{
    SystemConfig cfg = default_config();
    cfg.lambda_coeff = 0.0;
    const AxisSpec ax{-tau * 40e6, tau * 40e6, 5};
    const DetuningMap map = map_detuning(cfg, ax, ax);
    CHECK(map.failures == 0);
    for (const auto& line : map.s_min0)
        for (double v : line) CHECK(v == doctest::Approx(1.0).epsilon(1e-12));
    for (const auto& line : map.s_max0)
        for (double v : line) CHECK(v == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("symmetric sweep holds each constraint at the frozen anchors")
{
    SystemConfig cfg = default_config();
    cfg.toggles = dp_sp();

    SUBCASE("fixed energy product over the full offset range")
    {
        const Constraint con{ConstraintKind::fixed_energy_product, 69.50671e-24};
        const AxisSpec ax{0.0, tau * 900e6, 10};
        const auto rows = sweep_symmetric(cfg, ax, con);
        REQUIRE(rows.size() == 10);
        for (const auto& row : rows) {
            CHECK(row.ok);
            CHECK(row.residual <= 1e-3);
            CHECK(row.constraint_value ==
                  doctest::Approx(con.value).epsilon(1.1e-3));
        }

        // the zero-offset point reproduces the reference drive power
        CHECK(std::abs(rows[0].power_dbm - 15.0) < 0.005);

        CHECK(std::abs(rows[1].delta - tau * 100e6) < 1.0);
        CHECK(std::abs(rows[1].power_dbm - 15.1823) < 0.01);
        CHECK(std::abs(db(rows[1].s_min0) - (-1.8180)) < 5e-3);
        CHECK(std::abs(rows[1].photon_ratio - 0.3210) < 1e-3);

        CHECK(std::abs(rows[9].power_dbm - 21.5059) < 0.01);

        // squeezing deepens, the sideband photon ratio falls, and the
        // required power grows monotonically away from zero offset
        for (size_t i = 1; i < rows.size(); ++i) {
            CHECK(rows[i].s_min0 < rows[i - 1].s_min0);
            CHECK(rows[i].photon_ratio < rows[i - 1].photon_ratio);
            CHECK(rows[i].power_watt > rows[i - 1].power_watt);
        }
    }

    SUBCASE("fixed total energy pins the same reference point")
    {
        const Constraint con{ConstraintKind::fixed_total_energy, 16.67415e-12};
        const auto rows = sweep_symmetric(cfg, {0.0, 0.0, 1}, con);
        REQUIRE(rows.size() == 1);
        CHECK(rows[0].ok);
        CHECK(std::abs(rows[0].power_dbm - 15.0) < 0.01);
    }

    SUBCASE("fixed anti-squeezing pins the same reference point")
    {
        SystemConfig all_on = default_config();
        const Constraint con{ConstraintKind::fixed_antisqueezing,
                             10.0 * std::log10(1.82543443)};
        const auto rows = sweep_symmetric(all_on, {0.0, 0.0, 1}, con);
        REQUIRE(rows.size() == 1);
        CHECK(rows[0].ok);
        CHECK(std::abs(rows[0].power_dbm - 15.0) < 0.02);
        CHECK(rows[0].constraint_value == doctest::Approx(con.value).epsilon(1e-3));
    }
}

TEST_CASE("unreachable constraints are reported per row")
{
    const SystemConfig cfg = default_config();
    const Constraint huge{ConstraintKind::fixed_antisqueezing, 30.0};
    const auto rows = sweep_symmetric(cfg, {0.0, 0.0, 1}, huge);
    REQUIRE(rows.size() == 1);
    CHECK(!rows[0].ok);
    CHECK(!rows[0].error.empty());

    CHECK_THROWS_AS(
        (void)sweep_symmetric(cfg, {0.0, 0.0, 1}, {ConstraintKind::none, 1.0}),
        ConfigError);
    CHECK_THROWS_AS((void)sweep_symmetric(
                        cfg, {0.0, 0.0, 1},
                        {ConstraintKind::fixed_total_energy, -2.0}),
                    ConfigError);
}

TEST_CASE("best squeezing reproduces the frozen optimizer anchors")
{
    const SystemConfig cfg = default_config();
    const AxisSpec ax{-tau * 200e6, tau * 200e6, 21};
    const auto rows =
        best_squeezing(cfg, {10.0, 12.0, 14.0, 16.0}, {dp_only(), dp_sp()}, ax, ax);
    REQUIRE(rows.size() == 8);
    for (const auto& row : rows) CHECK(row.ok);

    // rows are power-major: (10,dp), (10,dp_sp), (12,dp), ...
    const auto& dp16 = rows[6];
    const auto& dpsp16 = rows[7];
    CHECK(dp16.label == "dp");
    CHECK(dpsp16.label == "dp_sp");
    CHECK(std::abs(db(dp16.s_min0) - (-2.66031)) < 1e-3);
    CHECK(std::abs(dp16.delta1 - (-tau * 25.626e6)) < tau * 0.05e6);
    CHECK(std::abs(dp16.delta2 - (-tau * 25.730e6)) < tau * 0.05e6);

    CHECK(std::abs(db(dpsp16.s_min0) - (-2.08240)) < 1e-3);
    // two mirror-image optima; accept whichever the polish reached
    const double cand[2][2] = {{97.485, -155.296}, {-155.841, 96.994}};
    const double d0 = std::hypot(dpsp16.delta1 - tau * cand[0][0] * 1e6,
                                 dpsp16.delta2 - tau * cand[0][1] * 1e6);
    const double d1 = std::hypot(dpsp16.delta1 - tau * cand[1][0] * 1e6,
                                 dpsp16.delta2 - tau * cand[1][1] * 1e6);
    CHECK(std::min(d0, d1) < tau * 0.1e6);

    // the advantage of the pure degenerate pathway grows with power, and
    // both optima deepen
    const double frozen_gaps[] = {0.0392, 0.0987, 0.2480, 0.5779};
    for (int i = 0; i < 4; ++i) {
        const double gap = db(rows[2 * i + 1].s_min0) - db(rows[2 * i].s_min0);
        CHECK(std::abs(gap - frozen_gaps[i]) < 1e-3);
        if (i > 0) {
            CHECK(rows[2 * i].s_min0 < rows[2 * (i - 1)].s_min0);
            CHECK(rows[2 * i + 1].s_min0 < rows[2 * (i - 1) + 1].s_min0);
        }
    }
}

TEST_CASE("zero power leaves the optimizer at shot noise")
{
    const SystemConfig cfg = default_config();
    const AxisSpec ax{-tau * 20e6, tau * 20e6, 5};
    const auto rows = best_squeezing(cfg, {kInfNeg}, {dp_only()}, ax, ax);
    REQUIRE(rows.size() == 1);
    CHECK(rows[0].ok);
    CHECK(rows[0].failures == 0);
    CHECK(rows[0].s_min0 == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(rows[0].s_max0 == doctest::Approx(1.0).epsilon(1e-12));
}
