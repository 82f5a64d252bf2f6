#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>

#include "hydro/experiments.hpp"
#include "hydro/io.hpp"

using namespace hydro;

namespace {

std::filesystem::path temp_dir(const std::string& tag) {
  const auto dir = std::filesystem::temp_directory_path() / ("lbgk_hydro_test_" + tag);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace

TEST_CASE("fit_power_law recovers exact synthetic laws") {
  const PowerLawFit fit = fit_power_law({{0.1, 1e-2 * 0.01}, {0.2, 1e-2 * 0.04}, {0.4, 1e-2 * 0.16}});
  CHECK(fit.prefactor == doctest::Approx(1e-2).epsilon(1e-12));
  CHECK(fit.exponent == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(fit.r2 == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("fit_power_law reproduces a published-scale fit from its own samples") {
  // y = 7.2178e-4 * x^2.0001 sampled at three epsilons
  std::vector<std::pair<double, double>> rows;
  for (double x : {0.4, 0.2, 0.1}) rows.emplace_back(x, 7.2178e-4 * std::pow(x, 2.0001));
  const PowerLawFit fit = fit_power_law(rows);
  CHECK(fit.prefactor == doctest::Approx(7.2178e-4).epsilon(1e-10));
  CHECK(fit.exponent == doctest::Approx(2.0001).epsilon(1e-10));
  CHECK(fit.r2 == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("fit_power_law with two rows passes through both points") {
  const PowerLawFit fit = fit_power_law({{0.5, 3.0}, {0.25, 0.75}});
  CHECK(fit.exponent == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(fit.r2 == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("fit_power_law input validation") {
  CHECK_THROWS_AS(fit_power_law({{0.1, 1.0}}), std::domain_error);
  CHECK_THROWS_AS(fit_power_law({{0.1, 1.0}, {0.2, -1.0}}), std::domain_error);
  CHECK_THROWS_AS(fit_power_law({{0.1, 1.0}, {0.1, 2.0}}), std::domain_error);
}

TEST_CASE("run_tg_validation stays at roundoff for the resolved vortex") {
  // the flow is a single exactly-represented mode, so the error is pure
  // time-integration noise
  const double error = run_tg_validation(64, 1e-4, 1.0, 1e-4);
  CHECK(error < 1e-8);
  CHECK(error >= 0.0);

  const double at_zero = run_tg_validation(64, 1e-4, 0.0, 1e-4);
  CHECK(at_zero < 1e-14);

  CHECK_THROWS_AS(run_tg_validation(64, 1e-4, 1.0, 0.0), std::domain_error);
}

TEST_CASE("config validation rejects malformed epsilon ladders") {
  ConvergenceConfig config;
  config.grid_n = 16;
  config.t_final = 0.01;
  config.epsilons = {};
  CHECK_THROWS_AS(run_convergence(config), std::domain_error);
  config.epsilons = {0.2, 0.4};
  CHECK_THROWS_AS(run_convergence(config), std::domain_error);
  config.epsilons = {1.2, 0.4};
  CHECK_THROWS_AS(run_convergence(config), std::domain_error);
  config.epsilons = {0.4, 0.2};
  config.t_final = 0.0;
  CHECK_THROWS_AS(run_convergence(config), std::domain_error);
}

TEST_CASE("single-epsilon runs return one row and no fit") {
  ConvergenceConfig config;
  config.grid_n = 16;
  config.nu = 0.01;
  config.epsilons = {0.5};
  config.t_final = 0.005;
  const ConvergenceResult result = run_convergence(config);
  CHECK(result.rows.size() == 1);
  CHECK_FALSE(result.fit.has_value());
  CHECK(result.rows[0].rel_error >= 0.0);
}

TEST_CASE("run_convergence is deterministic") {
  ConvergenceConfig config;
  config.grid_n = 16;
  config.nu = 0.01;
  config.epsilons = {0.5, 0.45};
  config.t_final = 0.005;
  const ConvergenceResult a = run_convergence(config);
  const ConvergenceResult b = run_convergence(config);
  REQUIRE(a.rows.size() == b.rows.size());
  for (std::size_t i = 0; i < a.rows.size(); ++i) {
    CHECK(a.rows[i].rel_error == b.rows[i].rel_error);
    CHECK(a.rows[i].dt_used == b.rows[i].dt_used);
    CHECK(a.rows[i].steps == b.rows[i].steps);
  }
}

TEST_CASE("smoke-scale convergence shows the quadratic rate") {
  ConvergenceConfig config;
  config.grid_n = 32;
  config.nu = 1e-4;
  config.epsilons = {0.4, 0.2};
  config.t_final = 0.1;
  config.ic = {InitialConditionKind::taylor_green, 10.0, 2, 2};

  const auto dir = temp_dir("converge_smoke");
  const ConvergenceResult result = run_convergence(config, dir);
  REQUIRE(result.rows.size() == 2);
  CHECK(result.rows[0].rel_error > result.rows[1].rel_error);
  REQUIRE(result.fit.has_value());
  CHECK(result.fit->exponent >= 1.6);
  CHECK(result.fit->exponent <= 2.4);

  // convergence.csv carries the rows plus the three fit footer rows
  const auto csv = read_csv(dir / "convergence.csv");
  REQUIRE(csv.size() == 1 + 2 + 3);
  CHECK(csv[0][0] == "epsilon");
  CHECK(csv[3][0] == "fit_prefactor");
  CHECK(csv[4][0] == "fit_exponent");
  CHECK(std::stod(csv[4][1]) == doctest::Approx(result.fit->exponent).epsilon(1e-15));
  CHECK(std::stod(csv[1][1]) == result.rows[0].rel_error);
  std::filesystem::remove_all(dir);
}

TEST_CASE("uniform density lift leaves the acoustic transient in the error") {
  // with rho0 = 1 the vorticity error carries an oscillatory acoustic
  // component roughly two orders above the consistent lift
  ConvergenceConfig config;
  config.grid_n = 32;
  config.nu = 1e-4;
  config.epsilons = {0.4};
  config.t_final = 0.05;
  config.ic = {InitialConditionKind::taylor_green, 10.0, 2, 2};

  config.lift = DensityLift::consistent;
  const double err_consistent = run_convergence(config).rows[0].rel_error;
  config.lift = DensityLift::uniform;
  const double err_uniform = run_convergence(config).rows[0].rel_error;
  CHECK(err_uniform > 10.0 * err_consistent);
}

TEST_CASE("run_vortex_evolution records monotone enstrophy and conserved mean") {
  const auto dir = temp_dir("vortex");
  const auto series = run_vortex_evolution(64, 1e-4, 0.5, 0.1, dir, 0.01);
  REQUIRE(series.size() == 6);
  CHECK(series.front().time == 0.0);
  CHECK(series.back().time == doctest::Approx(0.5).epsilon(1e-12));
  for (std::size_t k = 1; k < series.size(); ++k) {
    CHECK(series[k].diag.enstrophy <= series[k - 1].diag.enstrophy * (1.0 + 1e-12));
    CHECK(std::abs(series[k].diag.mean_vorticity - series[0].diag.mean_vorticity) <= 1e-12);
    CHECK(series[k].enstrophy_law_residual <= 1e-2);
  }

  // artifacts: series CSV plus one snapshot per record
  CHECK(std::filesystem::exists(dir / "ns_series.csv"));
  const auto csv = read_csv(dir / "ns_series.csv");
  REQUIRE(csv.size() == 1 + series.size());
  REQUIRE(csv[0].size() == 6);
  CHECK(csv[0][5] == "enstrophy_law_residual");
  CHECK(std::filesystem::exists(dir / "omega_t0.lbf"));
  CHECK(std::filesystem::exists(dir / "omega_t0.5.lbf"));
  const FieldSnapshot snap = read_field_snapshot(dir / "omega_t0.5.lbf");
  CHECK(snap.time == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(snap.field.grid.n == 64);
  std::filesystem::remove_all(dir);
}

TEST_CASE("initial_vorticity dealiases both initial conditions") {
  const Grid2D grid(32);
  const RealField2D tg = initial_vorticity({InitialConditionKind::taylor_green, 10.0, 2, 2}, grid);
  CHECK(std::abs(mean(tg)) <= 1e-13);
  CHECK(l2_norm(tg) == doctest::Approx(5.0).epsilon(1e-10));  // ||10 sin sin|| = 10/2

  const RealField2D pt = initial_vorticity({InitialConditionKind::perturbed_tg}, grid);
  CHECK(std::abs(mean(pt)) <= 1e-13);
}
