#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "hydro/lbgk.hpp"
#include "test_helpers.hpp"

using namespace hydro;
using namespace hydro::test;

namespace {

LbgkState smooth_random_state(const Grid2D& grid, const LbgkParams& params, unsigned seed,
                              double amplitude = 0.05) {
  RealField2D rho0 = random_band_field(grid, seed);
  RealField2D u01 = random_band_field(grid, seed + 1);
  RealField2D u02 = random_band_field(grid, seed + 2);
  rho0.values = 1.0 + amplitude * rho0.values;
  u01.values *= amplitude;
  u02.values *= amplitude;
  return init_from_macroscopic(rho0, u01, u02, params);
}

double state_scale(const LbgkState& state) {
  double scale = 0.0;
  for (const RealField2D& gi : state.g) scale = std::max(scale, max_abs(gi.values));
  return scale;
}

}  // namespace

TEST_CASE("params validation") {
  CHECK_THROWS_AS(LbgkParams(0.0, 1.0, d2q9()), std::domain_error);
  CHECK_THROWS_AS(LbgkParams(1.0, 1.0, d2q9()), std::domain_error);
  CHECK_THROWS_AS(LbgkParams(0.5, 0.0, d2q9()), std::domain_error);
  CHECK_THROWS_AS(LbgkParams(0.5, 1.0, d3_family({0, 0, 0, 0})), std::domain_error);

  // a lattice that misses the isotropy conditions at 1e-10 is rejected
  Lattice broken = d2q9();
  Eigen::ArrayXd w = broken.weights;
  w[1] += 1e-6;
  w /= w.sum();
  CHECK_THROWS_AS(LbgkParams(0.5, 1.0, Lattice(broken.velocities, w, broken.sound_speed)),
                  std::domain_error);
  CHECK_NOTHROW(LbgkParams(0.5, 1.0, d2q7()));
}

TEST_CASE("equilibrium of a uniform rest state is the density itself") {
  const Grid2D grid(16);
  const LbgkParams params(0.5, 1.0, d2q9());
  const RealField2D rho0(grid, 1.5);
  const RealField2D zero(grid, 0.0);
  const LbgkState state = init_from_macroscopic(rho0, zero, zero, params);
  const std::vector<RealField2D> geq = equilibrium(state);
  for (const RealField2D& gi : geq) CHECK((gi.values - 1.5).abs().maxCoeff() <= 1e-14);
}

TEST_CASE("equilibrium preserves the macroscopic moments") {
  for (const Lattice& lat : {d2q9(), d2q7()}) {
    const Grid2D grid(16);
    const LbgkParams params(0.5, 1.0, lat);
    LbgkState state = smooth_random_state(grid, params, 101);
    // push the state off equilibrium so the check is not trivial
    for (std::size_t i = 0; i < state.g.size(); ++i) {
      RealField2D bump = random_band_field(grid, 200u + static_cast<unsigned>(i));
      state.g[i].values += 0.03 * bump.values;
    }
    const MacroFields m = macroscopic(state);
    const std::vector<RealField2D> geq = equilibrium(state);

    RealField2D rho_eq(grid, 0.0), u1_eq(grid, 0.0), u2_eq(grid, 0.0);
    for (int i = 0; i < lat.size(); ++i) {
      rho_eq.values += lat.weights[i] * geq[i].values;
      u1_eq.values += lat.weights[i] * lat.velocities(i, 0) * geq[i].values;
      u2_eq.values += lat.weights[i] * lat.velocities(i, 1) * geq[i].values;
    }
    const double scale = max_abs(m.rho.values);
    CHECK((rho_eq.values - m.rho.values).abs().maxCoeff() <= 1e-12 * scale);
    CHECK((u1_eq.values - m.u1.values).abs().maxCoeff() <= 1e-12 * scale);
    CHECK((u2_eq.values - m.u2.values).abs().maxCoeff() <= 1e-12 * scale);
  }
}

TEST_CASE("equilibrium single-point value for D2Q9") {
  // rho = 1, u = (0.1, 0), eps = 0.5:
  // g_1_eq = 1 + 0.1*3 + 0.5*(9/2*0.01 - 3/2*0.01) = 1.315
  const Grid2D grid(16);
  const LbgkParams params(0.5, 1.0, d2q9());
  const RealField2D rho0(grid, 1.0);
  const RealField2D u01(grid, 0.1);
  const RealField2D u02(grid, 0.0);
  const LbgkState state = init_from_macroscopic(rho0, u01, u02, params);
  const std::vector<RealField2D> geq = equilibrium(state);
  CHECK(geq[1].values(3, 5) == doctest::Approx(1.315).epsilon(1e-12));
}

TEST_CASE("init_from_macroscopic lifts the fields linearly") {
  const Grid2D grid(16);
  const LbgkParams params(0.5, 1.0, d2q9());
  const RealField2D rho0(grid, 1.0);
  const RealField2D u01(grid, 0.1);
  const RealField2D u02(grid, 0.0);
  const LbgkState state = init_from_macroscopic(rho0, u01, u02, params);
  CHECK(state.time == 0.0);
  CHECK(state.g.size() == 9);
  CHECK(state.g[0].values(0, 0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(state.g[1].values(0, 0) == doctest::Approx(1.3).epsilon(1e-14));
  CHECK(state.g[3].values(0, 0) == doctest::Approx(0.7).epsilon(1e-14));

  const RealField2D other(Grid2D(32), 0.0);
  CHECK_THROWS_AS(init_from_macroscopic(rho0, other, u02, params), std::domain_error);
}

TEST_CASE("macroscopic recovers the lifted fields and matches a naive sum") {
  for (const Lattice& lat : {d2q9(), d2q7()}) {
    const Grid2D grid(16);
    const LbgkParams params(0.3, 1.0, lat);

    // unit fields: rho = 1, u = 0
    const RealField2D one(grid, 1.0);
    const RealField2D zero(grid, 0.0);
    LbgkState state{0.0, std::vector<RealField2D>(lat.size(), one), params};
    const MacroFields trivial = macroscopic(state);
    CHECK((trivial.rho.values - 1.0).abs().maxCoeff() <= 1e-14);
    CHECK(max_abs(trivial.u1.values) <= 1e-15);
    CHECK(max_abs(trivial.u2.values) <= 1e-15);

    // round trip through init_from_macroscopic
    RealField2D rho0 = random_band_field(grid, 301);
    RealField2D u01 = random_band_field(grid, 302);
    RealField2D u02 = random_band_field(grid, 303);
    rho0.values = 1.0 + 0.1 * rho0.values;
    u01.values *= 0.1;
    u02.values *= 0.1;
    const LbgkState lifted = init_from_macroscopic(rho0, u01, u02, params);
    const MacroFields m = macroscopic(lifted);
    CHECK(rel_max_diff(m.rho, rho0) <= 1e-12);
    CHECK((m.u1.values - u01.values).abs().maxCoeff() <= 1e-12);
    CHECK((m.u2.values - u02.values).abs().maxCoeff() <= 1e-12);

    // brute-force oracle at every grid point
    double worst = 0.0;
    for (int j = 0; j < grid.n; ++j) {
      for (int i = 0; i < grid.n; ++i) {
        double u1 = 0.0;
        for (int q = 0; q < lat.size(); ++q)
          u1 += lat.weights[q] * lat.velocities(q, 0) * lifted.g[q].values(i, j);
        worst = std::max(worst, std::abs(u1 - m.u1.values(i, j)));
      }
    }
    CHECK(worst <= 1e-14);
  }
}

TEST_CASE("rhs vanishes on a uniform equilibrium state") {
  const Grid2D grid(16);
  const LbgkParams params(0.5, 0.8, d2q9());
  const RealField2D one(grid, 1.0);
  const RealField2D zero(grid, 0.0);
  const LbgkState state = init_from_macroscopic(one, zero, zero, params);
  for (const RealField2D& ki : rhs(state)) CHECK(max_abs(ki.values) <= 1e-10);
}

TEST_CASE("rhs of the rest velocity has no transport term") {
  const Grid2D grid(16);
  const LbgkParams params(0.4, 0.7, d2q9());
  LbgkState state = smooth_random_state(grid, params, 401);
  state.g[2].values += 0.02 * random_band_field(grid, 405).values;

  const std::vector<RealField2D> k = rhs(state);
  const std::vector<RealField2D> geq = equilibrium(state);
  const double rate = 1.0 / (params.epsilon * params.epsilon * params.nu);
  RealField2D expected{grid};
  expected.values = rate * (geq[0].values - state.g[0].values);
  CHECK((k[0].values - expected.values).abs().maxCoeff() <= 1e-12 * max_abs(expected.values));
}

TEST_CASE("weighted sum of rhs equals the scaled velocity divergence") {
  // sum_i w_i dg_i/dt = -(1/eps) div(u): the collision part cancels exactly
  const Grid2D grid(16);
  const LbgkParams params(0.4, 0.7, d2q9());
  LbgkState state = smooth_random_state(grid, params, 411);
  for (std::size_t i = 0; i < state.g.size(); ++i)
    state.g[i].values += 0.02 * random_band_field(grid, 420u + static_cast<unsigned>(i)).values;

  const std::vector<RealField2D> k = rhs(state);
  const Lattice& lat = params.lattice;
  RealField2D sum(grid, 0.0);
  for (int i = 0; i < lat.size(); ++i) sum.values += lat.weights[i] * k[i].values;

  const MacroFields m = macroscopic(state);
  RealField2D expected{grid};
  expected.values = -(deriv(m.u1, 0).values + deriv(m.u2, 1).values) / params.epsilon;
  CHECK(rel_max_diff(sum, expected) <= 1e-11);
}

TEST_CASE("collision conserves mass and momentum pointwise") {
  for (const Lattice& lat : {d2q9(), d2q7()}) {
    const Grid2D grid(16);
    const LbgkParams params(0.3, 0.9, lat);
    for (unsigned seed : {1u, 2u, 3u}) {
      LbgkState state = smooth_random_state(grid, params, 500 + seed * 16);
      for (std::size_t i = 0; i < state.g.size(); ++i)
        state.g[i].values +=
            0.05 * random_band_field(grid, 600u + seed * 16u + static_cast<unsigned>(i)).values;
      const std::vector<RealField2D> geq = equilibrium(state);
      RealField2D dm(grid, 0.0), dp1(grid, 0.0), dp2(grid, 0.0);
      for (int i = 0; i < lat.size(); ++i) {
        RealField2D delta{grid};
        delta.values = geq[i].values - state.g[i].values;
        dm.values += lat.weights[i] * delta.values;
        dp1.values += lat.weights[i] * lat.velocities(i, 0) * delta.values;
        dp2.values += lat.weights[i] * lat.velocities(i, 1) * delta.values;
      }
      const double scale = state_scale(state);
      CHECK(max_abs(dm.values) <= 1e-12 * scale);
      CHECK(max_abs(dp1.values) <= 1e-12 * scale);
      CHECK(max_abs(dp2.values) <= 1e-12 * scale);
    }
  }
}

TEST_CASE("rk4_step leaves a uniform equilibrium unchanged") {
  const Grid2D grid(16);
  const LbgkParams params(0.5, 0.8, d2q9());
  const RealField2D one(grid, 1.0);
  const RealField2D zero(grid, 0.0);
  const LbgkState state = init_from_macroscopic(one, zero, zero, params);
  const LbgkState next = rk4_step(state, 0.01);
  for (std::size_t i = 0; i < state.g.size(); ++i)
    CHECK((next.g[i].values - state.g[i].values).abs().maxCoeff() <= 1e-14);
  CHECK(next.time == doctest::Approx(0.01));
  CHECK_THROWS_AS(rk4_step(state, 0.0), std::domain_error);
}

TEST_CASE("uniform off-equilibrium perturbations decay at the RK4 collision factor") {
  // g_i = 1 + delta * (|v_i|^2 - 2 c_s^2): orthogonal to 1, v_x, v_y in the
  // weighted sense, so rho = 1, u = 0 and each component obeys
  // y' = -y/(eps^2 nu) exactly.
  const Grid2D grid(16);
  const double eps = 0.5, nu = 0.8;
  const LbgkParams params(eps, nu, d2q9());
  const Lattice& lat = params.lattice;
  const double cs2 = lat.sound_speed * lat.sound_speed;

  LbgkState state{0.0, std::vector<RealField2D>(lat.size(), RealField2D(grid, 0.0)), params};
  const double delta = 1e-3;
  for (int i = 0; i < lat.size(); ++i) {
    const double h = lat.velocities.row(i).squaredNorm() - 2.0 * cs2;
    state.g[i].values.setConstant(1.0 + delta * h);
  }
  const double before = weighted_g_norm(state);

  const double z = 0.25;  // dt / (eps^2 nu)
  const double dt = z * eps * eps * nu;
  const LbgkState next = rk4_step(state, dt);

  // measured contraction of the perturbation
  double num = 0.0, den = 0.0;
  for (int i = 0; i < lat.size(); ++i) {
    const double h = lat.velocities.row(i).squaredNorm() - 2.0 * cs2;
    if (h == 0.0) continue;
    num += std::abs(next.g[i].values(0, 0) - 1.0);
    den += std::abs(delta * h);
  }
  const double ratio = num / den;
  const double local_error_bound = 2.0 * std::pow(z, 5) / 120.0;
  CHECK(std::abs(ratio - std::exp(-z)) <= local_error_bound);

  // weighted norm is nonincreasing in the linear regime
  CHECK(weighted_g_norm(next) <= before * (1.0 + 1e-12));
}

TEST_CASE("rk4_step converges at fourth order") {
  const Grid2D grid(16);
  const LbgkParams params(0.5, 0.5, d2q9());
  const LbgkState initial = smooth_random_state(grid, params, 700, 0.08);

  const double t_final = 0.064;
  auto solve = [&](double dt) {
    LbgkState s = initial;
    const long steps = std::lround(t_final / dt);
    for (long k = 0; k < steps; ++k) s = rk4_step(s, dt);
    return s;
  };
  auto diff_norm = [](const LbgkState& a, const LbgkState& b) {
    double sum = 0.0;
    for (std::size_t i = 0; i < a.g.size(); ++i) {
      RealField2D d{a.g[i].grid};
      d.values = a.g[i].values - b.g[i].values;
      const double norm = l2_norm(d);
      sum += norm * norm;
    }
    return std::sqrt(sum);
  };
  const LbgkState coarse = solve(0.008);
  const LbgkState medium = solve(0.004);
  const LbgkState fine = solve(0.002);
  const double order = std::log2(diff_norm(coarse, medium) / diff_norm(medium, fine));
  CHECK(order >= 3.9);
  CHECK(order <= 4.5);
}

TEST_CASE("mean density is conserved along trajectories") {
  for (const Lattice& lat : {d2q9(), d2q7()}) {
    const Grid2D grid(16);
    const LbgkParams params(0.3, 0.01, lat);
    LbgkState state = smooth_random_state(grid, params, 800);
    const double mass0 = mean(macroscopic(state).rho);
    const double dt = stable_dt(state);
    state = integrate_lbgk(state, dt, 100);
    const double mass1 = mean(macroscopic(state).rho);
    CHECK(std::abs(mass1 - mass0) <= 1e-12 * std::max(1.0, 100 * dt) * std::abs(mass0));
  }
}

TEST_CASE("integrate_lbgk matches repeated rk4_step calls") {
  const Grid2D grid(16);
  const LbgkParams params(0.4, 0.2, d2q9());
  const LbgkState initial = smooth_random_state(grid, params, 900, 0.08);
  const double dt = stable_dt(initial);

  LbgkState slow = initial;
  for (int s = 0; s < 10; ++s) slow = rk4_step(slow, dt);
  const LbgkState fast = integrate_lbgk(initial, dt, 10);

  CHECK(fast.time == doctest::Approx(slow.time).epsilon(1e-15));
  for (std::size_t i = 0; i < slow.g.size(); ++i)
    CHECK(rel_max_diff(fast.g[i], slow.g[i]) <= 1e-12);
}

TEST_CASE("integration reports blowup with the failure time") {
  const Grid2D grid(16);
  const LbgkParams params(0.1, 1e-4, d2q9());
  LbgkState state = smooth_random_state(grid, params, 1000, 0.2);
  const double dt = 1e3;  // far beyond the collision stability bound
  bool thrown = false;
  try {
    for (int s = 0; s < 10 && !thrown; ++s) state = rk4_step(state, dt);
  } catch (const BlowupError& err) {
    thrown = true;
    CHECK(err.time > 0.0);
  }
  CHECK(thrown);

  bool thrown_fast = false;
  try {
    integrate_lbgk(smooth_random_state(grid, params, 1000, 0.2), dt, 10);
  } catch (const BlowupError&) {
    thrown_fast = true;
  }
  CHECK(thrown_fast);
}

TEST_CASE("per-step cutoff confines the state to the retained ball") {
  const Grid2D grid(16);
  // 1/eps = 10/3: only the mean mode has |2 pi k| below it
  const LbgkParams params(0.3, 0.5, d2q9(), true);
  LbgkState state = smooth_random_state(grid, params, 1100);
  state = rk4_step(state, 1e-3);
  for (const RealField2D& gi : state.g) {
    CHECK((gi.values - gi.values.mean()).abs().maxCoeff() <= 1e-12);
  }
  // fast path agrees
  LbgkState fast = integrate_lbgk(smooth_random_state(grid, params, 1100), 1e-3, 1);
  for (const RealField2D& gi : fast.g) {
    CHECK((gi.values - gi.values.mean()).abs().maxCoeff() <= 1e-12);
  }
}

TEST_CASE("vorticity_of") {
  const Grid2D grid(32);
  const LbgkParams params(0.2, 1.0, d2q9());
  const RealField2D one(grid, 1.0);

  // gradient fields are irrotational
  const RealField2D phi = sample(grid, [](double x, double y) {
    return std::sin(2 * M_PI * x) * std::cos(4 * M_PI * y);
  });
  const LbgkState irrot = init_from_macroscopic(one, deriv(phi, 0), deriv(phi, 1), params);
  CHECK(l2_norm(vorticity_of(irrot)) <= 1e-11);

  // constant velocity has zero curl
  const RealField2D cu(grid, 0.25);
  const LbgkState uniform = init_from_macroscopic(one, cu, cu, params);
  CHECK(l2_norm(vorticity_of(uniform)) <= 1e-12);

  // curl of the lifted perp-gradient velocity returns the vorticity
  const RealField2D omega0 = dealias(sample(grid, [](double x, double y) {
    return 10.0 * std::sin(4 * M_PI * x) * std::sin(4 * M_PI * y);
  }));
  const RealField2D psi = inv_laplacian(omega0);
  RealField2D u01{grid}, u02{grid};
  u01.values = -deriv(psi, 1).values;
  u02.values = deriv(psi, 0).values;
  const LbgkState lifted = init_from_macroscopic(one, u01, u02, params);
  CHECK(rel_max_diff(vorticity_of(lifted), omega0) <= 1e-11);
}

TEST_CASE("stable_dt combines the collision and advective bounds") {
  const Grid2D grid(64);
  // collision-limited: eps^2 nu tiny
  const LbgkParams stiff(0.1, 1e-4, d2q9());
  CHECK(stable_dt(stiff, grid) == doctest::Approx(0.5 * 2.78 * 0.01 * 1e-4).epsilon(1e-12));
  // advection-limited: large eps^2 nu
  const LbgkParams loose(0.5, 10.0, d2q9());
  CHECK(stable_dt(loose, grid) ==
        doctest::Approx(0.5 * 0.5 * grid.dx() / std::sqrt(2.0)).epsilon(1e-12));
}
