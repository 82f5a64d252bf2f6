#pragma once

#include <stdexcept>
#include <vector>

#include "hydro/field.hpp"
#include "hydro/lattice.hpp"
#include "hydro/spectral.hpp"

namespace hydro {

/// Thrown when a time integration produces nonfinite values.
struct BlowupError : std::runtime_error {
  double time;
  explicit BlowupError(double t);
};

struct LbgkParams {
  double epsilon = 0.0;  // Knudsen number, in (0, 1)
  double nu = 0.0;       // relaxation time, > 0
  Lattice lattice;       // 2D, isotropic to 1e-10
  bool cutoff_each_step = false;  // integrate the sharp-cutoff system instead

  LbgkParams(double epsilon_, double nu_, Lattice lattice_, bool cutoff_each_step_ = false);
};

/// Distribution fields (g_0, ..., g_n), one per lattice velocity.
struct LbgkState {
  double time = 0.0;
  std::vector<RealField2D> g;
  LbgkParams params;
};

struct MacroFields {
  RealField2D rho;
  RealField2D u1;
  RealField2D u2;
};

/// rho = sum_i w_i g_i, u = sum_i w_i v_i g_i.
MacroFields macroscopic(const LbgkState& state);

/// g_eq_i = rho + v_i.u / c_s^2 + eps/(2 c_s^4) sum_ab u_a u_b (v_ia v_ib - c_s^2 d_ab),
/// with the quadratic products dealiased.
std::vector<RealField2D> equilibrium(const LbgkState& state);

/// dg_i/dt = -(1/eps) v_i . grad(g_i) + 1/(eps^2 nu) (g_eq_i - g_i).
std::vector<RealField2D> rhs(const LbgkState& state);

/// Classical RK4 update of all fields. Throws BlowupError on nonfinite values.
LbgkState rk4_step(const LbgkState& state, double dt);

/// g_i = rho0 + v_i . u0 / c_s^2 at time 0 (no quadratic term).
LbgkState init_from_macroscopic(const RealField2D& rho0, const RealField2D& u01,
                                const RealField2D& u02, const LbgkParams& params);

/// curl of the macroscopic velocity, d(u2)/dx1 - d(u1)/dx2.
RealField2D vorticity_of(const LbgkState& state);

/// Advances the state by nsteps RK4 steps of size dt. Same semi-discrete
/// system as rk4_step (results agree to roundoff) but integrated in spectral
/// space, where transport is a diagonal multiply; this is the path long runs
/// should use.
LbgkState integrate_lbgk(const LbgkState& state, double dt, long nsteps);

/// min(0.5 * 2.78 * eps^2 nu, 0.5 * eps * dx / v_max): RK4 collision stability
/// bound and advective CFL, each with safety factor 0.5.
double stable_dt(const LbgkParams& params, const Grid2D& grid);
double stable_dt(const LbgkState& state);

/// sqrt(sum_i w_i ||g_i||_L2^2)
double weighted_g_norm(const LbgkState& state);

}  // namespace hydro
