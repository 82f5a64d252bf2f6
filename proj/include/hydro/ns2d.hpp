#pragma once

#include <utility>

#include "hydro/field.hpp"
#include "hydro/lbgk.hpp"
#include "hydro/spectral.hpp"

namespace hydro {

struct NsParams {
  double nu = 0.0;
  double sound_speed = 0.0;

  NsParams(double nu_, double sound_speed_);
  double effective_viscosity() const { return sound_speed * sound_speed * nu; }
};

/// Vorticity-form state; omega must have zero mean (checked where the
/// Laplacian is inverted).
struct NsState {
  double time = 0.0;
  RealField2D omega;
  NsParams params;
};

struct Diagnostics {
  double enstrophy = 0.0;     // 0.5 * ||omega||_L2^2
  double palinstrophy = 0.0;  // 0.5 * ||grad omega||_L2^2
  double energy = 0.0;        // 0.5 * ||u||_L2^2
  double mean_vorticity = 0.0;
};

/// u = (-d/dx2, d/dx1) inv_laplacian(omega); divergence-free by construction.
std::pair<RealField2D, RealField2D> velocity_from_vorticity(const RealField2D& omega);

/// d(omega)/dt = -dealias(u . grad omega) + c_s^2 nu lap(omega).
RealField2D rhs(const NsState& state);

NsState rk4_step(const NsState& state, double dt);

Diagnostics diagnostics(const NsState& state);

/// amplitude * sin(2 pi a x1) sin(2 pi b x2) * exp(-4 pi^2 (a^2+b^2) c_s^2 nu t)
RealField2D taylor_green_exact(double amplitude, int a, int b, const NsParams& params,
                               double t, const Grid2D& grid);

/// -sin(2 pi x1) sin(2 pi x2) + exp(-50((x1-1/2)^2+(x2-1/2)^2)) + C, with C
/// chosen so the grid mean is exactly zero.
RealField2D perturbed_tg(const Grid2D& grid);

/// min(0.5 * dx / max|u|, 0.5 * dx^2 / (4 pi^2 nu_eff)).
double stable_dt(const NsState& state);

}  // namespace hydro
