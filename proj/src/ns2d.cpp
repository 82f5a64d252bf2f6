#include "hydro/ns2d.hpp"

#include <algorithm>
#include <cmath>

#include "fft_internal.hpp"

namespace hydro {

NsParams::NsParams(double nu_, double sound_speed_) : nu(nu_), sound_speed(sound_speed_) {
  if (!(nu > 0.0)) throw std::domain_error("NsParams: nu must be positive");
  if (!(sound_speed > 0.0)) throw std::domain_error("NsParams: sound speed must be positive");
}

std::pair<RealField2D, RealField2D> velocity_from_vorticity(const RealField2D& omega) {
  const RealField2D psi = inv_laplacian(omega);  // checks the zero-mean precondition
  RealField2D u1{omega.grid}, u2{omega.grid};
  u1.values = -deriv(psi, 1).values;
  u2.values = deriv(psi, 0).values;
  return {std::move(u1), std::move(u2)};
}

// Single-forward spectral evaluation: u and grad(omega) come from one
// transform of omega, the advective product is dealiased, diffusion is added
// in spectral space.
RealField2D rhs(const NsState& state) {
  using Cplx = std::complex<double>;
  const Grid2D& grid = state.omega.grid;
  const int n = grid.n;
  const int half = n / 2;
  const std::size_t nc = static_cast<std::size_t>(half + 1) * n;
  const std::size_t np = static_cast<std::size_t>(n) * n;
  const detail::Plans& plans = detail::aligned_plans(n);
  const double norm = 1.0 / (static_cast<double>(n) * n);
  const double scale = 2.0 * M_PI / grid.length;

  detail::RealBuf rbuf = detail::alloc_real(np);
  detail::CplxBuf what = detail::alloc_cplx(nc);
  detail::CplxBuf cbuf = detail::alloc_cplx(nc);
  detail::RealBuf u1 = detail::alloc_real(np);
  detail::RealBuf u2 = detail::alloc_real(np);
  detail::RealBuf wx = detail::alloc_real(np);
  detail::RealBuf wy = detail::alloc_real(np);

  std::copy(state.omega.values.data(), state.omega.values.data() + np, rbuf.get());
  fftw_execute_dft_r2c(plans.fwd, rbuf.get(), detail::fc(what.get()));
  for (std::size_t m = 0; m < nc; ++m) what[m] *= norm;

  // zero-mean precondition, via Parseval
  double sumsq = 0.0;
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i <= half; ++i) {
      const double a = std::norm(what[static_cast<std::size_t>(j) * (half + 1) + i]);
      sumsq += (i == 0 || i == half) ? a : 2.0 * a;
    }
  }
  const double l2 = std::sqrt(sumsq) * grid.length;
  if (std::abs(what[0].real()) > 1e-10 * l2)
    throw std::domain_error("inv_laplacian: field mean exceeds 1e-10 * ||f||_L2");

  auto spectral_to = [&](auto&& factor, double* dst) {
    for (int j = 0; j < n; ++j) {
      const int k2full = wavenumber(j, n);
      const double k2 = j == half ? 0.0 : k2full;
      for (int i = 0; i <= half; ++i) {
        const double k1 = i == half ? 0.0 : i;
        const std::size_t m = static_cast<std::size_t>(j) * (half + 1) + i;
        cbuf[m] = factor(what[m], k1, k2, static_cast<double>(i), static_cast<double>(k2full));
      }
    }
    fftw_execute_dft_c2r(plans.inv, detail::fc(cbuf.get()), dst);
  };

  // u = perp-grad of inv_laplacian(omega); derivative wavenumbers are
  // Nyquist-zeroed, the Laplacian denominator is not
  spectral_to(
      [scale](Cplx w, double, double k2, double i1, double j2) {
        const double ksq = i1 * i1 + j2 * j2;
        return ksq == 0.0 ? Cplx(0.0) : Cplx(0.0, k2 / (scale * ksq)) * w;
      },
      u1.get());
  spectral_to(
      [scale](Cplx w, double k1, double, double i1, double j2) {
        const double ksq = i1 * i1 + j2 * j2;
        return ksq == 0.0 ? Cplx(0.0) : Cplx(0.0, -k1 / (scale * ksq)) * w;
      },
      u2.get());
  spectral_to([scale](Cplx w, double k1, double, double, double) {
    return Cplx(0.0, scale * k1) * w;
  }, wx.get());
  spectral_to([scale](Cplx w, double, double k2, double, double) {
    return Cplx(0.0, scale * k2) * w;
  }, wy.get());

  for (std::size_t m = 0; m < np; ++m) rbuf[m] = u1[m] * wx[m] + u2[m] * wy[m];
  fftw_execute_dft_r2c(plans.fwd, rbuf.get(), detail::fc(cbuf.get()));

  const double nu_eff = state.params.effective_viscosity();
  const double third = n / 3.0;
  for (int j = 0; j < n; ++j) {
    const int k2 = wavenumber(j, n);
    for (int i = 0; i <= half; ++i) {
      const std::size_t m = static_cast<std::size_t>(j) * (half + 1) + i;
      const double dealias_factor = std::max(i, std::abs(k2)) > third ? 0.0 : norm;
      const double ksq = static_cast<double>(i) * i + static_cast<double>(k2) * k2;
      cbuf[m] = -dealias_factor * cbuf[m] - (nu_eff * scale * scale * ksq) * what[m];
    }
  }
  RealField2D out{grid};
  fftw_execute_dft_c2r(plans.inv, detail::fc(cbuf.get()), rbuf.get());
  std::copy(rbuf.get(), rbuf.get() + np, out.values.data());
  return out;
}

NsState rk4_step(const NsState& state, double dt) {
  if (!(dt > 0.0)) throw std::domain_error("rk4_step: dt must be positive");
  NsState stage = state;

  const RealField2D k1 = rhs(state);
  stage.omega.values = state.omega.values + 0.5 * dt * k1.values;
  const RealField2D k2 = rhs(stage);
  stage.omega.values = state.omega.values + 0.5 * dt * k2.values;
  const RealField2D k3 = rhs(stage);
  stage.omega.values = state.omega.values + dt * k3.values;
  const RealField2D k4 = rhs(stage);

  NsState next = state;
  next.time = state.time + dt;
  next.omega.values = state.omega.values + (dt / 6.0) * (k1.values + 2.0 * k2.values +
                                                         2.0 * k3.values + k4.values);
  if (!next.omega.values.allFinite()) throw BlowupError(next.time);
  return next;
}

Diagnostics diagnostics(const NsState& state) {
  Diagnostics d;
  const double omega_norm = l2_norm(state.omega);
  d.enstrophy = 0.5 * omega_norm * omega_norm;
  const double gx = l2_norm(deriv(state.omega, 0));
  const double gy = l2_norm(deriv(state.omega, 1));
  d.palinstrophy = 0.5 * (gx * gx + gy * gy);
  const auto [u1, u2] = velocity_from_vorticity(state.omega);
  const double n1 = l2_norm(u1);
  const double n2 = l2_norm(u2);
  d.energy = 0.5 * (n1 * n1 + n2 * n2);
  d.mean_vorticity = mean(state.omega);
  return d;
}

RealField2D taylor_green_exact(double amplitude, int a, int b, const NsParams& params, double t,
                               const Grid2D& grid) {
  if (t < 0.0) throw std::domain_error("taylor_green_exact: t must be nonnegative");
  const double decay =
      std::exp(-4.0 * M_PI * M_PI * (static_cast<double>(a) * a + static_cast<double>(b) * b) *
               params.effective_viscosity() * t);
  const double factor = amplitude * decay;
  return sample(grid, [factor, a, b](double x, double y) {
    return factor * std::sin(2.0 * M_PI * a * x) * std::sin(2.0 * M_PI * b * y);
  });
}

RealField2D perturbed_tg(const Grid2D& grid) {
  RealField2D field = sample(grid, [](double x, double y) {
    return -std::sin(2.0 * M_PI * x) * std::sin(2.0 * M_PI * y) +
           std::exp(-50.0 * ((x - 0.5) * (x - 0.5) + (y - 0.5) * (y - 0.5)));
  });
  field.values -= field.values.mean();
  return field;
}

double stable_dt(const NsState& state) {
  const double dx = state.omega.grid.dx();
  const double diffusive =
      0.5 * dx * dx / (4.0 * M_PI * M_PI * state.params.effective_viscosity());
  const auto [u1, u2] = velocity_from_vorticity(state.omega);
  const double umax = std::sqrt((u1.values.square() + u2.values.square()).maxCoeff());
  double dt = diffusive;
  if (umax > 0.0) dt = std::min(dt, 0.5 * dx / umax);
  return dt;
}

}  // namespace hydro
