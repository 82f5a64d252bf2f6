#include "hydro/lbgk.hpp"

#include <cmath>
#include <sstream>
#include <vector>

#include "fft_internal.hpp"
#include "hydro/parallel.hpp"

namespace hydro {

BlowupError::BlowupError(double t)
    : std::runtime_error([t] {
        std::ostringstream msg;
        msg << "time integration produced nonfinite values at t = " << t;
        return msg.str();
      }()),
      time(t) {}

LbgkParams::LbgkParams(double epsilon_, double nu_, Lattice lattice_, bool cutoff_each_step_)
    : epsilon(epsilon_), nu(nu_), lattice(std::move(lattice_)), cutoff_each_step(cutoff_each_step_) {
  if (!(epsilon > 0.0 && epsilon < 1.0))
    throw std::domain_error("LbgkParams: epsilon must lie in (0, 1)");
  if (!(nu > 0.0)) throw std::domain_error("LbgkParams: nu must be positive");
  if (lattice.dim != 2) throw std::domain_error("LbgkParams: lattice must be two-dimensional");
  if (!validate_isotropy(lattice, 1e-10).satisfied)
    throw std::domain_error("LbgkParams: lattice fails the isotropy conditions at 1e-10");
}

MacroFields macroscopic(const LbgkState& state) {
  const Lattice& lat = state.params.lattice;
  const Grid2D& grid = state.g.at(0).grid;
  MacroFields m{RealField2D(grid, 0.0), RealField2D(grid, 0.0), RealField2D(grid, 0.0)};
  for (int i = 0; i < lat.size(); ++i) {
    const double w = lat.weights[i];
    m.rho.values += w * state.g[i].values;
    m.u1.values += (w * lat.velocities(i, 0)) * state.g[i].values;
    m.u2.values += (w * lat.velocities(i, 1)) * state.g[i].values;
  }
  return m;
}

std::vector<RealField2D> equilibrium(const LbgkState& state) {
  const Lattice& lat = state.params.lattice;
  const double cs2 = lat.sound_speed * lat.sound_speed;
  const double quad = state.params.epsilon / (2.0 * cs2 * cs2);
  const MacroFields m = macroscopic(state);
  const Grid2D& grid = m.rho.grid;

  RealField2D p11{grid}, p12{grid}, p22{grid};
  p11.values = m.u1.values * m.u1.values;
  p12.values = m.u1.values * m.u2.values;
  p22.values = m.u2.values * m.u2.values;
  p11 = dealias(p11);
  p12 = dealias(p12);
  p22 = dealias(p22);

  std::vector<RealField2D> geq(lat.size(), RealField2D(grid));
  for (int i = 0; i < lat.size(); ++i) {
    const double vx = lat.velocities(i, 0);
    const double vy = lat.velocities(i, 1);
    geq[i].values = m.rho.values + (vx / cs2) * m.u1.values + (vy / cs2) * m.u2.values +
                    quad * ((vx * vx - cs2) * p11.values + (2.0 * vx * vy) * p12.values +
                            (vy * vy - cs2) * p22.values);
  }
  return geq;
}

std::vector<RealField2D> rhs(const LbgkState& state) {
  const Lattice& lat = state.params.lattice;
  const Grid2D& grid = state.g.at(0).grid;
  const double inv_eps = 1.0 / state.params.epsilon;
  const double collision_rate =
      1.0 / (state.params.epsilon * state.params.epsilon * state.params.nu);

  std::vector<RealField2D> geq = equilibrium(state);
  std::vector<RealField2D> out(lat.size(), RealField2D(grid));
  for (int i = 0; i < lat.size(); ++i) {
    const double vx = lat.velocities(i, 0);
    const double vy = lat.velocities(i, 1);
    out[i].values = collision_rate * (geq[i].values - state.g[i].values);
    if (vx != 0.0 || vy != 0.0) {
      out[i].values -= inv_eps * directional_deriv(state.g[i], vx, vy).values;
    }
  }
  return out;
}

namespace {

std::vector<RealField2D> shifted(const std::vector<RealField2D>& base, double factor,
                                 const std::vector<RealField2D>& delta) {
  std::vector<RealField2D> out(base.size(), RealField2D(base.at(0).grid));
  for (std::size_t i = 0; i < base.size(); ++i) {
    out[i].values = base[i].values + factor * delta[i].values;
  }
  return out;
}

}  // namespace

LbgkState rk4_step(const LbgkState& state, double dt) {
  if (!(dt > 0.0)) throw std::domain_error("rk4_step: dt must be positive");
  LbgkState stage = state;

  const std::vector<RealField2D> k1 = rhs(state);
  stage.g = shifted(state.g, 0.5 * dt, k1);
  const std::vector<RealField2D> k2 = rhs(stage);
  stage.g = shifted(state.g, 0.5 * dt, k2);
  const std::vector<RealField2D> k3 = rhs(stage);
  stage.g = shifted(state.g, dt, k3);
  const std::vector<RealField2D> k4 = rhs(stage);

  LbgkState next = state;
  next.time = state.time + dt;
  const double sixth = dt / 6.0;
  for (std::size_t i = 0; i < state.g.size(); ++i) {
    next.g[i].values = state.g[i].values +
                       sixth * (k1[i].values + 2.0 * k2[i].values + 2.0 * k3[i].values +
                                k4[i].values);
  }
  for (const RealField2D& gi : next.g) {
    if (!gi.values.allFinite()) throw BlowupError(next.time);
  }
  if (state.params.cutoff_each_step) {
    for (RealField2D& gi : next.g) gi = fourier_cutoff(gi, state.params.epsilon);
  }
  return next;
}

LbgkState init_from_macroscopic(const RealField2D& rho0, const RealField2D& u01,
                                const RealField2D& u02, const LbgkParams& params) {
  if (rho0.grid != u01.grid || rho0.grid != u02.grid)
    throw std::domain_error("init_from_macroscopic: fields live on different grids");
  const Lattice& lat = params.lattice;
  const double cs2 = lat.sound_speed * lat.sound_speed;
  LbgkState state{0.0, std::vector<RealField2D>(lat.size(), RealField2D(rho0.grid)), params};
  for (int i = 0; i < lat.size(); ++i) {
    state.g[i].values = rho0.values + (lat.velocities(i, 0) / cs2) * u01.values +
                        (lat.velocities(i, 1) / cs2) * u02.values;
  }
  return state;
}

RealField2D vorticity_of(const LbgkState& state) {
  const MacroFields m = macroscopic(state);
  RealField2D curl{m.rho.grid};
  curl.values = deriv(m.u2, 0).values - deriv(m.u1, 1).values;
  return curl;
}

double stable_dt(const LbgkParams& params, const Grid2D& grid) {
  const double collision = 2.78 * params.epsilon * params.epsilon * params.nu;
  double vmax = 0.0;
  for (int i = 0; i < params.lattice.size(); ++i)
    vmax = std::max(vmax, params.lattice.velocities.row(i).norm());
  double dt = 0.5 * collision;
  if (vmax > 0.0) dt = std::min(dt, 0.5 * params.epsilon * grid.dx() / vmax);
  return dt;
}

double stable_dt(const LbgkState& state) { return stable_dt(state.params, state.g.at(0).grid); }

double weighted_g_norm(const LbgkState& state) {
  double sum = 0.0;
  for (int i = 0; i < state.params.lattice.size(); ++i) {
    const double norm = l2_norm(state.g[i]);
    sum += state.params.lattice.weights[i] * norm * norm;
  }
  return std::sqrt(sum);
}

// ----------------------------------------------------------------------------
// Spectral-space integrator. The state is kept as normalized Fourier
// coefficients; transport is a per-mode multiply and only the quadratic
// equilibrium products round-trip through physical space (2 c2r + 3 r2c per
// rhs evaluation).

namespace {

using detail::CplxBuf;
using detail::RealBuf;
using Cplx = std::complex<double>;

struct SpectralWorkspace {
  int n = 0;
  int q = 0;
  std::size_t nc = 0;  // (n/2+1) * n modes per field
  int threads = 1;
  const detail::Plans* plans = nullptr;

  std::vector<CplxBuf> y, yt, kc, acc;
  CplxBuf rho, u1h, u2h, p11, p12, p22, cscratch;
  RealBuf ru1, ru2, rprod;
  RealBuf kx, ky;           // Nyquist-zeroed signed wavenumbers per mode
  RealBuf product_mask;     // dealias mask with the forward normalization folded in
  RealBuf cutoff_mask;      // only when cutoff_each_step

  // per-velocity coefficients
  std::vector<double> a1, a2, qa, qb, qcc, wx, wy, w;

  SpectralWorkspace(const LbgkParams& params, const Grid2D& grid) {
    const Lattice& lat = params.lattice;
    n = grid.n;
    q = lat.size();
    const int half = n / 2;
    nc = static_cast<std::size_t>(half + 1) * n;
    threads = std::min(thread_budget(), q);
    plans = &detail::aligned_plans(n);

    auto alloc_fields = [&](std::vector<CplxBuf>& v) {
      v.reserve(q);
      for (int i = 0; i < q; ++i) v.push_back(detail::alloc_cplx(nc));
    };
    alloc_fields(y);
    alloc_fields(yt);
    alloc_fields(kc);
    alloc_fields(acc);
    rho = detail::alloc_cplx(nc);
    u1h = detail::alloc_cplx(nc);
    u2h = detail::alloc_cplx(nc);
    p11 = detail::alloc_cplx(nc);
    p12 = detail::alloc_cplx(nc);
    p22 = detail::alloc_cplx(nc);
    cscratch = detail::alloc_cplx(nc);
    ru1 = detail::alloc_real(static_cast<std::size_t>(n) * n);
    ru2 = detail::alloc_real(static_cast<std::size_t>(n) * n);
    rprod = detail::alloc_real(static_cast<std::size_t>(n) * n);
    kx = detail::alloc_real(nc);
    ky = detail::alloc_real(nc);
    product_mask = detail::alloc_real(nc);

    const double norm = 1.0 / (static_cast<double>(n) * n);
    const double third = n / 3.0;
    for (int j = 0; j < n; ++j) {
      const int k2 = wavenumber(j, n);
      for (int i = 0; i <= half; ++i) {
        const std::size_t m = static_cast<std::size_t>(j) * (half + 1) + i;
        kx[m] = i == half ? 0.0 : static_cast<double>(i);
        ky[m] = j == half ? 0.0 : static_cast<double>(k2);
        product_mask[m] = std::max(i, std::abs(k2)) > third ? 0.0 : norm;
      }
    }
    if (params.cutoff_each_step) {
      cutoff_mask = detail::alloc_real(nc);
      const double s2 = (2.0 * M_PI / grid.length) * (2.0 * M_PI / grid.length);
      const double threshold = 1.0 / (params.epsilon * params.epsilon);
      for (int j = 0; j < n; ++j) {
        const double k2 = wavenumber(j, n);
        for (int i = 0; i <= half; ++i) {
          const std::size_t m = static_cast<std::size_t>(j) * (half + 1) + i;
          cutoff_mask[m] = s2 * (static_cast<double>(i) * i + k2 * k2) >= threshold ? 0.0 : 1.0;
        }
      }
    }

    const double cs2 = lat.sound_speed * lat.sound_speed;
    const double quad = params.epsilon / (2.0 * cs2 * cs2);
    a1.resize(q);
    a2.resize(q);
    qa.resize(q);
    qb.resize(q);
    qcc.resize(q);
    wx.resize(q);
    wy.resize(q);
    w.resize(q);
    for (int i = 0; i < q; ++i) {
      const double vx = lat.velocities(i, 0);
      const double vy = lat.velocities(i, 1);
      w[i] = lat.weights[i];
      wx[i] = w[i] * vx;
      wy[i] = w[i] * vy;
      a1[i] = vx / cs2;
      a2[i] = vy / cs2;
      qa[i] = quad * (vx * vx - cs2);
      qb[i] = quad * (2.0 * vx * vy);
      qcc[i] = quad * (vy * vy - cs2);
    }
  }

  // dst must be fftw-aligned
  void to_physical(const Cplx* src, double* dst) {
    std::copy(src, src + nc, cscratch.get());
    fftw_execute_dft_c2r(plans->inv, detail::fc(cscratch.get()), dst);
  }

  // dg_i/dt for the spectral state in[], written to out[]
  void eval_rhs(const LbgkParams& params, const std::vector<CplxBuf>& in,
                std::vector<CplxBuf>& out) {
    const double cr = 1.0 / (params.epsilon * params.epsilon * params.nu);
    const double tr = -2.0 * M_PI / params.epsilon;

    for (std::size_t m = 0; m < nc; ++m) rho[m] = u1h[m] = u2h[m] = 0.0;
    for (int i = 0; i < q; ++i) {
      const Cplx* gi = in[i].get();
      const double cw = w[i], cx = wx[i], cy = wy[i];
      for (std::size_t m = 0; m < nc; ++m) rho[m] += cw * gi[m];
      if (cx != 0.0) {
        for (std::size_t m = 0; m < nc; ++m) u1h[m] += cx * gi[m];
      }
      if (cy != 0.0) {
        for (std::size_t m = 0; m < nc; ++m) u2h[m] += cy * gi[m];
      }
    }

    to_physical(u1h.get(), ru1.get());
    to_physical(u2h.get(), ru2.get());
    const std::size_t np = static_cast<std::size_t>(n) * n;
    auto product_to_spectral = [&](const double* a, const double* b, Cplx* dst) {
      for (std::size_t m = 0; m < np; ++m) rprod[m] = a[m] * b[m];
      fftw_execute_dft_r2c(plans->fwd, rprod.get(), detail::fc(dst));
      for (std::size_t m = 0; m < nc; ++m) dst[m] *= product_mask[m];
    };
    product_to_spectral(ru1.get(), ru1.get(), p11.get());
    product_to_spectral(ru1.get(), ru2.get(), p12.get());
    product_to_spectral(ru2.get(), ru2.get(), p22.get());

#pragma omp parallel for schedule(static) num_threads(threads) if (threads > 1)
    for (int i = 0; i < q; ++i) {
      const Cplx* gi = in[i].get();
      Cplx* ki = out[i].get();
      const double c1 = a1[i], c2 = a2[i], b1 = qa[i], b2 = qb[i], b3 = qcc[i];
      const double vx = params.lattice.velocities(i, 0);
      const double vy = params.lattice.velocities(i, 1);
      if (vx == 0.0 && vy == 0.0) {
        for (std::size_t m = 0; m < nc; ++m) {
          const Cplx geq = rho[m] + c1 * u1h[m] + c2 * u2h[m] + b1 * p11[m] + b2 * p12[m] +
                           b3 * p22[m];
          ki[m] = cr * (geq - gi[m]);
        }
      } else {
        for (std::size_t m = 0; m < nc; ++m) {
          const Cplx geq = rho[m] + c1 * u1h[m] + c2 * u2h[m] + b1 * p11[m] + b2 * p12[m] +
                           b3 * p22[m];
          const double t = tr * (vx * kx[m] + vy * ky[m]);  // transport is i*t per mode
          ki[m] = cr * (geq - gi[m]) + Cplx(-t * gi[m].imag(), t * gi[m].real());
        }
      }
    }
  }
};

}  // namespace

LbgkState integrate_lbgk(const LbgkState& state, double dt, long nsteps) {
  if (!(dt > 0.0)) throw std::domain_error("integrate_lbgk: dt must be positive");
  if (nsteps < 0) throw std::domain_error("integrate_lbgk: nsteps must be nonnegative");
  const Grid2D& grid = state.g.at(0).grid;
  SpectralWorkspace ws(state.params, grid);
  const int q = ws.q;
  const std::size_t nc = ws.nc;
  const double norm = 1.0 / (static_cast<double>(ws.n) * ws.n);

  const std::size_t np = static_cast<std::size_t>(ws.n) * ws.n;
  for (int i = 0; i < q; ++i) {
    // stage through the aligned scratch; the Eigen-owned state storage does
    // not satisfy the aligned plans' requirement
    std::copy(state.g[i].values.data(), state.g[i].values.data() + np, ws.rprod.get());
    fftw_execute_dft_r2c(ws.plans->fwd, ws.rprod.get(), detail::fc(ws.y[i].get()));
    for (std::size_t m = 0; m < nc; ++m) ws.y[i][m] *= norm;
  }

  double time = state.time;
  for (long s = 0; s < nsteps; ++s) {
    // k1
    ws.eval_rhs(state.params, ws.y, ws.kc);
#pragma omp parallel for schedule(static) num_threads(ws.threads) if (ws.threads > 1)
    for (int i = 0; i < q; ++i) {
      for (std::size_t m = 0; m < nc; ++m) {
        ws.acc[i][m] = ws.kc[i][m];
        ws.yt[i][m] = ws.y[i][m] + (0.5 * dt) * ws.kc[i][m];
      }
    }
    // k2
    ws.eval_rhs(state.params, ws.yt, ws.kc);
#pragma omp parallel for schedule(static) num_threads(ws.threads) if (ws.threads > 1)
    for (int i = 0; i < q; ++i) {
      for (std::size_t m = 0; m < nc; ++m) {
        ws.acc[i][m] += 2.0 * ws.kc[i][m];
        ws.yt[i][m] = ws.y[i][m] + (0.5 * dt) * ws.kc[i][m];
      }
    }
    // k3
    ws.eval_rhs(state.params, ws.yt, ws.kc);
#pragma omp parallel for schedule(static) num_threads(ws.threads) if (ws.threads > 1)
    for (int i = 0; i < q; ++i) {
      for (std::size_t m = 0; m < nc; ++m) {
        ws.acc[i][m] += 2.0 * ws.kc[i][m];
        ws.yt[i][m] = ws.y[i][m] + dt * ws.kc[i][m];
      }
    }
    // k4 and update
    ws.eval_rhs(state.params, ws.yt, ws.kc);
    const double sixth = dt / 6.0;
#pragma omp parallel for schedule(static) num_threads(ws.threads) if (ws.threads > 1)
    for (int i = 0; i < q; ++i) {
      for (std::size_t m = 0; m < nc; ++m) ws.y[i][m] += sixth * (ws.acc[i][m] + ws.kc[i][m]);
    }
    time += dt;
    bool finite = true;
    for (int i = 0; i < q && finite; ++i) {
      const Cplx* gi = ws.y[i].get();
      for (std::size_t m = 0; m < nc; ++m) {
        if (!std::isfinite(gi[m].real()) || !std::isfinite(gi[m].imag())) {
          finite = false;
          break;
        }
      }
    }
    if (!finite) throw BlowupError(time);
    if (state.params.cutoff_each_step) {
      for (int i = 0; i < q; ++i) {
        for (std::size_t m = 0; m < nc; ++m) ws.y[i][m] *= ws.cutoff_mask[m];
      }
    }
  }

  LbgkState out = state;
  out.time = time;
  for (int i = 0; i < q; ++i) {
    ws.to_physical(ws.y[i].get(), ws.rprod.get());
    std::copy(ws.rprod.get(), ws.rprod.get() + np, out.g[i].values.data());
  }
  return out;
}

}  // namespace hydro
