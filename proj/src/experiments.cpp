#include "hydro/experiments.hpp"

#include <chrono>
#include <cmath>
#include <iostream>
#include <sstream>

#include "hydro/io.hpp"
#include "hydro/lbgk.hpp"

namespace hydro {

namespace {

constexpr double kSoundSpeedSq = 1.0 / 3.0;  // D2Q9

long steps_for(double t_final, double dt_limit) {
  if (t_final <= 0.0) return 0;
  return std::max(1L, static_cast<long>(std::ceil(t_final / dt_limit - 1e-9)));
}

void validate_convergence_config(const ConvergenceConfig& config) {
  if (config.epsilons.empty())
    throw std::domain_error("run_convergence: epsilon list must not be empty");
  for (std::size_t i = 0; i < config.epsilons.size(); ++i) {
    const double eps = config.epsilons[i];
    if (!(eps > 0.0 && eps < 1.0))
      throw std::domain_error("run_convergence: every epsilon must lie in (0, 1)");
    if (i > 0 && !(eps < config.epsilons[i - 1]))
      throw std::domain_error("run_convergence: epsilons must be strictly decreasing");
  }
  if (!(config.t_final > 0.0)) throw std::domain_error("run_convergence: t_final must be positive");
  if (config.dt_override && !(*config.dt_override > 0.0))
    throw std::domain_error("run_convergence: dt override must be positive");
}

RealField2D lifted_density(DensityLift lift, const RealField2D& pressure, double epsilon,
                           double cs2) {
  RealField2D rho0(pressure.grid, 1.0);
  if (lift == DensityLift::consistent) rho0.values -= (epsilon / cs2) * pressure.values;
  return rho0;
}

}  // namespace

RealField2D advective_pressure(const RealField2D& u1, const RealField2D& u2) {
  const Grid2D& grid = u1.grid;
  RealField2D adv1{grid}, adv2{grid};
  adv1.values = u1.values * deriv(u1, 0).values + u2.values * deriv(u1, 1).values;
  adv2.values = u1.values * deriv(u2, 0).values + u2.values * deriv(u2, 1).values;
  adv1 = dealias(adv1);
  adv2 = dealias(adv2);
  RealField2D div_adv{grid};
  div_adv.values = deriv(adv1, 0).values + deriv(adv2, 1).values;
  return inv_laplacian(div_adv);
}

RealField2D initial_vorticity(const InitialCondition& ic, const Grid2D& grid) {
  RealField2D omega0;
  if (ic.kind == InitialConditionKind::taylor_green) {
    const double amplitude = ic.amplitude;
    const int a = ic.a;
    const int b = ic.b;
    omega0 = sample(grid, [amplitude, a, b](double x, double y) {
      return amplitude * std::sin(2.0 * M_PI * a * x) * std::sin(2.0 * M_PI * b * y);
    });
  } else {
    omega0 = perturbed_tg(grid);
  }
  // Project onto the retained band so the state stays band-limited along the
  // whole trajectory.
  return dealias(omega0);
}

PowerLawFit fit_power_law(const std::vector<std::pair<double, double>>& rows) {
  if (rows.size() < 2) throw std::domain_error("fit_power_law: need at least 2 rows");
  double mx = 0.0, my = 0.0;
  for (const auto& [x, y] : rows) {
    if (!(x > 0.0) || !(y > 0.0))
      throw std::domain_error("fit_power_law: rows must be strictly positive");
    mx += std::log(x);
    my += std::log(y);
  }
  const double inv_n = 1.0 / static_cast<double>(rows.size());
  mx *= inv_n;
  my *= inv_n;
  double sxx = 0.0, sxy = 0.0;
  for (const auto& [x, y] : rows) {
    const double dx = std::log(x) - mx;
    sxx += dx * dx;
    sxy += dx * (std::log(y) - my);
  }
  if (sxx == 0.0) throw std::domain_error("fit_power_law: all x values coincide");
  PowerLawFit fit;
  fit.exponent = sxy / sxx;
  fit.prefactor = std::exp(my - fit.exponent * mx);
  double ss_res = 0.0, ss_tot = 0.0;
  for (const auto& [x, y] : rows) {
    const double ly = std::log(y);
    const double pred = (my - fit.exponent * mx) + fit.exponent * std::log(x);
    ss_res += (ly - pred) * (ly - pred);
    ss_tot += (ly - my) * (ly - my);
  }
  fit.r2 = ss_tot == 0.0 ? 1.0 : 1.0 - ss_res / ss_tot;
  return fit;
}

ConvergenceResult run_convergence(const ConvergenceConfig& config,
                                  const std::optional<std::filesystem::path>& out_dir) {
  validate_convergence_config(config);
  const Grid2D grid(config.grid_n);
  const RealField2D omega0 = initial_vorticity(config.ic, grid);
  const auto [u01, u02] = velocity_from_vorticity(omega0);
  const RealField2D pressure = advective_pressure(u01, u02);

  // Navier-Stokes reference, solved once.
  NsState ns{0.0, omega0, NsParams(config.nu, std::sqrt(kSoundSpeedSq))};
  const double ns_dt_limit = config.dt_override ? *config.dt_override : stable_dt(ns);
  const long ns_steps = steps_for(config.t_final, ns_dt_limit);
  const double ns_dt = config.t_final / static_cast<double>(ns_steps);
  std::clog << "[converge] reference: n=" << config.grid_n << " dt=" << ns_dt
            << " steps=" << ns_steps << std::endl;
  for (long s = 0; s < ns_steps; ++s) ns = rk4_step(ns, ns_dt);
  const RealField2D& omega_ref = ns.omega;
  const double ref_norm = l2_norm(omega_ref);

  ConvergenceResult result;
  for (double eps : config.epsilons) {
    const LbgkParams params(eps, config.nu, d2q9());
    const RealField2D rho0 = lifted_density(config.lift, pressure, eps, kSoundSpeedSq);
    LbgkState state = init_from_macroscopic(rho0, u01, u02, params);
    const double dt_limit = config.dt_override ? *config.dt_override : stable_dt(state);
    const long steps = steps_for(config.t_final, dt_limit);
    const double dt = config.t_final / static_cast<double>(steps);
    std::clog << "[converge] eps=" << eps << ": dt=" << dt << " steps=" << steps << std::endl;
    const auto started = std::chrono::steady_clock::now();
    const long chunks = steps >= 200000 ? 5 : 1;
    try {
      long done = 0;
      for (long c = 0; c < chunks; ++c) {
        const long target = ((c + 1) * steps) / chunks;
        state = integrate_lbgk(state, dt, target - done);
        done = target;
        if (c + 1 < chunks) {
          const auto elapsed = std::chrono::duration<double>(
              std::chrono::steady_clock::now() - started).count();
          std::clog << "[converge] eps=" << eps << ": " << (100 * done) / steps << "% ("
                    << elapsed << " s)" << std::endl;
        }
      }
    } catch (const BlowupError& err) {
      std::ostringstream msg;
      msg << "run_convergence: epsilon=" << eps << " blew up at t=" << err.time;
      throw std::runtime_error(msg.str());
    }
    const RealField2D omega_eps = vorticity_of(state);
    RealField2D diff{grid};
    diff.values = omega_ref.values - omega_eps.values;
    result.rows.push_back({eps, l2_norm(diff) / ref_norm, dt, steps});
    const auto elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    std::clog << "[converge] eps=" << eps << ": rel_error=" << result.rows.back().rel_error
              << " (" << elapsed << " s)" << std::endl;
  }

  if (result.rows.size() >= 2) {
    std::vector<std::pair<double, double>> points;
    for (const ConvergenceRow& row : result.rows) points.emplace_back(row.epsilon, row.rel_error);
    result.fit = fit_power_law(points);
  }

  if (out_dir) {
    std::filesystem::create_directories(*out_dir);
    CsvWriter csv(*out_dir / "convergence.csv", {"epsilon", "rel_error", "dt_used", "steps"});
    for (const ConvergenceRow& row : result.rows)
      csv.row({row.epsilon, row.rel_error, row.dt_used, static_cast<double>(row.steps)});
    if (result.fit) {
      csv.raw_row({"fit_prefactor", format_double(result.fit->prefactor), "", ""});
      csv.raw_row({"fit_exponent", format_double(result.fit->exponent), "", ""});
      csv.raw_row({"fit_r2", format_double(result.fit->r2), "", ""});
    }
  }
  return result;
}

double run_tg_validation(int grid_n, double nu, double t_final, double dt) {
  if (t_final < 0.0) throw std::domain_error("run_tg_validation: t_final must be nonnegative");
  if (!(dt > 0.0)) throw std::domain_error("run_tg_validation: dt must be positive");
  const Grid2D grid(grid_n);
  const NsParams params(nu, std::sqrt(kSoundSpeedSq));
  NsState state{0.0, dealias(taylor_green_exact(10.0, 2, 2, params, 0.0, grid)), params};
  const long steps = steps_for(t_final, dt);
  const double dt_used = steps > 0 ? t_final / static_cast<double>(steps) : 0.0;
  for (long s = 0; s < steps; ++s) state = rk4_step(state, dt_used);
  const RealField2D exact = taylor_green_exact(10.0, 2, 2, params, t_final, grid);
  RealField2D diff{grid};
  diff.values = state.omega.values - exact.values;
  return l2_norm(diff) / l2_norm(exact);
}

std::vector<VortexSeriesRow> run_vortex_evolution(
    int grid_n, double nu, double t_final, double output_every,
    const std::optional<std::filesystem::path>& out_dir, std::optional<double> dt_override) {
  if (!(t_final > 0.0)) throw std::domain_error("run_vortex_evolution: t_final must be positive");
  if (!(output_every > 0.0))
    throw std::domain_error("run_vortex_evolution: output_every must be positive");
  const Grid2D grid(grid_n);
  const NsParams params(nu, std::sqrt(kSoundSpeedSq));
  NsState state{0.0, dealias(perturbed_tg(grid)), params};

  const long intervals = std::max(1L, static_cast<long>(std::llround(t_final / output_every)));
  const double dt_limit = dt_override ? *dt_override : stable_dt(state);
  const long steps_per_interval =
      std::max(1L, static_cast<long>(std::ceil(t_final / (intervals * dt_limit) - 1e-9)));
  const double dt = t_final / static_cast<double>(intervals * steps_per_interval);

  std::optional<CsvWriter> csv;
  if (out_dir) {
    std::filesystem::create_directories(*out_dir);
    csv.emplace(*out_dir / "ns_series.csv",
                std::vector<std::string>{"time", "enstrophy", "palinstrophy", "energy",
                                         "mean_vorticity", "enstrophy_law_residual"});
  }
  const double nu_eff = params.effective_viscosity();
  std::vector<VortexSeriesRow> series;
  auto record = [&](const NsState& s) {
    VortexSeriesRow row;
    row.time = s.time;
    row.diag = diagnostics(s);
    if (!series.empty()) {
      const VortexSeriesRow& prev = series.back();
      const double de_dt = (row.diag.enstrophy - prev.diag.enstrophy) / (row.time - prev.time);
      const double sink = nu_eff * (row.diag.palinstrophy + prev.diag.palinstrophy);  // trapezoid of 2*nu*P
      row.enstrophy_law_residual = std::abs(de_dt + sink) / std::abs(sink);
    }
    series.push_back(row);
    if (csv) {
      csv->row({row.time, row.diag.enstrophy, row.diag.palinstrophy, row.diag.energy,
                row.diag.mean_vorticity, row.enstrophy_law_residual});
    }
    if (out_dir) {
      std::ostringstream name;
      name << "omega_t" << s.time << ".lbf";
      write_field_snapshot(*out_dir / name.str(), s.omega, s.time);
    }
  };

  record(state);
  for (long k = 0; k < intervals; ++k) {
    for (long s = 0; s < steps_per_interval; ++s) state = rk4_step(state, dt);
    // land output times on the exact grid t = (k+1) * t_final / intervals
    state.time = (static_cast<double>(k + 1) * t_final) / static_cast<double>(intervals);
    record(state);
  }
  return series;
}

}  // namespace hydro
