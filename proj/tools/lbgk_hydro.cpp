// Command-line front end: lattice validation, the LBGK and Navier-Stokes
// solvers on the unit torus, and the hydrodynamic-limit convergence study.

#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>

#include "hydro/experiments.hpp"
#include "hydro/io.hpp"
#include "hydro/lattice.hpp"
#include "hydro/lbgk.hpp"
#include "hydro/ns2d.hpp"

namespace {

constexpr int kExitSuccess = 0;
constexpr int kExitRuntime = 1;
constexpr int kExitUsage = 2;

hydro::Lattice lattice_by_name(const std::string& name) {
  if (name == "d2q9") return hydro::d2q9();
  if (name == "d2q7") return hydro::d2q7();
  if (name == "d3q15") return hydro::d3_family({1.0 / 72.0, 0.0, 0.0, 0.0});
  if (name == "d3q19") return hydro::d3_family({0.0, 0.0, 0.0, 0.0});
  if (name == "d3q27") return hydro::d3_family({1.0 / 216.0, 0.0, 0.0, 0.0});
  std::ifstream in(name);
  if (!in) throw std::domain_error("unknown builtin lattice and unreadable file: " + name);
  return hydro::read_lattice(in);
}

hydro::InitialCondition parse_ic(const std::string& name, double amplitude, int a, int b) {
  hydro::InitialCondition ic;
  if (name == "tg" || name == "taylor-green") {
    ic.kind = hydro::InitialConditionKind::taylor_green;
    ic.amplitude = amplitude;
    ic.a = a;
    ic.b = b;
  } else if (name == "perturbed-tg") {
    ic.kind = hydro::InitialConditionKind::perturbed_tg;
  } else {
    throw std::domain_error("unknown initial condition: " + name);
  }
  return ic;
}

void write_effective_config(const std::filesystem::path& dir, CLI::App* sub) {
  std::filesystem::create_directories(dir);
  std::ofstream out(dir / "config.txt", std::ios::binary);
  out << sub->config_to_str(true, false);
  if (!out) throw std::runtime_error("cannot write " + (dir / "config.txt").string());
}

long steps_for(double t_final, double dt_limit) {
  return std::max(1L, static_cast<long>(std::ceil(t_final / dt_limit - 1e-9)));
}

std::string snapshot_name(const std::string& stem, double time) {
  std::ostringstream name;
  name << stem << "_t" << time << ".lbf";
  return name.str();
}

int cmd_validate_lattice(const std::string& target, double tol) {
  const hydro::Lattice lattice = lattice_by_name(target);
  const hydro::IsotropyReport report = hydro::validate_isotropy(lattice, tol);
  std::cout << "lattice: " << target << "  (dim " << lattice.dim << ", " << lattice.size()
            << " velocities, c_s = " << lattice.sound_speed << ")\n";
  std::cout << std::left << std::setw(12) << "condition" << std::right << std::setw(16)
            << "residual" << "\n";
  for (const auto& [id, residual] : report.residuals) {
    std::cout << std::left << std::setw(12) << id << std::right << std::setw(16)
              << std::scientific << std::setprecision(3) << residual << "\n";
  }
  std::cout << "max residual: " << std::scientific << std::setprecision(6) << report.max_residual
            << "  tolerance: " << tol << "\n";
  std::cout << (report.satisfied ? "isotropic: yes" : "isotropic: NO") << std::endl;
  return report.satisfied ? kExitSuccess : kExitRuntime;
}

struct NsRunOptions {
  std::string ic = "perturbed-tg";
  int n = 128;
  double nu = 1e-4;
  double cs = 1.0 / std::sqrt(3.0);
  double amplitude = 10.0;
  int a = 2;
  int b = 2;
  double t_final = 32.0;
  double dt = 0.0;  // 0 = stability rule
  double output_every = 0.0;  // 0 = t_final / 32
  std::string out;
};

int cmd_run_ns(const NsRunOptions& opt, CLI::App* sub) {
  const hydro::Grid2D grid(opt.n);
  const hydro::NsParams params(opt.nu, opt.cs);
  const hydro::InitialCondition ic = parse_ic(opt.ic, opt.amplitude, opt.a, opt.b);
  const std::filesystem::path dir(opt.out);
  write_effective_config(dir, sub);

  hydro::NsState state{0.0, hydro::initial_vorticity(ic, grid), params};
  const double output_every = opt.output_every > 0.0 ? opt.output_every : opt.t_final / 32.0;
  const long intervals =
      std::max(1L, static_cast<long>(std::llround(opt.t_final / output_every)));
  const double dt_limit = opt.dt > 0.0 ? opt.dt : hydro::stable_dt(state);
  const long per_interval = steps_for(opt.t_final / intervals, dt_limit);
  const double dt = opt.t_final / static_cast<double>(intervals * per_interval);
  std::cout << "run-ns: n=" << opt.n << " nu=" << opt.nu
            << " effective viscosity c_s^2*nu=" << params.effective_viscosity() << " dt=" << dt
            << " steps=" << intervals * per_interval << "\n";
  std::cout << "note: dissipation laws are evaluated with the effective viscosity c_s^2*nu"
            << std::endl;

  hydro::CsvWriter csv(dir / "ns_series.csv",
                       {"time", "enstrophy", "palinstrophy", "energy", "mean_vorticity",
                        "enstrophy_law_residual"});
  double prev_e = 0.0, prev_p = 0.0, prev_t = 0.0;
  bool first = true;
  auto record = [&](const hydro::NsState& s) {
    const hydro::Diagnostics d = hydro::diagnostics(s);
    double residual = 0.0;
    if (!first) {
      const double de_dt = (d.enstrophy - prev_e) / (s.time - prev_t);
      const double sink = params.effective_viscosity() * (d.palinstrophy + prev_p);
      residual = std::abs(de_dt + sink) / std::abs(sink);
    }
    csv.row({s.time, d.enstrophy, d.palinstrophy, d.energy, d.mean_vorticity, residual});
    hydro::write_field_snapshot(dir / snapshot_name("omega", s.time), s.omega, s.time);
    prev_e = d.enstrophy;
    prev_p = d.palinstrophy;
    prev_t = s.time;
    first = false;
  };
  record(state);
  for (long k = 0; k < intervals; ++k) {
    for (long s = 0; s < per_interval; ++s) state = hydro::rk4_step(state, dt);
    state.time = (static_cast<double>(k + 1) * opt.t_final) / static_cast<double>(intervals);
    record(state);
    std::cout << "t=" << state.time << " done" << std::endl;
  }
  std::cout << "wrote " << (dir / "ns_series.csv") << std::endl;
  return kExitSuccess;
}

struct LbgkRunOptions {
  std::string ic = "tg";
  std::string lattice = "d2q9";
  std::string lift = "uniform";
  int n = 64;
  double nu = 1e-4;
  double eps = 0.1;
  double amplitude = 10.0;
  int a = 2;
  int b = 2;
  double t_final = 1.0;
  double dt = 0.0;
  double output_every = 0.0;
  bool cutoff = false;
  std::string out;
};

hydro::DensityLift parse_lift(const std::string& name) {
  if (name == "uniform") return hydro::DensityLift::uniform;
  if (name == "consistent") return hydro::DensityLift::consistent;
  throw std::domain_error("unknown density lift (expected uniform or consistent): " + name);
}

int cmd_run_lbgk(const LbgkRunOptions& opt, CLI::App* sub) {
  const hydro::Grid2D grid(opt.n);
  const hydro::LbgkParams params(opt.eps, opt.nu, lattice_by_name(opt.lattice), opt.cutoff);
  const hydro::InitialCondition ic = parse_ic(opt.ic, opt.amplitude, opt.a, opt.b);
  const std::filesystem::path dir(opt.out);
  write_effective_config(dir, sub);

  hydro::RealField2D omega0 = hydro::initial_vorticity(ic, grid);
  auto [u01, u02] = hydro::velocity_from_vorticity(omega0);
  hydro::RealField2D rho0(grid, 1.0);
  if (parse_lift(opt.lift) == hydro::DensityLift::consistent) {
    const hydro::RealField2D pressure = hydro::advective_pressure(u01, u02);
    const double cs2 = params.lattice.sound_speed * params.lattice.sound_speed;
    rho0.values -= (opt.eps / cs2) * pressure.values;
  }
  hydro::LbgkState state = hydro::init_from_macroscopic(rho0, u01, u02, params);
  if (opt.cutoff) {
    for (hydro::RealField2D& gi : state.g) gi = hydro::fourier_cutoff(gi, opt.eps);
  }

  const double output_every = opt.output_every > 0.0 ? opt.output_every : opt.t_final / 8.0;
  const long intervals =
      std::max(1L, static_cast<long>(std::llround(opt.t_final / output_every)));
  const double dt_limit = opt.dt > 0.0 ? opt.dt : hydro::stable_dt(state);
  const long per_interval = steps_for(opt.t_final / intervals, dt_limit);
  const double dt = opt.t_final / static_cast<double>(intervals * per_interval);
  std::cout << "run-lbgk: n=" << opt.n << " eps=" << opt.eps << " nu=" << opt.nu << " dt=" << dt
            << " steps=" << intervals * per_interval << std::endl;

  hydro::CsvWriter csv(dir / "lbgk_series.csv",
                       {"time", "mass", "l2_rho", "l2_u", "weighted_g_norm"});
  auto record = [&](const hydro::LbgkState& s) {
    const hydro::MacroFields m = hydro::macroscopic(s);
    const double l2u1 = hydro::l2_norm(m.u1);
    const double l2u2 = hydro::l2_norm(m.u2);
    csv.row({s.time, hydro::mean(m.rho), hydro::l2_norm(m.rho),
             std::sqrt(l2u1 * l2u1 + l2u2 * l2u2), hydro::weighted_g_norm(s)});
    for (std::size_t i = 0; i < s.g.size(); ++i) {
      hydro::write_field_snapshot(dir / snapshot_name("g" + std::to_string(i), s.time), s.g[i],
                                  s.time);
    }
    const hydro::RealField2D omega_eps = hydro::vorticity_of(s);
    hydro::write_field_snapshot(dir / snapshot_name("omega_eps", s.time), omega_eps, s.time);
  };
  record(state);
  for (long k = 0; k < intervals; ++k) {
    state = hydro::integrate_lbgk(state, dt, per_interval);
    state.time = (static_cast<double>(k + 1) * opt.t_final) / static_cast<double>(intervals);
    record(state);
    std::cout << "t=" << state.time << " done" << std::endl;
  }
  std::cout << "wrote " << (dir / "lbgk_series.csv") << std::endl;
  return kExitSuccess;
}

struct ConvergeOptions {
  std::string ic = "tg";
  std::string lift = "consistent";
  int n = 64;
  double nu = 1e-4;
  double amplitude = 10.0;
  int a = 2;
  int b = 2;
  double t_final = 1.0;
  std::vector<double> eps = {0.4, 0.2, 0.1};
  double dt = 0.0;
  bool paper_scale = false;
  std::string out;
};

int cmd_converge(ConvergeOptions opt, CLI::App* sub) {
  if (opt.paper_scale) {
    // the N=128, T=32 perturbed-vortex study; expect multi-hour runtimes
    opt.ic = "perturbed-tg";
    opt.n = 128;
    opt.nu = 1e-4;
    opt.t_final = 32.0;
    opt.eps = {0.4, 0.2, 0.1};
  }
  hydro::ConvergenceConfig config;
  config.grid_n = opt.n;
  config.nu = opt.nu;
  config.epsilons = opt.eps;
  config.t_final = opt.t_final;
  config.ic = parse_ic(opt.ic, opt.amplitude, opt.a, opt.b);
  config.lift = parse_lift(opt.lift);
  if (opt.dt > 0.0) config.dt_override = opt.dt;

  const std::filesystem::path dir(opt.out);
  write_effective_config(dir, sub);
  const hydro::ConvergenceResult result = hydro::run_convergence(config, dir);

  std::cout << std::left << std::setw(10) << "epsilon" << std::setw(16) << "rel_error"
            << std::setw(14) << "dt_used" << "steps\n";
  for (const hydro::ConvergenceRow& row : result.rows) {
    std::cout << std::left << std::setw(10) << row.epsilon << std::setw(16) << std::scientific
              << std::setprecision(4) << row.rel_error << std::setw(14) << row.dt_used
              << row.steps << "\n" << std::defaultfloat;
  }
  if (result.fit) {
    std::cout << "power-law fit: error ~ " << std::scientific << std::setprecision(4)
              << result.fit->prefactor << " * eps^" << std::defaultfloat
              << std::setprecision(4) << result.fit->exponent << "  (r2 = " << result.fit->r2
              << ")" << std::endl;
  }
  std::cout << "wrote " << (dir / "convergence.csv") << std::endl;
  return kExitSuccess;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Continuous lattice-BGK Boltzmann and 2D Navier-Stokes solvers on the unit torus"};
  app.require_subcommand(1);

  // validate-lattice
  auto* validate = app.add_subcommand("validate-lattice",
                                      "Check a lattice against the isotropy moment conditions");
  std::string lattice_target;
  double lattice_tol = 1e-12;
  validate->add_option("lattice", lattice_target,
                       "builtin name (d2q9, d2q7, d3q15, d3q19, d3q27) or lattice file")
      ->required();
  validate->add_option("--tol", lattice_tol, "residual tolerance")->capture_default_str();
  validate->set_config("--config");

  // run-ns
  auto* runns = app.add_subcommand("run-ns", "Integrate the Navier-Stokes vorticity equation");
  NsRunOptions nsopt;
  runns->add_option("--ic", nsopt.ic, "initial condition: tg or perturbed-tg")
      ->capture_default_str();
  runns->add_option("--n", nsopt.n, "grid points per axis")->capture_default_str();
  runns->add_option("--nu", nsopt.nu, "relaxation time / viscosity parameter")
      ->capture_default_str();
  runns->add_option("--cs", nsopt.cs, "speed of sound (effective viscosity is cs^2*nu)")
      ->capture_default_str();
  runns->add_option("--amplitude", nsopt.amplitude, "Taylor-Green amplitude")
      ->capture_default_str();
  runns->add_option("--a", nsopt.a, "Taylor-Green mode a")->capture_default_str();
  runns->add_option("--b", nsopt.b, "Taylor-Green mode b")->capture_default_str();
  runns->add_option("--t-final", nsopt.t_final, "integration time")->capture_default_str();
  runns->add_option("--dt", nsopt.dt, "time step (0 = stability rule)")->capture_default_str();
  runns->add_option("--output-every", nsopt.output_every,
                    "diagnostics/snapshot interval (0 = t_final/32)")
      ->capture_default_str();
  runns->add_option("--out", nsopt.out, "output directory")->required();
  runns->set_config("--config");

  // run-lbgk
  auto* runlbgk = app.add_subcommand("run-lbgk", "Integrate the lattice-BGK Boltzmann system");
  LbgkRunOptions lbopt;
  runlbgk->add_option("--ic", lbopt.ic, "initial condition: tg or perturbed-tg")
      ->capture_default_str();
  runlbgk->add_option("--lattice", lbopt.lattice, "builtin lattice name or file")
      ->capture_default_str();
  runlbgk->add_option("--lift", lbopt.lift,
                      "density lift: uniform (rho0 = 1) or consistent (pressure-balanced)")
      ->capture_default_str();
  runlbgk->add_option("--n", lbopt.n, "grid points per axis")->capture_default_str();
  runlbgk->add_option("--nu", lbopt.nu, "relaxation time")->capture_default_str();
  runlbgk->add_option("--eps", lbopt.eps, "Knudsen number")->capture_default_str();
  runlbgk->add_option("--amplitude", lbopt.amplitude, "Taylor-Green amplitude")
      ->capture_default_str();
  runlbgk->add_option("--a", lbopt.a, "Taylor-Green mode a")->capture_default_str();
  runlbgk->add_option("--b", lbopt.b, "Taylor-Green mode b")->capture_default_str();
  runlbgk->add_option("--t-final", lbopt.t_final, "integration time")->capture_default_str();
  runlbgk->add_option("--dt", lbopt.dt, "time step (0 = stability rule)")->capture_default_str();
  runlbgk->add_option("--output-every", lbopt.output_every,
                      "series/snapshot interval (0 = t_final/8)")
      ->capture_default_str();
  runlbgk->add_flag("--cutoff", lbopt.cutoff,
                    "apply the sharp Fourier cutoff at 1/eps after every step");
  runlbgk->add_option("--out", lbopt.out, "output directory")->required();
  runlbgk->set_config("--config");

  // converge
  auto* converge = app.add_subcommand("converge",
                                      "Hydrodynamic-limit convergence study over an epsilon list");
  ConvergeOptions cvopt;
  converge->add_option("--ic", cvopt.ic, "initial condition: tg or perturbed-tg")
      ->capture_default_str();
  converge->add_option("--lift", cvopt.lift,
                       "density lift: consistent (pressure-balanced) or uniform (rho0 = 1)")
      ->capture_default_str();
  converge->add_option("--n", cvopt.n, "grid points per axis")->capture_default_str();
  converge->add_option("--nu", cvopt.nu, "relaxation time")->capture_default_str();
  converge->add_option("--amplitude", cvopt.amplitude, "Taylor-Green amplitude")
      ->capture_default_str();
  converge->add_option("--a", cvopt.a, "Taylor-Green mode a")->capture_default_str();
  converge->add_option("--b", cvopt.b, "Taylor-Green mode b")->capture_default_str();
  converge->add_option("--t-final", cvopt.t_final, "comparison time T")->capture_default_str();
  converge->add_option("--eps", cvopt.eps, "decreasing epsilon list")
      ->delimiter(',')
      ->capture_default_str();
  converge->add_option("--dt", cvopt.dt, "dt override for all runs (0 = per-run rule)")
      ->capture_default_str();
  converge->add_flag("--paper-scale", cvopt.paper_scale,
                     "preset: perturbed-tg, n=128, T=32, eps=0.4,0.2,0.1 (multi-hour)");
  converge->add_option("--out", cvopt.out, "output directory")->required();
  converge->set_config("--config");

  // tg-validate
  auto* tgv = app.add_subcommand("tg-validate",
                                 "Navier-Stokes error against the exact Taylor-Green solution");
  int tgv_n = 64;
  double tgv_nu = 1e-4, tgv_t = 1.0, tgv_dt = 1e-4;
  tgv->add_option("--n", tgv_n, "grid points per axis")->capture_default_str();
  tgv->add_option("--nu", tgv_nu, "relaxation time")->capture_default_str();
  tgv->add_option("--t-final", tgv_t, "integration time")->capture_default_str();
  tgv->add_option("--dt", tgv_dt, "time step")->capture_default_str();
  tgv->set_config("--config");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitSuccess : kExitUsage;
  }

  try {
    if (validate->parsed()) return cmd_validate_lattice(lattice_target, lattice_tol);
    if (runns->parsed()) return cmd_run_ns(nsopt, runns);
    if (runlbgk->parsed()) return cmd_run_lbgk(lbopt, runlbgk);
    if (converge->parsed()) return cmd_converge(cvopt, converge);
    if (tgv->parsed()) {
      const double error = hydro::run_tg_validation(tgv_n, tgv_nu, tgv_t, tgv_dt);
      std::cout << "relative L2 error vs exact Taylor-Green solution: " << std::scientific
                << std::setprecision(6) << error << std::endl;
      return kExitSuccess;
    }
  } catch (const std::domain_error& e) {
    std::cerr << "invalid parameter: " << e.what() << std::endl;
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << std::endl;
    return kExitRuntime;
  }
  return kExitUsage;
}
