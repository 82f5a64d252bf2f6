#include "hydro/spectral.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>

#include "fft_internal.hpp"

namespace hydro {

namespace detail {

namespace {

const Plans& plans_impl(int n, bool aligned) {
  static std::mutex mutex;
  static std::map<std::pair<int, bool>, Plans> cache;
  std::lock_guard<std::mutex> lock(mutex);
  auto it = cache.find({n, aligned});
  if (it != cache.end()) return it->second;

  RealBuf real = alloc_real(static_cast<std::size_t>(n) * n);
  CplxBuf cplx = alloc_cplx(static_cast<std::size_t>(n / 2 + 1) * n);
  const unsigned flags = FFTW_ESTIMATE | (aligned ? 0u : FFTW_UNALIGNED);
  Plans set;
  // Column-major (i fast) real data is a row-major (n, n) array with the
  // x2 axis slowest, so the halved transform axis is the x1/k1 axis.
  set.fwd = fftw_plan_dft_r2c_2d(n, n, real.get(), fc(cplx.get()), flags);
  set.inv = fftw_plan_dft_c2r_2d(n, n, fc(cplx.get()), real.get(), flags);
  if (set.fwd == nullptr || set.inv == nullptr)
    throw std::runtime_error("fftw plan creation failed");
  return cache.emplace(std::make_pair(n, aligned), set).first->second;
}

}  // namespace

const Plans& aligned_plans(int n) { return plans_impl(n, true); }
const Plans& unaligned_plans(int n) { return plans_impl(n, false); }

}  // namespace detail

namespace {

double angular_scale(const Grid2D& grid) { return 2.0 * M_PI / grid.length; }

}  // namespace

SpectralField2D forward_fft(const RealField2D& field) {
  const int n = field.grid.n;
  if (field.values.rows() != n || field.values.cols() != n)
    throw std::domain_error("forward_fft: field values do not match grid");
  SpectralField2D spec{field.grid, Eigen::ArrayXXcd(n / 2 + 1, n)};
  // Out-of-place r2c does not modify its input.
  fftw_execute_dft_r2c(detail::unaligned_plans(n).fwd, const_cast<double*>(field.values.data()),
                       detail::fc(spec.coeffs.data()));
  spec.coeffs *= 1.0 / (static_cast<double>(n) * static_cast<double>(n));
  return spec;
}

RealField2D inverse_fft(const SpectralField2D& spec) {
  const int n = spec.grid.n;
  if (spec.coeffs.rows() != n / 2 + 1 || spec.coeffs.cols() != n)
    throw std::domain_error("inverse_fft: coefficient shape does not match grid");
  Eigen::ArrayXXcd scratch = spec.coeffs;  // 2D c2r destroys its input
  RealField2D out(spec.grid);
  fftw_execute_dft_c2r(detail::unaligned_plans(n).inv, detail::fc(scratch.data()),
                       out.values.data());
  return out;
}

RealField2D deriv(const RealField2D& field, int axis) {
  if (axis != 0 && axis != 1) throw std::domain_error("deriv: axis must be 0 or 1");
  return directional_deriv(field, axis == 0 ? 1.0 : 0.0, axis == 1 ? 1.0 : 0.0);
}

RealField2D directional_deriv(const RealField2D& field, double vx, double vy) {
  SpectralField2D spec = forward_fft(field);
  const int n = field.grid.n;
  const int half = n / 2;
  const double scale = angular_scale(field.grid);
  const std::complex<double> iunit(0.0, 1.0);
  for (int j = 0; j < n; ++j) {
    const double k2 = j == half ? 0.0 : wavenumber(j, n);  // Nyquist derivative is zero
    for (int i = 0; i <= half; ++i) {
      const double k1 = i == half ? 0.0 : i;
      spec.coeffs(i, j) *= iunit * (scale * (vx * k1 + vy * k2));
    }
  }
  return inverse_fft(spec);
}

RealField2D laplacian(const RealField2D& field) {
  SpectralField2D spec = forward_fft(field);
  const int n = field.grid.n;
  const double s2 = angular_scale(field.grid) * angular_scale(field.grid);
  for (int j = 0; j < n; ++j) {
    const double k2 = wavenumber(j, n);
    for (int i = 0; i <= n / 2; ++i) {
      spec.coeffs(i, j) *= -s2 * (static_cast<double>(i) * i + k2 * k2);
    }
  }
  return inverse_fft(spec);
}

RealField2D inv_laplacian(const RealField2D& field) {
  const double m = mean(field);
  const double norm = l2_norm(field);
  if (std::abs(m) > 1e-10 * norm)
    throw std::domain_error("inv_laplacian: field mean exceeds 1e-10 * ||f||_L2");
  SpectralField2D spec = forward_fft(field);
  const int n = field.grid.n;
  const double s2 = angular_scale(field.grid) * angular_scale(field.grid);
  for (int j = 0; j < n; ++j) {
    const double k2 = wavenumber(j, n);
    for (int i = 0; i <= n / 2; ++i) {
      const double ksq = static_cast<double>(i) * i + k2 * k2;
      spec.coeffs(i, j) = ksq == 0.0 ? 0.0 : spec.coeffs(i, j) / (-s2 * ksq);
    }
  }
  return inverse_fft(spec);
}

RealField2D dealias(const RealField2D& field) {
  SpectralField2D spec = forward_fft(field);
  const int n = field.grid.n;
  const double third = n / 3.0;
  for (int j = 0; j < n; ++j) {
    const int k2 = std::abs(wavenumber(j, n));
    for (int i = 0; i <= n / 2; ++i) {
      if (std::max(i, k2) > third) spec.coeffs(i, j) = 0.0;
    }
  }
  return inverse_fft(spec);
}

RealField2D fourier_cutoff(const RealField2D& field, double epsilon) {
  if (!(epsilon > 0.0)) throw std::domain_error("fourier_cutoff: epsilon must be positive");
  SpectralField2D spec = forward_fft(field);
  const int n = field.grid.n;
  const double s2 = angular_scale(field.grid) * angular_scale(field.grid);
  const double threshold = 1.0 / (epsilon * epsilon);  // keep |2 pi k|^2 < 1/eps^2
  for (int j = 0; j < n; ++j) {
    const double k2 = wavenumber(j, n);
    for (int i = 0; i <= n / 2; ++i) {
      if (s2 * (static_cast<double>(i) * i + k2 * k2) >= threshold) spec.coeffs(i, j) = 0.0;
    }
  }
  return inverse_fft(spec);
}

double l2_norm(const RealField2D& field) {
  return std::sqrt(field.values.square().sum()) * field.grid.dx();
}

double l2_norm(const SpectralField2D& spec) {
  const int n = spec.grid.n;
  double sum = 0.0;
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i <= n / 2; ++i) {
      const double a = std::norm(spec.coeffs(i, j));
      // interior rows stand for +-k1 pairs
      sum += (i == 0 || i == n / 2) ? a : 2.0 * a;
    }
  }
  return std::sqrt(sum) * spec.grid.length;
}

double mean(const RealField2D& field) { return field.values.mean(); }

double inner_product(const RealField2D& a, const RealField2D& b) {
  if (a.grid != b.grid) throw std::domain_error("inner_product: grid mismatch");
  return (a.values * b.values).sum() * a.grid.dx() * a.grid.dx();
}

}  // namespace hydro
