#pragma once

#include <complex>

#include "hydro/field.hpp"

namespace hydro {

/// Fourier coefficients of a real field on the torus,
///   f(x, y) = sum_k c(k1, k2) exp(2*pi*i*(k1*x + k2*y)/length).
/// Stored as the half spectrum: coeffs(i, j) = c(k1 = i, k2 = wavenumber(j)) for
/// i = 0..n/2; modes with k1 < 0 are implied by conjugate symmetry.
struct SpectralField2D {
  Grid2D grid;
  Eigen::ArrayXXcd coeffs;  // (n/2 + 1) x n
};

/// Folds a DFT index into the signed wavenumber range [-n/2, n/2].
inline int wavenumber(int index, int n) { return index <= n / 2 ? index : index - n; }

SpectralField2D forward_fft(const RealField2D& field);
RealField2D inverse_fft(const SpectralField2D& spec);

/// Spectral partial derivative along axis 0 (x) or 1 (y); Nyquist modes are zeroed.
RealField2D deriv(const RealField2D& field, int axis);

/// v . grad(field) with a single transform pair.
RealField2D directional_deriv(const RealField2D& field, double vx, double vy);

RealField2D laplacian(const RealField2D& field);

/// Solves lap(u) = f with the zero-mean gauge. Requires |mean(f)| <= 1e-10 * ||f||_L2.
RealField2D inv_laplacian(const RealField2D& field);

/// 2/3-rule dealiasing: zeroes every mode with max(|k1|, |k2|) > n/3.
RealField2D dealias(const RealField2D& field);

/// Sharp Fourier cutoff: keeps modes with |2*pi*k/length| < 1/epsilon.
RealField2D fourier_cutoff(const RealField2D& field, double epsilon);

double l2_norm(const RealField2D& field);
double l2_norm(const SpectralField2D& spec);  // Parseval-side norm
double mean(const RealField2D& field);
double inner_product(const RealField2D& a, const RealField2D& b);

}  // namespace hydro
