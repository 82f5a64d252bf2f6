#pragma once

#include <Eigen/Core>
#include <stdexcept>

namespace hydro {

/// Uniform n x n grid on the periodic square [0, length)^2 (unit torus by default).
struct Grid2D {
  int n = 0;
  double length = 1.0;

  Grid2D() = default;
  explicit Grid2D(int n_, double length_ = 1.0) : n(n_), length(length_) {
    if (n < 8 || n % 2 != 0)
      throw std::domain_error("Grid2D: n must be even and >= 8");
    if (!(length > 0.0))
      throw std::domain_error("Grid2D: length must be positive");
  }

  double dx() const { return length / n; }
  bool operator==(const Grid2D& other) const { return n == other.n && length == other.length; }
  bool operator!=(const Grid2D& other) const { return !(*this == other); }
};

/// Real scalar field sampled at x_ij = (i*dx, j*dx); values(i, j) = f(x_i, y_j).
struct RealField2D {
  Grid2D grid;
  Eigen::ArrayXXd values;

  RealField2D() = default;
  explicit RealField2D(const Grid2D& g) : grid(g), values(g.n, g.n) {}
  RealField2D(const Grid2D& g, double fill)
      : grid(g), values(Eigen::ArrayXXd::Constant(g.n, g.n, fill)) {}
};

/// Sample f(x, y) at every grid point.
template <typename F>
RealField2D sample(const Grid2D& grid, F&& f) {
  RealField2D out(grid);
  const double dx = grid.dx();
  for (int j = 0; j < grid.n; ++j)
    for (int i = 0; i < grid.n; ++i)
      out.values(i, j) = f(i * dx, j * dx);
  return out;
}

}  // namespace hydro
