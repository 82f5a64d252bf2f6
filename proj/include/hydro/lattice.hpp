#pragma once

#include <Eigen/Core>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

namespace hydro {

/// Discrete velocity set with weights and a speed of sound.
///
/// Invariants enforced at construction: weights strictly positive, velocities
/// pairwise distinct, one weight per velocity.
struct Lattice {
  int dim = 0;
  Eigen::MatrixXd velocities;  // one velocity per row, (n+1) x dim
  Eigen::ArrayXd weights;      // n+1 strictly positive entries
  double sound_speed = 0.0;

  Lattice() = default;
  Lattice(Eigen::MatrixXd velocities_, Eigen::ArrayXd weights_, double sound_speed_);

  int size() const { return static_cast<int>(weights.size()); }
};

/// Result of checking the five moment condition families.
/// Keys are "<order>:<axes>", e.g. "2:01" for sum_i w_i v_i0 v_i1; values are
/// (computed moment - isotropic target). Only nondecreasing multi-indices are
/// listed; the full tensors follow by symmetry.
struct IsotropyReport {
  bool satisfied = false;
  double max_residual = 0.0;
  std::map<std::string, double> residuals;
};

/// Parameters of the 27-point family on {-1,0,1}^3.
struct D3FamilyParams {
  double c = 0.0;
  double c_alpha = 0.0;
  double c_beta = 0.0;
  double c_gamma = 0.0;
};

/// sum_i w_i * prod_k v(i, indices[k]); the empty index list gives sum_i w_i.
double moment(const Lattice& lattice, const std::vector<int>& indices);

/// Evaluates all moment conditions of order 0..4 against 1, 0, c_s^2*delta, 0
/// and c_s^4*(delta*delta + delta*delta + delta*delta).
IsotropyReport validate_isotropy(const Lattice& lattice, double tolerance = 1e-12);

Lattice d2q9();
Lattice d2q7();
Lattice d3_family(const D3FamilyParams& params);

/// (lambda * V, w) with speed of sound lambda * c_s.
Lattice scale(const Lattice& lattice, double lambda);

/// Plain-text format: line 1 "dim n c_s", then n+1 lines "w v_1 ... v_d".
Lattice read_lattice(std::istream& in);
void write_lattice(std::ostream& out, const Lattice& lattice);

}  // namespace hydro
