#include "hydro/lattice.hpp"

#include <cmath>
#include <functional>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "hydro/io.hpp"

namespace hydro {

Lattice::Lattice(Eigen::MatrixXd velocities_, Eigen::ArrayXd weights_, double sound_speed_)
    : dim(static_cast<int>(velocities_.cols())),
      velocities(std::move(velocities_)),
      weights(std::move(weights_)),
      sound_speed(sound_speed_) {
  if (dim < 1) throw std::domain_error("Lattice: dimension must be >= 1");
  if (velocities.rows() != weights.size())
    throw std::domain_error("Lattice: one weight per velocity required");
  if (weights.size() < 1) throw std::domain_error("Lattice: at least one velocity required");
  if (!(sound_speed > 0.0)) throw std::domain_error("Lattice: sound speed must be positive");
  for (int i = 0; i < weights.size(); ++i) {
    if (!(weights[i] > 0.0))
      throw std::domain_error("Lattice: weights must be strictly positive");
  }
  for (int i = 0; i < velocities.rows(); ++i) {
    for (int j = i + 1; j < velocities.rows(); ++j) {
      if ((velocities.row(i).array() == velocities.row(j).array()).all())
        throw std::domain_error("Lattice: velocities must be pairwise distinct");
    }
  }
}

double moment(const Lattice& lattice, const std::vector<int>& indices) {
  if (indices.size() > 4)
    throw std::domain_error("moment: index list longer than order 4");
  for (int axis : indices) {
    if (axis < 0 || axis >= lattice.dim)
      throw std::domain_error("moment: axis index out of range");
  }
  double sum = 0.0;
  for (int i = 0; i < lattice.size(); ++i) {
    double term = lattice.weights[i];
    for (int axis : indices) term *= lattice.velocities(i, axis);
    sum += term;
  }
  return sum;
}

namespace {

double kronecker(int a, int b) { return a == b ? 1.0 : 0.0; }

// target of the order-k moment condition for an isotropic lattice
double isotropy_target(const std::vector<int>& idx, double cs) {
  switch (idx.size()) {
    case 0:
      return 1.0;
    case 2:
      return cs * cs * kronecker(idx[0], idx[1]);
    case 4:
      return cs * cs * cs * cs *
             (kronecker(idx[0], idx[1]) * kronecker(idx[2], idx[3]) +
              kronecker(idx[0], idx[2]) * kronecker(idx[1], idx[3]) +
              kronecker(idx[0], idx[3]) * kronecker(idx[1], idx[2]));
    default:
      return 0.0;  // odd orders
  }
}

void enumerate_nondecreasing(int dim, int order, std::vector<int>& idx,
                             const std::function<void(const std::vector<int>&)>& visit) {
  if (static_cast<int>(idx.size()) == order) {
    visit(idx);
    return;
  }
  const int start = idx.empty() ? 0 : idx.back();
  for (int axis = start; axis < dim; ++axis) {
    idx.push_back(axis);
    enumerate_nondecreasing(dim, order, idx, visit);
    idx.pop_back();
  }
}

}  // namespace

IsotropyReport validate_isotropy(const Lattice& lattice, double tolerance) {
  if (!(tolerance > 0.0))
    throw std::domain_error("validate_isotropy: tolerance must be positive");
  IsotropyReport report;
  for (int order = 0; order <= 4; ++order) {
    std::vector<int> idx;
    enumerate_nondecreasing(lattice.dim, order, idx, [&](const std::vector<int>& multi) {
      std::string id = std::to_string(order) + ":";
      for (int axis : multi) id += static_cast<char>('0' + axis);
      const double residual = moment(lattice, multi) - isotropy_target(multi, lattice.sound_speed);
      report.residuals[id] = residual;
      report.max_residual = std::max(report.max_residual, std::abs(residual));
    });
  }
  report.satisfied = report.max_residual <= tolerance;
  return report;
}

Lattice d2q9() {
  Eigen::MatrixXd v(9, 2);
  v << 0, 0,
       1, 0,
       0, 1,
      -1, 0,
       0, -1,
       1, 1,
      -1, 1,
      -1, -1,
       1, -1;
  Eigen::ArrayXd w(9);
  w << 4.0 / 9.0, 1.0 / 9.0, 1.0 / 9.0, 1.0 / 9.0, 1.0 / 9.0,
       1.0 / 36.0, 1.0 / 36.0, 1.0 / 36.0, 1.0 / 36.0;
  return Lattice(std::move(v), std::move(w), 1.0 / std::sqrt(3.0));
}

Lattice d2q7() {
  // zero velocity plus the six unit vectors at angles 2*pi*j/6, written with
  // exact component values (cos is +-1 or +-1/2, sin is 0 or +-sqrt(3)/2)
  const double s = std::sqrt(3.0) / 2.0;
  Eigen::MatrixXd v(7, 2);
  v << 0, 0,
       0.5, s,
      -0.5, s,
      -1, 0,
      -0.5, -s,
       0.5, -s,
       1, 0;
  Eigen::ArrayXd w(7);
  w << 0.5, 1.0 / 12.0, 1.0 / 12.0, 1.0 / 12.0, 1.0 / 12.0, 1.0 / 12.0, 1.0 / 12.0;
  return Lattice(std::move(v), std::move(w), 0.5);
}

Lattice d3_family(const D3FamilyParams& params) {
  const double bound = 1.0 / 72.0;
  const double c = params.c;
  const double ca[3] = {params.c_alpha, params.c_beta, params.c_gamma};
  if (!(c >= 0.0 && c <= bound))
    throw std::domain_error("d3_family: c must lie in [0, 1/72]");
  for (double x : ca) {
    if (!(x >= -bound && x <= bound))
      throw std::domain_error("d3_family: c_alpha, c_beta, c_gamma must lie in [-1/72, 1/72]");
  }
  if (std::abs(ca[0]) + std::abs(ca[1]) + std::abs(ca[2]) > c) {
    std::ostringstream msg;
    msg << "d3_family: |c_alpha| + |c_beta| + |c_gamma| <= c violated ("
        << std::abs(ca[0]) + std::abs(ca[1]) + std::abs(ca[2]) << " > " << c << ")";
    throw std::domain_error(msg.str());
  }
  static const char* names[3] = {"c_alpha", "c_beta", "c_gamma"};
  for (int z = 0; z < 3; ++z) {
    for (int e = z + 1; e < 3; ++e) {
      if (c + std::abs(ca[z]) + std::abs(ca[e]) > bound) {
        std::ostringstream msg;
        msg << "d3_family: c + |" << names[z] << "| + |" << names[e] << "| <= 1/72 violated ("
            << c + std::abs(ca[z]) + std::abs(ca[e]) << " > " << bound << ")";
        throw std::domain_error(msg.str());
      }
    }
  }

  std::vector<Eigen::Vector3d> vel;
  std::vector<double> wt;
  auto push = [&](double x, double y, double z, double p) {
    // constraint-satisfying parameters can only produce a negative value here
    // through rounding of an exact zero
    if (p <= 0.0) return;
    vel.emplace_back(x, y, z);
    wt.push_back(p);
  };

  push(0, 0, 0, 1.0 / 3.0 - 8.0 * c);
  for (int axis = 0; axis < 3; ++axis) {
    for (double sign : {1.0, -1.0}) {
      Eigen::Vector3d v = Eigen::Vector3d::Zero();
      v[axis] = sign;
      push(v.x(), v.y(), v.z(), 1.0 / 18.0 + 4.0 * c + 4.0 * sign * ca[axis]);
    }
  }
  for (int a = 0; a < 3; ++a) {
    for (int b = a + 1; b < 3; ++b) {
      for (double sa : {1.0, -1.0}) {
        for (double sb : {1.0, -1.0}) {
          Eigen::Vector3d v = Eigen::Vector3d::Zero();
          v[a] = sa;
          v[b] = sb;
          push(v.x(), v.y(), v.z(), 1.0 / 36.0 - 2.0 * c - 2.0 * sa * ca[a] - 2.0 * sb * ca[b]);
        }
      }
    }
  }
  for (double s1 : {1.0, -1.0}) {
    for (double s2 : {1.0, -1.0}) {
      for (double s3 : {1.0, -1.0}) {
        push(s1, s2, s3, c + s1 * ca[0] + s2 * ca[1] + s3 * ca[2]);
      }
    }
  }

  Eigen::MatrixXd velocities(static_cast<int>(vel.size()), 3);
  Eigen::ArrayXd weights(static_cast<int>(wt.size()));
  for (std::size_t i = 0; i < vel.size(); ++i) {
    velocities.row(static_cast<int>(i)) = vel[i].transpose();
    weights[static_cast<int>(i)] = wt[i];
  }
  return Lattice(std::move(velocities), std::move(weights), 1.0 / std::sqrt(3.0));
}

Lattice scale(const Lattice& lattice, double lambda) {
  if (!(lambda > 0.0)) throw std::domain_error("scale: lambda must be positive");
  // the second moment of (lambda V, w) is lambda^2 c_s^2, so the associated
  // speed of sound scales with lambda
  return Lattice(lattice.velocities * lambda, lattice.weights, lattice.sound_speed * lambda);
}

Lattice read_lattice(std::istream& in) {
  int dim = 0, n = 0;
  double cs = 0.0;
  if (!(in >> dim >> n >> cs))
    throw FormatError("lattice file: malformed header, expected 'dim n c_s'");
  if (dim < 1 || n < 0) throw FormatError("lattice file: invalid dim or n in header");
  Eigen::MatrixXd velocities(n + 1, dim);
  Eigen::ArrayXd weights(n + 1);
  for (int i = 0; i <= n; ++i) {
    if (!(in >> weights[i]))
      throw FormatError("lattice file: missing weight on line " + std::to_string(i + 2));
    for (int d = 0; d < dim; ++d) {
      if (!(in >> velocities(i, d)))
        throw FormatError("lattice file: missing velocity component on line " +
                          std::to_string(i + 2));
    }
  }
  return Lattice(std::move(velocities), std::move(weights), cs);
}

void write_lattice(std::ostream& out, const Lattice& lattice) {
  out << lattice.dim << ' ' << lattice.size() - 1 << ' ' << format_double(lattice.sound_speed)
      << '\n';
  for (int i = 0; i < lattice.size(); ++i) {
    out << format_double(lattice.weights[i]);
    for (int d = 0; d < lattice.dim; ++d) out << ' ' << format_double(lattice.velocities(i, d));
    out << '\n';
  }
}

}  // namespace hydro
