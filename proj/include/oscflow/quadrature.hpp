#pragma once

#include <functional>

#include "oscflow/field.hpp"

namespace oscflow {

// Standard bump phi(z) = c_n exp(-1/(1-|z|^2)) on the unit ball, normalized
// to integral one. Normalization and moments are computed once per dimension
// by a midpoint rule, which is superalgebraically accurate here because the
// bump vanishes to all orders at the ball boundary.
class Mollifier {
 public:
  static const Mollifier& get(int n);

  int n() const { return n_; }
  double value(const Vec& z) const;
  // D^alpha phi for |alpha| <= 2, analytic formulas.
  double derivative(const Vec& z, const MultiIndex& alpha) const;
  // int z^gamma phi(z) dz; zero for odd |gamma| by symmetry.
  double moment(const MultiIndex& gamma) const;
  // Second moment int z_k^2 phi dz (the same for every axis).
  double m2() const;

 private:
  explicit Mollifier(int n);
  double unnormalized(double rho) const;  // rho = |z|^2
  int n_;
  double normalization_ = 1.0;
  mutable std::vector<std::pair<MultiIndex, double>> moment_cache_;
};

// Midpoint rule over [-s, s]^n with q nodes per axis.
double integrate_cube(int n, double s, int q_per_axis,
                      const std::function<double(const Vec&)>& fn);

// Deterministic lattice rule for integrals over the ball B(x0, r): a tensor
// lattice over the bounding cube where interior cells carry the full cell
// volume and boundary cells the inside fraction measured on a subgrid.
struct BallRule {
  std::vector<Vec> nodes;
  std::vector<double> weights;

  double volume() const;  // sum of weights
  double apply(const std::function<double(const Vec&)>& fn) const;

  static BallRule build(int n, const Vec& x0, double r, int cells_per_diameter,
                        int subsamples_per_axis = 16);
};

double ball_volume(int n, double r);

}  // namespace oscflow
