#pragma once
// Exactly linear velocities v = A(t)x. Divergence-free means trace(A) = 0,
// and the momentum equation with the anchored quadratic pressure closes into
// the matrix Riccati flow dA/dt = (1/n) tr(A^2) I - A^2. This header owns
// that flow: the right-hand side, an adaptive embedded integrator with
// blow-up detection, the conserved quantities of the three-dimensional
// diagonal case, and the coordinate shifts connecting equivalent solutions.

#include <array>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "oscflow/field.hpp"

namespace oscflow {

using Mat3 = std::array<std::array<double, 3>, 3>;

// (1/n) tr(A^2) I - A^2 on the leading n x n block. n must be 2 or 3.
Mat3 riccati_rhs(const Mat3& A, int n);

// Eigenvalue diagnostics carried along a trajectory. For n = 3 the
// differences mu_1 = l2 - l3, mu_2 = l3 - l1, mu_3 = l1 - l2 obey
// d(mu_i)/dt = -(nu_i) mu_i with nu_i the complementary sums, so their
// product is conserved. alpha = mu_1 + mu_2, beta = mu_1 - mu_2.
struct RiccatiLedgerRow {
  double trace = 0.0;
  std::array<double, 3> mu{0.0, 0.0, 0.0};
  double mu_product = 0.0;
  double alpha = 0.0;
  double beta = 0.0;
  bool eigen_real = true;  // false when the eigenvalues leave the real line
};

// Tail fit |A(t)| ~ coefficient / (t_star - t), least squares on 1/|A|.
struct BlowupFit {
  double t_star = 0.0;
  double coefficient = 0.0;
  double rel_residual = 0.0;  // sup deviation of the fitted line, relative
  int samples = 0;
};

// Least-squares line through (t, 1/norm) on the tail norms >= 1e2 (falling
// back to the last eight samples); the line's root is the singularity time.
BlowupFit fit_reciprocal_tail(const std::vector<double>& times,
                              const std::vector<double>& norms);

struct RiccatiTrajectory {
  int n = 0;
  std::vector<double> times;            // every accepted step, t0 = 0
  std::vector<Mat3> states;
  std::vector<RiccatiLedgerRow> ledger;  // one row per state
  std::optional<BlowupFit> blowup;
  double final_step = 0.0;
};

// Dormand-Prince 5(4) with PI-free step control, relative tolerance `tol`.
// Integrates to `horizon`, or stops early and fits the singularity time when
// the Frobenius norm crosses 1e8 (or the step collapses below 1e-12 while
// the norm exceeds 1e6). Requires trace(A0) = 0 within 1e-10 * scale.
RiccatiTrajectory integrate_riccati(const Mat3& A0, int n, double horizon, double tol = 1e-10);

// Residuals of the stated conservation laws along a three-dimensional
// trajectory: trace drift relative to the state norm, drift of prod(mu_i)
// relative to its initial value, and the relative defect of
// beta^2 = alpha^2 + 4 c0 / alpha. The last two are evaluated while
// |A|_F <= 1e3; beyond that the identities still hold but cancel
// catastrophically in floating point. Not applicable when eigenvalues
// repeat at t = 0 or leave the real line.
struct InvariantReport {
  double trace_drift = 0.0;
  double mu_product_drift = 0.0;
  double beta_residual = 0.0;
  bool applicable = false;
};

InvariantReport invariants_3d(const RiccatiTrajectory& tr);

// CSV rows: t, the n*n entries of A (row-major), trace, and for n = 3 the
// ledger columns mu1, mu2, mu3, mu_product, alpha, beta. Deterministic.
std::string riccati_to_csv(const RiccatiTrajectory& tr);

// A C^{1,1} path of shift points sampled with two derivatives.
struct EquivalenceShift {
  std::vector<double> times;
  std::vector<Vec> xi;
  std::vector<Vec> xi_dot;
  std::vector<Vec> xi_ddot;
};

struct FieldPath {
  std::vector<double> times;
  std::vector<CompositeField> fields;
};

// The change of frame v2(x,t) = v1(x + xi(t), t) - xi'(t) together with
// grad p2(x,t) = grad p1(x + xi(t), t) + xi''(t). Solutions map to
// solutions. The sign of the xi'' term is pinned by the rest fluid: moving
// v1 = 0, p1 = 0 into a frame accelerating at xi'' gives v2 = -xi', and
// d/dt v2 = -xi'' must balance -grad p2, so the tilt adds, not subtracts.
// The time grids of all three paths must agree.
std::pair<FieldPath, FieldPath> equivalence_transform(const FieldPath& v,
                                                      const FieldPath& pgrad,
                                                      const EquivalenceShift& shift);

// Closed-form polynomial path in time.
using PolyPath = std::function<PolynomialField(double)>;

// Sup of |d_t v + (v . grad) v + grad p| over the given times and a probe
// box {-box, -box/2, 0, box/2, box}^n. The velocity must be affine in x;
// d_t is a Richardson-extrapolated central difference, so the paths must be
// defined within 2e-3 of each sample time.
double verify_linear_solution(const PolyPath& v, const PolyPath& pgrad,
                              const std::vector<double>& times, double box = 2.0);

}  // namespace oscflow
