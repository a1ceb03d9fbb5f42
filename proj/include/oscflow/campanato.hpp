#pragma once

// Oscillations, mean-polynomial projections, scale-weighted seminorms, and the
// growth/embedding checks built on them.
//
// Conventions. The oscillation of f over B(x0, r) relative to degree-N
// polynomials is
//
//   osc(f; x0, r) = |B(r)|^{-1/p} inf_{Q in P_N} ||f - Q||_{L^p(B(x0, r))},
//
// with the Euclidean norm pointwise for vector-valued f. The weighted
// seminorm over a probe set and dyadic window is
//
//   sup_{x0} ( sum_j (2^{-s j} osc(f; x0, 2^j))^q )^{1/q},
//
// truncated to [j_min, j_max] with analytic bounds on the discarded scales.

#include <string>
#include <vector>

#include "oscflow/dyadic.hpp"
#include "oscflow/field.hpp"

namespace oscflow {

// Integral of z^gamma over the unit ball in R^n. Zero when any entry of gamma
// is odd. Exact (gamma function closed form).
double ball_monomial_integral(int n, const MultiIndex& gamma);

// Weighted average of f against the rescaled mollifier derivative:
// r^{-|alpha|} * integral of f(x0 - r z) D^alpha phi(z) dz. Exact for the
// polynomial sector; midpoint quadrature (samples^n points) for the grid
// sector. Throws when the grid sector has support inside B(x0, r) and
// r < 4 grid cells.
double mollified_moment(const CompositeField& f, int comp, const Vec& x0, double r,
                        const MultiIndex& alpha, int samples = 128);

// The unique degree-N polynomial whose mollified moments at (x0, r) match
// those of f for all |alpha| <= N, each component independently. The moment
// matrix in the local basis ((x - x0)/r)^beta is triangular with factorial
// diagonal, so the solve is exact up to roundoff.
PolynomialField mean_polynomial(const CompositeField& f, int N, const Vec& x0, double r,
                                int samples = 128);

// Degree-`degree` homogeneous part of p. Throws when degree exceeds p.degree.
PolynomialField homogeneous_part(const PolynomialField& p, int degree);

// Limit of the top-degree part of the mean polynomial as the scale grows.
// For composite fields this equals homogeneous_part(f.poly, N) exactly; the
// empirical variant evaluates the finite-scale projection for validation.
PolynomialField asymptotic_polynomial(const CompositeField& f, int N);
PolynomialField asymptotic_polynomial_empirical(const CompositeField& f, int N, double r,
                                                int samples = 128);

enum class OscMode {
  exact2,  // least squares over all degree-N polynomials, p = 2 only
  proxy,   // L^p distance to the mean polynomial, any p in [1, inf]
};

struct OscParams {
  double p = 2.0;
  int N = 1;
  OscMode mode = OscMode::exact2;
  int cells = 64;           // ball-rule cells per diameter
  int subsamples = 16;      // boundary cell refinement
  int moment_samples = 128;  // per-axis resolution for grid-sector moments
};

// Oscillation over B(x0, r). Pure polynomial inputs with p = 2 are evaluated
// in closed form through ball monomial integrals; everything else uses the
// ball quadrature rule (normalized by the rule's own volume so the leading
// quadrature bias cancels).
double oscillation(const CompositeField& f, const Vec& x0, double r, const OscParams& prm);

// Closed-form L2 oscillation of a polynomial over B(x0, r).
double polynomial_oscillation2(const PolynomialField& f, const Vec& x0, double r, int N);

// Oscillation values over probes x0 and radii 2^j, j in [j_min, j_max].
struct OscProfile {
  std::vector<Vec> probes;
  int j_min = 0;
  int j_max = 0;
  std::vector<std::vector<double>> values;  // [probe][j - j_min]
  double p = 2.0;
  int N = 1;
};

struct SeminormParams {
  double s = 0.0;
  double q = kInfExponent;
  OscParams osc;
  int j_min = -3;
  int j_max = 5;
  std::vector<Vec> probes{Vec{0.0, 0.0, 0.0}};
};

struct SeminormReport {
  double value = 0.0;               // max over probes of the weighted l^q sum
  std::vector<double> per_probe;    // weighted l^q sum per probe
  int arg_sup = 0;                  // index of the probe attaining the max
  OscProfile profile;
  // Analytic control of the scales outside the window, at the worst probe.
  // Large radii: polynomial sector evaluated in closed form (zero for degree
  // <= N), grid sector bounded by |B(r)|^{-1/p} ||g||_{L^p}. Small radii:
  // geometric extrapolation from the measured decay at the window edge.
  double tail_bound = 0.0;
  bool tail_divergent = false;
  double head_bound = 0.0;
  bool head_divergent = false;
  double s = 0.0;
  double q = kInfExponent;
};

// Weighted oscillation seminorm over a finite probe set and dyadic window.
// When the grid sector is active the window must satisfy 2^{j_min} >= 4h and
// 2^{j_max} <= the box extent; larger scales are handled analytically.
SeminormReport seminorm(const CompositeField& f, const SeminormParams& prm);

// Seminorm with s = 0, q = inf, N = 0, p = 2: the mean-oscillation seminorm.
double bmo_seminorm(const CompositeField& f, const std::vector<Vec>& probes, int j_min,
                    int j_max);

struct HomNormReport {
  double value = 0.0;
  double seminorm_part = 0.0;  // s = 1, q = 1, N = 1 oscillation sum
  double anchor_part = 0.0;    // Frobenius norm of the asymptotic gradient
  SeminormReport detail;
};

// Scale-invariant norm for velocity-type fields anchored at the origin:
// the (s=1, q=1, N=1) seminorm plus the magnitude of the constant asymptotic
// part of the gradient. Requires u(0) = 0 within center_tol.
HomNormReport homogeneous_norm(const CompositeField& u, const SeminormParams& prm,
                               double center_tol = 1e-8);

struct GrowthReport {
  bool holds = false;
  double c_emp = 0.0;    // smallest constant covering all samples
  double slope = 0.0;    // fitted growth rate of log|f| vs log|x| at large |x|
  double norm_value = 0.0;
  std::string form;      // "power": c(1+|x|^s); "log": c(1+log(1+|x|)^{1/q'} |x|^N)
};

// Samples |f| along rays and fits the pointwise growth envelope implied by
// membership in the (s, q, p, N) space. The envelope has the power form for
// s > N and picks up a log factor at s = N with finite q.
GrowthReport growth_check(const CompositeField& f, double s, double q, double p, int N,
                          double r_max = 64.0, int rays = 16, int samples_per_ray = 24);

struct EmbeddingReport {
  double lhs = 0.0;    // sup |grad u| (Frobenius) over the sample set
  double rhs = 0.0;    // homogeneous norm of u
  double ratio = 0.0;  // lhs / rhs, the empirical embedding constant
};

// Empirical form of the gradient-bound embedding: sup |grad u| against the
// homogeneous norm of u.
EmbeddingReport lipschitz_embedding_check(const CompositeField& u, const SeminormParams& prm);

}  // namespace oscflow
