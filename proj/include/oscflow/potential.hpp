#pragma once

// Dyadic partition of unity on annuli, truncated singular-integral operators,
// anchored Poisson solvers, Helmholtz projection, and the pressure-gradient
// operator.
//
// Solver conventions. The Newtonian potential G satisfies -ΔG = δ, so
// f = G * g solves -Δf = g. Matrix data H enters through the double
// divergence: -Δf = ∂_a ∂_b H_ab. Compact-mode grid solves run on a
// zero-padded double box (fast convolution against the padded box's Green's
// function); the periodic images this introduces are harmonic near the data
// and are absorbed by the polynomial anchoring rules, which are
// representation-independent.

#include <cstdint>

#include "oscflow/field.hpp"

namespace oscflow {

// Smooth step: 0 for t <= 0, 1 for t >= 1, C-infinity monotone in between.
double smooth_step(double t);

// chi(t) = smooth_step(t+1) - smooth_step(t): supported in (-1, 1) with
// sum over integer shifts chi(t - k) = 1 identically (telescoping).
double partition_bump(double t);

// Radial partition of unity psi_i(y) = chi(log2|y| - i): supp psi_i is the
// open annulus 2^{i-1} < |y| < 2^{i+1}, and the family sums to 1 away from
// the origin.
struct DyadicPartition {
  int i_min = 0;
  int i_max = 0;

  static double psi(int i, const Vec& y);
  // Sum over the window [i_min, i_max]; equals 1 on the covered annuli.
  double sum(const Vec& y) const;
};

enum class KernelKind {
  newtonian,  // G, homogeneous of degree 2-n (log in the plane)
  gradient,   // d_a G, degree 1-n
  hessian,    // d_a d_b G, degree -n, zero spherical mean
};

struct KernelSpec {
  KernelKind kind = KernelKind::hessian;
  int n = 2;
  int a = 0;
  int b = 0;

  double eval(const Vec& x) const;
  double homogeneity() const;
};

KernelSpec newtonian_hessian_kernel(int n, int a, int b);

// Mean of K over the unit sphere, by product Gauss quadrature (exact for the
// polynomial restrictions arising from these kernels).
double sphere_mean(const KernelSpec& K, int polar_nodes = 24, int azimuth_nodes = 64);

// Moment of K psi_0 against y^beta over the annulus; moments over annulus i
// scale as 2^{i(|beta| + homogeneity + n)}. Zero for |beta| <= 1 when K has
// zero spherical mean (mean for beta = 0, parity for |beta| = 1).
double kernel_annulus_moment(const KernelSpec& K, const MultiIndex& beta);

// Truncated singular integral: sum over i in [m_low, k_high] of convolution
// against K psi_i. The polynomial sector is handled by annulus moments
// (affine inputs are annihilated exactly); the grid sector by fast
// convolution with per-annulus discrete zero-mean correction. Compact mode
// only; requires 2^{m_low - 1} >= 2h and 2^{k_high + 1} <= box extent.
CompositeField cz_apply(const KernelSpec& K, const CompositeField& h, int m_low, int k_high);

// Very weak solution of -Δf = ∂_a ∂_b H_ab normalized by
// mean_polynomial(f, N, 0, 1) = 0. H is matrix-valued with components in
// row-major order (a * n + b). The polynomial sector contributes a constant
// right-hand side handled by the isotropic particular solution; the grid
// sector is solved spectrally (padded when compact).
CompositeField poisson_solve_hessian(const CompositeField& H, int N);

// Anchored variant: f(0) = a0 and asymptotic linear part q_inf (homogeneous
// degree-1 polynomial), both enforced exactly by polynomial corrections.
CompositeField poisson_solve_anchored(const CompositeField& H, double a0,
                                      const PolynomialField& q_inf);

// Divergence-free projection. The polynomial sector must be affine: the
// compressible part of b + A x is (tr A / n) x, removed exactly. The grid
// sector is projected spectrally (padded when compact).
CompositeField helmholtz_project(const CompositeField& u);

// Pressure gradient for the pair (u, v): the unique gradient field with
// -Δπ = ∂_a ∂_b (u_a v_b), ∇π(0) = 0, and asymptotic linear part
// -(1/n) tr(A_u A_v) x determined by the constant parts of the gradients.
// Requires divergence(u) ≈ 0 within div_tol (relative) and affine
// polynomial sectors.
CompositeField pressure_gradient(const CompositeField& u, const CompositeField& v,
                                 double div_tol = 1e-6);

// Scalar pressure for bounded-type (sublinear) v: -Δπ = ∂_a ∂_b (v_a v_b)
// with the anchor mean_polynomial(π, 0, 0, 1) = 0. Rejects fields with a
// linear polynomial part.
CompositeField bmo_pressure(const CompositeField& v);

struct VeryWeakReport {
  double max_residual = 0.0;  // worst |∫ f Δφ - ∫ H : ∇²φ| over the battery
  double scale = 1.0;         // data magnitude used for normalization
  int tests = 0;
  double rel() const { return max_residual / scale; }
};

// Residual battery for the very weak formulation: for random smooth test
// functions φ checks -∫ f Δφ = ∫ H_ab ∂_a ∂_b φ by midpoint quadrature.
VeryWeakReport verify_very_weak(const CompositeField& f, const CompositeField& H,
                                int tests = 8, uint64_t seed = 1234, int samples = 128);

}  // namespace oscflow
