#include "oscflow/potential.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <map>
#include <mutex>
#include <stdexcept>
#include <tuple>
#include <vector>

#include "oscflow/campanato.hpp"
#include "oscflow/fft.hpp"
#include "oscflow/quadrature.hpp"

namespace oscflow {

namespace {

constexpr double kPi = 3.14159265358979323846;

double sq(double x) { return x * x; }

struct SplitMix {
  uint64_t s;
  double next() {
    s += 0x9E3779B97F4A7C15ULL;
    uint64_t z = s;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    z ^= z >> 31;
    return static_cast<double>(z >> 11) * 0x1.0p-53;
  }
};

// Gauss-Legendre nodes/weights on [-1, 1], cached per order.
const std::pair<std::vector<double>, std::vector<double>>& gauss_legendre(int q) {
  static std::mutex mu;
  static std::map<int, std::pair<std::vector<double>, std::vector<double>>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(q);
  if (it != cache.end()) return it->second;
  std::vector<double> x(static_cast<size_t>(q)), w(static_cast<size_t>(q));
  for (int i = 0; i < q; ++i) {
    double t = std::cos(kPi * (i + 0.75) / (q + 0.5));
    double dp = 0.0;
    for (int pass = 0; pass < 100; ++pass) {
      double p0 = 1.0, p1 = t;
      for (int l = 2; l <= q; ++l) {
        double p2 = ((2 * l - 1) * t * p1 - (l - 1) * p0) / l;
        p0 = p1;
        p1 = p2;
      }
      dp = q * (t * p1 - p0) / (t * t - 1.0);
      double step = p1 / dp;
      t -= step;
      if (std::abs(step) < 1e-15) break;
    }
    x[static_cast<size_t>(i)] = t;
    w[static_cast<size_t>(i)] = 2.0 / ((1.0 - t * t) * dp * dp);
  }
  return cache.emplace(q, std::make_pair(std::move(x), std::move(w))).first->second;
}

// Unit-sphere rule: weights sum to the surface measure. Exact for the
// low-degree polynomial restrictions that arise from the kernels here.
std::vector<std::pair<Vec, double>> sphere_rule(int n, int polar, int azimuth) {
  std::vector<std::pair<Vec, double>> out;
  if (n == 2) {
    for (int j = 0; j < azimuth; ++j) {
      double th = 2.0 * kPi * (j + 0.5) / azimuth;
      out.push_back({Vec{std::cos(th), std::sin(th), 0.0}, 2.0 * kPi / azimuth});
    }
    return out;
  }
  const auto& gl = gauss_legendre(polar);
  for (int i = 0; i < polar; ++i) {
    double c = gl.first[static_cast<size_t>(i)];
    double s = std::sqrt(std::max(0.0, 1.0 - c * c));
    for (int j = 0; j < azimuth; ++j) {
      double ph = 2.0 * kPi * (j + 0.5) / azimuth;
      out.push_back({Vec{s * std::cos(ph), s * std::sin(ph), c},
                     gl.second[static_cast<size_t>(i)] * 2.0 * kPi / azimuth});
    }
  }
  return out;
}

// Log kernels in the plane are the one kind without exact scaling.
bool exactly_homogeneous(const KernelSpec& K) {
  return !(K.kind == KernelKind::newtonian && K.n == 2);
}

// Parity of the kernel plus zero spherical mean decide which annulus moments
// vanish identically; those are skipped rather than computed, so affine
// inputs are annihilated exactly in the polynomial sector.
bool moment_vanishes(const KernelSpec& K, int beta_norm) {
  bool kernel_odd = (K.kind == KernelKind::gradient);
  if (kernel_odd != (beta_norm % 2 != 0)) return true;  // odd total parity
  if (K.kind == KernelKind::hessian && beta_norm == 0) return true;  // zero mean
  return false;
}

double annulus_quadrature(const KernelSpec& K, const MultiIndex& beta) {
  const auto& gl = gauss_legendre(96);
  auto sph = sphere_rule(K.n, 24, 64);
  double total = 0.0;
  for (size_t ri = 0; ri < gl.first.size(); ++ri) {
    double r = 1.25 + 0.75 * gl.first[ri];  // [1/2, 2]
    double wr = 0.75 * gl.second[ri];
    double cut = partition_bump(std::log2(r));
    if (cut == 0.0) continue;
    double shell = 0.0;
    for (const auto& [sigma, ws] : sph) {
      Vec y{r * sigma[0], r * sigma[1], r * sigma[2]};
      shell += ws * monomial_eval(y, beta) * K.eval(y);
    }
    total += wr * cut * shell * std::pow(r, K.n - 1);
  }
  return total;
}

double annulus_volume_moment(int n) {
  const auto& gl = gauss_legendre(96);
  double surface = (n == 2) ? 2.0 * kPi : 4.0 * kPi;
  double total = 0.0;
  for (size_t ri = 0; ri < gl.first.size(); ++ri) {
    double r = 1.25 + 0.75 * gl.first[ri];
    total += 0.75 * gl.second[ri] * partition_bump(std::log2(r)) * std::pow(r, n - 1);
  }
  return total * surface;
}

// True integral of K psi_i over annulus i; the discrete kernel table is
// corrected to reproduce it exactly so that constants are mapped exactly.
double annulus_integral(const KernelSpec& K, int i) {
  if (K.kind == KernelKind::hessian) return 0.0;  // zero spherical mean
  if (K.kind == KernelKind::gradient) return 0.0;  // odd kernel
  double base = kernel_annulus_moment(K, MultiIndex{0, 0, 0});
  double scaled = std::exp2(static_cast<double>(i) * (K.n + K.homogeneity()));
  if (K.n == 2) {
    // Gamma(2^i z) = Gamma(z) - i log(2)/(2 pi): the log picks up an additive
    // shift per scale instead of a pure power.
    return std::exp2(2.0 * i) * (base - i * std::log(2.0) / (2.0 * kPi) * annulus_volume_moment(2));
  }
  return scaled * base;
}

// Spectral layout helper mirroring the r2c ordering (last axis m/2 + 1).
std::array<int, 3> spectral_unflat(const GridSpec& spec, size_t f) {
  int last = spec.m / 2 + 1;
  std::array<int, 3> idx{0, 0, 0};
  idx[spec.n - 1] = static_cast<int>(f % static_cast<size_t>(last));
  f /= static_cast<size_t>(last);
  for (int k = spec.n - 2; k >= 0; --k) {
    idx[k] = static_cast<int>(f % static_cast<size_t>(spec.m));
    f /= static_cast<size_t>(spec.m);
  }
  return idx;
}

// f_hat = -sum_ab k_a k_b H_hat_ab / |k|^2 with the zero-mean gauge; returns
// f itself or its spectral gradient.
GridField double_divergence_poisson(const GridField& H, bool gradient) {
  const GridSpec& spec = H.spec;
  const int n = spec.n;
  if (H.dim != n * n) throw std::invalid_argument("double_divergence_poisson: dim must be n^2");
  const size_t nn = spec.nodes();
  const size_t cs = spectral_size(spec);
  std::vector<std::complex<double>> acc(cs, std::complex<double>(0.0, 0.0));
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      int comp = a * n + b;
      std::vector<double> slice(H.data.begin() + comp * static_cast<long>(nn),
                                H.data.begin() + (comp + 1) * static_cast<long>(nn));
      auto hat = fft_forward(spec, slice);
      for (size_t f = 0; f < cs; ++f) {
        auto idx = spectral_unflat(spec, f);
        double ka = wavenumber(spec, idx[a]);
        double kb = wavenumber(spec, idx[b]);
        acc[f] -= ka * kb * hat[f];
      }
    }
  }
  for (size_t f = 0; f < cs; ++f) {
    auto idx = spectral_unflat(spec, f);
    double k2 = 0.0;
    for (int a = 0; a < n; ++a) k2 += sq(wavenumber(spec, idx[a]));
    acc[f] = (k2 == 0.0) ? 0.0 : acc[f] / k2;
  }
  if (!gradient) {
    GridField out = GridField::zero(spec, 1);
    auto back = fft_backward(spec, acc);
    std::copy(back.begin(), back.end(), out.data.begin());
    return out;
  }
  GridField out = GridField::zero(spec, n);
  for (int c = 0; c < n; ++c) {
    std::vector<std::complex<double>> tmp(cs);
    for (size_t f = 0; f < cs; ++f) {
      auto idx = spectral_unflat(spec, f);
      double kc = wavenumber(spec, idx[c]);
      if (idx[c] == spec.m / 2) kc = 0.0;  // Nyquist has no odd derivative
      tmp[f] = std::complex<double>(0.0, kc) * acc[f];
    }
    auto back = fft_backward(spec, tmp);
    std::copy(back.begin(), back.end(), out.data.begin() + c * static_cast<long>(nn));
  }
  return out;
}

// Constant part of sum_ab d_a d_b P_ab for a matrix polynomial of degree <= 2.
double double_divergence_constant(const PolynomialField& P, int n) {
  double c0 = 0.0;
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      PolynomialField d = P.component(a * n + b).derivative(a).derivative(b);
      c0 += d.coef_at(0, MultiIndex{0, 0, 0});
    }
  }
  return c0;
}

double frobenius(const std::array<std::array<double, 3>, 3>& A, int n) {
  double s = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) s += sq(A[i][j]);
  return std::sqrt(s);
}

// Largest |value| over interior nodes, at least `margin` cells from the
// boundary; compact-mode finite differences are meaningless closer in when
// the field carries decaying tails past the box.
double interior_max(const GridField& g, int margin) {
  if (g.spec.mode == BoundaryMode::periodic) return g.max_abs();
  double best = 0.0;
  const size_t nn = g.spec.nodes();
  for (size_t f = 0; f < nn; ++f) {
    auto idx = g.spec.unflat(f);
    bool inner = true;
    for (int k = 0; k < g.spec.n; ++k)
      inner = inner && idx[k] >= margin && idx[k] < g.spec.m - margin;
    if (!inner) continue;
    for (int c = 0; c < g.dim; ++c) best = std::max(best, std::abs(g.at(c, f)));
  }
  return best;
}

// Exact pairing of the polynomial sector with d_a d_b phi over the unit
// ball: after recentering P(c + sigma z), integrate z^beta d_a d_b phi by
// parts twice into mollifier moments.
double poly_pair_hessian(const PolynomialField& P, int comp, const Vec& c, double sigma,
                         int a, int b, const Mollifier& mo) {
  PolynomialField Q = P.shifted(c);
  double total = 0.0;
  for (size_t t = 0; t < Q.basis.size(); ++t) {
    const MultiIndex& beta = Q.basis[t];
    double coef = Q.coef_at(comp, beta);
    if (coef == 0.0) continue;
    MultiIndex g = beta;
    double fac = g[a];
    if (fac == 0.0) continue;
    g[a] -= 1;
    fac *= g[b];
    if (fac == 0.0) continue;
    g[b] -= 1;
    total += coef * std::pow(sigma, multi_norm(beta)) * fac * mo.moment(g);
  }
  return total;
}

}  // namespace

double smooth_step(double t) {
  if (t <= 0.0) return 0.0;
  if (t >= 1.0) return 1.0;
  double a = std::exp(-1.0 / t);
  double b = std::exp(-1.0 / (1.0 - t));
  return a / (a + b);
}

double partition_bump(double t) { return smooth_step(t + 1.0) - smooth_step(t); }

double DyadicPartition::psi(int i, const Vec& y) {
  double r2 = sq(y[0]) + sq(y[1]) + sq(y[2]);
  if (r2 <= 0.0) return 0.0;
  return partition_bump(0.5 * std::log2(r2) - i);
}

double DyadicPartition::sum(const Vec& y) const {
  double s = 0.0;
  for (int i = i_min; i <= i_max; ++i) s += psi(i, y);
  return s;
}

double KernelSpec::eval(const Vec& x) const {
  double r2 = sq(x[0]) + sq(x[1]) + sq(x[2]);
  if (r2 <= 0.0) throw std::domain_error("kernel evaluated at the origin");
  if (n == 2) {
    switch (kind) {
      case KernelKind::newtonian:
        return -std::log(r2) / (4.0 * kPi);
      case KernelKind::gradient:
        return -x[a] / (2.0 * kPi * r2);
      case KernelKind::hessian:
        return (2.0 * x[a] * x[b] - (a == b ? r2 : 0.0)) / (2.0 * kPi * r2 * r2);
    }
  }
  double r = std::sqrt(r2);
  switch (kind) {
    case KernelKind::newtonian:
      return 1.0 / (4.0 * kPi * r);
    case KernelKind::gradient:
      return -x[a] / (4.0 * kPi * r2 * r);
    case KernelKind::hessian:
      return (3.0 * x[a] * x[b] - (a == b ? r2 : 0.0)) / (4.0 * kPi * r2 * r2 * r);
  }
  return 0.0;
}

double KernelSpec::homogeneity() const {
  switch (kind) {
    case KernelKind::newtonian:
      return 2.0 - n;  // nominal: the planar log is not exactly homogeneous
    case KernelKind::gradient:
      return 1.0 - n;
    case KernelKind::hessian:
      return static_cast<double>(-n);
  }
  return 0.0;
}

KernelSpec newtonian_hessian_kernel(int n, int a, int b) {
  if (n < 2 || n > 3 || a < 0 || a >= n || b < 0 || b >= n)
    throw std::invalid_argument("newtonian_hessian_kernel: bad indices");
  return KernelSpec{KernelKind::hessian, n, a, b};
}

double sphere_mean(const KernelSpec& K, int polar_nodes, int azimuth_nodes) {
  auto rule = sphere_rule(K.n, polar_nodes, azimuth_nodes);
  double total = 0.0, surface = 0.0;
  for (const auto& [sigma, w] : rule) {
    total += w * K.eval(sigma);
    surface += w;
  }
  return total / surface;
}

double kernel_annulus_moment(const KernelSpec& K, const MultiIndex& beta) {
  static std::mutex mu;
  static std::map<std::tuple<int, int, int, int, int, int, int>, double> cache;
  auto key = std::make_tuple(static_cast<int>(K.kind), K.n, K.a, K.b, beta[0], beta[1], beta[2]);
  {
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
  }
  double value = moment_vanishes(K, multi_norm(beta)) ? 0.0 : annulus_quadrature(K, beta);
  std::lock_guard<std::mutex> lock(mu);
  cache.emplace(key, value);
  return value;
}

CompositeField cz_apply(const KernelSpec& K, const CompositeField& h, int m_low, int k_high) {
  if (m_low >= k_high) throw std::invalid_argument("cz_apply: window must satisfy m < k");
  if (K.n != h.n()) throw std::invalid_argument("cz_apply: dimension mismatch");
  const int n = h.n();
  const int dim = h.dim();

  PolynomialField out_poly = PolynomialField::zero(n, dim, h.poly.degree);
  if (!h.poly.is_zero()) {
    if (!exactly_homogeneous(K))
      throw std::invalid_argument("cz_apply: planar log kernel has no scale-invariant moments");
    for (const MultiIndex& beta : monomials_up_to(n, h.poly.degree)) {
      int nb = multi_norm(beta);
      if (moment_vanishes(K, nb)) continue;
      double M0 = kernel_annulus_moment(K, beta);
      if (M0 == 0.0) continue;
      // Moment over annulus i scales as 2^{i e}; sum the window geometrically.
      double e = nb + n + K.homogeneity();
      double S = 0.0;
      for (int i = m_low; i <= k_high; ++i) S += std::exp2(e * i);
      PolynomialField d = h.poly;
      for (int axis = 0; axis < n; ++axis)
        for (int rep = 0; rep < beta[axis]; ++rep) d = d.derivative(axis);
      double sign = (nb % 2 == 0) ? 1.0 : -1.0;
      out_poly.add(d.extended(h.poly.degree), sign * M0 * S / multi_factorial(beta));
    }
  }

  if (!h.has_grid()) return CompositeField::pure_poly(out_poly);

  const GridSpec& spec = h.grid.spec;
  if (spec.mode != BoundaryMode::compact)
    throw std::invalid_argument("cz_apply: grid sector requires compact mode");
  const double hh = spec.h();
  if (std::exp2(m_low - 1) < 2.0 * hh * (1.0 - 1e-12))
    throw std::invalid_argument("cz_apply: inner annulus unresolvable at this grid spacing");
  if (std::exp2(k_high + 1) > 2.0 * spec.half_width * (1.0 + 1e-12))
    throw std::invalid_argument("cz_apply: outer annulus exceeds the padded box");

  GridField padded = pad_double(h.grid);
  const GridSpec& big = padded.spec;
  const size_t nn = big.nodes();
  const int bm = big.m;
  const int nann = k_high - m_low + 1;

  // Pass 1: discrete annulus sums, to pin each annulus integral to its
  // continuum value (zero for the singular kinds). This removes the midpoint
  // bias that would otherwise leak a spurious multiple of the identity.
  std::vector<double> acc_k(static_cast<size_t>(nann), 0.0);
  std::vector<double> acc_p(static_cast<size_t>(nann), 0.0);
  const double cell = std::pow(hh, n);
  for (size_t f = 0; f < nn; ++f) {
    auto idx = big.unflat(f);
    Vec y{0.0, 0.0, 0.0};
    for (int k = 0; k < n; ++k) {
      int o = idx[k] <= bm / 2 ? idx[k] : idx[k] - bm;
      y[k] = o * hh;
    }
    for (int i = m_low; i <= k_high; ++i) {
      double p = DyadicPartition::psi(i, y);
      if (p <= 0.0) continue;
      acc_k[static_cast<size_t>(i - m_low)] += K.eval(y) * p * cell;
      acc_p[static_cast<size_t>(i - m_low)] += p * cell;
    }
  }
  std::vector<double> bias(static_cast<size_t>(nann), 0.0);
  for (int i = m_low; i <= k_high; ++i) {
    size_t t = static_cast<size_t>(i - m_low);
    if (acc_p[t] > 0.0) bias[t] = (acc_k[t] - annulus_integral(K, i)) / acc_p[t];
  }

  // Pass 2: corrected kernel table at the convolution's signed offsets.
  std::vector<double> table(nn, 0.0);
  for (size_t f = 0; f < nn; ++f) {
    auto idx = big.unflat(f);
    Vec y{0.0, 0.0, 0.0};
    for (int k = 0; k < n; ++k) {
      int o = idx[k] <= bm / 2 ? idx[k] : idx[k] - bm;
      y[k] = o * hh;
    }
    double v = 0.0;
    for (int i = m_low; i <= k_high; ++i) {
      double p = DyadicPartition::psi(i, y);
      if (p <= 0.0) continue;
      v += (K.eval(y) - bias[static_cast<size_t>(i - m_low)]) * p;
    }
    table[f] = v;
  }

  GridField conv = convolve(padded, [&](const Vec& y) {
    std::array<int, 3> idx{0, 0, 0};
    for (int k = 0; k < n; ++k) {
      long o = std::lround(y[k] / hh);
      idx[k] = static_cast<int>(o < 0 ? o + bm : o);
    }
    return table[big.flat(idx)];
  });
  GridField out_grid = restrict_half(conv, spec);
  return CompositeField::make(out_poly, out_grid);
}

CompositeField poisson_solve_hessian(const CompositeField& H, int N) {
  if (N != 0 && N != 1) throw std::invalid_argument("poisson_solve_hessian: N must be 0 or 1");
  const int n = H.n();
  if (H.dim() != n * n) throw std::invalid_argument("poisson_solve_hessian: matrix shape mismatch");

  PolynomialField f_poly = PolynomialField::zero(n, 1, 2);
  double c0 = double_divergence_constant(H.poly, n);
  if (c0 != 0.0) {
    // -Lap f = c0 with the isotropic particular choice.
    for (int axis = 0; axis < n; ++axis) {
      MultiIndex b2{0, 0, 0};
      b2[axis] = 2;
      f_poly.coef_ref(0, b2) = -c0 / (2.0 * n);
    }
  }

  CompositeField f = CompositeField::pure_poly(f_poly);
  if (H.has_grid()) {
    const GridSpec& spec = H.grid.spec;
    if (spec.mode == BoundaryMode::periodic) {
      if (N != 0)
        throw std::invalid_argument("poisson_solve_hessian: periodic data anchors with N = 0");
      f = CompositeField::make(f_poly, double_divergence_poisson(H.grid, false));
    } else {
      GridField sol = double_divergence_poisson(pad_double(H.grid), false);
      f = CompositeField::make(f_poly, restrict_half(sol, spec));
    }
  }

  PolynomialField P = mean_polynomial(f, N, Vec{0.0, 0.0, 0.0}, 1.0);
  f.poly.add(P.extended(2), -1.0);
  return f;
}

CompositeField poisson_solve_anchored(const CompositeField& H, double a0,
                                      const PolynomialField& q_inf) {
  if (q_inf.dim != 1 || q_inf.n != H.n() || q_inf.degree > 1)
    throw std::invalid_argument("poisson_solve_anchored: q_inf must be a scalar linear polynomial");
  CompositeField f = poisson_solve_hessian(H, 1);
  PolynomialField lin = homogeneous_part(f.poly, 1);
  f.poly.add(lin.extended(2), -1.0);
  f.poly.add(q_inf.extended(2), 1.0);
  double v0 = f.eval(Vec{0.0, 0.0, 0.0}, 0);
  f.poly.coef_ref(0, MultiIndex{0, 0, 0}) += a0 - v0;
  return f;
}

CompositeField helmholtz_project(const CompositeField& u) {
  const int n = u.n();
  if (u.dim() != n) throw std::invalid_argument("helmholtz_project: vector field required");
  if (u.poly.degree >= 2 && u.poly.top_magnitude(2) != 0.0)
    throw std::invalid_argument("helmholtz_project: polynomial sector must be affine");

  PolynomialField out_poly = u.poly;
  auto A = u.poly.gradient_matrix();
  double tr = 0.0;
  for (int i = 0; i < n; ++i) tr += A[i][i];
  if (tr != 0.0) {
    // Compressible part of the affine sector: (tr A / n) x.
    for (int axis = 0; axis < n; ++axis) {
      MultiIndex e{0, 0, 0};
      e[axis] = 1;
      out_poly.coef_ref(axis, e) -= tr / n;
    }
  }

  if (!u.has_grid()) return CompositeField::pure_poly(out_poly);
  const GridSpec& spec = u.grid.spec;
  if (spec.mode == BoundaryMode::periodic)
    return CompositeField::make(out_poly, leray_periodic(u.grid));
  GridField proj = leray_periodic(pad_double(u.grid));
  return CompositeField::make(out_poly, restrict_half(proj, spec));
}

CompositeField pressure_gradient(const CompositeField& u, const CompositeField& v,
                                 double div_tol) {
  const int n = u.n();
  if (v.n() != n || u.dim() != n || v.dim() != n)
    throw std::invalid_argument("pressure_gradient: two vector fields of equal dimension required");
  for (const CompositeField* w : {&u, &v}) {
    if (w->poly.degree >= 2 && w->poly.top_magnitude(2) != 0.0)
      throw std::invalid_argument("pressure_gradient: polynomial sectors must be affine");
  }

  auto Au = u.poly.gradient_matrix();
  double trA = 0.0;
  for (int i = 0; i < n; ++i) trA += Au[i][i];
  double scale = std::max(1.0, frobenius(Au, n));
  double div_max = std::abs(trA);
  if (u.has_grid()) {
    // Compact grids are judged three cells in from the boundary: a projected
    // field keeps algebraic tails there and the zero-extension stencil would
    // report spurious divergence.
    for (int axis = 0; axis < n; ++axis)
      scale = std::max(scale, interior_max(grid_derivative(u.grid, axis), 3));
    CompositeField du = divergence(u);
    if (du.has_grid()) div_max = std::max(div_max, interior_max(du.grid, 3) + std::abs(trA));
  }
  if (div_max > div_tol * scale)
    throw std::invalid_argument("pressure_gradient: u is not divergence-free");

  CompositeField H = tensor_product(u, v);
  double c0 = double_divergence_constant(H.poly, n);

  PolynomialField out_poly = PolynomialField::zero(n, n, 2);
  for (int axis = 0; axis < n; ++axis) {
    MultiIndex e{0, 0, 0};
    e[axis] = 1;
    out_poly.coef_ref(axis, e) = -c0 / n;
  }

  if (!H.has_grid()) return CompositeField::pure_poly(out_poly);

  const GridSpec& spec = H.grid.spec;
  GridField grad;
  if (spec.mode == BoundaryMode::periodic) {
    grad = double_divergence_poisson(H.grid, true);
  } else {
    GridField padded = pad_double(H.grid);
    grad = restrict_half(double_divergence_poisson(padded, true), spec);
  }
  // Anchor the gradient at the origin; the quadratic sector already vanishes
  // there.
  for (int c = 0; c < n; ++c)
    out_poly.coef_ref(c, MultiIndex{0, 0, 0}) -= grad.interp(Vec{0.0, 0.0, 0.0}, c);
  return CompositeField::make(out_poly, grad);
}

CompositeField bmo_pressure(const CompositeField& v) {
  const int n = v.n();
  if (v.dim() != n) throw std::invalid_argument("bmo_pressure: vector field required");
  if ((v.poly.degree >= 1 && v.poly.top_magnitude(1) != 0.0) ||
      (v.poly.degree >= 2 && v.poly.top_magnitude(2) != 0.0))
    throw std::invalid_argument("bmo_pressure: field must be of bounded type (no linear part)");

  CompositeField H = tensor_product(v, v);
  PolynomialField zero_poly = PolynomialField::zero(n, 1, 0);
  if (!H.has_grid()) return CompositeField::pure_poly(zero_poly);

  const GridSpec& spec = H.grid.spec;
  GridField sol;
  if (spec.mode == BoundaryMode::periodic) {
    sol = double_divergence_poisson(H.grid, false);
  } else {
    sol = restrict_half(double_divergence_poisson(pad_double(H.grid), false), spec);
  }
  CompositeField pi = CompositeField::make(zero_poly, sol);
  PolynomialField P = mean_polynomial(pi, 0, Vec{0.0, 0.0, 0.0}, 1.0);
  pi.poly.coef_ref(0, MultiIndex{0, 0, 0}) -= P.coef_at(0, MultiIndex{0, 0, 0});
  return pi;
}

VeryWeakReport verify_very_weak(const CompositeField& f, const CompositeField& H,
                                int tests, uint64_t seed, int samples) {
  const int n = f.n();
  if (H.dim() != n * n) throw std::invalid_argument("verify_very_weak: matrix shape mismatch");
  if (f.dim() != 1) throw std::invalid_argument("verify_very_weak: scalar solution required");
  const Mollifier& mo = Mollifier::get(n);
  double L = f.has_grid() ? f.grid.spec.half_width
                          : (H.has_grid() ? H.grid.spec.half_width : 4.0);

  SplitMix rng{seed};
  VeryWeakReport rep;
  rep.tests = tests;
  double h_sup = 0.0;
  for (int t = 0; t < tests; ++t) {
    Vec c{0.0, 0.0, 0.0};
    for (int k = 0; k < n; ++k) c[k] = (2.0 * rng.next() - 1.0) * L / 3.0;
    double sigma = (0.6 + 0.6 * rng.next()) * L / 6.0;

    // Polynomial sectors pair with the test function exactly through
    // mollifier moments; only grid sectors go through quadrature.
    double lhs = 0.0;
    if (!f.poly.is_zero())
      for (int a = 0; a < n; ++a) lhs += poly_pair_hessian(f.poly, 0, c, sigma, a, a, mo);
    if (f.has_grid())
      lhs += integrate_cube(n, 1.0, samples, [&](const Vec& z) {
        double lap = 0.0;
        for (int a = 0; a < n; ++a) {
          MultiIndex d2{0, 0, 0};
          d2[a] = 2;
          lap += mo.derivative(z, d2);
        }
        if (lap == 0.0) return 0.0;
        Vec x{c[0] + sigma * z[0], c[1] + sigma * z[1], c[2] + sigma * z[2]};
        return f.grid.interp(x, 0) * lap;
      });
    double rhs = 0.0;
    if (!H.poly.is_zero())
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
          rhs += poly_pair_hessian(H.poly, a * n + b, c, sigma, a, b, mo);
    if (H.has_grid())
      rhs += integrate_cube(n, 1.0, samples, [&](const Vec& z) {
        Vec x{c[0] + sigma * z[0], c[1] + sigma * z[1], c[2] + sigma * z[2]};
        double acc = 0.0;
        for (int a = 0; a < n; ++a) {
          for (int b = 0; b < n; ++b) {
            MultiIndex d{0, 0, 0};
            d[a] += 1;
            d[b] += 1;
            double phi_ab = mo.derivative(z, d);
            if (phi_ab == 0.0) continue;
            acc += H.grid.interp(x, a * n + b) * phi_ab;
          }
        }
        return acc;
      });
    const int probe = 7;
    for (size_t fl = 0; fl < static_cast<size_t>(std::pow(probe, n)); ++fl) {
      size_t rem = fl;
      Vec x = c;
      for (int k = 0; k < n; ++k) {
        x[k] += sigma * (2.0 * (static_cast<double>(rem % probe) + 0.5) / probe - 1.0);
        rem /= probe;
      }
      for (int cmp = 0; cmp < n * n; ++cmp) h_sup = std::max(h_sup, std::abs(H.eval(x, cmp)));
    }
    double scale_fac = std::pow(sigma, n - 2);
    rep.max_residual = std::max(rep.max_residual, std::abs(-scale_fac * lhs - scale_fac * rhs));
  }
  rep.scale = std::max(h_sup, 1e-30);
  return rep;
}

}  // namespace oscflow
