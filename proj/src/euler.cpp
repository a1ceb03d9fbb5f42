#include "oscflow/euler.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <utility>
#include <vector>

namespace oscflow {

namespace {

double vnorm(const Vec& x, int n) {
  double s = 0.0;
  for (int k = 0; k < n; ++k) s += x[k] * x[k];
  return std::sqrt(s);
}

double frob(const Mat3& A) {
  double s = 0.0;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) s += A[i][j] * A[i][j];
  return std::sqrt(s);
}

Mat3 mat_mul(const Mat3& A, const Mat3& B) {
  Mat3 C{};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      double s = 0.0;
      for (int k = 0; k < 3; ++k) s += A[i][k] * B[k][j];
      C[i][j] = s;
    }
  return C;
}

Vec mat_vec(const Mat3& A, const Vec& x) {
  Vec y{0.0, 0.0, 0.0};
  for (int i = 0; i < 3; ++i)
    for (int k = 0; k < 3; ++k) y[i] += A[i][k] * x[k];
  return y;
}

Mat3 mat_eye() {
  Mat3 I{};
  I[0][0] = I[1][1] = I[2][2] = 1.0;
  return I;
}

bool poly_affine(const PolynomialField& p) {
  for (int d = 2; d <= p.degree; ++d)
    if (p.top_magnitude(d) != 0.0) return false;
  return true;
}

// P(M x + w) for affine P with dim = n. Exact.
PolynomialField affine_pullback(const PolynomialField& P, const Mat3& M, const Vec& w) {
  const Mat3 A = P.gradient_matrix();
  const Vec b = P.constant_part();
  const Mat3 AM = mat_mul(A, M);
  const Vec Aw = mat_vec(A, w);
  return PolynomialField::affine(P.n, AM, Vec{b[0] + Aw[0], b[1] + Aw[1], b[2] + Aw[2]});
}

// Pointwise Euclidean sup of f on its own lattice, skipping a compact
// boundary margin where zero extension pollutes finite differences. Pure
// polynomial inputs are sampled on a fixed probe box instead.
double interior_sup(const CompositeField& f, int margin = 3) {
  const int n = f.n();
  const int dim = f.dim();
  double worst = 0.0;
  if (!f.has_grid()) {
    const double L = 4.0;
    const int P = 9;
    std::array<int, 3> idx{0, 0, 0};
    const int lim2 = n >= 2 ? P : 1, lim3 = n >= 3 ? P : 1;
    for (idx[0] = 0; idx[0] < P; ++idx[0])
      for (idx[1] = 0; idx[1] < lim2; ++idx[1])
        for (idx[2] = 0; idx[2] < lim3; ++idx[2]) {
          Vec x{0.0, 0.0, 0.0};
          for (int k = 0; k < n; ++k) x[k] = -L + 2.0 * L * idx[k] / (P - 1);
          double sq = 0.0;
          for (int c = 0; c < dim; ++c) {
            const double v = f.poly.eval(x, c);
            sq += v * v;
          }
          worst = std::max(worst, std::sqrt(sq));
        }
    return worst;
  }
  const GridSpec& s = f.grid.spec;
  const bool periodic = s.mode == BoundaryMode::periodic;
  const int lo = periodic ? 0 : margin;
  const int hi = periodic ? s.m : s.m - margin;
  std::array<int, 3> idx{0, 0, 0};
  const int lo2 = n >= 2 ? lo : 0, hi2 = n >= 2 ? hi : 1;
  const int lo3 = n >= 3 ? lo : 0, hi3 = n >= 3 ? hi : 1;
  for (idx[0] = lo; idx[0] < hi; ++idx[0])
    for (idx[1] = lo2; idx[1] < hi2; ++idx[1])
      for (idx[2] = lo3; idx[2] < hi3; ++idx[2]) {
        const size_t flat = s.flat(idx);
        const Vec x = s.node(flat);
        double sq = 0.0;
        for (int c = 0; c < dim; ++c) {
          const double v = f.poly.eval(x, c) + f.grid.at(c, flat);
          sq += v * v;
        }
        worst = std::max(worst, std::sqrt(sq));
      }
  return worst;
}

double div_sup(const CompositeField& v) { return interior_sup(divergence(v)); }

CompositeField field_average(const CompositeField& a, const CompositeField& b) {
  const int deg = std::max(a.poly.degree, b.poly.degree);
  PolynomialField p = a.poly.degree == deg ? a.poly : a.poly.extended(deg);
  p.scale(0.5);
  p.add(b.poly.degree == deg ? b.poly : b.poly.extended(deg), 0.5);
  GridField g;
  if (a.has_grid() && b.has_grid()) {
    if (!a.grid.spec.same_layout(b.grid.spec))
      throw std::invalid_argument("cannot average mismatched grids");
    g = a.grid;
    for (size_t i = 0; i < g.data.size(); ++i)
      g.data[i] = 0.5 * (a.grid.data[i] + b.grid.data[i]);
  } else if (a.has_grid()) {
    g = a.grid;
    for (double& x : g.data) x *= 0.5;
  } else if (b.has_grid()) {
    g = b.grid;
    for (double& x : g.data) x *= 0.5;
  }
  return g.empty() ? CompositeField::pure_poly(p) : CompositeField::make(p, g);
}

// Proxy size of a - b without forming the difference field.
double diff_size(const CompositeField& a, const CompositeField& b) {
  const int n = a.n();
  const Mat3 Aa = a.poly.gradient_matrix(), Ab = b.poly.gradient_matrix();
  const Vec ba = a.poly.constant_part(), bb = b.poly.constant_part();
  Mat3 dA{};
  Vec db{0.0, 0.0, 0.0};
  for (int i = 0; i < 3; ++i) {
    db[i] = ba[i] - bb[i];
    for (int j = 0; j < 3; ++j) dA[i][j] = Aa[i][j] - Ab[i][j];
  }
  double s = frob(dA) + vnorm(db, n);
  if (a.has_grid() && b.has_grid()) {
    if (!a.grid.spec.same_layout(b.grid.spec))
      throw std::invalid_argument("cannot compare mismatched grids");
    double m = 0.0;
    for (size_t i = 0; i < a.grid.data.size(); ++i)
      m = std::max(m, std::abs(a.grid.data[i] - b.grid.data[i]));
    s += m;
  } else if (a.has_grid()) {
    s += a.grid.max_abs();
  } else if (b.has_grid()) {
    s += b.grid.max_abs();
  }
  return s;
}

// Monitor window clamped to what the grid resolves: balls must span four
// cells and fit inside the box.
void clamp_window(const CompositeField& v, int& j_lo, int& j_hi) {
  if (!v.has_grid()) return;
  const double h = v.grid.spec.h();
  j_lo = std::max(j_lo, static_cast<int>(std::ceil(std::log2(4.0 * h) - 1e-12)));
  j_hi = std::min(j_hi, static_cast<int>(std::floor(
                             std::log2(2.0 * v.grid.spec.half_width) + 1e-12)));
}

}  // namespace

EquivalenceShift characteristic_trace(const FieldPath& v, const Vec& x0, double t0,
                                      double t1) {
  const size_t K = v.times.size();
  if (K < 2 || v.fields.size() != K)
    throw std::invalid_argument("characteristic trace needs a sampled path");
  for (size_t k = 1; k < K; ++k)
    if (!(v.times[k] > v.times[k - 1]))
      throw std::invalid_argument("path times must increase");
  const double lo = std::min(t0, t1), hi = std::max(t0, t1);
  const double span = std::max(1.0, v.times.back() - v.times.front());
  if (lo < v.times.front() - 1e-9 * span || hi > v.times.back() + 1e-9 * span)
    throw std::invalid_argument("trace window leaves the sampled path");
  const int n = v.fields.front().n();

  // Velocity at (x, t): linear blend of the two bracketing slices.
  auto field_at = [&](const Vec& x, double t) {
    size_t k = 0;
    while (k + 2 < K && v.times[k + 1] <= t) ++k;
    double w = (t - v.times[k]) / (v.times[k + 1] - v.times[k]);
    w = std::clamp(w, 0.0, 1.0);
    const Vec a = v.fields[k].eval_vec(x);
    const Vec b = v.fields[k + 1].eval_vec(x);
    return Vec{(1.0 - w) * a[0] + w * b[0], (1.0 - w) * a[1] + w * b[1],
               (1.0 - w) * a[2] + w * b[2]};
  };
  auto rhs = [&](const Vec& z, double t) {
    return field_at(Vec{x0[0] + z[0], x0[1] + z[1], x0[2] + z[2]}, t);
  };

  EquivalenceShift out;
  out.times.push_back(lo);
  for (double tau : v.times)
    if (tau > lo + 1e-12 * span && tau < hi - 1e-12 * span) out.times.push_back(tau);
  if (hi > lo + 1e-12 * span) out.times.push_back(hi);
  const size_t S = out.times.size();
  out.xi.assign(S, Vec{0.0, 0.0, 0.0});
  out.xi_dot.assign(S, Vec{0.0, 0.0, 0.0});
  out.xi_ddot.assign(S, Vec{0.0, 0.0, 0.0});

  // March RK4 from the anchor end toward the other, 8 substeps per interval.
  auto advance = [&](Vec z, double ta, double tb) {
    const int nsub = 8;
    const double dt = (tb - ta) / nsub;
    double t = ta;
    for (int s = 0; s < nsub; ++s) {
      const Vec k1 = rhs(z, t);
      const Vec z2{z[0] + 0.5 * dt * k1[0], z[1] + 0.5 * dt * k1[1], z[2] + 0.5 * dt * k1[2]};
      const Vec k2 = rhs(z2, t + 0.5 * dt);
      const Vec z3{z[0] + 0.5 * dt * k2[0], z[1] + 0.5 * dt * k2[1], z[2] + 0.5 * dt * k2[2]};
      const Vec k3 = rhs(z3, t + 0.5 * dt);
      const Vec z4{z[0] + dt * k3[0], z[1] + dt * k3[1], z[2] + dt * k3[2]};
      const Vec k4 = rhs(z4, t + dt);
      for (int c = 0; c < n; ++c)
        z[c] += dt / 6.0 * (k1[c] + 2.0 * k2[c] + 2.0 * k3[c] + k4[c]);
      t += dt;
    }
    return z;
  };
  if (t1 >= t0) {
    for (size_t k = 0; k + 1 < S; ++k)
      out.xi[k + 1] = advance(out.xi[k], out.times[k], out.times[k + 1]);
  } else {
    for (size_t k = S; k-- > 1;)
      out.xi[k - 1] = advance(out.xi[k], out.times[k], out.times[k - 1]);
  }
  for (size_t k = 0; k < S; ++k) out.xi_dot[k] = rhs(out.xi[k], out.times[k]);

  // xi'' by nonuniform finite differences of the sampled xi'.
  if (S == 2) {
    const double dt = out.times[1] - out.times[0];
    for (int c = 0; c < n; ++c) {
      const double d = (out.xi_dot[1][c] - out.xi_dot[0][c]) / dt;
      out.xi_ddot[0][c] = d;
      out.xi_ddot[1][c] = d;
    }
  } else if (S >= 3) {
    for (size_t k = 1; k + 1 < S; ++k) {
      const double h0 = out.times[k] - out.times[k - 1];
      const double h1 = out.times[k + 1] - out.times[k];
      for (int c = 0; c < n; ++c)
        out.xi_ddot[k][c] = (h0 * h0 * out.xi_dot[k + 1][c] -
                             h1 * h1 * out.xi_dot[k - 1][c] +
                             (h1 * h1 - h0 * h0) * out.xi_dot[k][c]) /
                            (h0 * h1 * (h0 + h1));
    }
    {
      const double h0 = out.times[1] - out.times[0];
      const double h1 = out.times[2] - out.times[1];
      for (int c = 0; c < n; ++c)
        out.xi_ddot[0][c] = -(2.0 * h0 + h1) / (h0 * (h0 + h1)) * out.xi_dot[0][c] +
                            (h0 + h1) / (h0 * h1) * out.xi_dot[1][c] -
                            h0 / (h1 * (h0 + h1)) * out.xi_dot[2][c];
    }
    {
      const double hN = out.times[S - 1] - out.times[S - 2];
      const double hP = out.times[S - 2] - out.times[S - 3];
      for (int c = 0; c < n; ++c)
        out.xi_ddot[S - 1][c] =
            (2.0 * hN + hP) / (hN * (hN + hP)) * out.xi_dot[S - 1][c] -
            (hN + hP) / (hN * hP) * out.xi_dot[S - 2][c] +
            hN / (hP * (hN + hP)) * out.xi_dot[S - 3][c];
    }
  }
  return out;
}

CompositeField transport_step(const CompositeField& f, const CompositeField& u,
                              const CompositeField& g, double dt) {
  const int n = f.n();
  if (u.n() != n || g.n() != n) throw std::invalid_argument("transport dimension mismatch");
  if (f.dim() != n || u.dim() != n || g.dim() != n)
    throw std::invalid_argument("transport expects velocity-type fields");
  if (!(dt > 0.0) || !std::isfinite(dt))
    throw std::invalid_argument("transport step needs dt > 0");
  if (!poly_affine(f.poly) || !poly_affine(u.poly) || !poly_affine(g.poly))
    throw std::invalid_argument("transport polynomial sectors must be affine");

  const Mat3 Au = u.poly.gradient_matrix();
  const Vec bu = u.poly.constant_part();
  const Mat3 Af = f.poly.gradient_matrix();
  const Mat3 Ag = g.poly.gradient_matrix();

  // Affine part of the characteristic maps, from the polynomial advector:
  // mid(x) = x - dt/2 u(x), foot(x) = x - dt u(mid(x)).
  const Mat3 I = mat_eye();
  Mat3 M1 = I;
  Vec w1{0.0, 0.0, 0.0};
  for (int i = 0; i < 3; ++i) {
    w1[i] = -0.5 * dt * bu[i];
    for (int j = 0; j < 3; ++j) M1[i][j] -= 0.5 * dt * Au[i][j];
  }
  const Mat3 AuM1 = mat_mul(Au, M1);
  const Vec Auw1 = mat_vec(Au, w1);
  Mat3 Mf = I;
  Vec wf{0.0, 0.0, 0.0};
  for (int i = 0; i < 3; ++i) {
    wf[i] = -dt * (Auw1[i] + bu[i]);
    for (int j = 0; j < 3; ++j) Mf[i][j] -= dt * AuM1[i][j];
  }

  // Polynomial sector: exact pullback through the affine maps.
  PolynomialField pout = affine_pullback(f.poly, Mf, wf);
  pout.add(affine_pullback(g.poly, M1, w1), dt);

  const GridField* specsrc = f.has_grid()   ? &f.grid
                             : u.has_grid() ? &u.grid
                             : g.has_grid() ? &g.grid
                                            : nullptr;
  if (specsrc == nullptr) return CompositeField::pure_poly(pout);

  const GridSpec spec = specsrc->spec;
  if ((f.has_grid() && !f.grid.spec.same_layout(spec)) ||
      (u.has_grid() && !u.grid.spec.same_layout(spec)) ||
      (g.has_grid() && !g.grid.spec.same_layout(spec)))
    throw std::invalid_argument("transport grids must share a layout");

  double usup = vnorm(bu, n) + frob(Au) * std::sqrt(static_cast<double>(n)) * spec.half_width;
  if (u.has_grid()) usup += u.grid.max_abs();
  if (dt * usup / spec.h() > 4.0)
    throw std::invalid_argument("transport step violates the displacement bound");

  // Sampled sector: interpolate along the exact characteristics and add the
  // affine remainders A (foot - foot_affine), which is what the polynomial
  // sector misses when the advector carries a grid part.
  GridField gout = GridField::zero(spec, n);
  const size_t nodes = spec.nodes();
  for (size_t flat = 0; flat < nodes; ++flat) {
    const Vec x = spec.node(flat);
    const Vec ux = u.eval_vec(x);
    Vec mid = x;
    for (int k = 0; k < n; ++k) mid[k] -= 0.5 * dt * ux[k];
    const Vec um = u.eval_vec(mid);
    Vec foot = x;
    for (int k = 0; k < n; ++k) foot[k] -= dt * um[k];

    const Vec ma = mat_vec(M1, x);
    const Vec fa = mat_vec(Mf, x);
    Vec dmid{0.0, 0.0, 0.0}, dfoot{0.0, 0.0, 0.0};
    for (int k = 0; k < n; ++k) {
      dmid[k] = mid[k] - (ma[k] + w1[k]);
      dfoot[k] = foot[k] - (fa[k] + wf[k]);
    }
    for (int c = 0; c < n; ++c) {
      double val = f.has_grid() ? f.grid.interp(foot, c) : 0.0;
      double fv = g.has_grid() ? g.grid.interp(mid, c) : 0.0;
      for (int k = 0; k < 3; ++k) {
        val += Af[c][k] * dfoot[k];
        fv += Ag[c][k] * dmid[k];
      }
      gout.ref(c, flat) = val + dt * fv;
    }
  }
  return CompositeField::make(pout, gout);
}

double field_size(const CompositeField& v) {
  double s = frob(v.poly.gradient_matrix()) + vnorm(v.poly.constant_part(), v.n());
  if (v.has_grid()) s += v.grid.max_abs();
  return s;
}

double path_distance(const FieldPath& a, const FieldPath& b) {
  if (a.times.size() != b.times.size() || a.fields.size() != a.times.size() ||
      b.fields.size() != b.times.size())
    throw std::invalid_argument("path distance needs matching time grids");
  double worst = 0.0;
  for (size_t k = 0; k < a.times.size(); ++k) {
    if (std::abs(a.times[k] - b.times[k]) > 1e-9 * std::max(1.0, std::abs(a.times[k])))
      throw std::invalid_argument("path times disagree");
    worst = std::max(worst, diff_size(a.fields[k], b.fields[k]));
  }
  return worst;
}

FieldPath fixed_point_map(const FieldPath& u, const CompositeField& v0,
                          const SolverConfig& cfg) {
  const size_t K = u.times.size();
  if (K < 2 || u.fields.size() != K)
    throw std::invalid_argument("fixed point map needs at least two slices");
  for (size_t k = 1; k < K; ++k)
    if (!(u.times[k] > u.times[k - 1]))
      throw std::invalid_argument("path times must increase");

  // One projection and one pressure solve per input slice; the transport
  // below reuses them for both bracketing slices.
  std::vector<CompositeField> pu, forcing;
  pu.reserve(K);
  forcing.reserve(K);
  for (size_t k = 0; k < K; ++k) {
    pu.push_back(helmholtz_project(u.fields[k]));
    CompositeField g = pressure_gradient(pu[k], u.fields[k], cfg.div_tol);
    g.scale(-1.0);
    forcing.push_back(std::move(g));
  }

  const double size0 = field_size(v0);
  const Vec at0 = v0.eval_vec(Vec{0.0, 0.0, 0.0});
  const bool centered = vnorm(at0, v0.n()) <= 1e-9 * std::max(1.0, size0);

  FieldPath out;
  out.times = u.times;
  out.fields.reserve(K);
  out.fields.push_back(v0);
  for (size_t k = 0; k + 1 < K; ++k) {
    const double dt = u.times[k + 1] - u.times[k];
    const CompositeField adv = field_average(pu[k], pu[k + 1]);
    const CompositeField force = field_average(forcing[k], forcing[k + 1]);
    CompositeField next = helmholtz_project(transport_step(out.fields[k], adv, force, dt));
    if (centered) {
      // The continuous construction fixes v(0, t) = 0 (the foot of 0 is 0
      // and the forcing is anchored there); remove the discrete drift.
      const Vec c = next.eval_vec(Vec{0.0, 0.0, 0.0});
      for (int comp = 0; comp < next.dim(); ++comp)
        next.poly.coef_ref(comp, MultiIndex{0, 0, 0}) -= c[comp];
    }
    out.fields.push_back(std::move(next));
  }
  return out;
}

ContinuationMetrics continuation_metrics(const CompositeField& v, const SolverConfig& cfg,
                                         bool tails) {
  ContinuationMetrics m;
  m.pinf_grad = frob(v.poly.gradient_matrix());
  int j_lo = cfg.j_min, j_hi = cfg.j_max;
  clamp_window(v, j_lo, j_hi);
  if (j_lo > j_hi)
    throw std::invalid_argument("no resolvable dyadic window for the monitors");
  m.omega_bmo = bmo_seminorm(vorticity(v), cfg.probes, j_lo, j_hi);
  if (tails) {
    OscParams op;
    op.p = 2.0;
    op.N = 1;
    m.beta_tail.assign(static_cast<size_t>(std::max(0, cfg.tail_k_max - cfg.tail_k_min + 1)),
                       0.0);
    for (int k = cfg.tail_k_min; k <= cfg.tail_k_max; ++k) {
      double best = 0.0;
      for (const Vec& x0 : cfg.probes) {
        double sum = 0.0;
        for (int j = std::max(k, j_lo); j <= j_hi; ++j)
          sum += std::exp2(-j) * oscillation(v, x0, std::exp2(j), op);
        best = std::max(best, sum);
      }
      m.beta_tail[static_cast<size_t>(k - cfg.tail_k_min)] = best;
    }
  }
  return m;
}

EulerTrajectory solve(const CompositeField& v0, const SolverConfig& cfg) {
  v0.validate();
  if (v0.dim() != v0.n()) throw std::invalid_argument("solve expects a velocity field");
  if (!(cfg.dt > 0.0) || !(cfg.horizon > 0.0) || !(cfg.c_window > 0.0) ||
      !(cfg.fp_tol > 0.0) || cfg.max_fp_iters < 1)
    throw std::invalid_argument("solver configuration must be positive");
  const double size0 = field_size(v0);
  if (div_sup(v0) > cfg.div_tol * std::max(1.0, size0))
    throw std::invalid_argument("initial data is not divergence free");

  EulerTrajectory out;
  CompositeField vc = v0;
  Vec drift = v0.eval_vec(Vec{0.0, 0.0, 0.0});
  const bool galilean = vnorm(drift, v0.n()) > 1e-12 * std::max(1.0, size0);
  if (galilean) {
    out.galilean = drift;
    for (int c = 0; c < vc.dim(); ++c)
      vc.poly.coef_ref(c, MultiIndex{0, 0, 0}) -= drift[c];
  }

  const size_t stride = static_cast<size_t>(std::max(1, cfg.metrics_stride));
  size_t steps = 0;
  auto record = [&](const CompositeField& v, double tt, bool force_snapshot) {
    ContinuationMetrics m = continuation_metrics(v, cfg, false);
    const double s_now = m.omega_bmo + m.pinf_grad;
    StepSeries& se = out.series;
    double integral = 0.0;
    if (!se.t.empty()) {
      const double s_prev = se.omega_bmo.back() + se.pinf_grad.back();
      integral = se.integral.back() + 0.5 * (s_now + s_prev) * (tt - se.t.back());
    }
    se.t.push_back(tt);
    se.omega_bmo.push_back(m.omega_bmo);
    se.pinf_grad.push_back(m.pinf_grad);
    se.integral.push_back(integral);
    se.div_sup.push_back(div_sup(v));
    se.grid_l2.push_back(v.has_grid() ? v.grid.l2() : 0.0);
    se.affine_norm.push_back(frob(v.poly.gradient_matrix()));
    if (force_snapshot || steps % stride == 0) {
      EulerState st;
      st.t = tt;
      st.v = v;
      st.pgrad = pressure_gradient(v, v, cfg.div_tol);
      st.metrics = continuation_metrics(v, cfg, true);
      st.metrics.integral = integral;
      out.states.push_back(std::move(st));
    }
    return se.affine_norm.back();
  };

  double t = 0.0;
  record(vc, t, true);
  bool stop = false;
  while (t < cfg.horizon - 1e-12 && !stop) {
    const double size = field_size(vc);
    const double T0 = 1.0 / (cfg.c_window * std::max(size, 1e-9));
    const double window = std::min(T0 / 4.0, cfg.horizon - t);
    if (window < 1e-13 * std::max(1.0, t)) {
      // The window scale has collapsed: the size is blowing up faster than
      // the horizon can be reached.
      out.blowup = fit_reciprocal_tail(out.series.t, out.series.affine_norm);
      break;
    }
    const int nst = std::max(1, static_cast<int>(std::ceil(window / cfg.dt - 1e-12)));
    const double dtw = window / nst;

    FieldPath path;
    path.times.resize(static_cast<size_t>(nst) + 1);
    for (int i = 0; i <= nst; ++i) path.times[static_cast<size_t>(i)] = t + dtw * i;
    path.fields.assign(static_cast<size_t>(nst) + 1, vc);

    double prev_gap = -1.0, last_ratio = 0.0;
    bool settled = false;
    for (int it = 0; it < cfg.max_fp_iters; ++it) {
      FieldPath next = fixed_point_map(path, vc, cfg);
      const double gap = path_distance(next, path);
      path = std::move(next);
      if (prev_gap > 0.0) last_ratio = gap / prev_gap;
      prev_gap = gap;
      if (gap <= cfg.fp_tol * std::max(1.0, size)) {
        settled = true;
        break;
      }
    }
    out.window_t0.push_back(T0);
    out.contraction.push_back(last_ratio);
    if (!settled) {
      out.converged = false;
      break;
    }

    for (int i = 1; i <= nst; ++i) {
      ++steps;
      const size_t si = static_cast<size_t>(i);
      const double nrm = record(path.fields[si], path.times[si], false);
      vc = path.fields[si];
      t = path.times[si];
      if (nrm >= cfg.blow_norm) {
        out.blowup = fit_reciprocal_tail(out.series.t, out.series.affine_norm);
        stop = true;
        break;
      }
    }
  }

  if (out.states.back().t != out.series.t.back()) {
    EulerState st;
    st.t = out.series.t.back();
    st.v = vc;
    st.pgrad = pressure_gradient(vc, vc, cfg.div_tol);
    st.metrics = continuation_metrics(vc, cfg, true);
    st.metrics.integral = out.series.integral.back();
    out.states.push_back(std::move(st));
  }

  if (galilean) {
    // Restore v(x, t) = vc(x - t b, t) + b. Polynomial sectors recenter
    // exactly; sampled sectors resample (content that walks outside the box
    // is lost to the zero extension). Monitors stay in the centered frame.
    for (EulerState& st : out.states) {
      const Vec shift{-st.t * drift[0], -st.t * drift[1], -st.t * drift[2]};
      st.v.poly = st.v.poly.shifted(shift);
      for (int c = 0; c < st.v.dim(); ++c)
        st.v.poly.coef_ref(c, MultiIndex{0, 0, 0}) += drift[c];
      if (st.v.has_grid()) st.v.grid = resample(st.v.grid, shift);
      st.pgrad.poly = st.pgrad.poly.shifted(shift);
      if (st.pgrad.has_grid()) st.pgrad.grid = resample(st.pgrad.grid, shift);
    }
  }
  return out;
}

LogInequalityReport log_inequality_check(const CompositeField& u, double delta, int k,
                                         const SolverConfig& cfg, double c_ref) {
  if (!(delta > 0.0) || !(delta < 1.0))
    throw std::invalid_argument("delta must lie in (0, 1)");
  LogInequalityReport rep;
  rep.c_ref = c_ref;
  OscParams op;
  op.p = 2.0;
  op.N = 1;

  int j_lo = k - 12;
  int j_min_eff = cfg.j_min, j_max_eff = cfg.j_max;
  clamp_window(u, j_min_eff, j_max_eff);
  if (u.has_grid())
    j_lo = std::max(j_lo, static_cast<int>(std::ceil(std::log2(4.0 * u.grid.spec.h()) - 1e-12)));
  if (j_min_eff > j_max_eff)
    throw std::invalid_argument("no resolvable dyadic window for the norm");

  for (const Vec& x0 : cfg.probes) {
    double sum = 0.0;
    for (int j = j_lo; j <= k; ++j)
      sum += std::exp2(-j) * oscillation(u, x0, std::exp2(j), op);
    rep.lhs = std::max(rep.lhs, sum);
  }
  rep.scale_term = std::exp2(delta * k);

  const double bmo = bmo_seminorm(gradient(u), cfg.probes, j_min_eff, j_max_eff);
  SeminormParams sp;
  sp.s = 1.0 + delta;
  sp.q = 1.0;
  sp.osc = op;
  sp.j_min = j_min_eff;
  sp.j_max = j_max_eff;
  sp.probes = cfg.probes;
  rep.bmo_term = bmo * std::log1p(seminorm(u, sp).value);
  rep.c_min = rep.lhs / (rep.scale_term + rep.bmo_term);
  rep.holds = rep.c_min <= c_ref;
  return rep;
}

PropagationReport oscillation_propagation_check(const EulerTrajectory& run, const Vec& x0,
                                                int N, double c_ref) {
  if (run.states.empty()) throw std::invalid_argument("empty trajectory");
  PropagationReport rep;
  rep.c_ref = c_ref;
  OscParams op;
  op.p = 2.0;
  op.N = N;

  const size_t K = run.states.size();
  rep.osc.resize(K);
  rep.grad_int.resize(K);
  double integral = 0.0, g_prev = 0.0;
  for (size_t k = 0; k < K; ++k) {
    const EulerState& st = run.states[k];
    int j_lo = -2, j_hi = 3;
    clamp_window(st.v, j_lo, j_hi);
    double q = 0.0;
    for (int j = j_lo; j <= j_hi; ++j)
      q = std::max(q, std::exp2(-j) * oscillation(st.v, x0, std::exp2(j), op));
    rep.osc[k] = q;
    const double g = interior_sup(gradient(st.v));
    if (k > 0) integral += 0.5 * (g + g_prev) * (st.t - run.states[k - 1].t);
    rep.grad_int[k] = integral;
    g_prev = g;
  }

  const double q0 = rep.osc.front();
  const double scale = std::max(1.0, field_size(run.states.front().v));
  if (q0 <= 1e-12 * scale) {
    rep.c_star = 0.0;
    double worst = 0.0;
    for (double q : rep.osc) worst = std::max(worst, q);
    rep.holds = worst <= 1e-10 * scale;
    return rep;
  }

  // The defect max_k (osc_k - c q0 exp(c I_k)) is decreasing in c; bisect.
  auto defect = [&](double c) {
    double worst = -std::numeric_limits<double>::infinity();
    for (size_t k = 0; k < K; ++k) {
      const double e = std::exp(std::min(700.0, c * rep.grad_int[k]));
      worst = std::max(worst, rep.osc[k] - c * q0 * e);
    }
    return worst;
  };
  double hi = 1.0;
  while (defect(hi) > 0.0 && hi < 1e12) hi *= 2.0;
  if (defect(hi) > 0.0) {
    rep.c_star = std::numeric_limits<double>::infinity();
    rep.holds = false;
    return rep;
  }
  double lo = 0.0;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    (defect(mid) > 0.0 ? lo : hi) = mid;
  }
  rep.c_star = hi;
  rep.holds = rep.c_star <= c_ref;
  return rep;
}

}  // namespace oscflow
