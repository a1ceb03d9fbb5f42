#include "oscflow/riccati.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace oscflow {

namespace {

constexpr double kBlowNorm = 1e8;
constexpr double kStepFloor = 1e-12;
constexpr double kLedgerWindow = 1e3;

double frob(const Mat3& A, int n) {
  double s = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) s += A[i][j] * A[i][j];
  return std::sqrt(s);
}

double trace_of(const Mat3& A, int n) {
  double t = 0.0;
  for (int i = 0; i < n; ++i) t += A[i][i];
  return t;
}

Mat3 zero_mat() {
  return Mat3{{{0.0, 0.0, 0.0}, {0.0, 0.0, 0.0}, {0.0, 0.0, 0.0}}};
}

// Eigenvalues read in a frame frozen at t = 0. The right-hand side is a
// polynomial in A, so the flow never leaves the algebra generated by the
// initial state: the eigenvectors of A(0) diagonalize every later state.
// Reading diagonals of W^{-1} A W keeps the labels continuous for free,
// where a per-step eigensolve would face a relabeling ambiguity once two
// eigenvalues converge near the singularity. Diagonal states stay diagonal
// exactly and use the identity frame in storage order.
struct EigenFrame {
  bool identity = false;
  bool usable = false;
  Eigen::Matrix3d W, Winv;

  static EigenFrame build(const Mat3& A0, int n) {
    EigenFrame fr;
    if (n < 3) return fr;
    double scale = std::max(1.0, frob(A0, 3));
    double off = 0.0;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        if (i != j) off = std::max(off, std::abs(A0[i][j]));
    if (off <= 1e-14 * scale) {
      fr.identity = fr.usable = true;
      return fr;
    }
    Eigen::Matrix3d M;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) M(i, j) = A0[i][j];
    Eigen::EigenSolver<Eigen::Matrix3d> es(M, true);
    for (int i = 0; i < 3; ++i)
      if (std::abs(es.eigenvalues()[i].imag()) > 1e-9 * scale) return fr;
    fr.W = es.eigenvectors().real();
    if (es.eigenvectors().imag().norm() > 1e-9 * fr.W.norm()) return fr;
    double det = std::abs(fr.W.determinant());
    if (det < 1e-8) return fr;  // defective: no eigenbasis to freeze
    fr.Winv = fr.W.inverse();
    fr.usable = true;
    return fr;
  }

  bool read(const Mat3& A, std::array<double, 3>& out) const {
    if (!usable) return false;
    double scale = std::max(1.0, frob(A, 3));
    if (identity) {
      double off = 0.0;
      for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
          if (i != j) off = std::max(off, std::abs(A[i][j]));
      if (off > 1e-9 * scale) return false;
      for (int i = 0; i < 3; ++i) out[i] = A[i][i];
      return true;
    }
    Eigen::Matrix3d M;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) M(i, j) = A[i][j];
    Eigen::Matrix3d D = Winv * M * W;
    double off = 0.0;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        if (i != j) off = std::max(off, std::abs(D(i, j)));
    if (off > 1e-6 * scale) return false;
    for (int i = 0; i < 3; ++i) out[i] = D(i, i);
    return true;
  }
};

RiccatiLedgerRow make_row(const Mat3& A, int n, const EigenFrame& frame) {
  RiccatiLedgerRow row;
  row.trace = trace_of(A, n);
  if (n < 3) return row;
  std::array<double, 3> lam{0.0, 0.0, 0.0};
  row.eigen_real = frame.read(A, lam);
  if (!row.eigen_real) return row;
  row.mu = {lam[1] - lam[2], lam[2] - lam[0], lam[0] - lam[1]};
  row.mu_product = row.mu[0] * row.mu[1] * row.mu[2];
  row.alpha = row.mu[0] + row.mu[1];
  row.beta = row.mu[0] - row.mu[1];
  return row;
}

}  // namespace

BlowupFit fit_reciprocal_tail(const std::vector<double>& ts, const std::vector<double>& norms) {
  // Least squares line through (t, 1/|A|); the root is the singularity time.
  std::vector<std::pair<double, double>> pts;
  for (size_t i = 0; i < ts.size(); ++i)
    if (norms[i] >= 1e2) pts.emplace_back(ts[i], 1.0 / norms[i]);
  if (pts.size() < 8) {
    size_t keep = std::min<size_t>(ts.size(), 8);
    pts.clear();
    for (size_t i = ts.size() - keep; i < ts.size(); ++i)
      pts.emplace_back(ts[i], 1.0 / norms[i]);
  }
  double sw = static_cast<double>(pts.size());
  double st = 0.0, stt = 0.0, sy = 0.0, sty = 0.0;
  for (auto& [t, y] : pts) {
    st += t;
    stt += t * t;
    sy += y;
    sty += t * y;
  }
  double det = sw * stt - st * st;
  double a = (stt * sy - st * sty) / det;   // intercept
  double b = -(sw * sty - st * sy) / det;   // minus slope
  BlowupFit fit;
  fit.t_star = a / b;
  fit.coefficient = 1.0 / b;
  fit.samples = static_cast<int>(pts.size());
  double dev = 0.0, ymax = 0.0;
  for (auto& [t, y] : pts) {
    dev = std::max(dev, std::abs(y - (a - b * t)));
    ymax = std::max(ymax, std::abs(y));
  }
  fit.rel_residual = dev / std::max(ymax, 1e-300);
  return fit;
}

namespace {

void axpy(std::array<double, 9>& y, double c, const std::array<double, 9>& x) {
  for (int i = 0; i < 9; ++i) y[i] += c * x[i];
}

std::array<double, 9> flat(const Mat3& A) {
  std::array<double, 9> y{};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) y[3 * i + j] = A[i][j];
  return y;
}

Mat3 unflat(const std::array<double, 9>& y) {
  Mat3 A;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) A[i][j] = y[3 * i + j];
  return A;
}

}  // namespace

Mat3 riccati_rhs(const Mat3& A, int n) {
  if (n != 2 && n != 3) throw std::invalid_argument("riccati_rhs: dimension must be 2 or 3");
  Mat3 A2 = zero_mat();
  double tr2 = 0.0;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      double s = 0.0;
      for (int k = 0; k < n; ++k) s += A[i][k] * A[k][j];
      A2[i][j] = s;
    }
    tr2 += A2[i][i];
  }
  Mat3 out = zero_mat();
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) out[i][j] = (i == j ? tr2 / n : 0.0) - A2[i][j];
  return out;
}

RiccatiTrajectory integrate_riccati(const Mat3& A0, int n, double horizon, double tol) {
  if (n != 2 && n != 3) throw std::invalid_argument("integrate_riccati: dimension must be 2 or 3");
  if (!(horizon > 0.0)) throw std::invalid_argument("integrate_riccati: horizon must be positive");
  if (!(tol > 0.0)) throw std::invalid_argument("integrate_riccati: tolerance must be positive");
  if (std::abs(trace_of(A0, n)) > 1e-10 * std::max(1.0, frob(A0, n)))
    throw std::invalid_argument("integrate_riccati: initial matrix must be trace-free");

  // Dormand-Prince 5(4) tableau; the last stage is the 5th-order solution.
  static const double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
  static const double a21 = 1.0 / 5;
  static const double a31 = 3.0 / 40, a32 = 9.0 / 40;
  static const double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  static const double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                      a54 = -212.0 / 729;
  static const double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                      a64 = 49.0 / 176, a65 = -5103.0 / 18656;
  static const double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                      b5 = -2187.0 / 6784, b6 = 11.0 / 84;
  static const double e1 = 35.0 / 384 - 5179.0 / 57600, e3 = 500.0 / 1113 - 7571.0 / 16695,
                      e4 = 125.0 / 192 - 393.0 / 640, e5 = -2187.0 / 6784 + 92097.0 / 339200,
                      e6 = 11.0 / 84 - 187.0 / 2100, e7 = -1.0 / 40;
  (void)c2;
  (void)c3;
  (void)c4;
  (void)c5;

  auto f = [n](const std::array<double, 9>& y) { return flat(riccati_rhs(unflat(y), n)); };

  RiccatiTrajectory tr;
  tr.n = n;
  std::array<double, 9> y = flat(A0);
  double t = 0.0;
  double dt_max = std::min(horizon / 64.0, 1.0);
  double dt = std::min(dt_max, 1e-3 / std::max(1.0, frob(A0, n)));
  const double atol = 1e-12;

  const EigenFrame frame = EigenFrame::build(A0, n);
  auto record = [&](double tt, const Mat3& A) {
    tr.times.push_back(tt);
    tr.states.push_back(A);
    tr.ledger.push_back(make_row(A, n, frame));
  };
  record(0.0, A0);

  std::vector<double> norm_hist{frob(A0, n)};
  bool blew = false;
  while (t < horizon) {
    // Within roundoff of the horizon counts as arrived; clamping dt to the
    // leftover ulps would trip the step floor below.
    if (horizon - t <= 1e-14 * std::max(1.0, horizon)) break;
    dt = std::min(dt, horizon - t);
    std::array<double, 9> k1 = f(y);
    std::array<double, 9> s = y;
    axpy(s, dt * a21, k1);
    std::array<double, 9> k2 = f(s);
    s = y;
    axpy(s, dt * a31, k1);
    axpy(s, dt * a32, k2);
    std::array<double, 9> k3 = f(s);
    s = y;
    axpy(s, dt * a41, k1);
    axpy(s, dt * a42, k2);
    axpy(s, dt * a43, k3);
    std::array<double, 9> k4 = f(s);
    s = y;
    axpy(s, dt * a51, k1);
    axpy(s, dt * a52, k2);
    axpy(s, dt * a53, k3);
    axpy(s, dt * a54, k4);
    std::array<double, 9> k5 = f(s);
    s = y;
    axpy(s, dt * a61, k1);
    axpy(s, dt * a62, k2);
    axpy(s, dt * a63, k3);
    axpy(s, dt * a64, k4);
    axpy(s, dt * a65, k5);
    std::array<double, 9> k6 = f(s);
    std::array<double, 9> y5 = y;
    axpy(y5, dt * b1, k1);
    axpy(y5, dt * b3, k3);
    axpy(y5, dt * b4, k4);
    axpy(y5, dt * b5, k5);
    axpy(y5, dt * b6, k6);
    std::array<double, 9> k7 = f(y5);

    double err = 0.0;
    for (int i = 0; i < 9; ++i) {
      double e = dt * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
      double sc = atol + tol * std::max(std::abs(y[i]), std::abs(y5[i]));
      err += (e / sc) * (e / sc);
    }
    err = std::sqrt(err / 9.0);

    if (err <= 1.0) {
      t += dt;
      y = y5;
      Mat3 A = unflat(y);
      record(t, A);
      double nrm = frob(A, n);
      norm_hist.push_back(nrm);
      if (nrm >= kBlowNorm) {
        blew = true;
        break;
      }
    }
    double grow = err > 0.0 ? 0.9 * std::pow(err, -0.2) : 5.0;
    dt *= std::clamp(grow, 0.2, 5.0);
    dt = std::min(dt, dt_max);
    if (dt < kStepFloor) {
      if (frob(unflat(y), n) > 1e6) {
        blew = true;
        break;
      }
      throw std::runtime_error("integrate_riccati: step collapsed away from a singularity");
    }
  }
  tr.final_step = dt;
  if (blew) tr.blowup = fit_reciprocal_tail(tr.times, norm_hist);
  return tr;
}

InvariantReport invariants_3d(const RiccatiTrajectory& tr) {
  if (tr.n != 3) throw std::invalid_argument("invariants_3d: three-dimensional trajectories only");
  if (tr.states.empty()) throw std::invalid_argument("invariants_3d: empty trajectory");
  InvariantReport rep;
  const RiccatiLedgerRow& r0 = tr.ledger.front();
  double scale0 = std::max(1.0, frob(tr.states.front(), 3));
  bool distinct = r0.eigen_real;
  for (double m : r0.mu) distinct = distinct && std::abs(m) > 1e-9 * scale0;
  rep.applicable = distinct;
  double c0 = r0.mu_product;
  for (size_t i = 0; i < tr.states.size(); ++i) {
    const RiccatiLedgerRow& row = tr.ledger[i];
    double nrm = frob(tr.states[i], 3);
    rep.trace_drift = std::max(rep.trace_drift, std::abs(row.trace) / std::max(1.0, nrm));
    if (!rep.applicable) continue;
    if (nrm > kLedgerWindow) continue;
    if (!row.eigen_real) {
      rep.applicable = false;
      continue;
    }
    rep.mu_product_drift =
        std::max(rep.mu_product_drift, std::abs(row.mu_product - c0) / std::abs(c0));
    if (std::abs(row.alpha) > 1e-12) {
      double claim = row.alpha * row.alpha + 4.0 * c0 / row.alpha;
      double den = row.beta * row.beta + row.alpha * row.alpha + std::abs(4.0 * c0 / row.alpha);
      rep.beta_residual =
          std::max(rep.beta_residual, std::abs(row.beta * row.beta - claim) / den);
    }
  }
  return rep;
}

std::string riccati_to_csv(const RiccatiTrajectory& tr) {
  std::string out = "t";
  for (int i = 0; i < tr.n; ++i)
    for (int j = 0; j < tr.n; ++j) {
      char buf[32];
      std::snprintf(buf, sizeof buf, ",a%d%d", (i + 1) % 10, (j + 1) % 10);
      out += buf;
    }
  out += ",trace";
  if (tr.n == 3) out += ",mu1,mu2,mu3,mu_product,alpha,beta";
  out += "\n";
  char buf[32];
  auto put = [&](double v) {
    std::snprintf(buf, sizeof buf, ",%.12e", v);
    out += buf;
  };
  for (size_t r = 0; r < tr.times.size(); ++r) {
    std::snprintf(buf, sizeof buf, "%.12e", tr.times[r]);
    out += buf;
    for (int i = 0; i < tr.n; ++i)
      for (int j = 0; j < tr.n; ++j) put(tr.states[r][i][j]);
    const RiccatiLedgerRow& row = tr.ledger[r];
    put(row.trace);
    if (tr.n == 3) {
      put(row.mu[0]);
      put(row.mu[1]);
      put(row.mu[2]);
      put(row.mu_product);
      put(row.alpha);
      put(row.beta);
    }
    out += "\n";
  }
  return out;
}

std::pair<FieldPath, FieldPath> equivalence_transform(const FieldPath& v, const FieldPath& pgrad,
                                                      const EquivalenceShift& shift) {
  size_t K = v.times.size();
  if (pgrad.times.size() != K || shift.times.size() != K)
    throw std::invalid_argument("equivalence_transform: time grids mismatch");
  for (size_t k = 0; k < K; ++k)
    if (v.times[k] != pgrad.times[k] || v.times[k] != shift.times[k])
      throw std::invalid_argument("equivalence_transform: time grids mismatch");
  if (shift.xi.size() != K || shift.xi_dot.size() != K || shift.xi_ddot.size() != K)
    throw std::invalid_argument("equivalence_transform: shift derivatives missing");

  auto shifted_field = [](const CompositeField& f, const Vec& xi, const Vec& add) {
    CompositeField out = f;
    out.poly = f.poly.shifted(xi);
    if (f.has_grid())
      out.grid = GridField::sample(f.grid.spec, f.grid.dim, [&](const Vec& x, int c) {
        Vec y{x[0] + xi[0], x[1] + xi[1], x[2] + xi[2]};
        return f.grid.interp(y, c);
      });
    for (int c = 0; c < out.dim() && c < 3; ++c)
      out.poly.coef_ref(c, MultiIndex{0, 0, 0}) += add[c];
    return out;
  };

  FieldPath v2, g2;
  v2.times = v.times;
  g2.times = pgrad.times;
  v2.fields.reserve(K);
  g2.fields.reserve(K);
  for (size_t k = 0; k < K; ++k) {
    Vec mdot{-shift.xi_dot[k][0], -shift.xi_dot[k][1], -shift.xi_dot[k][2]};
    v2.fields.push_back(shifted_field(v.fields[k], shift.xi[k], mdot));
    g2.fields.push_back(shifted_field(pgrad.fields[k], shift.xi[k], shift.xi_ddot[k]));
  }
  return {std::move(v2), std::move(g2)};
}

double verify_linear_solution(const PolyPath& v, const PolyPath& pgrad,
                              const std::vector<double>& times, double box) {
  const double h = 1e-3;
  double worst = 0.0;
  for (double t : times) {
    PolynomialField vt = v(t);
    PolynomialField gt = pgrad(t);
    const int n = vt.n;
    auto A = vt.gradient_matrix();

    // Sixth-order Richardson stack of central differences in time.
    PolynomialField vp1 = v(t + h), vm1 = v(t - h);
    PolynomialField vp2 = v(t + h / 2), vm2 = v(t - h / 2);
    PolynomialField vp4 = v(t + h / 4), vm4 = v(t - h / 4);

    std::vector<double> grid{-box, -box / 2, 0.0, box / 2, box};
    size_t npts = 1;
    for (int k = 0; k < n; ++k) npts *= grid.size();
    for (size_t flatp = 0; flatp < npts; ++flatp) {
      size_t rem = flatp;
      Vec x{0.0, 0.0, 0.0};
      for (int k = 0; k < n; ++k) {
        x[k] = grid[rem % grid.size()];
        rem /= grid.size();
      }
      for (int i = 0; i < n; ++i) {
        auto D = [&](const PolynomialField& plus, const PolynomialField& minus, double hh) {
          return (plus.eval(x, i) - minus.eval(x, i)) / (2.0 * hh);
        };
        double d1 = D(vp1, vm1, h);
        double d2 = D(vp2, vm2, h / 2);
        double d4 = D(vp4, vm4, h / 4);
        double r1 = (4.0 * d2 - d1) / 3.0;
        double r2 = (4.0 * d4 - d2) / 3.0;
        double dv = (16.0 * r2 - r1) / 15.0;

        double conv = 0.0;
        for (int j = 0; j < n; ++j) conv += vt.eval(x, j) * A[i][j];
        worst = std::max(worst, std::abs(dv + conv + gt.eval(x, i)));
      }
    }
  }
  return worst;
}

}  // namespace oscflow
