#include "oscflow/campanato.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "oscflow/quadrature.hpp"

namespace oscflow {

namespace {

bool poly_only(const CompositeField& f) {
  return !f.has_grid() || f.grid.max_abs() == 0.0;
}

double falling_factorial_ratio(const MultiIndex& beta, const MultiIndex& alpha) {
  // beta! / (beta - alpha)! assuming alpha <= beta componentwise.
  double r = 1.0;
  for (int k = 0; k < 3; ++k)
    for (int t = beta[k]; t > beta[k] - alpha[k]; --t) r *= t;
  return r;
}

// Bounding box (in grid index space) of the nonzero grid data, or false when
// the grid sector vanishes identically.
bool support_box(const GridField& g, std::array<int, 3>& lo, std::array<int, 3>& hi) {
  if (g.empty()) return false;
  lo = {g.spec.m, g.spec.m, g.spec.m};
  hi = {-1, -1, -1};
  bool any = false;
  for (int c = 0; c < g.dim; ++c)
    for (size_t f = 0; f < g.spec.nodes(); ++f) {
      if (g.at(c, f) == 0.0) continue;
      any = true;
      auto idx = g.spec.unflat(f);
      for (int k = 0; k < 3; ++k) {
        lo[k] = std::min(lo[k], idx[k]);
        hi[k] = std::max(hi[k], idx[k]);
      }
    }
  return any;
}

// Local-coordinate coefficients of f(x0 + r z), one vector per component.
std::vector<Eigen::VectorXd> local_coeffs(const PolynomialField& f, const Vec& x0, double r) {
  PolynomialField s = f.shifted(x0);
  std::vector<Eigen::VectorXd> out(static_cast<size_t>(f.dim));
  for (int c = 0; c < f.dim; ++c) {
    Eigen::VectorXd t(static_cast<long>(s.basis.size()));
    for (size_t b = 0; b < s.basis.size(); ++b)
      t[static_cast<long>(b)] = s.coef_at(c, s.basis[b]) * std::pow(r, multi_norm(s.basis[b]));
    out[static_cast<size_t>(c)] = t;
  }
  return out;
}

Eigen::MatrixXd ball_gram(int n, const std::vector<MultiIndex>& basis) {
  const long B = static_cast<long>(basis.size());
  Eigen::MatrixXd G(B, B);
  for (long a = 0; a < B; ++a)
    for (long b = 0; b < B; ++b) {
      MultiIndex g{basis[static_cast<size_t>(a)][0] + basis[static_cast<size_t>(b)][0],
                   basis[static_cast<size_t>(a)][1] + basis[static_cast<size_t>(b)][1],
                   basis[static_cast<size_t>(a)][2] + basis[static_cast<size_t>(b)][2]};
      G(a, b) = ball_monomial_integral(n, g);
    }
  return G;
}

struct TailTerm {
  double bound = 0.0;
  bool divergent = false;
};

// l^q content of the geometric sequence first * rho^k, k = 0, 1, 2, ...
TailTerm geometric_tail(double first, double rho, double q) {
  TailTerm t;
  if (first <= 0.0) return t;
  if (q == kInfExponent) {
    if (rho <= 1.0) t.bound = first;
    else t.divergent = true;
    return t;
  }
  const double rq = std::pow(rho, q);
  if (rq >= 1.0) {
    t.divergent = true;
    return t;
  }
  t.bound = first / std::pow(1.0 - rq, 1.0 / q);
  return t;
}

}  // namespace

double ball_monomial_integral(int n, const MultiIndex& gamma) {
  for (int k = 0; k < n; ++k)
    if (gamma[k] % 2 == 1) return 0.0;
  for (int k = n; k < 3; ++k)
    if (gamma[k] != 0) throw std::invalid_argument("monomial exceeds dimension");
  const int total = multi_norm(gamma);
  double log_num = std::log(2.0);
  for (int k = 0; k < n; ++k) log_num += std::lgamma((gamma[k] + 1) / 2.0);
  const double log_den = std::log(static_cast<double>(total + n)) + std::lgamma((total + n) / 2.0);
  return std::exp(log_num - log_den);
}

double mollified_moment(const CompositeField& f, int comp, const Vec& x0, double r,
                        const MultiIndex& alpha, int samples) {
  if (!(r > 0.0)) throw std::invalid_argument("moment radius must be positive");
  if (multi_norm(alpha) > 2) throw std::invalid_argument("moment order above 2 unsupported");
  const int n = f.n();
  const Mollifier& phi = Mollifier::get(n);
  const double r_pow = std::pow(r, -multi_norm(alpha));

  double value = 0.0;

  {  // Polynomial sector, exact: f(x0 - r z) expanded in z.
    PolynomialField s = f.poly.shifted(x0);
    const double sign_a = (multi_norm(alpha) % 2 == 0) ? 1.0 : -1.0;
    for (size_t b = 0; b < s.basis.size(); ++b) {
      const MultiIndex& beta = s.basis[b];
      if (!multi_leq(alpha, beta)) continue;
      MultiIndex rem{beta[0] - alpha[0], beta[1] - alpha[1], beta[2] - alpha[2]};
      const double mu = phi.moment(rem);
      if (mu == 0.0) continue;
      const double d = s.coef_at(comp, beta) * std::pow(-r, multi_norm(beta));
      value += d * sign_a * falling_factorial_ratio(beta, alpha) * mu;
    }
  }

  if (f.has_grid() && comp < f.grid.dim) {
    std::array<int, 3> lo, hi;
    if (support_box(f.grid, lo, hi)) {
      const double h = f.grid.spec.h();
      bool intersects = true;
      for (int k = 0; k < n; ++k) {
        const double a = f.grid.spec.node(f.grid.spec.flat(lo))[k] - h;
        const double b = f.grid.spec.node(f.grid.spec.flat(hi))[k] + h;
        if (x0[k] + r < a || x0[k] - r > b) intersects = false;
      }
      if (intersects && r < 4.0 * h)
        throw std::invalid_argument("moment radius below four grid cells");
      value += integrate_cube(n, 1.0, samples, [&](const Vec& z) {
        const double w = phi.derivative(z, alpha);
        if (w == 0.0) return 0.0;
        Vec x{x0[0] - r * z[0], x0[1] - r * z[1], x0[2] - r * z[2]};
        return f.grid.interp(x, comp) * w;
      });
    }
  }

  return r_pow * value;
}

PolynomialField mean_polynomial(const CompositeField& f, int N, const Vec& x0, double r,
                                int samples) {
  if (N < 0 || N > CompositeField::kMaxDegree)
    throw std::invalid_argument("mean polynomial degree out of range");
  const int n = f.n();
  const Mollifier& phi = Mollifier::get(n);
  const auto basis = monomials_up_to(n, N);
  const long B = static_cast<long>(basis.size());

  Eigen::MatrixXd M(B, B);
  for (long a = 0; a < B; ++a) {
    const MultiIndex& alpha = basis[static_cast<size_t>(a)];
    for (long b = 0; b < B; ++b) {
      const MultiIndex& beta = basis[static_cast<size_t>(b)];
      if (!multi_leq(alpha, beta)) {
        M(a, b) = 0.0;
        continue;
      }
      MultiIndex rem{beta[0] - alpha[0], beta[1] - alpha[1], beta[2] - alpha[2]};
      const double sign = ((multi_norm(alpha) + multi_norm(beta)) % 2 == 0) ? 1.0 : -1.0;
      M(a, b) = sign * falling_factorial_ratio(beta, alpha) * phi.moment(rem);
    }
  }
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(M);

  PolynomialField local = PolynomialField::zero(n, f.dim(), N);
  for (int c = 0; c < f.dim(); ++c) {
    Eigen::VectorXd rhs(B);
    for (long a = 0; a < B; ++a) {
      const MultiIndex& alpha = basis[static_cast<size_t>(a)];
      rhs[a] = std::pow(r, multi_norm(alpha)) *
               mollified_moment(f, c, x0, r, alpha, samples);
    }
    Eigen::VectorXd cvec = lu.solve(rhs);
    for (long b = 0; b < B; ++b) {
      const MultiIndex& beta = basis[static_cast<size_t>(b)];
      local.coef_ref(c, beta) = cvec[b] * std::pow(r, -multi_norm(beta));
    }
  }
  Vec minus{-x0[0], -x0[1], -x0[2]};
  return local.shifted(minus);
}

PolynomialField homogeneous_part(const PolynomialField& p, int degree) {
  PolynomialField out = PolynomialField::zero(p.n, p.dim, degree);
  if (degree > p.degree) return out;
  for (int c = 0; c < p.dim; ++c)
    for (const MultiIndex& b : out.basis)
      if (multi_norm(b) == degree) out.coef_ref(c, b) = p.coef_at(c, b);
  return out;
}

PolynomialField asymptotic_polynomial(const CompositeField& f, int N) {
  if (N > CompositeField::kMaxDegree)
    throw std::invalid_argument("asymptotic degree out of range");
  return homogeneous_part(f.poly, N);
}

PolynomialField asymptotic_polynomial_empirical(const CompositeField& f, int N, double r,
                                                int samples) {
  return homogeneous_part(mean_polynomial(f, N, {0.0, 0.0, 0.0}, r, samples), N);
}

double polynomial_oscillation2(const PolynomialField& f, const Vec& x0, double r, int N) {
  const int n = f.n;
  const auto basis_full = monomials_up_to(n, std::max(f.degree, N));
  
  const long BN = static_cast<long>(monomials_up_to(n, N).size());
  Eigen::MatrixXd G = ball_gram(n, basis_full);
  Eigen::LDLT<Eigen::MatrixXd> solver(G.topLeftCorner(BN, BN));

  PolynomialField ext = f.extended(std::max(f.degree, N));
  auto t = local_coeffs(ext, x0, r);
  double total = 0.0;
  for (int c = 0; c < f.dim; ++c) {
    const Eigen::VectorXd& tc = t[static_cast<size_t>(c)];
    Eigen::VectorXd gt = G * tc;
    Eigen::VectorXd cv = solver.solve(gt.head(BN));
    double res2 = tc.dot(gt) - cv.dot(gt.head(BN));
    total += std::max(0.0, res2);
  }
  const double vol = ball_monomial_integral(n, {0, 0, 0});
  return std::sqrt(total / vol);
}

namespace {

// L^p distance from f to a fixed polynomial over the rule's ball, normalized
// by the rule volume. Works for any p >= 1 and p = inf.
double lp_distance(const CompositeField& f, const PolynomialField& P, double p,
                   const BallRule& rule) {
  const int dim = f.dim();
  if (p == kInfExponent) {
    double m = 0.0;
    for (size_t k = 0; k < rule.nodes.size(); ++k) {
      double s2 = 0.0;
      for (int c = 0; c < dim; ++c) {
        const double d = f.eval(rule.nodes[k], c) - P.eval(rule.nodes[k], c);
        s2 += d * d;
      }
      m = std::max(m, std::sqrt(s2));
    }
    return m;
  }
  double acc = 0.0, vol = 0.0;
  for (size_t k = 0; k < rule.nodes.size(); ++k) {
    double s2 = 0.0;
    for (int c = 0; c < dim; ++c) {
      const double d = f.eval(rule.nodes[k], c) - P.eval(rule.nodes[k], c);
      s2 += d * d;
    }
    acc += rule.weights[k] * std::pow(s2, p / 2.0);
    vol += rule.weights[k];
  }
  return std::pow(acc / vol, 1.0 / p);
}

}  // namespace

double oscillation(const CompositeField& f, const Vec& x0, double r, const OscParams& prm) {
  if (!(r > 0.0)) throw std::invalid_argument("oscillation radius must be positive");
  if (prm.N < 0 || prm.N > CompositeField::kMaxDegree)
    throw std::invalid_argument("oscillation degree out of range");
  if (prm.mode == OscMode::exact2 && prm.p != 2.0)
    throw std::invalid_argument("exact oscillation requires p = 2");
  if (prm.p != kInfExponent && prm.p < 1.0)
    throw std::invalid_argument("oscillation exponent below 1");
  const int n = f.n();

  if (poly_only(f) && prm.p == 2.0) {
    if (prm.mode == OscMode::exact2) return polynomial_oscillation2(f.poly, x0, r, prm.N);
    // Proxy with p = 2 on a polynomial: exact quadratic form against the
    // mean polynomial.
    PolynomialField P = mean_polynomial(f, prm.N, x0, r, prm.moment_samples);
    const int D = std::max(f.poly.degree, prm.N);
    PolynomialField diff = f.poly.extended(D);
    diff.add(P.extended(D), -1.0);
    auto t = local_coeffs(diff, x0, r);
    Eigen::MatrixXd G = ball_gram(n, monomials_up_to(n, D));
    double total = 0.0;
    for (int c = 0; c < f.dim(); ++c)
      total += std::max(0.0, t[static_cast<size_t>(c)].dot(G * t[static_cast<size_t>(c)]));
    return std::sqrt(total / ball_monomial_integral(n, {0, 0, 0}));
  }

  BallRule rule = BallRule::build(n, x0, r, prm.cells, prm.subsamples);

  if (prm.mode == OscMode::proxy) {
    PolynomialField P = mean_polynomial(f, prm.N, x0, r, prm.moment_samples);
    return lp_distance(f, P, prm.p, rule);
  }

  // Least squares over degree-N polynomials in local coordinates.
  const auto basis = monomials_up_to(n, prm.N);
  const long B = static_cast<long>(basis.size());
  const size_t K = rule.nodes.size();
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(B, B);
  std::vector<Eigen::VectorXd> bs(static_cast<size_t>(f.dim()), Eigen::VectorXd::Zero(B));
  std::vector<double> f2(static_cast<size_t>(f.dim()), 0.0);
  double vol = 0.0;
  Eigen::VectorXd e(B);
  const double inv_r = 1.0 / r;
  for (size_t k = 0; k < K; ++k) {
    const Vec& pt = rule.nodes[k];
    Vec z{(pt[0] - x0[0]) * inv_r, (pt[1] - x0[1]) * inv_r, (pt[2] - x0[2]) * inv_r};
    for (long b = 0; b < B; ++b) e[b] = monomial_eval(z, basis[static_cast<size_t>(b)]);
    const double w = rule.weights[k];
    A.noalias() += w * e * e.transpose();
    for (int c = 0; c < f.dim(); ++c) {
      const double v = f.eval(pt, c);
      bs[static_cast<size_t>(c)] += (w * v) * e;
      f2[static_cast<size_t>(c)] += w * v * v;
    }
    vol += w;
  }
  Eigen::LDLT<Eigen::MatrixXd> solver(A);
  double total = 0.0;
  for (int c = 0; c < f.dim(); ++c) {
    Eigen::VectorXd cv = solver.solve(bs[static_cast<size_t>(c)]);
    total += std::max(0.0, f2[static_cast<size_t>(c)] - cv.dot(bs[static_cast<size_t>(c)]));
  }
  return std::sqrt(total / vol);
}

SeminormReport seminorm(const CompositeField& f, const SeminormParams& prm) {
  if (prm.probes.empty()) throw std::invalid_argument("seminorm needs at least one probe");
  if (prm.q != kInfExponent && prm.q < 1.0) throw std::invalid_argument("seminorm q below 1");
  if (prm.j_min > prm.j_max) throw std::invalid_argument("empty dyadic window");
  const bool grid_active = !poly_only(f);
  if (grid_active) {
    const double h = f.grid.spec.h();
    if (std::exp2(prm.j_min) < 4.0 * h)
      throw std::invalid_argument("window floor below four grid cells");
    if (std::exp2(prm.j_max) > 2.0 * f.grid.spec.half_width)
      throw std::invalid_argument("window ceiling above box extent");
  }

  SeminormReport rep;
  rep.s = prm.s;
  rep.q = prm.q;
  rep.profile.probes = prm.probes;
  rep.profile.j_min = prm.j_min;
  rep.profile.j_max = prm.j_max;
  rep.profile.p = prm.osc.p;
  rep.profile.N = prm.osc.N;

  const int W = prm.j_max - prm.j_min + 1;
  rep.per_probe.assign(prm.probes.size(), 0.0);
  rep.profile.values.assign(prm.probes.size(), std::vector<double>(static_cast<size_t>(W), 0.0));
  for (size_t pi = 0; pi < prm.probes.size(); ++pi) {
    DyadicSequence seq = DyadicSequence::zeros(prm.j_min, prm.j_max);
    for (int j = prm.j_min; j <= prm.j_max; ++j) {
      const double o = oscillation(f, prm.probes[pi], std::exp2(j), prm.osc);
      rep.profile.values[pi][static_cast<size_t>(j - prm.j_min)] = o;
      seq.values[static_cast<size_t>(j - prm.j_min)] = o;
    }
    rep.per_probe[pi] = lq_norm(seq, prm.s, prm.q);
    if (rep.per_probe[pi] > rep.value) {
      rep.value = rep.per_probe[pi];
      rep.arg_sup = static_cast<int>(pi);
    }
  }

  // Scales above the window at the worst probe.
  const Vec& worst = prm.probes[static_cast<size_t>(rep.arg_sup)];
  const double scale = std::max(rep.value, 1e-300);
  {
    TailTerm poly_tail;
    CompositeField pf = CompositeField::pure_poly(f.poly);
    const double R1 = std::exp2(prm.j_max + 1), R2 = std::exp2(prm.j_max + 2);
    const double o1 = oscillation(pf, worst, R1, prm.osc);
    if (o1 > 1e-13 * scale) {
      const double o2 = oscillation(pf, worst, R2, prm.osc);
      const double lambda = std::log2(std::max(o2, 1e-300) / o1);
      poly_tail = geometric_tail(std::exp2(-prm.s * (prm.j_max + 1)) * o1,
                                 std::exp2(lambda - prm.s), prm.q);
    }
    TailTerm grid_tail;
    if (grid_active) {
      const int n = f.n();
      const double h = f.grid.spec.h();
      double lp = 0.0;
      const double p = prm.osc.p;
      for (size_t k = 0; k < f.grid.spec.nodes(); ++k) {
        double s2 = 0.0;
        for (int c = 0; c < f.grid.dim; ++c) s2 += f.grid.at(c, k) * f.grid.at(c, k);
        if (p == kInfExponent) lp = std::max(lp, std::sqrt(s2));
        else lp += std::pow(s2, p / 2.0) * std::pow(h, n);
      }
      double first;
      double rate;  // per-step decay factor of the weighted terms
      if (p == kInfExponent) {
        // osc <= sup|g| at any radius; no decay from the measure factor.
        first = std::exp2(-prm.s * (prm.j_max + 1)) * lp;
        rate = std::exp2(-prm.s);
      } else {
        lp = std::pow(lp, 1.0 / p);
        const double omega = ball_monomial_integral(n, {0, 0, 0});
        const double R = std::exp2(prm.j_max + 1);
        first = std::exp2(-prm.s * (prm.j_max + 1)) *
                std::pow(omega, -1.0 / p) * std::pow(R, -static_cast<double>(n) / p) * lp;
        rate = std::exp2(-(prm.s + static_cast<double>(n) / p));
      }
      grid_tail = geometric_tail(first, rate, prm.q);
    }
    rep.tail_bound = poly_tail.bound + grid_tail.bound;
    rep.tail_divergent = poly_tail.divergent || grid_tail.divergent;
  }

  // Scales below the window: geometric extrapolation of the decay measured at
  // the window edge (heuristic diagnostic; rates clamped to a physical range).
  if (W >= 2) {
    const auto& vals = rep.profile.values[static_cast<size_t>(rep.arg_sup)];
    const double oa = vals[0], ob = vals[1];
    if (oa > 1e-13 * scale) {
      double nu = std::log2(std::max(ob, 1e-300) / oa);  // growth per upward step
      nu = std::clamp(nu, -8.0, 8.0);
      const double first = std::exp2(-prm.s * (prm.j_min - 1)) * oa * std::exp2(-nu);
      TailTerm head = geometric_tail(first, std::exp2(prm.s - nu), prm.q);
      rep.head_bound = head.bound;
      rep.head_divergent = head.divergent;
    }
  }
  return rep;
}

double bmo_seminorm(const CompositeField& f, const std::vector<Vec>& probes, int j_min,
                    int j_max) {
  SeminormParams prm;
  prm.s = 0.0;
  prm.q = kInfExponent;
  prm.osc.p = 2.0;
  prm.osc.N = 0;
  prm.osc.mode = OscMode::exact2;
  prm.j_min = j_min;
  prm.j_max = j_max;
  prm.probes = probes;
  return seminorm(f, prm).value;
}

HomNormReport homogeneous_norm(const CompositeField& u, const SeminormParams& prm,
                               double center_tol) {
  double c2 = 0.0;
  for (int c = 0; c < u.dim(); ++c) {
    const double v = u.eval({0.0, 0.0, 0.0}, c);
    c2 += v * v;
  }
  if (std::sqrt(c2) > center_tol) throw std::invalid_argument("not centered");

  SeminormParams sp = prm;
  sp.s = 1.0;
  sp.q = 1.0;
  sp.osc.N = 1;
  if (sp.osc.p != 2.0) sp.osc.mode = OscMode::proxy;

  HomNormReport rep;
  rep.detail = seminorm(u, sp);
  rep.seminorm_part = rep.detail.value;

  CompositeField g = gradient(u);
  double a2 = 0.0;
  for (int c = 0; c < g.poly.dim; ++c) {
    const double v = g.poly.coef_at(c, {0, 0, 0});
    a2 += v * v;
  }
  rep.anchor_part = std::sqrt(a2);
  rep.value = rep.seminorm_part + rep.anchor_part;
  return rep;
}

GrowthReport growth_check(const CompositeField& f, double s, double q, double p, int N,
                          double r_max, int rays, int samples_per_ray) {
  if (!(s >= N && s < N + 1))
    throw std::invalid_argument("growth exponent must lie in [N, N+1)");
  GrowthReport rep;
  const bool log_form = (s == static_cast<double>(N)) && q != kInfExponent && q > 1.0;
  rep.form = log_form ? "log" : "power";
  const double qp = log_form ? 1.0 - 1.0 / q : 0.0;  // 1/q'

  SeminormParams sp;
  sp.s = s;
  sp.q = q;
  sp.osc.p = p;
  sp.osc.N = N;
  sp.osc.mode = (p == 2.0) ? OscMode::exact2 : OscMode::proxy;
  if (!poly_only(f)) {
    const double h = f.grid.spec.h();
    sp.j_min = static_cast<int>(std::ceil(std::log2(4.0 * h)));
    sp.j_max = static_cast<int>(std::floor(std::log2(2.0 * f.grid.spec.half_width)));
  }
  SeminormReport sem = seminorm(f, sp);
  PolynomialField anchor = mean_polynomial(f, N, {0.0, 0.0, 0.0}, 1.0);
  double a2 = 0.0;
  for (double c : anchor.coef) a2 += c * c;
  rep.norm_value = sem.value + std::sqrt(a2);

  const int n = f.n();
  std::vector<Vec> dirs;
  if (n == 2) {
    for (int k = 0; k < rays; ++k) {
      const double th = 2.0 * 3.14159265358979323846 * k / rays;
      dirs.push_back({std::cos(th), std::sin(th), 0.0});
    }
  } else {
    for (int k = 0; k < rays; ++k) {  // Fibonacci sphere
      const double u = 2.0 * (k + 0.5) / rays - 1.0;
      const double th = 3.14159265358979323846 * (1.0 + std::sqrt(5.0)) * (k + 0.5);
      const double rr = std::sqrt(std::max(0.0, 1.0 - u * u));
      dirs.push_back({rr * std::cos(th), rr * std::sin(th), u});
    }
  }

  double c_emp = 0.0;
  double sxx = 0.0, sxy = 0.0, sx = 0.0, sy = 0.0;
  int fitted = 0;
  for (const Vec& d : dirs)
    for (int k = 0; k < samples_per_ray; ++k) {
      const double rho = r_max * std::exp2(-0.5 * k);
      Vec x{rho * d[0], rho * d[1], rho * d[2]};
      double v2 = 0.0;
      for (int c = 0; c < f.dim(); ++c) {
        const double v = f.eval(x, c);
        v2 += v * v;
      }
      const double mag = std::sqrt(v2);
      const double env = log_form
                             ? 1.0 + std::pow(std::log1p(rho), qp) * std::pow(rho, N)
                             : 1.0 + std::pow(rho, s);
      const double denom = env * (rep.norm_value > 0.0 ? rep.norm_value : 1.0);
      c_emp = std::max(c_emp, mag / denom);
      if (rho >= r_max / 8.0 && mag > 1e-14) {
        const double lx = std::log2(rho), ly = std::log2(mag);
        sxx += lx * lx;
        sxy += lx * ly;
        sx += lx;
        sy += ly;
        ++fitted;
      }
    }
  rep.c_emp = c_emp;
  if (fitted >= 2 && sxx * fitted - sx * sx > 1e-12) {
    rep.slope = (fitted * sxy - sx * sy) / (fitted * sxx - sx * sx);
  } else {
    rep.slope = 0.0;  // decayed below threshold everywhere: bounded
  }
  rep.holds = rep.slope <= s + 0.25;
  return rep;
}

EmbeddingReport lipschitz_embedding_check(const CompositeField& u, const SeminormParams& prm) {
  EmbeddingReport rep;
  CompositeField g = gradient(u);
  double sup = 0.0;
  if (g.has_grid()) {
    for (size_t k = 0; k < g.grid.spec.nodes(); ++k) {
      Vec x = g.grid.spec.node(k);
      double s2 = 0.0;
      for (int c = 0; c < g.dim(); ++c) {
        const double v = g.poly.eval(x, c) + g.grid.at(c, k);
        s2 += v * v;
      }
      sup = std::max(sup, std::sqrt(s2));
    }
  }
  double a2 = 0.0;
  for (int c = 0; c < g.poly.dim; ++c) {
    const double v = g.poly.coef_at(c, {0, 0, 0});
    a2 += v * v;
  }
  sup = std::max(sup, std::sqrt(a2));
  rep.lhs = sup;
  rep.rhs = homogeneous_norm(u, prm).value;
  rep.ratio = rep.rhs > 0.0 ? rep.lhs / rep.rhs : 0.0;
  return rep;
}

}  // namespace oscflow
