#include "oscflow/quadrature.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>

namespace oscflow {

namespace {
constexpr double kPi = 3.14159265358979323846;

// Evaluation lattice sizes for the one-off mollifier constants.
int moment_resolution(int n) { return n == 2 ? 512 : 128; }
}  // namespace

double integrate_cube(int n, double s, int q_per_axis,
                      const std::function<double(const Vec&)>& fn) {
  if (n < 1 || n > 3) throw std::invalid_argument("integrate_cube: n must be 1..3");
  const double h = 2.0 * s / q_per_axis;
  const double w = std::pow(h, n);
  double acc = 0.0;
  Vec z{0.0, 0.0, 0.0};
  const int qy = n >= 2 ? q_per_axis : 1;
  const int qz = n >= 3 ? q_per_axis : 1;
  for (int i = 0; i < q_per_axis; ++i) {
    z[0] = -s + (i + 0.5) * h;
    for (int j = 0; j < qy; ++j) {
      if (n >= 2) z[1] = -s + (j + 0.5) * h;
      for (int k = 0; k < qz; ++k) {
        if (n >= 3) z[2] = -s + (k + 0.5) * h;
        acc += fn(z);
      }
    }
  }
  return acc * w;
}

double ball_volume(int n, double r) {
  if (n == 2) return kPi * r * r;
  if (n == 3) return 4.0 / 3.0 * kPi * r * r * r;
  throw std::invalid_argument("ball_volume: n must be 2 or 3");
}

Mollifier::Mollifier(int n) : n_(n) {
  if (n < 1 || n > 3) throw std::invalid_argument("Mollifier: n must be 1..3");
  double raw = integrate_cube(n, 1.0, moment_resolution(n), [this](const Vec& z) {
    double rho = z[0] * z[0] + z[1] * z[1] + z[2] * z[2];
    return unnormalized(rho);
  });
  normalization_ = 1.0 / raw;
}

const Mollifier& Mollifier::get(int n) {
  static std::mutex mu;
  static std::map<int, Mollifier*> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, new Mollifier(n)).first;
  return *it->second;
}

double Mollifier::unnormalized(double rho) const {
  if (rho >= 1.0 - 1e-14) return 0.0;
  return std::exp(-1.0 / (1.0 - rho));
}

double Mollifier::value(const Vec& z) const {
  double rho = z[0] * z[0] + z[1] * z[1] + z[2] * z[2];
  return normalization_ * unnormalized(rho);
}

double Mollifier::derivative(const Vec& z, const MultiIndex& alpha) const {
  const int order = multi_norm(alpha);
  double rho = z[0] * z[0] + z[1] * z[1] + z[2] * z[2];
  if (order == 0) return value(z);
  if (rho >= 1.0 - 1e-12) return 0.0;
  const double phi = normalization_ * unnormalized(rho);
  const double s = 1.0 / (1.0 - rho);
  // w = -1/(1-rho): d_k w = -2 z_k s^2, d_l d_k w = -2 delta_kl s^2 - 8 z_k z_l s^3.
  if (order == 1) {
    for (int k = 0; k < 3; ++k)
      if (alpha[k] == 1) return phi * (-2.0 * z[k] * s * s);
  }
  if (order == 2) {
    int k = -1, l = -1;
    for (int a = 0; a < 3; ++a) {
      if (alpha[a] == 2) { k = l = a; }
      if (alpha[a] == 1) { (k < 0 ? k : l) = a; }
    }
    double wk = -2.0 * z[k] * s * s;
    double wl = -2.0 * z[l] * s * s;
    double wkl = (k == l ? -2.0 * s * s : 0.0) - 8.0 * z[k] * z[l] * s * s * s;
    return phi * (wk * wl + wkl);
  }
  throw std::invalid_argument("Mollifier::derivative supports |alpha| <= 2");
}

double Mollifier::moment(const MultiIndex& gamma) const {
  for (int k = 0; k < 3; ++k)
    if (gamma[k] % 2 == 1) return 0.0;  // odd moments vanish by symmetry
  for (const auto& kv : moment_cache_)
    if (kv.first == gamma) return kv.second;
  double m = integrate_cube(n_, 1.0, moment_resolution(n_), [this, &gamma](const Vec& z) {
    return monomial_eval(z, gamma) * value(z);
  });
  moment_cache_.emplace_back(gamma, m);
  return m;
}

double Mollifier::m2() const { return moment({2, 0, 0}); }

double BallRule::volume() const {
  double v = 0.0;
  for (double w : weights) v += w;
  return v;
}

double BallRule::apply(const std::function<double(const Vec&)>& fn) const {
  double acc = 0.0;
  for (size_t i = 0; i < nodes.size(); ++i) acc += weights[i] * fn(nodes[i]);
  return acc;
}

BallRule BallRule::build(int n, const Vec& x0, double r, int cells_per_diameter,
                         int subsamples_per_axis) {
  if (n < 2 || n > 3) throw std::invalid_argument("BallRule: n must be 2 or 3");
  if (cells_per_diameter < 4) throw std::invalid_argument("BallRule: too coarse");
  const int q = cells_per_diameter;
  const double h = 2.0 * r / q;
  const double cell = std::pow(h, n);
  const double r2 = r * r;
  const int sub = subsamples_per_axis;
  const double sh = h / sub;

  // A cell is classified by its center-to-center distance band: fully inside,
  // fully outside, or straddling the sphere (center within half a cell
  // diagonal of the boundary), where the subgrid fraction kicks in.
  const double half_diag = 0.5 * h * std::sqrt(static_cast<double>(n));

  BallRule rule;
  const int qy = q, qz = (n == 3) ? q : 1;
  Vec c{0.0, 0.0, 0.0};
  for (int i = 0; i < q; ++i) {
    c[0] = x0[0] - r + (i + 0.5) * h;
    for (int j = 0; j < qy; ++j) {
      c[1] = x0[1] - r + (j + 0.5) * h;
      for (int k = 0; k < qz; ++k) {
        if (n == 3) c[2] = x0[2] - r + (k + 0.5) * h;
        double dx = c[0] - x0[0], dy = c[1] - x0[1], dz = (n == 3) ? c[2] - x0[2] : 0.0;
        double d = std::sqrt(dx * dx + dy * dy + dz * dz);
        if (d <= r - half_diag) {
          rule.nodes.push_back(c);
          rule.weights.push_back(cell);
          continue;
        }
        if (d >= r + half_diag) continue;
        long inside = 0;
        Vec p{0.0, 0.0, 0.0};
        const int sz = (n == 3) ? sub : 1;
        for (int a = 0; a < sub; ++a) {
          p[0] = c[0] - 0.5 * h + (a + 0.5) * sh;
          for (int b = 0; b < sub; ++b) {
            p[1] = c[1] - 0.5 * h + (b + 0.5) * sh;
            for (int cc = 0; cc < sz; ++cc) {
              if (n == 3) p[2] = c[2] - 0.5 * h + (cc + 0.5) * sh;
              double ex = p[0] - x0[0], ey = p[1] - x0[1], ez = (n == 3) ? p[2] - x0[2] : 0.0;
              if (ex * ex + ey * ey + ez * ez < r2) ++inside;
            }
          }
        }
        if (inside == 0) continue;
        double frac = static_cast<double>(inside) / (static_cast<double>(sub) * sub * sz);
        rule.nodes.push_back(c);
        rule.weights.push_back(cell * frac);
      }
    }
  }
  return rule;
}

}  // namespace oscflow
