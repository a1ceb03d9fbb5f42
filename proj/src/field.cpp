#include "oscflow/field.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "oscflow/fft.hpp"
#include "oscflow/quadrature.hpp"

namespace oscflow {

int multi_norm(const MultiIndex& a) { return a[0] + a[1] + a[2]; }

double multi_factorial(const MultiIndex& a) {
  auto f = [](int k) {
    double r = 1.0;
    for (int i = 2; i <= k; ++i) r *= i;
    return r;
  };
  return f(a[0]) * f(a[1]) * f(a[2]);
}

bool multi_leq(const MultiIndex& a, const MultiIndex& b) {
  return a[0] <= b[0] && a[1] <= b[1] && a[2] <= b[2];
}

std::vector<MultiIndex> monomials_up_to(int n, int D) {
  if (n < 1 || n > 3) throw std::invalid_argument("monomials_up_to: n must be 1..3");
  if (D < 0) throw std::invalid_argument("monomials_up_to: negative degree");
  std::vector<MultiIndex> out;
  for (int d = 0; d <= D; ++d) {
    // Graded order; within a degree, lexicographic in (a0, a1, a2).
    for (int a0 = d; a0 >= 0; --a0) {
      if (n == 1) {
        if (a0 == d) out.push_back({a0, 0, 0});
        continue;
      }
      for (int a1 = d - a0; a1 >= 0; --a1) {
        int a2 = d - a0 - a1;
        if (n == 2) {
          if (a2 == 0) out.push_back({a0, a1, 0});
        } else {
          out.push_back({a0, a1, a2});
        }
      }
    }
  }
  return out;
}

double monomial_eval(const Vec& x, const MultiIndex& a) {
  double r = 1.0;
  for (int k = 0; k < 3; ++k)
    for (int i = 0; i < a[k]; ++i) r *= x[k];
  return r;
}

// ---------------------------------------------------------------------------
// GridSpec

size_t GridSpec::nodes() const {
  size_t t = 1;
  for (int k = 0; k < n; ++k) t *= static_cast<size_t>(m);
  return t;
}

Vec GridSpec::node(size_t flat) const {
  auto idx = unflat(flat);
  Vec x{0.0, 0.0, 0.0};
  for (int k = 0; k < n; ++k) x[k] = -half_width + idx[k] * h();
  return x;
}

size_t GridSpec::flat(const std::array<int, 3>& idx) const {
  // Row-major: axis 0 slowest.
  size_t f = 0;
  for (int k = 0; k < n; ++k) f = f * static_cast<size_t>(m) + static_cast<size_t>(idx[k]);
  return f;
}

std::array<int, 3> GridSpec::unflat(size_t flat) const {
  std::array<int, 3> idx{0, 0, 0};
  for (int k = n - 1; k >= 0; --k) {
    idx[k] = static_cast<int>(flat % static_cast<size_t>(m));
    flat /= static_cast<size_t>(m);
  }
  return idx;
}

void GridSpec::validate() const {
  if (n != 2 && n != 3) throw std::invalid_argument("GridSpec: n must be 2 or 3");
  if (m < 8 || (m & (m - 1)) != 0) throw std::invalid_argument("GridSpec: m must be a power of two >= 8");
  if (!(half_width > 0.0)) throw std::invalid_argument("GridSpec: half_width must be positive");
}

bool GridSpec::same_layout(const GridSpec& o) const {
  return n == o.n && m == o.m && half_width == o.half_width && mode == o.mode;
}

// ---------------------------------------------------------------------------
// PolynomialField

PolynomialField PolynomialField::zero(int n, int dim, int degree) {
  PolynomialField p;
  p.n = n;
  p.dim = dim;
  p.degree = degree;
  p.basis = monomials_up_to(n, degree);
  p.coef.assign(static_cast<size_t>(dim) * p.basis.size(), 0.0);
  return p;
}

PolynomialField PolynomialField::affine(int n, const std::array<std::array<double, 3>, 3>& A,
                                        const Vec& b) {
  PolynomialField p = zero(n, n, 1);
  for (int i = 0; i < n; ++i) {
    p.coef_ref(i, {0, 0, 0}) = b[i];
    for (int j = 0; j < n; ++j) {
      MultiIndex e{0, 0, 0};
      e[j] = 1;
      p.coef_ref(i, e) = A[i][j];
    }
  }
  return p;
}

size_t PolynomialField::index_of(const MultiIndex& a) const {
  for (size_t i = 0; i < basis.size(); ++i)
    if (basis[i] == a) return i;
  throw std::out_of_range("monomial outside basis");
}

double PolynomialField::coef_at(int comp, const MultiIndex& a) const {
  if (multi_norm(a) > degree) return 0.0;
  return coef[static_cast<size_t>(comp) * basis.size() + index_of(a)];
}

double& PolynomialField::coef_ref(int comp, const MultiIndex& a) {
  return coef[static_cast<size_t>(comp) * basis.size() + index_of(a)];
}

double PolynomialField::eval(const Vec& x, int comp) const {
  double r = 0.0;
  const size_t base = static_cast<size_t>(comp) * basis.size();
  for (size_t i = 0; i < basis.size(); ++i) {
    double c = coef[base + i];
    if (c != 0.0) r += c * monomial_eval(x, basis[i]);
  }
  return r;
}

bool PolynomialField::is_zero(double tol) const {
  for (double c : coef)
    if (std::abs(c) > tol) return false;
  return true;
}

PolynomialField PolynomialField::derivative(int axis) const {
  PolynomialField out = zero(n, dim, std::max(0, degree - 1));
  for (int c = 0; c < dim; ++c)
    for (size_t i = 0; i < basis.size(); ++i) {
      MultiIndex a = basis[i];
      if (a[axis] == 0) continue;
      double v = coef[static_cast<size_t>(c) * basis.size() + i];
      if (v == 0.0) continue;
      MultiIndex b = a;
      b[axis] -= 1;
      out.coef_ref(c, b) += v * a[axis];
    }
  return out;
}

PolynomialField PolynomialField::component(int comp) const {
  PolynomialField out = zero(n, 1, degree);
  for (size_t i = 0; i < basis.size(); ++i)
    out.coef[i] = coef[static_cast<size_t>(comp) * basis.size() + i];
  return out;
}

PolynomialField PolynomialField::shifted(const Vec& x0) const {
  // (x + x0)^a expanded by the binomial theorem per axis.
  PolynomialField out = zero(n, dim, degree);
  auto binom = [](int k, int j) {
    double r = 1.0;
    for (int i = 0; i < j; ++i) r = r * (k - i) / (i + 1);
    return r;
  };
  for (int c = 0; c < dim; ++c)
    for (size_t i = 0; i < basis.size(); ++i) {
      double v = coef[static_cast<size_t>(c) * basis.size() + i];
      if (v == 0.0) continue;
      const MultiIndex a = basis[i];
      for (int b0 = 0; b0 <= a[0]; ++b0)
        for (int b1 = 0; b1 <= a[1]; ++b1)
          for (int b2 = 0; b2 <= a[2]; ++b2) {
            double w = v * binom(a[0], b0) * binom(a[1], b1) * binom(a[2], b2) *
                       std::pow(x0[0], a[0] - b0) * std::pow(x0[1], a[1] - b1) *
                       std::pow(x0[2], a[2] - b2);
            out.coef_ref(c, {b0, b1, b2}) += w;
          }
    }
  return out;
}

PolynomialField PolynomialField::extended(int new_degree) const {
  if (new_degree < degree) throw std::invalid_argument("extended: cannot lower degree");
  PolynomialField out = zero(n, dim, new_degree);
  for (int c = 0; c < dim; ++c)
    for (size_t i = 0; i < basis.size(); ++i)
      out.coef_ref(c, basis[i]) = coef[static_cast<size_t>(c) * basis.size() + i];
  return out;
}

void PolynomialField::scale(double c) {
  for (double& v : coef) v *= c;
}

void PolynomialField::add(const PolynomialField& other, double weight) {
  if (other.n != n || other.dim != dim) throw std::invalid_argument("poly add: layout mismatch");
  if (other.degree == degree) {
    for (size_t i = 0; i < coef.size(); ++i) coef[i] += weight * other.coef[i];
    return;
  }
  if (other.degree > degree) throw std::invalid_argument("poly add: degree grows; extend first");
  for (int c = 0; c < dim; ++c)
    for (size_t i = 0; i < other.basis.size(); ++i)
      coef_ref(c, other.basis[i]) += weight * other.coef[static_cast<size_t>(c) * other.basis.size() + i];
}

PolynomialField PolynomialField::product(const PolynomialField& a, const PolynomialField& b) {
  if (a.n != b.n || a.dim != 1 || b.dim != 1)
    throw std::invalid_argument("poly product expects scalar factors");
  PolynomialField out = zero(a.n, 1, a.degree + b.degree);
  for (size_t i = 0; i < a.basis.size(); ++i) {
    if (a.coef[i] == 0.0) continue;
    for (size_t j = 0; j < b.basis.size(); ++j) {
      if (b.coef[j] == 0.0) continue;
      MultiIndex s{a.basis[i][0] + b.basis[j][0], a.basis[i][1] + b.basis[j][1],
                   a.basis[i][2] + b.basis[j][2]};
      out.coef_ref(0, s) += a.coef[i] * b.coef[j];
    }
  }
  return out;
}

Vec PolynomialField::constant_part() const {
  Vec b{0.0, 0.0, 0.0};
  for (int c = 0; c < dim && c < 3; ++c) b[c] = coef_at(c, {0, 0, 0});
  return b;
}

std::array<std::array<double, 3>, 3> PolynomialField::gradient_matrix() const {
  std::array<std::array<double, 3>, 3> A{};
  for (int i = 0; i < dim && i < 3; ++i)
    for (int j = 0; j < n; ++j) {
      MultiIndex e{0, 0, 0};
      e[j] = 1;
      A[i][j] = coef_at(i, e);
    }
  return A;
}

double PolynomialField::top_magnitude(int d) const {
  double m = 0.0;
  for (int c = 0; c < dim; ++c)
    for (size_t i = 0; i < basis.size(); ++i)
      if (multi_norm(basis[i]) == d)
        m = std::max(m, std::abs(coef[static_cast<size_t>(c) * basis.size() + i]));
  return m;
}

void PolynomialField::validate() const {
  if (n < 1 || n > 3 || dim < 1) throw std::invalid_argument("poly: bad shape");
  if (coef.size() != static_cast<size_t>(dim) * basis.size())
    throw std::invalid_argument("poly: coefficient storage mismatch");
  for (double c : coef)
    if (std::isnan(c)) throw std::invalid_argument("poly: NaN coefficient");
}

// ---------------------------------------------------------------------------
// GridField

GridField GridField::zero(const GridSpec& spec, int dim) {
  spec.validate();
  GridField g;
  g.spec = spec;
  g.dim = dim;
  g.data.assign(static_cast<size_t>(dim) * spec.nodes(), 0.0);
  return g;
}

GridField GridField::sample(const GridSpec& spec, int dim,
                            const std::function<double(const Vec&, int)>& fn) {
  GridField g = zero(spec, dim);
  const size_t nn = spec.nodes();
  for (size_t f = 0; f < nn; ++f) {
    Vec x = spec.node(f);
    for (int c = 0; c < dim; ++c) g.ref(c, f) = fn(x, c);
  }
  return g;
}

namespace {

// 4-point Lagrange weights at fractional offset t in [0,1) from node `base`.
inline void cubic_weights(double t, double w[4]) {
  w[0] = -t * (t - 1.0) * (t - 2.0) / 6.0;
  w[1] = (t * t - 1.0) * (t - 2.0) / 2.0;
  w[2] = -t * (t + 1.0) * (t - 2.0) / 2.0;
  w[3] = t * (t * t - 1.0) / 6.0;
}

}  // namespace

double GridField::interp(const Vec& x, int comp) const {
  const int n = spec.n;
  const int m = spec.m;
  const double h = spec.h();
  const bool periodic = spec.mode == BoundaryMode::periodic;

  int base[3] = {0, 0, 0};
  double w[3][4];
  for (int k = 0; k < n; ++k) {
    double u = (x[k] + spec.half_width) / h;
    if (periodic) {
      u -= std::floor(u / m) * m;  // wrap into [0, m)
    } else if (x[k] < -spec.half_width || x[k] >= spec.half_width) {
      return 0.0;  // compact: zero outside the box
    }
    double fl = std::floor(u);
    base[k] = static_cast<int>(fl);
    double t = u - fl;
    cubic_weights(t, w[k]);
  }

  double acc = 0.0;
  const int ly = (n >= 2) ? 4 : 1, lz = (n >= 3) ? 4 : 1;
  for (int a = 0; a < 4; ++a) {
    int ia = base[0] + a - 1;
    if (periodic) ia = ((ia % m) + m) % m;
    else if (ia < 0 || ia >= m) continue;
    for (int b = 0; b < ly; ++b) {
      int ib = 0;
      double wab = w[0][a];
      if (n >= 2) {
        ib = base[1] + b - 1;
        if (periodic) ib = ((ib % m) + m) % m;
        else if (ib < 0 || ib >= m) continue;
        wab *= w[1][b];
      }
      for (int c = 0; c < lz; ++c) {
        int ic = 0;
        double wv = wab;
        if (n >= 3) {
          ic = base[2] + c - 1;
          if (periodic) ic = ((ic % m) + m) % m;
          else if (ic < 0 || ic >= m) continue;
          wv *= w[2][c];
        }
        acc += wv * at(comp, spec.flat({ia, ib, ic}));
      }
    }
  }
  return acc;
}

double GridField::max_abs() const {
  double m = 0.0;
  for (double v : data) m = std::max(m, std::abs(v));
  return m;
}

double GridField::l2() const {
  long double acc = 0.0L;
  for (double v : data) acc += static_cast<long double>(v) * v;
  return std::sqrt(static_cast<double>(acc) * std::pow(spec.h(), spec.n));
}

double GridField::margin_max(int cells) const {
  double m = 0.0;
  const size_t nn = spec.nodes();
  for (size_t f = 0; f < nn; ++f) {
    auto idx = spec.unflat(f);
    bool margin = false;
    for (int k = 0; k < spec.n; ++k)
      if (idx[k] < cells || idx[k] >= spec.m - cells) margin = true;
    if (!margin) continue;
    for (int c = 0; c < dim; ++c) m = std::max(m, std::abs(at(c, f)));
  }
  return m;
}

void GridField::zero_margin(int cells) {
  const size_t nn = spec.nodes();
  for (size_t f = 0; f < nn; ++f) {
    auto idx = spec.unflat(f);
    bool margin = false;
    for (int k = 0; k < spec.n; ++k)
      if (idx[k] < cells || idx[k] >= spec.m - cells) margin = true;
    if (!margin) continue;
    for (int c = 0; c < dim; ++c) ref(c, f) = 0.0;
  }
}

void GridField::validate() const {
  spec.validate();
  if (dim < 1) throw std::invalid_argument("grid: dim must be positive");
  if (data.size() != static_cast<size_t>(dim) * spec.nodes())
    throw std::invalid_argument("grid: sample storage mismatch");
  for (double v : data)
    if (std::isnan(v)) throw std::invalid_argument("grid: NaN sample");
}

// ---------------------------------------------------------------------------
// CompositeField

CompositeField CompositeField::pure_poly(const PolynomialField& p) {
  CompositeField f;
  f.poly = p;
  return f;
}

CompositeField CompositeField::pure_grid(const GridField& g) {
  CompositeField f;
  f.poly = PolynomialField::zero(g.spec.n, g.dim, 0);
  f.grid = g;
  return f;
}

CompositeField CompositeField::make(const PolynomialField& p, const GridField& g) {
  CompositeField f;
  f.poly = p;
  f.grid = g;
  f.validate();
  return f;
}

CompositeField CompositeField::zero(int n, int dim, const GridSpec& spec) {
  CompositeField f;
  f.poly = PolynomialField::zero(n, dim, 0);
  f.grid = GridField::zero(spec, dim);
  return f;
}

double CompositeField::eval(const Vec& x, int comp) const {
  double r = poly.eval(x, comp);
  if (has_grid()) r += grid.interp(x, comp);
  return r;
}

Vec CompositeField::eval_vec(const Vec& x) const {
  Vec v{0.0, 0.0, 0.0};
  for (int c = 0; c < dim() && c < 3; ++c) v[c] = eval(x, c);
  return v;
}

CompositeField CompositeField::component(int comp) const {
  CompositeField f;
  f.poly = poly.component(comp);
  if (has_grid()) {
    f.grid = GridField::zero(grid.spec, 1);
    const size_t nn = grid.spec.nodes();
    for (size_t i = 0; i < nn; ++i) f.grid.ref(0, i) = grid.at(comp, i);
  }
  return f;
}

void CompositeField::scale(double c) {
  poly.scale(c);
  for (double& v : grid.data) v *= c;
}

void CompositeField::add(const CompositeField& other, double weight) {
  if (other.poly.degree > poly.degree) poly = poly.extended(other.poly.degree);
  poly.add(other.poly, weight);
  if (other.has_grid()) {
    if (!has_grid()) grid = GridField::zero(other.grid.spec, other.grid.dim);
    if (!grid.spec.same_layout(other.grid.spec))
      throw std::invalid_argument("composite add: grid layout mismatch");
    for (size_t i = 0; i < grid.data.size(); ++i) grid.data[i] += weight * other.grid.data[i];
  }
}

void CompositeField::validate(bool require_margin) const {
  poly.validate();
  if (poly.degree > kMaxDegree)
    throw std::invalid_argument("composite: polynomial degree exceeds 2");
  if (has_grid()) {
    grid.validate();
    if (grid.dim != poly.dim) throw std::invalid_argument("composite: dim mismatch");
    if (grid.spec.n != poly.n) throw std::invalid_argument("composite: dimension mismatch");
    if (grid.spec.mode == BoundaryMode::periodic && poly.degree > 0 && poly.top_magnitude(1) + poly.top_magnitude(2) > 0.0)
      throw std::invalid_argument("composite: periodic fields admit constant polynomial part only");
    if (require_margin && grid.spec.mode == BoundaryMode::compact && grid.margin_max(2) != 0.0)
      throw std::invalid_argument("composite: compact grid must have a two-cell zero margin");
  }
}

// ---------------------------------------------------------------------------
// Derivatives

GridField grid_derivative(const GridField& g, int axis) {
  if (g.spec.mode == BoundaryMode::periodic) return spectral_derivative(g, axis);
  // 4th-order centered stencil with zero extension.
  GridField out = GridField::zero(g.spec, g.dim);
  const int m = g.spec.m;
  const double ih = 1.0 / (12.0 * g.spec.h());
  const size_t nn = g.spec.nodes();
  for (int c = 0; c < g.dim; ++c)
    for (size_t f = 0; f < nn; ++f) {
      auto idx = g.spec.unflat(f);
      auto shifted_value = [&](int d) -> double {
        int v = idx[axis] + d;
        if (v < 0 || v >= m) return 0.0;
        auto j = idx;
        j[axis] = v;
        return g.at(c, g.spec.flat(j));
      };
      out.ref(c, f) = (-shifted_value(2) + 8.0 * shifted_value(1) - 8.0 * shifted_value(-1) +
                       shifted_value(-2)) * ih;
    }
  return out;
}

CompositeField gradient(const CompositeField& f) {
  f.validate();
  const int n = f.n(), d = f.dim();
  CompositeField out;
  out.poly = PolynomialField::zero(n, d * n, std::max(0, f.poly.degree - 1));
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < n; ++j) {
      PolynomialField dj = f.poly.component(i).derivative(j);
      for (size_t b = 0; b < dj.basis.size(); ++b)
        out.poly.coef_ref(i * n + j, dj.basis[b]) = dj.coef[b];
    }
  if (f.has_grid()) {
    out.grid = GridField::zero(f.grid.spec, d * n);
    for (int i = 0; i < d; ++i) {
      GridField gi = GridField::zero(f.grid.spec, 1);
      const size_t nn = f.grid.spec.nodes();
      for (size_t k = 0; k < nn; ++k) gi.ref(0, k) = f.grid.at(i, k);
      for (int j = 0; j < n; ++j) {
        GridField dg = grid_derivative(gi, j);
        for (size_t k = 0; k < nn; ++k) out.grid.ref(i * n + j, k) = dg.at(0, k);
      }
    }
  }
  return out;
}

CompositeField divergence(const CompositeField& f) {
  if (f.dim() != f.n()) throw std::invalid_argument("divergence needs dim == n");
  CompositeField g = gradient(f);
  const int n = f.n();
  CompositeField out;
  out.poly = PolynomialField::zero(n, 1, g.poly.degree);
  for (int i = 0; i < n; ++i) {
    PolynomialField c = g.poly.component(i * n + i);
    out.poly.add(c);
  }
  if (g.has_grid()) {
    out.grid = GridField::zero(g.grid.spec, 1);
    const size_t nn = g.grid.spec.nodes();
    for (int i = 0; i < n; ++i)
      for (size_t k = 0; k < nn; ++k) out.grid.ref(0, k) += g.grid.at(i * n + i, k);
  }
  return out;
}

CompositeField vorticity(const CompositeField& f) {
  if (f.dim() != f.n()) throw std::invalid_argument("vorticity needs dim == n");
  CompositeField g = gradient(f);
  const int n = f.n();
  auto entry = [&](int i, int j) { return i * n + j; };
  int outdim = (n == 2) ? 1 : 3;
  CompositeField out;
  out.poly = PolynomialField::zero(n, outdim, g.poly.degree);
  auto assign_poly = [&](int oc, int a, int b) {
    // omega_oc = d_a f_b - d_b f_a
    PolynomialField p = g.poly.component(entry(b, a));
    p.add(g.poly.component(entry(a, b)), -1.0);
    for (size_t i = 0; i < p.basis.size(); ++i) out.poly.coef_ref(oc, p.basis[i]) += p.coef[i];
  };
  if (n == 2) {
    assign_poly(0, 0, 1);  // d_1 f_2 - d_2 f_1
  } else {
    assign_poly(0, 1, 2);
    assign_poly(1, 2, 0);
    assign_poly(2, 0, 1);
  }
  if (g.has_grid()) {
    out.grid = GridField::zero(g.grid.spec, outdim);
    const size_t nn = g.grid.spec.nodes();
    auto assign_grid = [&](int oc, int a, int b) {
      for (size_t k = 0; k < nn; ++k)
        out.grid.ref(oc, k) += g.grid.at(entry(b, a), k) - g.grid.at(entry(a, b), k);
    };
    if (n == 2) {
      assign_grid(0, 0, 1);
    } else {
      assign_grid(0, 1, 2);
      assign_grid(1, 2, 0);
      assign_grid(2, 0, 1);
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Mollification and products

CompositeField mollify(const CompositeField& f, double eps) {
  f.validate();
  if (f.has_grid() && eps < 2.0 * f.grid.spec.h() - 1e-12)
    throw std::invalid_argument("mollify: eps must be at least two cells");
  const int n = f.n();
  const Mollifier& phi = Mollifier::get(n);

  CompositeField out;
  // Degree <= 2 shifts exactly: P * phi_eps = P + (eps^2 m2 / 2) Lap P.
  out.poly = f.poly;
  if (f.poly.degree >= 2) {
    PolynomialField lap = PolynomialField::zero(n, f.dim(), 0);
    for (int k = 0; k < n; ++k) {
      PolynomialField d2 = f.poly.derivative(k).derivative(k);
      for (int c = 0; c < f.dim(); ++c) lap.coef_ref(c, {0, 0, 0}) += d2.coef_at(c, {0, 0, 0});
    }
    out.poly.add(lap.extended(out.poly.degree), 0.5 * eps * eps * phi.m2());
  }

  if (f.has_grid()) {
    // Discrete renormalization keeps constants exact under convolution.
    const GridSpec& spec = f.grid.spec;
    const double h = spec.h();
    double mass = 0.0;
    {
      // Lattice sum of the scaled bump: mass -> 1 as h/eps -> 0, and dividing
      // by it keeps the discrete convolution exactly mean-preserving.
      int reach = static_cast<int>(std::ceil(eps / h)) + 1;
      Vec z{0.0, 0.0, 0.0};
      const int rz = (n == 3) ? reach : 0;
      for (int a = -reach; a <= reach; ++a)
        for (int b = -reach; b <= reach; ++b)
          for (int c = -rz; c <= rz; ++c) {
            z = {a * h / eps, b * h / eps, (n == 3) ? c * h / eps : 0.0};
            mass += phi.value(z);
          }
      mass *= std::pow(h / eps, n);
    }
    const double inv_mass = 1.0 / mass;
    auto kernel = [&](const Vec& y) {
      Vec z{y[0] / eps, y[1] / eps, y[2] / eps};
      return phi.value(z) * inv_mass / std::pow(eps, n);
    };
    // kernel * h^n sums to one exactly on the lattice by construction.
    if (spec.mode == BoundaryMode::periodic) {
      out.grid = convolve(f.grid, kernel);
    } else {
      GridField padded = pad_double(f.grid);
      GridField conv = convolve(padded, kernel);
      out.grid = restrict_half(conv, spec);
    }
  }
  return out;
}

CompositeField tensor_product(const CompositeField& a, const CompositeField& b) {
  if (a.n() != b.n()) throw std::invalid_argument("tensor_product: dimension mismatch");
  const int n = a.n(), da = a.dim(), db = b.dim();
  const bool grid_out = a.has_grid() || b.has_grid();
  GridSpec spec = a.has_grid() ? a.grid.spec : b.grid.spec;
  if (a.has_grid() && b.has_grid() && !a.grid.spec.same_layout(b.grid.spec))
    throw std::invalid_argument("tensor_product: grid layout mismatch");

  CompositeField out;
  out.poly = PolynomialField::zero(n, da * db, std::min(a.poly.degree + b.poly.degree, 4));
  for (int i = 0; i < da; ++i)
    for (int j = 0; j < db; ++j) {
      PolynomialField pij = PolynomialField::product(a.poly.component(i), b.poly.component(j));
      for (size_t k = 0; k < pij.basis.size(); ++k)
        out.poly.coef_ref(i * db + j, pij.basis[k]) += pij.coef[k];
    }
  if (grid_out) {
    out.grid = GridField::zero(spec, da * db);
    const size_t nn = spec.nodes();
    for (size_t f = 0; f < nn; ++f) {
      Vec x = spec.node(f);
      for (int i = 0; i < da; ++i) {
        double pa = a.poly.eval(x, i);
        double ga = a.has_grid() ? a.grid.at(i, f) : 0.0;
        for (int j = 0; j < db; ++j) {
          double pb = b.poly.eval(x, j);
          double gb = b.has_grid() ? b.grid.at(j, f) : 0.0;
          // (pa+ga)(pb+gb) - pa*pb: every term with a sampled factor.
          out.grid.ref(i * db + j, f) = pa * gb + ga * pb + ga * gb;
        }
      }
    }
  }
  return out;
}

GridField resample(const GridField& g, const Vec& shift) {
  GridField out = GridField::zero(g.spec, g.dim);
  const size_t nn = g.spec.nodes();
  for (size_t f = 0; f < nn; ++f) {
    Vec x = g.spec.node(f);
    Vec y{x[0] + shift[0], x[1] + shift[1], x[2] + shift[2]};
    for (int c = 0; c < g.dim; ++c) out.ref(c, f) = g.interp(y, c);
  }
  return out;
}

}  // namespace oscflow
