#pragma once

#include <array>
#include <functional>
#include <vector>

namespace oscflow {

// Points and multi-indices live in at most three dimensions; the first n
// entries are meaningful, the rest stay zero.
using Vec = std::array<double, 3>;
using MultiIndex = std::array<int, 3>;

int multi_norm(const MultiIndex& a);
double multi_factorial(const MultiIndex& a);
bool multi_leq(const MultiIndex& a, const MultiIndex& b);  // componentwise
// Monomials of total degree <= D in n variables, graded order, stable across
// calls; this ordering is the storage layout for polynomial coefficients.
std::vector<MultiIndex> monomials_up_to(int n, int D);
double monomial_eval(const Vec& x, const MultiIndex& a);

enum class BoundaryMode { compact, periodic };

// Uniform node lattice x_k = -L + k h on [-L, L)^n, h = 2L/m. m is a power of
// two (>= 8) so the origin is a node and FFT sizes stay friendly.
struct GridSpec {
  int n = 2;
  int m = 64;
  double half_width = 8.0;
  BoundaryMode mode = BoundaryMode::compact;

  double h() const { return 2.0 * half_width / m; }
  size_t nodes() const;
  Vec node(size_t flat) const;
  size_t flat(const std::array<int, 3>& idx) const;
  std::array<int, 3> unflat(size_t flat) const;
  void validate() const;
  bool same_layout(const GridSpec& o) const;
};

// Dense polynomial with `dim` output components over the monomial basis of
// degree <= degree. Coefficients are global (centered at the origin).
struct PolynomialField {
  int n = 2;
  int dim = 1;
  int degree = 0;
  std::vector<MultiIndex> basis;
  std::vector<double> coef;  // [dim][basis.size()]

  static PolynomialField zero(int n, int dim, int degree);
  // Affine field A x + b with dim = n.
  static PolynomialField affine(int n, const std::array<std::array<double, 3>, 3>& A,
                                const Vec& b);

  size_t index_of(const MultiIndex& a) const;
  double coef_at(int comp, const MultiIndex& a) const;
  double& coef_ref(int comp, const MultiIndex& a);
  double eval(const Vec& x, int comp) const;
  bool is_zero(double tol = 0.0) const;

  PolynomialField derivative(int axis) const;
  PolynomialField component(int comp) const;
  // Q(x) = P(x + x0): exact recentering.
  PolynomialField shifted(const Vec& x0) const;
  PolynomialField extended(int new_degree) const;

  void scale(double c);
  void add(const PolynomialField& other, double weight = 1.0);  // same layout required
  // Componentwise product of two scalar polynomials; degree adds (capped by caller).
  static PolynomialField product(const PolynomialField& a, const PolynomialField& b);

  // Degree <= 1 structure: constant part and gradient matrix G_ij = d_j P_i.
  Vec constant_part() const;
  std::array<std::array<double, 3>, 3> gradient_matrix() const;
  // Max |coef| over the part of total degree exactly d.
  double top_magnitude(int d) const;

  void validate() const;
};

// Samples on a GridSpec lattice; compactly supported in compact mode (zero
// outside the box, with a two-cell zero margin expected of constructed data
// fields; solver outputs may carry small decaying boundary values).
struct GridField {
  GridSpec spec;
  int dim = 1;
  std::vector<double> data;  // [dim][spec.nodes()]

  static GridField zero(const GridSpec& spec, int dim);
  static GridField sample(const GridSpec& spec, int dim,
                          const std::function<double(const Vec&, int)>& fn);

  bool empty() const { return data.empty(); }
  double at(int comp, size_t flat) const { return data[static_cast<size_t>(comp) * spec.nodes() + flat]; }
  double& ref(int comp, size_t flat) { return data[static_cast<size_t>(comp) * spec.nodes() + flat]; }

  // Tensor-product 4-point (cubic) interpolation; zero extension outside the
  // box in compact mode, periodic wrap otherwise.
  double interp(const Vec& x, int comp) const;

  double max_abs() const;
  double l2() const;  // sqrt(h^n sum f^2)
  // Largest |sample| within `cells` of the boundary (compact mode).
  double margin_max(int cells = 2) const;
  void zero_margin(int cells = 2);
  void validate() const;
};

// Explicit polynomial part plus compactly supported sampled part. The split
// is the data structure behind every norm, potential, and transport routine
// here: the polynomial carries the growth at infinity, the grid carries the
// local detail.
struct CompositeField {
  PolynomialField poly;
  GridField grid;  // may be empty

  int n() const { return poly.n; }
  int dim() const { return poly.dim; }
  bool has_grid() const { return !grid.empty(); }

  static CompositeField pure_poly(const PolynomialField& p);
  static CompositeField pure_grid(const GridField& g);
  static CompositeField make(const PolynomialField& p, const GridField& g);
  static CompositeField zero(int n, int dim, const GridSpec& spec);

  double eval(const Vec& x, int comp) const;
  Vec eval_vec(const Vec& x) const;  // dim == n
  CompositeField component(int comp) const;

  void scale(double c);
  void add(const CompositeField& other, double weight = 1.0);

  // Max polynomial degree accepted by validate(); pressure-type fields are
  // quadratic, velocities affine.
  static constexpr int kMaxDegree = 2;
  void validate(bool require_margin = false) const;
};

// Derivatives: exact on the polynomial part; 4th-order centered differences
// with zero extension in compact mode, spectral in periodic mode.
CompositeField gradient(const CompositeField& f);    // dim -> dim*n, entry i*n+j = d_j f_i
CompositeField divergence(const CompositeField& f);  // dim == n -> scalar
CompositeField vorticity(const CompositeField& f);   // n=2: scalar; n=3: 3 components

// Mollification by the standard bump at scale eps (eps >= 2h): exact
// degree-preserving shift on the polynomial part, discrete convolution with
// the renormalized sampled bump on the grid part.
CompositeField mollify(const CompositeField& f, double eps);

// Pointwise product of scalar components a_i * b_j laid out i*b.dim + j.
// Polynomial x polynomial stays polynomial; every term involving a grid part
// lands on the grid (the product of a polynomial with a compactly supported
// sample is compactly supported).
CompositeField tensor_product(const CompositeField& a, const CompositeField& b);

GridField grid_derivative(const GridField& g, int axis);
GridField resample(const GridField& g, const Vec& shift);  // g(x + shift)

}  // namespace oscflow
