#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include "oscflow/fft.hpp"
#include "oscflow/field.hpp"
#include "oscflow/quadrature.hpp"

using namespace oscflow;

namespace {

GridSpec spec2(int m = 64, double L = 8.0, BoundaryMode mode = BoundaryMode::compact) {
  GridSpec s;
  s.n = 2;
  s.m = m;
  s.half_width = L;
  s.mode = mode;
  return s;
}

double bump(const Vec& x, double sigma = 1.5) {
  double r2 = x[0] * x[0] + x[1] * x[1] + x[2] * x[2];
  return std::exp(-r2 / (2.0 * sigma * sigma));
}

Vec rand_point(std::mt19937_64& rng, double R) {
  std::uniform_real_distribution<double> u(-R, R);
  return {u(rng), u(rng), 0.0};
}

}  // namespace

TEST_CASE("monomial bases enumerate the expected layouts") {
  auto b2 = monomials_up_to(2, 2);
  REQUIRE(b2.size() == 6);
  CHECK(b2[0] == MultiIndex{0, 0, 0});
  CHECK(b2[1] == MultiIndex{1, 0, 0});
  CHECK(b2[2] == MultiIndex{0, 1, 0});
  CHECK(b2[3] == MultiIndex{2, 0, 0});
  CHECK(b2[4] == MultiIndex{1, 1, 0});
  CHECK(b2[5] == MultiIndex{0, 2, 0});
  CHECK(monomials_up_to(3, 2).size() == 10);
  CHECK(monomials_up_to(3, 1).size() == 4);
}

TEST_CASE("polynomial algebra: eval, derivative, shift, product") {
  PolynomialField p = PolynomialField::zero(2, 1, 2);
  // p = 3 + 2 x1 - x2 + 0.5 x1^2 - 4 x1 x2 + x2^2
  p.coef_ref(0, {0, 0, 0}) = 3.0;
  p.coef_ref(0, {1, 0, 0}) = 2.0;
  p.coef_ref(0, {0, 1, 0}) = -1.0;
  p.coef_ref(0, {2, 0, 0}) = 0.5;
  p.coef_ref(0, {1, 1, 0}) = -4.0;
  p.coef_ref(0, {0, 2, 0}) = 1.0;

  Vec x{1.25, -0.75, 0.0};
  double direct = 3.0 + 2.0 * 1.25 + 0.75 + 0.5 * 1.25 * 1.25 + 4.0 * 1.25 * 0.75 + 0.5625;
  CHECK(p.eval(x, 0) == doctest::Approx(direct).epsilon(1e-14));

  PolynomialField d0 = p.derivative(0);  // 2 + x1 - 4 x2
  CHECK(d0.eval(x, 0) == doctest::Approx(2.0 + 1.25 + 3.0).epsilon(1e-14));

  Vec x0{0.5, 2.0, 0.0};
  PolynomialField ps = p.shifted(x0);
  std::mt19937_64 rng(7);
  for (int i = 0; i < 20; ++i) {
    Vec y = rand_point(rng, 3.0);
    Vec y_shift{y[0] + x0[0], y[1] + x0[1], 0.0};
    CHECK(ps.eval(y, 0) == doctest::Approx(p.eval(y_shift, 0)).epsilon(1e-13));
  }

  PolynomialField q = PolynomialField::zero(2, 1, 1);
  q.coef_ref(0, {1, 0, 0}) = 1.0;
  q.coef_ref(0, {0, 1, 0}) = 1.0;
  PolynomialField prod = PolynomialField::product(p.component(0), q);
  for (int i = 0; i < 10; ++i) {
    Vec y = rand_point(rng, 2.0);
    CHECK(prod.eval(y, 0) == doctest::Approx(p.eval(y, 0) * q.eval(y, 0)).epsilon(1e-13));
  }
}

TEST_CASE("grid layout places the origin on a node") {
  GridSpec s = spec2(32, 4.0);
  s.validate();
  Vec o = s.node(s.flat({16, 16, 0}));
  CHECK(o[0] == 0.0);
  CHECK(o[1] == 0.0);
  for (size_t f : {size_t(0), size_t(100), size_t(1023)}) {
    auto idx = s.unflat(f);
    CHECK(s.flat(idx) == f);
  }
  GridSpec bad = spec2(100);
  CHECK_THROWS(bad.validate());
  GridSpec tiny = spec2(4);
  CHECK_THROWS(tiny.validate());
}

TEST_CASE("cubic interpolation reproduces per-axis cubics exactly") {
  GridSpec s = spec2(64, 8.0);
  auto f = [](const Vec& x) {
    return (x[0] * x[0] * x[0] - 2.0 * x[0] + 1.0) * (0.25 * x[1] * x[1] * x[1] + x[1] - 3.0);
  };
  GridField g = GridField::sample(s, 1, [&](const Vec& x, int) { return f(x); });
  std::mt19937_64 rng(11);
  for (int i = 0; i < 50; ++i) {
    Vec x = rand_point(rng, 6.0);
    CHECK(g.interp(x, 0) == doctest::Approx(f(x)).epsilon(1e-11));
  }
  // Outside the box the compact field reads zero.
  CHECK(g.interp({9.0, 0.0, 0.0}, 0) == 0.0);
}

TEST_CASE("cubic interpolation converges at fourth order on a smooth bump") {
  std::mt19937_64 rng(13);
  std::vector<Vec> pts;
  for (int i = 0; i < 40; ++i) pts.push_back(rand_point(rng, 3.0));
  auto max_err = [&](int m) {
    GridSpec s = spec2(m, 8.0);
    GridField g = GridField::sample(s, 1, [&](const Vec& x, int) { return bump(x); });
    double e = 0.0;
    for (const Vec& x : pts) e = std::max(e, std::abs(g.interp(x, 0) - bump(x)));
    return e;
  };
  double e64 = max_err(64), e128 = max_err(128);
  double ratio = e64 / e128;
  INFO("e64=", e64, " e128=", e128, " ratio=", ratio);
  CHECK(ratio > 10.0);
  CHECK(ratio < 30.0);
}

TEST_CASE("periodic interpolation wraps across the seam") {
  GridSpec s = spec2(64, 3.14159265358979323846, BoundaryMode::periodic);
  GridField g = GridField::sample(s, 1, [&](const Vec& x, int) { return std::sin(x[0]) * std::cos(2.0 * x[1]); });
  // Points just outside the nominal box must match their wrapped images.
  double a = g.interp({3.5, 0.7, 0.0}, 0);
  double b = g.interp({3.5 - 2.0 * 3.14159265358979323846, 0.7, 0.0}, 0);
  CHECK(a == doctest::Approx(b).epsilon(1e-12));
}

TEST_CASE("compact grid derivative is fourth-order accurate") {
  auto max_err = [&](int m) {
    GridSpec s = spec2(m, 8.0);
    GridField g = GridField::sample(s, 1, [&](const Vec& x, int) { return bump(x); });
    GridField d = grid_derivative(g, 0);
    double e = 0.0;
    for (size_t f = 0; f < s.nodes(); ++f) {
      Vec x = s.node(f);
      if (std::abs(x[0]) > 6.0 || std::abs(x[1]) > 6.0) continue;
      double exact = -x[0] / (1.5 * 1.5) * bump(x);
      e = std::max(e, std::abs(d.at(0, f) - exact));
    }
    return e;
  };
  double e64 = max_err(64), e128 = max_err(128);
  double ratio = e64 / e128;
  INFO("e64=", e64, " e128=", e128, " ratio=", ratio);
  CHECK(ratio > 10.0);
  CHECK(ratio < 30.0);
}

TEST_CASE("spectral derivative is exact on band-limited data") {
  GridSpec s = spec2(32, 3.14159265358979323846, BoundaryMode::periodic);
  GridField g = GridField::sample(s, 1, [&](const Vec& x, int) { return std::sin(3.0 * x[0]) * std::cos(x[1]); });
  GridField d = spectral_derivative(g, 0);
  for (size_t f = 0; f < s.nodes(); f += 7) {
    Vec x = s.node(f);
    CHECK(d.at(0, f) == doctest::Approx(3.0 * std::cos(3.0 * x[0]) * std::cos(x[1])).epsilon(1e-11));
  }
}

TEST_CASE("periodic Poisson inverts the Laplacian with zero mean") {
  GridSpec s = spec2(64, 3.14159265358979323846, BoundaryMode::periodic);
  GridField rhs = GridField::sample(s, 1, [&](const Vec& x, int) {
    return 13.0 * std::sin(2.0 * x[0]) * std::cos(3.0 * x[1]);
  });
  GridField f = poisson_periodic(rhs);
  for (size_t k = 0; k < s.nodes(); k += 11) {
    Vec x = s.node(k);
    CHECK(f.at(0, k) == doctest::Approx(std::sin(2.0 * x[0]) * std::cos(3.0 * x[1])).epsilon(1e-11));
  }
}

TEST_CASE("spectral projection kills gradients and fixes divergence-free fields") {
  GridSpec s = spec2(64, 3.14159265358979323846, BoundaryMode::periodic);
  // Gradient field: u = grad(sin x1 sin x2).
  GridField gradf = GridField::sample(s, 2, [&](const Vec& x, int c) {
    return c == 0 ? std::cos(x[0]) * std::sin(x[1]) : std::sin(x[0]) * std::cos(x[1]);
  });
  GridField pg = leray_periodic(gradf);
  CHECK(pg.max_abs() < 1e-12);
  // Divergence-free field passes through.
  GridField tg = GridField::sample(s, 2, [&](const Vec& x, int c) {
    return c == 0 ? std::sin(x[0]) * std::cos(x[1]) : -std::cos(x[0]) * std::sin(x[1]);
  });
  GridField ptg = leray_periodic(tg);
  double diff = 0.0;
  for (size_t i = 0; i < tg.data.size(); ++i) diff = std::max(diff, std::abs(ptg.data[i] - tg.data[i]));
  CHECK(diff < 1e-12);
}

TEST_CASE("convolution against an impulse is the identity, against a shifted impulse a translation") {
  GridSpec s = spec2(32, 4.0);
  GridField g = GridField::sample(s, 1, [&](const Vec& x, int) { return bump(x, 0.8); });
  const double h = s.h();
  const double inv = 1.0 / (h * h);
  GridField id = convolve(g, [&](const Vec& y) {
    return (std::abs(y[0]) < h / 2 && std::abs(y[1]) < h / 2) ? inv : 0.0;
  });
  double err = 0.0;
  for (size_t i = 0; i < g.data.size(); ++i) err = std::max(err, std::abs(id.data[i] - g.data[i]));
  CHECK(err < 1e-12);

  GridField sh = convolve(g, [&](const Vec& y) {
    return (std::abs(y[0] - h) < h / 2 && std::abs(y[1]) < h / 2) ? inv : 0.0;
  });
  // (g * delta_{x0})(x) = g(x - x0) with x0 = (h, 0).
  for (size_t f = 0; f < s.nodes(); f += 13) {
    auto idx = s.unflat(f);
    if (idx[0] == 0) continue;
    auto jdx = idx;
    jdx[0] -= 1;
    CHECK(sh.at(0, f) == doctest::Approx(g.at(0, s.flat(jdx))).epsilon(1e-11));
  }
}

TEST_CASE("pad and restrict round-trip") {
  GridSpec s = spec2(32, 4.0);
  GridField g = GridField::sample(s, 2, [&](const Vec& x, int c) { return bump(x) + c; });
  GridField back = restrict_half(pad_double(g), s);
  for (size_t i = 0; i < g.data.size(); ++i) CHECK(back.data[i] == g.data[i]);
}

TEST_CASE("gradient and divergence are exact on affine fields") {
  std::array<std::array<double, 3>, 3> A{{{1.0, -2.0, 0.0}, {0.5, 3.0, 0.0}, {0.0, 0.0, 0.0}}};
  Vec b{4.0, -1.0, 0.0};
  CompositeField u = CompositeField::pure_poly(PolynomialField::affine(2, A, b));
  CompositeField g = gradient(u);
  CHECK(g.poly.coef_at(0 * 2 + 0, {0, 0, 0}) == doctest::Approx(1.0));
  CHECK(g.poly.coef_at(0 * 2 + 1, {0, 0, 0}) == doctest::Approx(-2.0));
  CHECK(g.poly.coef_at(1 * 2 + 0, {0, 0, 0}) == doctest::Approx(0.5));
  CHECK(g.poly.coef_at(1 * 2 + 1, {0, 0, 0}) == doctest::Approx(3.0));
  CompositeField d = divergence(u);
  CHECK(d.poly.coef_at(0, {0, 0, 0}) == doctest::Approx(4.0));
  CompositeField w = vorticity(u);
  CHECK(w.poly.coef_at(0, {0, 0, 0}) == doctest::Approx(0.5 + 2.0));
}

TEST_CASE("composite gradient matches analytic derivatives of a sampled bump") {
  GridSpec s = spec2(128, 8.0);
  GridField g = GridField::sample(s, 1, [&](const Vec& x, int) { return bump(x); });
  CompositeField f = CompositeField::pure_grid(g);
  CompositeField gr = gradient(f);
  double err = 0.0;
  for (size_t k = 0; k < s.nodes(); k += 17) {
    Vec x = s.node(k);
    if (std::abs(x[0]) > 6.0 || std::abs(x[1]) > 6.0) continue;
    double exact = -x[1] / (1.5 * 1.5) * bump(x);
    err = std::max(err, std::abs(gr.grid.at(1, k) - exact));
  }
  CHECK(err < 2e-5);
}

TEST_CASE("mollifier normalization, moments, and derivative formulas") {
  const Mollifier& phi = Mollifier::get(2);
  // Independent check of the normalization with a coarser rule.
  double raw = integrate_cube(2, 1.0, 257, [&](const Vec& z) { return phi.value(z); });
  CHECK(raw == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(phi.moment({1, 0, 0}) == 0.0);
  CHECK(phi.moment({2, 0, 0}) == doctest::Approx(phi.moment({0, 2, 0})).epsilon(1e-12));
  CHECK(phi.m2() > 0.0);
  CHECK(phi.m2() < 1.0);

  // Derivatives vs central differences.
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-0.6, 0.6);
  const double d = 1e-5;
  for (int i = 0; i < 20; ++i) {
    Vec z{u(rng), u(rng), 0.0};
    Vec zp = z, zm = z;
    zp[0] += d;
    zm[0] -= d;
    double fd = (phi.value(zp) - phi.value(zm)) / (2.0 * d);
    CHECK(phi.derivative(z, {1, 0, 0}) == doctest::Approx(fd).epsilon(1e-5));
    double fd2 = (phi.value(zp) - 2.0 * phi.value(z) + phi.value(zm)) / (d * d);
    CHECK(phi.derivative(z, {2, 0, 0}) == doctest::Approx(fd2).epsilon(1e-4));
    Vec zpp = z, zpm = z, zmp = z, zmm = z;
    zpp[0] += d; zpp[1] += d;
    zpm[0] += d; zpm[1] -= d;
    zmp[0] -= d; zmp[1] += d;
    zmm[0] -= d; zmm[1] -= d;
    double fd11 = (phi.value(zpp) - phi.value(zpm) - phi.value(zmp) + phi.value(zmm)) / (4.0 * d * d);
    CHECK(phi.derivative(z, {1, 1, 0}) == doctest::Approx(fd11).epsilon(1e-4));
  }
}

TEST_CASE("ball rule integrates constants and quadratics on the disk") {
  const double pi = 3.14159265358979323846;
  BallRule rule = BallRule::build(2, {0.0, 0.0, 0.0}, 1.0, 96, 24);
  CHECK(rule.volume() == doctest::Approx(pi).epsilon(2e-4));
  double ix2 = rule.apply([](const Vec& z) { return z[0] * z[0]; });
  CHECK(ix2 == doctest::Approx(pi / 4.0).epsilon(5e-4));
  // Deterministic rebuild.
  BallRule again = BallRule::build(2, {0.0, 0.0, 0.0}, 1.0, 96, 24);
  REQUIRE(again.weights.size() == rule.weights.size());
  for (size_t i = 0; i < rule.weights.size(); ++i) CHECK(again.weights[i] == rule.weights[i]);

  BallRule r3 = BallRule::build(3, {0.5, -0.25, 0.75}, 2.0, 32, 8);
  CHECK(r3.volume() == doctest::Approx(4.0 / 3.0 * pi * 8.0).epsilon(2e-3));
}

TEST_CASE("mollification shifts quadratics analytically and preserves mass on grids") {
  const Mollifier& phi = Mollifier::get(2);
  // Quadratic polynomial part.
  PolynomialField p = PolynomialField::zero(2, 1, 2);
  p.coef_ref(0, {2, 0, 0}) = 1.0;   // x1^2
  p.coef_ref(0, {1, 1, 0}) = 3.0;   // harmonic part unaffected
  CompositeField f = CompositeField::pure_poly(p);
  const double eps = 0.5;
  GridSpec s = spec2(64, 8.0);
  f.grid = GridField::zero(s, 1);
  CompositeField fm = mollify(f, eps);
  CHECK(fm.poly.coef_at(0, {0, 0, 0}) == doctest::Approx(0.5 * eps * eps * phi.m2() * 2.0).epsilon(1e-12));
  CHECK(fm.poly.coef_at(0, {2, 0, 0}) == doctest::Approx(1.0));
  CHECK(fm.poly.coef_at(0, {1, 1, 0}) == doctest::Approx(3.0));

  // Grid part: discrete mass is preserved exactly by the renormalized kernel.
  GridField g = GridField::sample(s, 1, [&](const Vec& x, int) { return bump(x, 1.0); });
  g.zero_margin(2);
  CompositeField fg = CompositeField::pure_grid(g);
  CompositeField fgm = mollify(fg, eps);
  long double m0 = 0.0L, m1 = 0.0L;
  for (double v : g.data) m0 += v;
  for (double v : fgm.grid.data) m1 += v;
  CHECK(static_cast<double>(m1) == doctest::Approx(static_cast<double>(m0)).epsilon(1e-12));

  // Against a direct dense convolution at a few points.
  const double h = s.h();
  int reach = static_cast<int>(std::ceil(eps / h)) + 1;
  double mass = 0.0;
  for (int a = -reach; a <= reach; ++a)
    for (int b = -reach; b <= reach; ++b)
      mass += phi.value({a * h / eps, b * h / eps, 0.0}) * (h / eps) * (h / eps);
  for (size_t probe : {s.flat({32, 32, 0}), s.flat({28, 35, 0}), s.flat({40, 30, 0})}) {
    auto idx = s.unflat(probe);
    double acc = 0.0;
    for (int a = -reach; a <= reach; ++a)
      for (int b = -reach; b <= reach; ++b) {
        int ia = idx[0] - a, ib = idx[1] - b;
        if (ia < 0 || ia >= s.m || ib < 0 || ib >= s.m) continue;
        double k = phi.value({a * h / eps, b * h / eps, 0.0}) / (mass * eps * eps);
        acc += g.at(0, s.flat({ia, ib, 0})) * k * h * h;
      }
    CHECK(fgm.grid.at(0, probe) == doctest::Approx(acc).epsilon(1e-11));
  }

  CHECK_THROWS(mollify(fg, 0.5 * h));
}

TEST_CASE("tensor products are exact at nodes and split poly/grid correctly") {
  GridSpec s = spec2(32, 4.0);
  std::array<std::array<double, 3>, 3> A{{{0.5, 1.0, 0.0}, {-1.0, 0.25, 0.0}, {0.0, 0.0, 0.0}}};
  CompositeField u = CompositeField::pure_poly(PolynomialField::affine(2, A, {0.1, -0.2, 0.0}));
  u.grid = GridField::sample(s, 2, [&](const Vec& x, int c) { return (c + 1) * bump(x, 0.9); });
  CompositeField w = tensor_product(u, u);
  CHECK(w.dim() == 4);
  std::mt19937_64 rng(5);
  for (int t = 0; t < 10; ++t) {
    size_t f = static_cast<size_t>(rng() % s.nodes());
    Vec x = s.node(f);
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j)
        CHECK(w.eval(x, i * 2 + j) == doctest::Approx(u.eval(x, i) * u.eval(x, j)).epsilon(1e-12));
  }
}

TEST_CASE("composite validation enforces the structural rules") {
  GridSpec s = spec2(32, 4.0);
  PolynomialField cubic = PolynomialField::zero(2, 1, 3);
  cubic.coef_ref(0, {3, 0, 0}) = 1.0;
  CompositeField f = CompositeField::pure_poly(cubic);
  CHECK_THROWS(f.validate());

  GridSpec per = spec2(32, 4.0, BoundaryMode::periodic);
  CompositeField lin = CompositeField::pure_poly(
      PolynomialField::affine(2, {{{1.0, 0.0, 0.0}, {0.0, 1.0, 0.0}, {0.0, 0.0, 0.0}}}, {0.0, 0.0, 0.0}));
  lin.grid = GridField::zero(per, 2);
  CHECK_THROWS(lin.validate());

  GridField g = GridField::sample(s, 1, [](const Vec&, int) { return 1.0; });
  CompositeField c = CompositeField::pure_grid(g);
  CHECK_THROWS(c.validate(true));  // no zero margin
  c.grid.zero_margin(2);
  c.validate(true);
}

TEST_CASE("resampling shifts a grid field") {
  GridSpec s = spec2(128, 8.0);
  GridField g = GridField::sample(s, 1, [&](const Vec& x, int) { return bump(x); });
  Vec shift{0.37, -0.61, 0.0};
  GridField r = resample(g, shift);
  std::mt19937_64 rng(17);
  for (int i = 0; i < 20; ++i) {
    size_t f = static_cast<size_t>(rng() % s.nodes());
    Vec x = s.node(f);
    if (std::abs(x[0]) > 5.0 || std::abs(x[1]) > 5.0) continue;
    Vec y{x[0] + shift[0], x[1] + shift[1], 0.0};
    CHECK(r.at(0, f) == doctest::Approx(bump(y)).epsilon(1e-4));
  }
}
