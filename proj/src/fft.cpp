#include "oscflow/fft.hpp"

#include <fftw3.h>

#include <cmath>
#include <cstring>
#include <map>
#include <mutex>
#include <stdexcept>

namespace oscflow {

namespace {

struct PlanPair {
  fftw_plan fwd = nullptr;
  fftw_plan bwd = nullptr;
};

// Plans are cached per (n, m) and created with FFTW_ESTIMATE | FFTW_UNALIGNED
// so they can execute on any caller buffer. Guarded: FFTW planning is not
// thread-safe.
PlanPair& plans_for(const GridSpec& spec) {
  static std::mutex mu;
  static std::map<std::pair<int, int>, PlanPair> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto key = std::make_pair(spec.n, spec.m);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;

  int dims[3] = {spec.m, spec.m, spec.m};
  size_t real_n = spec.nodes();
  size_t cplx_n = spectral_size(spec);
  double* rbuf = fftw_alloc_real(real_n);
  fftw_complex* cbuf = fftw_alloc_complex(cplx_n);
  PlanPair p;
  p.fwd = fftw_plan_dft_r2c(spec.n, dims, rbuf, cbuf, FFTW_ESTIMATE | FFTW_UNALIGNED);
  p.bwd = fftw_plan_dft_c2r(spec.n, dims, cbuf, rbuf, FFTW_ESTIMATE | FFTW_UNALIGNED);
  fftw_free(rbuf);
  fftw_free(cbuf);
  if (!p.fwd || !p.bwd) throw std::runtime_error("fftw plan creation failed");
  return cache.emplace(key, p).first->second;
}

// Complex layout: row-major over n axes with the last axis of extent m/2+1.
struct SpectralIter {
  const GridSpec& spec;
  int last;  // m/2 + 1
  explicit SpectralIter(const GridSpec& s) : spec(s), last(s.m / 2 + 1) {}
  std::array<int, 3> unflat(size_t f) const {
    std::array<int, 3> idx{0, 0, 0};
    idx[spec.n - 1] = static_cast<int>(f % static_cast<size_t>(last));
    f /= static_cast<size_t>(last);
    for (int k = spec.n - 2; k >= 0; --k) {
      idx[k] = static_cast<int>(f % static_cast<size_t>(spec.m));
      f /= static_cast<size_t>(spec.m);
    }
    return idx;
  }
};

}  // namespace

size_t spectral_size(const GridSpec& spec) {
  size_t t = static_cast<size_t>(spec.m / 2 + 1);
  for (int k = 0; k < spec.n - 1; ++k) t *= static_cast<size_t>(spec.m);
  return t;
}

std::vector<std::complex<double>> fft_forward(const GridSpec& spec, const std::vector<double>& data) {
  if (data.size() != spec.nodes()) throw std::invalid_argument("fft_forward: size mismatch");
  PlanPair& p = plans_for(spec);
  std::vector<double> in(data);
  std::vector<std::complex<double>> out(spectral_size(spec));
  fftw_execute_dft_r2c(p.fwd, in.data(), reinterpret_cast<fftw_complex*>(out.data()));
  return out;
}

std::vector<double> fft_backward(const GridSpec& spec, const std::vector<std::complex<double>>& hat) {
  if (hat.size() != spectral_size(spec)) throw std::invalid_argument("fft_backward: size mismatch");
  PlanPair& p = plans_for(spec);
  std::vector<std::complex<double>> in(hat);  // c2r destroys its input
  std::vector<double> out(spec.nodes());
  fftw_execute_dft_c2r(p.bwd, reinterpret_cast<fftw_complex*>(in.data()), out.data());
  const double scale = 1.0 / static_cast<double>(spec.nodes());
  for (double& v : out) v *= scale;
  return out;
}

double wavenumber(const GridSpec& spec, int k) {
  int f = (k <= spec.m / 2) ? k : k - spec.m;
  return 3.14159265358979323846 * f / spec.half_width;
}

GridField spectral_derivative(const GridField& g, int axis) {
  GridField out = GridField::zero(g.spec, g.dim);
  SpectralIter it(g.spec);
  const size_t cs = spectral_size(g.spec);
  const size_t nn = g.spec.nodes();
  for (int c = 0; c < g.dim; ++c) {
    std::vector<double> comp(g.data.begin() + c * nn, g.data.begin() + (c + 1) * nn);
    auto hat = fft_forward(g.spec, comp);
    for (size_t f = 0; f < cs; ++f) {
      auto idx = it.unflat(f);
      double kx = wavenumber(g.spec, idx[axis]);
      // Nyquist kills the odd-derivative mode.
      if (idx[axis] == g.spec.m / 2) kx = 0.0;
      hat[f] *= std::complex<double>(0.0, kx);
    }
    auto back = fft_backward(g.spec, hat);
    std::copy(back.begin(), back.end(), out.data.begin() + c * nn);
  }
  return out;
}

GridField poisson_periodic(const GridField& rhs) {
  GridField out = GridField::zero(rhs.spec, rhs.dim);
  SpectralIter it(rhs.spec);
  const size_t cs = spectral_size(rhs.spec);
  const size_t nn = rhs.spec.nodes();
  for (int c = 0; c < rhs.dim; ++c) {
    std::vector<double> comp(rhs.data.begin() + c * nn, rhs.data.begin() + (c + 1) * nn);
    auto hat = fft_forward(rhs.spec, comp);
    for (size_t f = 0; f < cs; ++f) {
      auto idx = it.unflat(f);
      double k2 = 0.0;
      for (int a = 0; a < rhs.spec.n; ++a) {
        double k = wavenumber(rhs.spec, idx[a]);
        k2 += k * k;
      }
      hat[f] = (k2 == 0.0) ? 0.0 : hat[f] / k2;
    }
    auto back = fft_backward(rhs.spec, hat);
    std::copy(back.begin(), back.end(), out.data.begin() + c * nn);
  }
  return out;
}

GridField leray_periodic(const GridField& u) {
  const int n = u.spec.n;
  if (u.dim != n) throw std::invalid_argument("leray_periodic: dim must equal n");
  SpectralIter it(u.spec);
  const size_t cs = spectral_size(u.spec);
  const size_t nn = u.spec.nodes();
  std::vector<std::vector<std::complex<double>>> hat(static_cast<size_t>(n));
  for (int c = 0; c < n; ++c) {
    std::vector<double> comp(u.data.begin() + c * nn, u.data.begin() + (c + 1) * nn);
    hat[static_cast<size_t>(c)] = fft_forward(u.spec, comp);
  }
  for (size_t f = 0; f < cs; ++f) {
    auto idx = it.unflat(f);
    double k[3] = {0.0, 0.0, 0.0};
    double k2 = 0.0;
    for (int a = 0; a < n; ++a) {
      k[a] = wavenumber(u.spec, idx[a]);
      k2 += k[a] * k[a];
    }
    if (k2 == 0.0) continue;  // mean passes through
    std::complex<double> dot(0.0, 0.0);
    for (int a = 0; a < n; ++a) dot += k[a] * hat[static_cast<size_t>(a)][f];
    for (int a = 0; a < n; ++a) hat[static_cast<size_t>(a)][f] -= (k[a] / k2) * dot;
  }
  GridField out = GridField::zero(u.spec, n);
  for (int c = 0; c < n; ++c) {
    auto back = fft_backward(u.spec, hat[static_cast<size_t>(c)]);
    std::copy(back.begin(), back.end(), out.data.begin() + c * nn);
  }
  return out;
}

GridField pad_double(const GridField& g) {
  GridSpec big = g.spec;
  big.m = g.spec.m * 2;
  big.half_width = g.spec.half_width * 2.0;
  big.mode = BoundaryMode::periodic;
  GridField out = GridField::zero(big, g.dim);
  const size_t nn = g.spec.nodes();
  const int off = g.spec.m / 2;
  for (size_t f = 0; f < nn; ++f) {
    auto idx = g.spec.unflat(f);
    std::array<int, 3> jdx{idx[0] + off, idx[1] + off, idx[2] + off};
    if (g.spec.n == 2) jdx[2] = 0;
    size_t bf = big.flat(jdx);
    for (int c = 0; c < g.dim; ++c) out.ref(c, bf) = g.at(c, f);
  }
  return out;
}

GridField restrict_half(const GridField& g, const GridSpec& target) {
  if (g.spec.m != target.m * 2) throw std::invalid_argument("restrict_half: size mismatch");
  GridField out = GridField::zero(target, g.dim);
  const size_t nn = target.nodes();
  const int off = target.m / 2;
  for (size_t f = 0; f < nn; ++f) {
    auto idx = target.unflat(f);
    std::array<int, 3> jdx{idx[0] + off, idx[1] + off, idx[2] + off};
    if (target.n == 2) jdx[2] = 0;
    size_t bf = g.spec.flat(jdx);
    for (int c = 0; c < g.dim; ++c) out.ref(c, f) = g.at(c, bf);
  }
  return out;
}

GridField convolve(const GridField& a, const std::function<double(const Vec&)>& kernel) {
  const GridSpec& spec = a.spec;
  const int m = spec.m;
  const double h = spec.h();
  std::vector<double> ker(spec.nodes());
  for (size_t f = 0; f < spec.nodes(); ++f) {
    auto idx = spec.unflat(f);
    Vec y{0.0, 0.0, 0.0};
    for (int k = 0; k < spec.n; ++k) {
      int o = idx[k] <= m / 2 ? idx[k] : idx[k] - m;
      y[k] = o * h;
    }
    ker[f] = kernel(y);
  }
  auto khat = fft_forward(spec, ker);
  GridField out = GridField::zero(spec, a.dim);
  const size_t nn = spec.nodes();
  const double scale = std::pow(h, spec.n);
  for (int c = 0; c < a.dim; ++c) {
    std::vector<double> comp(a.data.begin() + c * nn, a.data.begin() + (c + 1) * nn);
    auto hat = fft_forward(spec, comp);
    for (size_t f = 0; f < hat.size(); ++f) hat[f] *= khat[f] * scale;
    auto back = fft_backward(spec, hat);
    std::copy(back.begin(), back.end(), out.data.begin() + c * nn);
  }
  return out;
}

}  // namespace oscflow
