#include "oscflow/dyadic.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace oscflow {

double DyadicSequence::at(int j) const {
  if (j < j_min || j > j_max) return 0.0;
  return values[static_cast<size_t>(j - j_min)];
}

double& DyadicSequence::ref(int j) {
  if (j < j_min || j > j_max) throw std::out_of_range("dyadic index outside window");
  return values[static_cast<size_t>(j - j_min)];
}

DyadicSequence DyadicSequence::zeros(int j_min, int j_max) {
  if (j_max < j_min) return {j_min, j_max, {}};
  return {j_min, j_max, std::vector<double>(static_cast<size_t>(j_max - j_min + 1), 0.0)};
}

DyadicSequence DyadicSequence::constant(int j_min, int j_max, double c) {
  DyadicSequence s = zeros(j_min, j_max);
  std::fill(s.values.begin(), s.values.end(), c);
  return s;
}

void DyadicSequence::validate() const {
  if (j_max < j_min) {
    if (!values.empty()) throw std::invalid_argument("empty window with stored values");
    return;
  }
  if (values.size() != static_cast<size_t>(size()))
    throw std::invalid_argument("value count does not match index window");
  for (double v : values) {
    if (std::isnan(v)) throw std::invalid_argument("NaN entry in dyadic sequence");
    if (v < 0.0) throw std::invalid_argument("negative entry in dyadic sequence");
  }
}

namespace {

// || (2^{e_i} v_i)_i ||_{l^q} with the largest term factored out in log2
// space, so neither the dyadic weights nor their q-th powers can overflow
// even when the weighted terms themselves exceed double range.
double scaled_lq(const std::vector<double>& e, const std::vector<double>& v, double q) {
  const double neg_inf = -std::numeric_limits<double>::infinity();
  double top = neg_inf;
  for (size_t i = 0; i < v.size(); ++i)
    if (v[i] > 0.0) top = std::max(top, e[i] + std::log2(v[i]));
  if (top == neg_inf) return 0.0;
  if (std::isinf(q)) return std::exp2(top);
  long double acc = 0.0L;
  for (size_t i = 0; i < v.size(); ++i)
    if (v[i] > 0.0)
      acc += std::pow(static_cast<long double>(std::exp2(e[i] + std::log2(v[i]) - top)),
                      static_cast<long double>(q));
  return std::exp2(top) *
         static_cast<double>(std::pow(acc, 1.0L / static_cast<long double>(q)));
}

}  // namespace

DyadicSequence s_transform(const DyadicSequence& x, double alpha, double q) {
  x.validate();
  if (!(q > 0.0)) throw std::invalid_argument("s_transform requires q > 0");
  DyadicSequence out = DyadicSequence::zeros(x.j_min, x.j_max);
  if (x.empty()) return out;

  // Suffix weights recomputed per j. The window is small at desk scale, so
  // the quadratic cost is irrelevant next to the overflow safety it buys.
  std::vector<double> e, v;
  for (int j = x.j_min; j <= x.j_max; ++j) {
    e.clear();
    v.clear();
    for (int i = j; i <= x.j_max; ++i) {
      e.push_back((j - i) * alpha);
      v.push_back(x.at(i));
    }
    out.ref(j) = scaled_lq(e, v, q);
  }
  return out;
}

double lq_norm(const DyadicSequence& x, double s, double q) {
  x.validate();
  if (!(q > 0.0)) throw std::invalid_argument("lq_norm requires q > 0");
  if (x.empty()) return 0.0;
  std::vector<double> e, v;
  e.reserve(static_cast<size_t>(x.size()));
  v.reserve(static_cast<size_t>(x.size()));
  for (int j = x.j_min; j <= x.j_max; ++j) {
    e.push_back(-s * j);
    v.push_back(x.at(j));
  }
  return scaled_lq(e, v, q);
}

CompositionReport check_composition_bound(const DyadicSequence& x, double alpha,
                                          double beta, double p, double q, double tol) {
  if (!(beta < alpha)) throw std::invalid_argument("composition bound needs beta < alpha");
  if (!(p > 0.0) || !(p <= q)) throw std::invalid_argument("composition bound needs 0 < p <= q");

  CompositionReport rep;
  rep.printed_constant = 1.0 / (1.0 - std::exp2(beta - alpha));
  rep.sharp_constant = std::pow(1.0 - std::exp2((beta - alpha) * p), -1.0 / p);
  rep.printed_constant_valid = p >= 1.0;
  rep.constant_used = rep.printed_constant_valid ? rep.printed_constant : rep.sharp_constant;
  DyadicSequence inner = s_transform(x, alpha, p);
  DyadicSequence lhs = s_transform(inner, beta, q);
  DyadicSequence rhs = s_transform(x, beta, q);
  rep.lhs = lhs.values;
  rep.rhs = rhs.values;
  rep.holds = true;
  rep.worst_j = x.j_min;
  if (x.empty()) return rep;

  double worst = -std::numeric_limits<double>::infinity();
  for (int j = x.j_min; j <= x.j_max; ++j) {
    double margin = lhs.at(j) - rep.constant_used * rhs.at(j);
    if (margin > worst) {
      worst = margin;
      rep.worst_j = j;
    }
  }
  rep.worst_margin = worst;
  // Scale-relative tolerance: margins ride on the magnitude of the bound side.
  double scale = 0.0;
  for (double v : rep.rhs) scale = std::max(scale, rep.constant_used * v);
  rep.holds = worst <= tol * std::max(1.0, scale);
  return rep;
}

}  // namespace oscflow
