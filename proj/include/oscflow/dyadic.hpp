#pragma once

#include <limits>
#include <vector>

namespace oscflow {

inline constexpr double kInfExponent = std::numeric_limits<double>::infinity();

// Nonnegative values attached to dyadic scales r = 2^j, j in [j_min, j_max].
// Entries outside the stored window read as zero, which makes every stored
// sequence an admissible (truncated) sequence in its own right.
struct DyadicSequence {
  int j_min = 0;
  int j_max = -1;
  std::vector<double> values;

  int size() const { return j_max - j_min + 1; }
  bool empty() const { return j_max < j_min; }
  double at(int j) const;
  double& ref(int j);

  static DyadicSequence zeros(int j_min, int j_max);
  static DyadicSequence constant(int j_min, int j_max, double c);

  // Throws std::invalid_argument on size mismatch, negatives, or NaN.
  void validate() const;
};

// Smoothing transform S_{alpha,q}(X)_j = 2^{j alpha} (sum_{i>=j} (2^{-i alpha} X_i)^q)^{1/q},
// with the supremum branch when q is infinite (a separate code path, not a large-q
// limit). The suffix sum stops at j_max; the result is exact for the truncated
// sequence, and callers comparing against infinite-tail closed forms must stay
// far enough below j_max for the dropped tail to be negligible.
DyadicSequence s_transform(const DyadicSequence& x, double alpha, double q);

// Weighted norm ||(2^{-s j} X_j)_j||_{l^q} over the stored window; sup when q
// is infinite. Returns 0 on an empty window.
double lq_norm(const DyadicSequence& x, double s, double q);

struct CompositionReport {
  bool holds = false;
  double printed_constant = 0.0;       // 1 / (1 - 2^{beta - alpha})
  double sharp_constant = 0.0;         // (1 - 2^{(beta-alpha) p})^{-1/p}
  double constant_used = 0.0;          // the one `holds` was checked against
  bool printed_constant_valid = true;  // printed >= sharp iff p >= 1
  double worst_margin = 0.0;           // max_j (lhs_j - constant_used * rhs_j)
  int worst_j = 0;
  std::vector<double> lhs;             // S_{beta,q}(S_{alpha,p}(X))_j
  std::vector<double> rhs;             // S_{beta,q}(X)_j
};

// Composition inequality for smoothing transforms: for beta < alpha and
// 0 < p <= q (q may be infinite),
//   S_{beta,q}(S_{alpha,p}(X))_j <= c(alpha,beta,p) * S_{beta,q}(X)_j
// with c = (1 - 2^{-(alpha-beta) p})^{-1/p}, which is sharp (geometric
// sequences X_l = 2^{l beta} attain it). The commonly quoted constant
// 1/(1 - 2^{-(alpha-beta)}) dominates c exactly when p >= 1; for p < 1 it is
// too small and the quoted form of the inequality fails. `holds` is checked
// against the printed constant when it is valid and against the sharp one
// otherwise; both are reported. Evaluation on the truncated sequence is
// exact, so the check covers the whole stored window. Throws outside the
// admissible parameter range.
CompositionReport check_composition_bound(const DyadicSequence& x, double alpha,
                                          double beta, double p, double q,
                                          double tol = 1e-9);

}  // namespace oscflow
