#pragma once

// Independent brute-force oracles used by the tests. These deliberately avoid
// the library's estimation paths: plain sampling, enumeration and grids only.

#include <cmath>
#include <vector>

#include "oplab/operators.hpp"
#include "oplab/rng.hpp"
#include "oplab/space.hpp"

namespace oplab::testing {

// Lower-bound maximization of ||Tx||/||x|| over random unit-sphere samples
// plus canonical directions. Independent of op_norm's ascent machinery.
inline double brute_force_op_norm(const OperatorMatrix& T, int samples,
                                  std::uint64_t seed) {
  Rng rng = Rng(seed).derive(0xB10Cull);
  const Eigen::Index n = T.domain.dim();
  double best = 0.0;
  auto consider = [&](const CVector& x) {
    double d = T.domain.norm(x);
    if (d == 0.0) return;
    best = std::max(best, T.codomain.norm(T.entries * x) / d);
  };
  for (Eigen::Index j = 0; j < n; ++j) {
    CVector e = CVector::Zero(n);
    e[j] = 1.0;
    consider(e);
  }
  CVector x(n);
  for (int s = 0; s < samples; ++s) {
    for (Eigen::Index i = 0; i < n; ++i) x[i] = rng.cnormal();
    consider(x);
    // real sign patterns reach the l^1/l^inf extreme behavior faster
    for (Eigen::Index i = 0; i < n; ++i) x[i] = Complex(rng.sign(), 0.0);
    consider(x);
  }
  return best;
}

// Exact Rademacher average on a Hilbert space: (sum_k ||x_k||^2)^(1/2).
inline double hilbert_rad_oracle(const Space& base,
                                 const std::vector<CVector>& members) {
  double s = 0.0;
  for (const auto& x : members) s += base.norm_sq(x);
  return std::sqrt(s);
}

// Full sign enumeration of the squared average, no symmetry shortcuts.
inline double enumerated_rad_norm(const Space& base,
                                  const std::vector<CVector>& members) {
  const int k = static_cast<int>(members.size());
  const std::uint64_t total = 1ull << k;
  double acc = 0.0;
  CVector v(base.dim());
  for (std::uint64_t bits = 0; bits < total; ++bits) {
    v.setZero();
    for (int j = 0; j < k; ++j)
      v += ((bits >> j) & 1u) ? -members[j] : members[j];
    acc += base.norm_sq(v);
  }
  return std::sqrt(acc / static_cast<double>(total));
}

inline CVector random_cvector(Rng& rng, Eigen::Index n) {
  CVector x(n);
  for (Eigen::Index i = 0; i < n; ++i) x[i] = rng.cnormal();
  return x;
}

inline CMatrix random_cmatrix(Rng& rng, Eigen::Index r, Eigen::Index c) {
  CMatrix a(r, c);
  for (Eigen::Index i = 0; i < r; ++i)
    for (Eigen::Index j = 0; j < c; ++j) a(i, j) = rng.cnormal();
  return a;
}

}  // namespace oplab::testing
