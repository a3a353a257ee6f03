#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "oplab/space.hpp"

namespace oplab {

/// A dense operator between described spaces. entries is codomain.dim() x
/// domain.dim().
struct OperatorMatrix {
  Space domain;
  Space codomain;
  CMatrix entries;

  OperatorMatrix() = default;
  OperatorMatrix(Space dom, Space cod, CMatrix a);

  static OperatorMatrix identity(const Space& s);
  static OperatorMatrix zero(const Space& dom, const Space& cod);
  static OperatorMatrix on(const Space& s, CMatrix a);  // endomorphism

  CVector apply(const CVector& x) const;
  Vec apply(const Vec& x) const;
  OperatorMatrix compose(const OperatorMatrix& rhs) const;  // this o rhs
};

enum class EstimateKind { exact, lower_bound };

/// A certified norm value: exact only when a closed-form path applies, else a
/// lower bound with a witness reproducing the value.
struct NormEstimate {
  double value = 0.0;
  EstimateKind kind = EstimateKind::lower_bound;
  std::vector<Vec> witness;  // role is operation-specific; [0] is the primary
  long iterations = 0;
};

struct OpNormConfig {
  int restarts = 32;
  int iterations = 500;
  double init_step = 0.5;
  std::uint64_t seed = 0x6F706C6162ull;
  bool allow_exact_paths = true;  // testing hook: force the ascent path
};

/// Operator norm. Exact via singular values when both norms are weighted l^2;
/// exact column/row sums for 1->1 and inf->inf atom pairs; otherwise a
/// certified lower bound from projected ascent with random restarts.
NormEstimate op_norm(const OperatorMatrix& T, const OpNormConfig& cfg = {});

/// Banach-space adjoint under the mu-weighted pairing
/// <x, y> = sum_i mu_i x_i conj(y_i): satisfies <Tx, y> = <x, T*y> exactly,
/// with domain/codomain replaced by their duals (p -> p/(p-1), same atoms).
/// On unweighted spaces the entries are the conjugate transpose.
OperatorMatrix adjoint(const OperatorMatrix& T);

/// Ratio ||T x|| / ||x|| for a candidate witness; used to re-certify estimates.
double rayleigh_ratio(const OperatorMatrix& T, const CVector& x);

}  // namespace oplab
