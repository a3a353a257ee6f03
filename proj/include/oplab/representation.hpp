#pragma once

#include <string>
#include <utility>
#include <vector>

#include "oplab/operators.hpp"
#include "oplab/rademacher.hpp"
#include "oplab/space.hpp"

namespace oplab {

/// A function on a finite set K = {t_1..t_N}, stored as its values.
struct CKFunction {
  CVector values;

  double sup_norm() const { return values.size() ? values.cwiseAbs().maxCoeff() : 0.0; }
  static CKFunction constant(int n, Complex c) {
    CKFunction f;
    f.values = CVector::Constant(n, c);
    return f;
  }
  static CKFunction indicator(int n, int l) {
    CKFunction f;
    f.values = CVector::Zero(n);
    f.values[l] = 1.0;
    return f;
  }
};

/// A unital homomorphism u : l^inf_N -> B(X) determined by disjoint
/// idempotents p_1..p_N on a common space; u(f) = sum_l f(t_l) p_l.
struct FiniteRepresentation {
  std::vector<std::string> points;
  std::vector<OperatorMatrix> idempotents;
  bool unital = true;

  int size() const { return static_cast<int>(idempotents.size()); }
  const Space& space() const { return idempotents.at(0).domain; }
};

struct RepValidation {
  bool ok = true;
  std::string failed_invariant;  // "idempotent", "disjoint", "unital", "shape"
  double residual = 0.0;
};

/// Checks p_i^2 = p_i, p_i p_j = 0 (i != j) and, when unital, sum p_i = I,
/// each within tol in Frobenius norm.
RepValidation validate(const FiniteRepresentation& u, double tol = 1e-10);
void require_valid(const FiniteRepresentation& u, double tol = 1e-10);

/// u(f) = sum_l f(t_l) p_l.
OperatorMatrix apply_rep(const FiniteRepresentation& u, const CKFunction& f);

struct RepNormConfig {
  int sign_enum_limit = 12;   // exhaustive {-1,1}^N below this
  int sign_samples = 256;     // sampled patterns above it
  int torus_starts = 3;
  int torus_passes = 3;
  int golden_iters = 20;
  OpNormConfig op_cfg{6, 150, 0.5, 0x726570ull, true};
  std::uint64_t seed = 1;
};

/// ||u|| = sup over the unit ball of l^inf_N. Lower bound from exhaustive real
/// signs plus golden-section ascent over unimodular functions; exactly 1 for
/// orthogonal projection systems on Hilbert space.
NormEstimate rep_norm(const FiniteRepresentation& u, const RepNormConfig& cfg = {});

/// An element sum_k f_k (x) b_k of C(K) (x) B(X).
struct RTensor {
  std::vector<std::pair<CKFunction, OperatorMatrix>> terms;

  int points() const {
    return terms.empty() ? 0 : static_cast<int>(terms[0].first.values.size());
  }
  /// sum_k f_k(t_l) b_k
  OperatorMatrix at_point(int l) const;
};

/// || . ||_R of the tensor: R of the finite family {sum_k f_k(t_l) b_k : l}.
RBoundEstimate r_tensor_norm(const RTensor& x, const RBoundConfig& cfg = {});

struct VerifyConfig {
  double slack_budget = 0.05;
  int max_escalations = 2;
  double commutant_tol = 1e-9;  // relative to ||b|| ||p_i||
  RBoundConfig r_cfg;
  RepNormConfig rep_cfg;
  OpNormConfig op_cfg;
};

/// Report for the tensor-extension inequality
/// ||sum_k u(f_k) b_k|| <= ||u||^2 ||sum_k f_k (x) b_k||_R.  Both right-hand
/// factors are lower bounds, so an apparent violation triggers a budget
/// escalation pass and, if it persists, flags estimator underconvergence to
/// investigate - never silent acceptance.
struct ExtensionReport {
  double lhs = 0.0;
  double u_norm = 0.0;
  double r_norm = 0.0;
  double ratio = 0.0;  // lhs / (u_norm^2 r_norm)
  double slack_budget = 0.0;
  int escalations = 0;
  bool flagged = false;
};

/// Precondition: every b_k commutes with every idempotent (commutant E_u).
ExtensionReport verify_extension(const FiniteRepresentation& u, const RTensor& x,
                                 const VerifyConfig& cfg = {});

struct DotExtensionReport {
  OperatorMatrix result;
  double lhs = 0.0;
  double u_norm = 0.0;
  double r_hat = 0.0;
  double f_sup = 0.0;
  double ratio = 0.0;
  int escalations = 0;
  bool flagged = false;
};

/// (u.v)(F) = sum_l p_l v(F(t_l)) with the bound ||u.v|| <= ||u||^2 R(v);
/// F is given by its N values in the parameter space of v.
DotExtensionReport dot_extension(const FiniteRepresentation& u, const RBoundedMap& v,
                                 const std::vector<CVector>& F,
                                 const VerifyConfig& cfg = {});

/// Product representation on K_1 x K_2 with idempotents q_lm = p_l q_m;
/// requires commuting unital factors.
FiniteRepresentation product_rep(const FiniteRepresentation& u,
                                 const FiniteRepresentation& v,
                                 double tol = 1e-9);

}  // namespace oplab
