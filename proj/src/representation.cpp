#include "oplab/representation.hpp"

#include <cmath>

#include "oplab/errors.hpp"
#include "oplab/rng.hpp"

namespace oplab {

RepValidation validate(const FiniteRepresentation& u, double tol) {
  RepValidation r;
  if (u.idempotents.empty()) {
    r.ok = false;
    r.failed_invariant = "shape";
    return r;
  }
  const Space& X = u.space();
  const Eigen::Index d = X.dim();
  for (const auto& p : u.idempotents) {
    if (p.entries.rows() != d || p.entries.cols() != d ||
        !p.domain.same_norm_as(X)) {
      r.ok = false;
      r.failed_invariant = "shape";
      return r;
    }
  }
  double worst = 0.0;
  for (const auto& p : u.idempotents)
    worst = std::max(worst, (p.entries * p.entries - p.entries).norm());
  if (worst > tol) {
    r.ok = false;
    r.failed_invariant = "idempotent";
    r.residual = worst;
    return r;
  }
  worst = 0.0;
  for (int i = 0; i < u.size(); ++i)
    for (int j = 0; j < u.size(); ++j) {
      if (i == j) continue;
      worst = std::max(
          worst, (u.idempotents[i].entries * u.idempotents[j].entries).norm());
    }
  if (worst > tol) {
    r.ok = false;
    r.failed_invariant = "disjoint";
    r.residual = worst;
    return r;
  }
  if (u.unital) {
    CMatrix s = CMatrix::Zero(d, d);
    for (const auto& p : u.idempotents) s += p.entries;
    double res = (s - CMatrix::Identity(d, d)).norm();
    if (res > tol) {
      r.ok = false;
      r.failed_invariant = "unital";
      r.residual = res;
      return r;
    }
  }
  return r;
}

void require_valid(const FiniteRepresentation& u, double tol) {
  RepValidation v = validate(u, tol);
  if (!v.ok)
    throw ValidationError("FiniteRepresentation", v.failed_invariant, v.residual);
}

OperatorMatrix apply_rep(const FiniteRepresentation& u, const CKFunction& f) {
  require_valid(u);
  if (f.values.size() != u.size())
    throw DimensionMismatch("apply_rep", u.size(), f.values.size());
  const Space& X = u.space();
  CMatrix a = CMatrix::Zero(X.dim(), X.dim());
  for (int l = 0; l < u.size(); ++l) a += f.values[l] * u.idempotents[l].entries;
  return OperatorMatrix::on(X, std::move(a));
}

namespace {

// Orthogonality of an idempotent w.r.t. the weighted l^2 structure:
// W^(1/2) p W^(-1/2) Hermitian.
bool hilbert_orthogonal_system(const FiniteRepresentation& u) {
  const Space& X = u.space();
  if (!X.is_hilbert()) return false;
  RVector w = X.hilbert_weights();
  auto half = w.array().sqrt().matrix().asDiagonal();
  auto halfinv = w.array().rsqrt().matrix().asDiagonal();
  for (const auto& p : u.idempotents) {
    CMatrix s = half * p.entries * halfinv;
    double res = (s - s.adjoint()).norm();
    if (res > 1e-9 * (1.0 + s.norm())) return false;
  }
  return true;
}

double rep_value(const FiniteRepresentation& u, const CVector& f,
                 const OpNormConfig& op_cfg) {
  const Space& X = u.space();
  CMatrix a = CMatrix::Zero(X.dim(), X.dim());
  for (int l = 0; l < u.size(); ++l) a += f[l] * u.idempotents[l].entries;
  return op_norm(OperatorMatrix::on(X, std::move(a)), op_cfg).value;
}

}  // namespace

NormEstimate rep_norm(const FiniteRepresentation& u, const RepNormConfig& cfg) {
  require_valid(u);
  const int N = u.size();
  Space linf = Space::lp(N, kInfinity);

  if (hilbert_orthogonal_system(u)) {
    bool nontrivial = false;
    for (const auto& p : u.idempotents)
      if (p.entries.norm() > 1e-14) nontrivial = true;
    NormEstimate est;
    est.value = nontrivial ? 1.0 : 0.0;
    est.kind = EstimateKind::exact;
    est.witness.push_back(Vec{linf, CVector::Ones(N)});
    return est;
  }

  NormEstimate best;
  best.kind = EstimateKind::lower_bound;
  CVector bestf = CVector::Ones(N);

  auto consider = [&](const CVector& f) {
    double v = rep_value(u, f, cfg.op_cfg);
    ++best.iterations;
    if (v > best.value) {
      best.value = v;
      bestf = f;
    }
  };

  // real sign patterns: the extreme points of the real unit ball
  if (N - 1 <= cfg.sign_enum_limit) {
    const std::uint64_t patterns = 1ull << (N - 1);
    CVector f(N);
    for (std::uint64_t bits = 0; bits < patterns; ++bits) {
      f[0] = 1.0;
      for (int l = 1; l < N; ++l)
        f[l] = (bits & (1ull << (l - 1))) ? -1.0 : 1.0;
      consider(f);
    }
  } else {
    Rng rng = Rng(cfg.seed).derive(0x7369676E73ull);
    consider(CVector::Ones(N));
    CVector f(N);
    for (int s = 0; s < cfg.sign_samples; ++s) {
      for (int l = 0; l < N; ++l) f[l] = Complex(rng.sign(), 0.0);
      consider(f);
    }
  }

  // golden-section sweeps over unimodular phases, starting from the winner
  Rng rng = Rng(cfg.seed).derive(0x746F727573ull);
  const double gr = 0.6180339887498949;
  for (int start = 0; start < cfg.torus_starts; ++start) {
    CVector f(N);
    if (start == 0) {
      f = bestf;
    } else {
      for (int l = 0; l < N; ++l)
        f[l] = std::polar(1.0, 2.0 * M_PI * rng.uniform01());
    }
    double fval = rep_value(u, f, cfg.op_cfg);
    double window = M_PI / 2.0;
    for (int pass = 0; pass < cfg.torus_passes; ++pass) {
      for (int l = 0; l < N; ++l) {
        double theta0 = std::arg(f[l]);
        double lo = theta0 - window, hi = theta0 + window;
        double a = hi - gr * (hi - lo), b = lo + gr * (hi - lo);
        auto val_at = [&](double th) {
          CVector g = f;
          g[l] = std::polar(1.0, th);
          return rep_value(u, g, cfg.op_cfg);
        };
        double fa = val_at(a), fb = val_at(b);
        for (int it = 0; it < cfg.golden_iters; ++it) {
          if (fa < fb) {
            lo = a;
            a = b;
            fa = fb;
            b = lo + gr * (hi - lo);
            fb = val_at(b);
          } else {
            hi = b;
            b = a;
            fb = fa;
            a = hi - gr * (hi - lo);
            fa = val_at(a);
          }
        }
        double th = (fa > fb) ? a : b;
        double fv = std::max(fa, fb);
        if (fv > fval) {
          fval = fv;
          f[l] = std::polar(1.0, th);
        }
      }
      window *= 0.5;
    }
    if (fval > best.value) {
      best.value = fval;
      bestf = f;
    }
  }

  best.value = rep_value(u, bestf, cfg.op_cfg);
  best.witness.push_back(Vec{linf, bestf});
  return best;
}

OperatorMatrix RTensor::at_point(int l) const {
  if (terms.empty()) throw PreconditionError("RTensor::at_point", "nonempty tensor");
  const Space& X = terms[0].second.domain;
  CMatrix a = CMatrix::Zero(X.dim(), X.dim());
  for (const auto& [f, b] : terms) a += f.values[l] * b.entries;
  return OperatorMatrix::on(X, std::move(a));
}

RBoundEstimate r_tensor_norm(const RTensor& x, const RBoundConfig& cfg) {
  if (x.terms.empty()) throw PreconditionError("r_tensor_norm", "nonempty tensor");
  const int N = x.points();
  const Space& X = x.terms[0].second.domain;
  for (const auto& [f, b] : x.terms) {
    if (f.values.size() != N)
      throw DimensionMismatch("r_tensor_norm", N, f.values.size());
    if (!b.domain.same_norm_as(X) || !b.codomain.same_norm_as(X))
      throw PreconditionError("r_tensor_norm", "all b_k act on a common space");
  }
  std::vector<OperatorMatrix> family;
  family.reserve(N);
  for (int l = 0; l < N; ++l) family.push_back(x.at_point(l));
  return r_bound(family, cfg);
}

namespace {

void check_commutant(const FiniteRepresentation& u, const OperatorMatrix& b,
                     double rel_tol, const char* where, int term_index) {
  for (int i = 0; i < u.size(); ++i) {
    const CMatrix& p = u.idempotents[i].entries;
    double res = (b.entries * p - p * b.entries).norm();
    double scale = std::max(1e-300, b.entries.norm() * p.norm());
    if (res > rel_tol * scale)
      throw PreconditionError(
          where, "commutant membership of b_" + std::to_string(term_index) +
                     " with p_" + std::to_string(i),
          res / scale);
  }
}

RBoundConfig escalate(RBoundConfig c) {
  c.restarts *= 3;
  c.ascent_iters *= 2;
  c.rounds += 1;
  c.seed = mix64(c.seed ^ 0xE5CA1A7Eull);
  return c;
}

RepNormConfig escalate(RepNormConfig c) {
  c.torus_starts += 2;
  c.torus_passes += 1;
  c.op_cfg.restarts *= 2;
  c.seed = mix64(c.seed ^ 0xE5CA1A7Eull);
  return c;
}

}  // namespace

ExtensionReport verify_extension(const FiniteRepresentation& u, const RTensor& x,
                                 const VerifyConfig& cfg) {
  require_valid(u);
  if (x.terms.empty()) throw PreconditionError("verify_extension", "nonempty tensor");
  if (x.points() != u.size())
    throw DimensionMismatch("verify_extension", u.size(), x.points());
  for (std::size_t k = 0; k < x.terms.size(); ++k)
    check_commutant(u, x.terms[k].second, cfg.commutant_tol, "verify_extension",
                    static_cast<int>(k));

  const Space& X = u.space();
  CMatrix lhs_m = CMatrix::Zero(X.dim(), X.dim());
  for (const auto& [f, b] : x.terms)
    lhs_m += apply_rep(u, f).entries * b.entries;

  ExtensionReport rep;
  rep.slack_budget = cfg.slack_budget;
  rep.lhs = op_norm(OperatorMatrix::on(X, lhs_m), cfg.op_cfg).value;

  RBoundConfig rc = cfg.r_cfg;
  RepNormConfig uc = cfg.rep_cfg;
  for (int pass = 0;; ++pass) {
    rep.u_norm = rep_norm(u, uc).value;
    rep.r_norm = r_tensor_norm(x, rc).value;
    double rhs = rep.u_norm * rep.u_norm * rep.r_norm;
    rep.ratio = (rhs > 0.0) ? rep.lhs / rhs : (rep.lhs > 0.0 ? kInfinity : 0.0);
    if (rep.ratio <= 1.0 + cfg.slack_budget) {
      rep.flagged = false;
      return rep;
    }
    if (pass >= cfg.max_escalations) {
      rep.flagged = true;
      return rep;
    }
    rc = escalate(rc);
    uc = escalate(uc);
    rep.escalations = pass + 1;
  }
}

DotExtensionReport dot_extension(const FiniteRepresentation& u, const RBoundedMap& v,
                                 const std::vector<CVector>& F,
                                 const VerifyConfig& cfg) {
  require_valid(u);
  if (static_cast<int>(F.size()) != u.size())
    throw DimensionMismatch("dot_extension", u.size(), F.size());
  for (std::size_t i = 0; i < v.basis_ops.size(); ++i)
    check_commutant(u, v.basis_ops[i], cfg.commutant_tol, "dot_extension",
                    static_cast<int>(i));

  const Space& X = u.space();
  CMatrix acc = CMatrix::Zero(X.dim(), X.dim());
  DotExtensionReport rep;
  rep.f_sup = 0.0;
  for (int l = 0; l < u.size(); ++l) {
    acc += u.idempotents[l].entries * v.at(F[l]).entries;
    rep.f_sup = std::max(rep.f_sup, v.z_norm(F[l]));
  }
  rep.result = OperatorMatrix::on(X, std::move(acc));
  rep.lhs = op_norm(rep.result, cfg.op_cfg).value;

  RBoundConfig rc = cfg.r_cfg;
  RepNormConfig uc = cfg.rep_cfg;
  for (int pass = 0;; ++pass) {
    rep.u_norm = rep_norm(u, uc).value;
    rep.r_hat = r_bound_of_map(v, rc).value;
    double rhs = rep.u_norm * rep.u_norm * rep.r_hat * rep.f_sup;
    rep.ratio = (rhs > 0.0) ? rep.lhs / rhs : (rep.lhs > 0.0 ? kInfinity : 0.0);
    if (rep.ratio <= 1.0 + cfg.slack_budget) {
      rep.flagged = false;
      return rep;
    }
    if (pass >= cfg.max_escalations) {
      rep.flagged = true;
      return rep;
    }
    rc = escalate(rc);
    uc = escalate(uc);
    rep.escalations = pass + 1;
  }
}

FiniteRepresentation product_rep(const FiniteRepresentation& u,
                                 const FiniteRepresentation& v, double tol) {
  require_valid(u);
  require_valid(v);
  if (!u.unital || !v.unital)
    throw PreconditionError("product_rep", "both factors unital");
  if (!u.space().same_norm_as(v.space()))
    throw PreconditionError("product_rep", "factors act on a common space");
  for (int l = 0; l < u.size(); ++l)
    for (int m = 0; m < v.size(); ++m) {
      const CMatrix& p = u.idempotents[l].entries;
      const CMatrix& q = v.idempotents[m].entries;
      double res = (p * q - q * p).norm();
      double scale = std::max(1e-300, p.norm() * q.norm());
      if (res > tol * scale)
        throw PreconditionError("product_rep",
                                "commutation of p_" + std::to_string(l) +
                                    " with q_" + std::to_string(m),
                                res / scale);
    }

  FiniteRepresentation w;
  w.unital = true;
  const Space& X = u.space();
  for (int l = 0; l < u.size(); ++l)
    for (int m = 0; m < v.size(); ++m) {
      w.points.push_back(u.points.at(l) + "*" + v.points.at(m));
      w.idempotents.push_back(OperatorMatrix::on(
          X, u.idempotents[l].entries * v.idempotents[m].entries));
    }
  require_valid(w, std::max(tol, 1e-10));

  // restriction identities: sum_m q_lm = p_l and sum_l q_lm = q_m
  for (int l = 0; l < u.size(); ++l) {
    CMatrix s = CMatrix::Zero(X.dim(), X.dim());
    for (int m = 0; m < v.size(); ++m)
      s += w.idempotents[l * v.size() + m].entries;
    double res = (s - u.idempotents[l].entries).norm();
    if (res > 1e-9)
      throw ValidationError("product_rep", "restriction to C(K_1)", res);
  }
  for (int m = 0; m < v.size(); ++m) {
    CMatrix s = CMatrix::Zero(X.dim(), X.dim());
    for (int l = 0; l < u.size(); ++l)
      s += w.idempotents[l * v.size() + m].entries;
    double res = (s - v.idempotents[m].entries).norm();
    if (res > 1e-9)
      throw ValidationError("product_rep", "restriction to C(K_2)", res);
  }
  return w;
}

}  // namespace oplab
