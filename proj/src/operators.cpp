#include "oplab/operators.hpp"

#include <Eigen/SVD>
#include <cmath>

#include "oplab/errors.hpp"
#include "oplab/rng.hpp"

namespace oplab {

OperatorMatrix::OperatorMatrix(Space dom, Space cod, CMatrix a)
    : domain(std::move(dom)), codomain(std::move(cod)), entries(std::move(a)) {
  if (entries.rows() != codomain.dim())
    throw DimensionMismatch("OperatorMatrix rows", codomain.dim(), entries.rows());
  if (entries.cols() != domain.dim())
    throw DimensionMismatch("OperatorMatrix cols", domain.dim(), entries.cols());
}

OperatorMatrix OperatorMatrix::identity(const Space& s) {
  return {s, s, CMatrix::Identity(s.dim(), s.dim())};
}

OperatorMatrix OperatorMatrix::zero(const Space& dom, const Space& cod) {
  return {dom, cod, CMatrix::Zero(cod.dim(), dom.dim())};
}

OperatorMatrix OperatorMatrix::on(const Space& s, CMatrix a) {
  return {s, s, std::move(a)};
}

CVector OperatorMatrix::apply(const CVector& x) const {
  if (x.size() != domain.dim())
    throw DimensionMismatch("OperatorMatrix::apply", domain.dim(), x.size());
  return entries * x;
}

Vec OperatorMatrix::apply(const Vec& x) const {
  if (!domain.same_norm_as(x.space))
    throw PreconditionError("OperatorMatrix::apply", "argument in domain space");
  return {codomain, entries * x.coords};
}

OperatorMatrix OperatorMatrix::compose(const OperatorMatrix& rhs) const {
  if (rhs.codomain.dim() != domain.dim())
    throw DimensionMismatch("OperatorMatrix::compose", domain.dim(),
                            rhs.codomain.dim());
  return {rhs.domain, codomain, entries * rhs.entries};
}

double rayleigh_ratio(const OperatorMatrix& T, const CVector& x) {
  double d = T.domain.norm(x);
  if (d == 0.0) return 0.0;
  return T.codomain.norm(T.entries * x) / d;
}

namespace {

// Largest singular value path for weighted-l^2 domain and codomain:
// ||T|| = sigma_max(Wc^(1/2) A Wd^(-1/2)); witness from the top right
// singular vector.
NormEstimate hilbert_exact(const OperatorMatrix& T) {
  RVector wd = T.domain.hilbert_weights();
  RVector wc = T.codomain.hilbert_weights();
  CMatrix scaled = wc.array().sqrt().matrix().asDiagonal() * T.entries *
                   wd.array().rsqrt().matrix().asDiagonal();
  Eigen::JacobiSVD<CMatrix> svd(scaled, Eigen::ComputeThinV);
  NormEstimate est;
  est.value = svd.singularValues().size() ? svd.singularValues()(0) : 0.0;
  est.kind = EstimateKind::exact;
  CVector v = svd.matrixV().col(0);
  CVector x = wd.array().rsqrt().matrix().asDiagonal() * v;
  est.witness.push_back(Vec{T.domain, x});
  return est;
}

// max_j (sum_i c_i |a_ij|) / d_j; attained at the scaled basis vector e_j/d_j.
NormEstimate l1_exact(const OperatorMatrix& T) {
  const RVector& d = T.domain.atom_weights();
  const RVector& c = T.codomain.atom_weights();
  NormEstimate est;
  est.kind = EstimateKind::exact;
  Eigen::Index jbest = 0;
  for (Eigen::Index j = 0; j < T.entries.cols(); ++j) {
    double s = (c.array() * T.entries.col(j).array().abs()).sum() / d[j];
    if (s > est.value) {
      est.value = s;
      jbest = j;
    }
  }
  CVector x = CVector::Zero(T.domain.dim());
  x[jbest] = 1.0 / d[jbest];
  est.witness.push_back(Vec{T.domain, x});
  return est;
}

// max_i sum_j |a_ij|; witness has unimodular coordinates aligned with row i.
NormEstimate linf_exact(const OperatorMatrix& T) {
  NormEstimate est;
  est.kind = EstimateKind::exact;
  Eigen::Index ibest = 0;
  for (Eigen::Index i = 0; i < T.entries.rows(); ++i) {
    double s = T.entries.row(i).cwiseAbs().sum();
    if (s > est.value) {
      est.value = s;
      ibest = i;
    }
  }
  CVector x(T.domain.dim());
  for (Eigen::Index j = 0; j < x.size(); ++j) {
    Complex a = T.entries(ibest, j);
    x[j] = (std::abs(a) > 0.0) ? std::conj(a) / std::abs(a) : Complex(1.0, 0.0);
  }
  est.witness.push_back(Vec{T.domain, x});
  return est;
}

}  // namespace

NormEstimate op_norm(const OperatorMatrix& T, const OpNormConfig& cfg) {
  const Space& dom = T.domain;
  const Space& cod = T.codomain;
  if (cfg.allow_exact_paths) {
    if (dom.is_hilbert() && cod.is_hilbert()) return hilbert_exact(T);
    if (dom.is_atoms() && cod.is_atoms()) {
      if (dom.exponent() == 1.0 && cod.exponent() == 1.0) return l1_exact(T);
      if (dom.exponent() == kInfinity && cod.exponent() == kInfinity)
        return linf_exact(T);
    }
  }

  // Projected ascent of ||Tx|| / ||x|| with random restarts; a certified
  // lower bound, re-evaluated at the witness before returning.
  const Eigen::Index n = dom.dim();
  Rng root = Rng(cfg.seed).derive(0x6F706E6F726Dull);
  NormEstimate best;
  best.kind = EstimateKind::lower_bound;
  long total_iters = 0;

  auto ratio = [&](const CVector& x) { return rayleigh_ratio(T, x); };

  for (int r = 0; r < cfg.restarts; ++r) {
    Rng rng = root.derive(r);
    CVector x(n);
    if (r == 0) {
      x.setOnes();
    } else if (r <= n && r < cfg.restarts - 1) {
      x.setZero();
      x[r - 1] = 1.0;
    } else {
      for (Eigen::Index i = 0; i < n; ++i) x[i] = rng.cnormal();
    }
    double nx = dom.norm(x);
    if (nx == 0.0) continue;
    x /= nx;
    double val = ratio(x);
    double step = cfg.init_step;
    for (int it = 0; it < cfg.iterations && step > 1e-13; ++it) {
      ++total_iters;
      CVector y = T.entries * x;
      double nsq = cod.norm_sq(y);
      double dsq = dom.norm_sq(x);
      if (dsq == 0.0) break;
      CVector gn = T.entries.adjoint() * cod.norm_sq_grad(y);
      CVector gd = dom.norm_sq_grad(x);
      CVector g = (gn * dsq - gd * nsq) / (dsq * dsq);
      double gn2 = g.norm();
      if (gn2 < 1e-16) break;
      CVector cand = x + (step / gn2) * g;
      double cn = dom.norm(cand);
      if (cn == 0.0) {
        step *= 0.5;
        continue;
      }
      cand /= cn;
      double cv = ratio(cand);
      if (cv > val) {
        x = cand;
        val = cv;
        step *= 1.25;
      } else {
        step *= 0.5;
      }
    }
    if (val > best.value) {
      best.value = val;
      best.witness.clear();
      best.witness.push_back(Vec{dom, x});
    }
  }
  best.iterations = total_iters;
  if (!best.witness.empty())
    best.value = ratio(best.witness[0].coords);  // certify: value == witness ratio
  return best;
}

OperatorMatrix adjoint(const OperatorMatrix& T) {
  if (!T.domain.is_atoms() || !T.codomain.is_atoms())
    throw PreconditionError("adjoint", "atom-space operator");
  const RVector& d = T.domain.atom_weights();
  const RVector& c = T.codomain.atom_weights();
  CMatrix a = d.cwiseInverse().asDiagonal() * T.entries.adjoint() *
              c.asDiagonal();
  return {T.codomain.dual(), T.domain.dual(), std::move(a)};
}

}  // namespace oplab
