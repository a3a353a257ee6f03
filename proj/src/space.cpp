#include "oplab/space.hpp"

#include <cmath>
#include <sstream>

#include "oplab/errors.hpp"
#include "oplab/rng.hpp"

namespace oplab {

Space Space::lp(Eigen::Index n, double p) {
  Space s;
  s.kind_ = Kind::lp;
  if (n < 1) throw ConfigError("Space: dimension must be >= 1");
  if (!(p >= 1.0)) throw ConfigError("Space: exponent must satisfy p >= 1");
  s.p_ = p;
  s.mu_ = RVector::Ones(n);
  return s;
}

Space Space::weighted_atoms(Eigen::Index n, double p, RVector mu) {
  Space s = lp(n, p);
  s.kind_ = Kind::weighted_atoms;
  if (mu.size() != n)
    throw DimensionMismatch("Space::weighted_atoms", n, mu.size());
  if ((mu.array() <= 0.0).any())
    throw ConfigError("Space: all atom weights must be positive");
  s.mu_ = std::move(mu);
  return s;
}

Space Space::rad_model(const Space& base, int m) {
  if (m < 1) throw ConfigError("Space::rad_model: need m >= 1");
  if (m > 20) throw ConfigError("Space::rad_model: exact model limited to m <= 20");
  Space s;
  s.kind_ = Kind::rad_model;
  s.base_ = std::make_shared<Space>(base);
  s.slots_ = m;
  return s;
}

Space Space::rad_model_mc(const Space& base, int m, int samples,
                          std::uint64_t seed) {
  if (m < 1) throw ConfigError("Space::rad_model_mc: need m >= 1");
  if (samples < 1) throw ConfigError("Space::rad_model_mc: need samples >= 1");
  Space s;
  s.kind_ = Kind::rad_model;
  s.base_ = std::make_shared<Space>(base);
  s.slots_ = m;
  s.mc_signs_.resize(samples, m);
  Rng rng = Rng(seed).derive(0x7261646D63ull);  // "radmc"
  for (int r = 0; r < samples; ++r)
    for (int k = 0; k < m; ++k) s.mc_signs_(r, k) = rng.sign();
  return s;
}

Eigen::Index Space::dim() const {
  if (kind_ == Kind::rad_model) return slots_ * base_->dim();
  return mu_.size();
}

double Space::exponent() const {
  if (kind_ == Kind::rad_model)
    throw ConfigError("Space::exponent: rad_model has no single exponent");
  return p_;
}

const RVector& Space::atom_weights() const {
  if (kind_ == Kind::rad_model)
    throw ConfigError("Space::atom_weights: not an atom space");
  return mu_;
}

const Space& Space::base() const {
  if (kind_ != Kind::rad_model)
    throw ConfigError("Space::base: not a rad_model space");
  return *base_;
}

namespace {

double atoms_norm(const RVector& mu, double p, const CVector& x) {
  if (p == kInfinity) return x.size() ? x.cwiseAbs().maxCoeff() : 0.0;
  if (p == 2.0) return std::sqrt((mu.array() * x.array().abs2()).sum());
  if (p == 1.0) return (mu.array() * x.array().abs()).sum();
  double s = 0.0;
  for (Eigen::Index i = 0; i < x.size(); ++i)
    s += mu[i] * std::pow(std::abs(x[i]), p);
  return std::pow(s, 1.0 / p);
}

CVector atoms_grad(const RVector& mu, double p, const CVector& x) {
  CVector g = CVector::Zero(x.size());
  if (p == kInfinity) {
    Eigen::Index imax = 0;
    double best = -1.0;
    for (Eigen::Index i = 0; i < x.size(); ++i) {
      double a = std::abs(x[i]);
      if (a > best) {
        best = a;
        imax = i;
      }
    }
    if (best > 0.0) g[imax] = x[imax];
    return g;
  }
  if (p == 2.0) {
    for (Eigen::Index i = 0; i < x.size(); ++i) g[i] = mu[i] * x[i];
    return g;
  }
  // d||x||^2/d conj(x_i) = S^(2/p - 1) * mu_i |x_i|^(p-2) x_i, S = sum mu|x|^p
  double s = 0.0;
  for (Eigen::Index i = 0; i < x.size(); ++i)
    s += mu[i] * std::pow(std::abs(x[i]), p);
  if (s == 0.0) return g;
  double outer = std::pow(s, 2.0 / p - 1.0);
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    double a = std::abs(x[i]);
    if (a > 0.0) g[i] = outer * mu[i] * std::pow(a, p - 2.0) * x[i];
  }
  return g;
}

}  // namespace

double Space::norm_sq(const CVector& x) const {
  if (x.size() != dim())
    throw DimensionMismatch("Space::norm", dim(), x.size());
  if (kind_ != Kind::rad_model) {
    double v = atoms_norm(mu_, p_, x);
    return v * v;
  }
  const Space& b = *base_;
  const Eigen::Index bd = b.dim();
  if (b.is_hilbert() && rad_exact()) {
    // sign-orthogonality: avg_s ||sum s_k x_k||^2 = sum_k ||x_k||^2
    double s = 0.0;
    for (int k = 0; k < slots_; ++k) s += b.norm_sq(x.segment(k * bd, bd));
    return s;
  }
  if (rad_exact()) {
    // enumerate {-1,1}^m with the first sign fixed (global flip symmetry)
    const std::uint64_t patterns = 1ull << (slots_ - 1);
    double acc = 0.0;
    CVector v(bd);
    for (std::uint64_t bits = 0; bits < patterns; ++bits) {
      v = x.segment(0, bd);
      for (int k = 1; k < slots_; ++k) {
        if (bits & (1ull << (k - 1)))
          v -= x.segment(k * bd, bd);
        else
          v += x.segment(k * bd, bd);
      }
      acc += b.norm_sq(v);
    }
    return acc / static_cast<double>(patterns);
  }
  double acc = 0.0;
  CVector v(bd);
  for (Eigen::Index r = 0; r < mc_signs_.rows(); ++r) {
    v.setZero();
    for (int k = 0; k < slots_; ++k)
      v += mc_signs_(r, k) * x.segment(k * bd, bd);
    acc += b.norm_sq(v);
  }
  return acc / static_cast<double>(mc_signs_.rows());
}

double Space::norm(const CVector& x) const { return std::sqrt(norm_sq(x)); }

CVector Space::norm_sq_grad(const CVector& x) const {
  if (x.size() != dim())
    throw DimensionMismatch("Space::norm_sq_grad", dim(), x.size());
  if (kind_ != Kind::rad_model) return atoms_grad(mu_, p_, x);
  const Space& b = *base_;
  const Eigen::Index bd = b.dim();
  CVector g = CVector::Zero(dim());
  if (b.is_hilbert() && rad_exact()) {
    for (int k = 0; k < slots_; ++k)
      g.segment(k * bd, bd) = b.norm_sq_grad(x.segment(k * bd, bd));
    return g;
  }
  if (rad_exact()) {
    const std::uint64_t patterns = 1ull << (slots_ - 1);
    CVector v(bd);
    for (std::uint64_t bits = 0; bits < patterns; ++bits) {
      v = x.segment(0, bd);
      for (int k = 1; k < slots_; ++k) {
        if (bits & (1ull << (k - 1)))
          v -= x.segment(k * bd, bd);
        else
          v += x.segment(k * bd, bd);
      }
      CVector gb = b.norm_sq_grad(v);
      g.segment(0, bd) += gb;
      for (int k = 1; k < slots_; ++k) {
        if (bits & (1ull << (k - 1)))
          g.segment(k * bd, bd) -= gb;
        else
          g.segment(k * bd, bd) += gb;
      }
    }
    return g / static_cast<double>(patterns);
  }
  CVector v(bd);
  for (Eigen::Index r = 0; r < mc_signs_.rows(); ++r) {
    v.setZero();
    for (int k = 0; k < slots_; ++k)
      v += mc_signs_(r, k) * x.segment(k * bd, bd);
    CVector gb = b.norm_sq_grad(v);
    for (int k = 0; k < slots_; ++k)
      g.segment(k * bd, bd) += mc_signs_(r, k) * gb;
  }
  return g / static_cast<double>(mc_signs_.rows());
}

bool Space::is_hilbert() const {
  if (kind_ != Kind::rad_model) return p_ == 2.0;
  return rad_exact() && base_->is_hilbert();
}

RVector Space::hilbert_weights() const {
  if (!is_hilbert())
    throw ConfigError("Space::hilbert_weights: norm is not a weighted l^2 norm");
  if (kind_ != Kind::rad_model) return mu_;
  RVector bw = base_->hilbert_weights();
  RVector w(dim());
  for (int k = 0; k < slots_; ++k) w.segment(k * bw.size(), bw.size()) = bw;
  return w;
}

Space Space::dual() const {
  if (kind_ == Kind::rad_model)
    throw ConfigError("Space::dual: rad_model duals are out of scope");
  double q;
  if (p_ == kInfinity)
    q = 1.0;
  else if (p_ == 1.0)
    q = kInfinity;
  else
    q = p_ / (p_ - 1.0);
  if (kind_ == Kind::lp) return lp(mu_.size(), q);
  return weighted_atoms(mu_.size(), q, mu_);
}

Complex Space::pairing(const CVector& x, const CVector& y) const {
  if (kind_ == Kind::rad_model)
    throw ConfigError("Space::pairing: atoms only");
  if (x.size() != dim()) throw DimensionMismatch("Space::pairing", dim(), x.size());
  if (y.size() != dim()) throw DimensionMismatch("Space::pairing", dim(), y.size());
  Complex s = 0.0;
  for (Eigen::Index i = 0; i < x.size(); ++i) s += mu_[i] * x[i] * std::conj(y[i]);
  return s;
}

bool Space::same_norm_as(const Space& o) const {
  if ((kind_ == Kind::rad_model) != (o.kind_ == Kind::rad_model)) return false;
  if (kind_ != Kind::rad_model) {
    return dim() == o.dim() && p_ == o.p_ && mu_.isApprox(o.mu_, 0.0);
  }
  if (slots_ != o.slots_) return false;
  if (rad_exact() != o.rad_exact()) return false;
  if (!rad_exact() && !(mc_signs_ == o.mc_signs_)) return false;
  return base_->same_norm_as(*o.base_);
}

std::string Space::describe() const {
  std::ostringstream os;
  if (kind_ == Kind::rad_model) {
    os << "Rad_" << slots_ << (rad_exact() ? "" : "~mc") << "("
       << base_->describe() << ")";
    return os.str();
  }
  if (kind_ == Kind::lp) {
    os << "l";
  } else {
    os << "L";
  }
  if (p_ == kInfinity)
    os << "inf";
  else
    os << p_;
  if (kind_ == Kind::weighted_atoms) os << "(mu)";
  os << "[" << dim() << "]";
  return os.str();
}

Vec::Vec(Space s, CVector c) : space(std::move(s)), coords(std::move(c)) {
  if (coords.size() != space.dim())
    throw DimensionMismatch("Vec", space.dim(), coords.size());
}

double space_norm(const Space& space, const Vec& x) {
  if (x.coords.size() != space.dim())
    throw DimensionMismatch("norm", space.dim(), x.coords.size());
  if (!space.same_norm_as(x.space))
    throw PreconditionError("norm", "vector belongs to the given space");
  return space.norm(x.coords);
}

}  // namespace oplab
