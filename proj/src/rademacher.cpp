#include "oplab/rademacher.hpp"

#include <algorithm>
#include <cmath>

#include "oplab/errors.hpp"
#include "oplab/rng.hpp"

namespace oplab {

CVector RadFamily::stacked() const {
  const Eigen::Index d = base.dim();
  CVector s(d * static_cast<Eigen::Index>(members.size()));
  for (std::size_t k = 0; k < members.size(); ++k)
    s.segment(static_cast<Eigen::Index>(k) * d, d) = members[k];
  return s;
}

RadFamily RadFamily::from_stacked(const Space& base, const CVector& s, int k) {
  const Eigen::Index d = base.dim();
  if (s.size() != d * k)
    throw DimensionMismatch("RadFamily::from_stacked", d * k, s.size());
  RadFamily f;
  f.base = base;
  f.members.reserve(k);
  for (int j = 0; j < k; ++j) f.members.push_back(s.segment(j * d, d));
  return f;
}

namespace {

void check_family(const RadFamily& fam, const char* where) {
  if (fam.members.empty()) throw PreconditionError(where, "nonempty family");
  for (const auto& x : fam.members)
    if (x.size() != fam.base.dim())
      throw DimensionMismatch(where, fam.base.dim(), x.size());
}

// Enumerate {-1,1}^m with the first sign pinned to +1 (global-flip symmetry
// leaves the averaged norm unchanged).
template <class F>
void for_each_sign(int m, F&& f) {
  std::vector<double> s(m, 1.0);
  const std::uint64_t patterns = 1ull << (m - 1);
  for (std::uint64_t bits = 0; bits < patterns; ++bits) {
    for (int k = 1; k < m; ++k) s[k] = (bits & (1ull << (k - 1))) ? -1.0 : 1.0;
    f(s);
  }
}

AverageResult mc_average(const RadFamily& fam, int samples, std::uint64_t seed,
                         bool gaussian) {
  const int k = static_cast<int>(fam.members.size());
  Rng rng = Rng(seed).derive(gaussian ? 0x67617573ull : 0x72616463ull);
  double sum = 0.0, sumsq = 0.0;
  CVector v(fam.base.dim());
  for (int i = 0; i < samples; ++i) {
    v.setZero();
    for (int j = 0; j < k; ++j) {
      Complex c = gaussian ? rng.cnormal() : Complex(rng.sign(), 0.0);
      v += c * fam.members[j];
    }
    double y = fam.base.norm_sq(v);
    sum += y;
    sumsq += y * y;
  }
  double mean = sum / samples;
  double var = std::max(0.0, sumsq / samples - mean * mean);
  double se_mean = std::sqrt(var / samples);
  AverageResult r;
  r.value = std::sqrt(std::max(0.0, mean));
  r.stderr_ = (r.value > 0.0) ? se_mean / (2.0 * r.value) : std::sqrt(se_mean);
  r.exact = false;
  r.evals = samples;
  return r;
}

}  // namespace

AverageResult rad_norm(const RadFamily& fam, const AverageConfig& cfg) {
  check_family(fam, "rad_norm");
  const int k = static_cast<int>(fam.members.size());
  bool exact;
  switch (cfg.mode) {
    case AverageMode::exact:
      if (k > cfg.exact_max_signs)
        throw PreconditionError(
            "rad_norm",
            "exact mode limited to k <= " + std::to_string(cfg.exact_max_signs) +
                " signs; request mode=monte_carlo for k = " + std::to_string(k));
      exact = true;
      break;
    case AverageMode::monte_carlo:
      exact = false;
      break;
    default:
      exact = (k <= cfg.exact_max_signs);
  }
  if (!exact) return mc_average(fam, cfg.samples, cfg.seed, false);
  double acc = 0.0;
  const Eigen::Index d = fam.base.dim();
  CVector v(d);
  long evals = 0;
  for_each_sign(k, [&](const std::vector<double>& s) {
    v = fam.members[0];
    for (int j = 1; j < k; ++j) v += s[j] * fam.members[j];
    acc += fam.base.norm_sq(v);
    ++evals;
  });
  AverageResult r;
  r.value = std::sqrt(acc / static_cast<double>(evals));
  r.exact = true;
  r.evals = evals;
  return r;
}

AverageResult gauss_norm(const RadFamily& fam, const AverageConfig& cfg) {
  check_family(fam, "gauss_norm");
  return mc_average(fam, cfg.gaussian_samples, cfg.seed, true);
}

OperatorMatrix RBoundedMap::at(const CVector& z) const {
  if (basis_ops.empty())
    throw PreconditionError("RBoundedMap::at", "nonempty operator basis");
  if (z.size() != static_cast<Eigen::Index>(basis_ops.size()))
    throw DimensionMismatch("RBoundedMap::at", basis_ops.size(), z.size());
  CMatrix a = CMatrix::Zero(basis_ops[0].entries.rows(), basis_ops[0].entries.cols());
  for (std::size_t i = 0; i < basis_ops.size(); ++i) a += z[i] * basis_ops[i].entries;
  return {basis_ops[0].domain, basis_ops[0].codomain, std::move(a)};
}

namespace {

// Alternating maximization of rad_norm({T_l x_l}) / rad_norm({x_l}) over slot
// assignments (discrete tau members, or unit-ball parameters of a map) and
// vector families. Produces certified lower bounds: the returned value is the
// witness ratio recomputed through rad_norm.
class RBoundSearch {
 public:
  RBoundSearch(const Space& X, int m, const std::vector<OperatorMatrix>* tau,
               const RBoundedMap* map, const AverageConfig& avg, Rng rng)
      : X_(X), m_(m), tau_(tau), map_(map), avg_(avg), rng_(rng) {
    exact_ = m_ <= avg_.exact_max_signs;
    if (!exact_) {
      mc_signs_.resize(std::max(64, avg_.samples / 8), m_);
      Rng srng = rng_.derive(0x7369676Eull);
      for (Eigen::Index r = 0; r < mc_signs_.rows(); ++r)
        for (int k = 0; k < m_; ++k) mc_signs_(r, k) = srng.sign();
    }
    assign_.assign(m_, 0);
    zs_.assign(m_, CVector());
    slot_ops_.assign(m_, CMatrix());
    xs_.assign(m_, CVector::Zero(X_.dim()));
    ys_.assign(m_, CVector::Zero(X_.dim()));
  }

  long evals() const { return evals_; }

  void init_random(int restart) {
    Rng r = rng_.derive(0x696E6974ull, restart);
    const Eigen::Index d = X_.dim();
    for (int l = 0; l < m_; ++l) {
      if (restart == 0) {
        xs_[l] = CVector::Zero(d);
        xs_[l][l % d] = 1.0;
      } else {
        for (Eigen::Index i = 0; i < d; ++i) xs_[l][i] = r.cnormal();
      }
    }
    if (map_) {
      const int dz = static_cast<int>(map_->basis_ops.size());
      for (int l = 0; l < m_; ++l) {
        CVector z(dz);
        if (restart == 0) {
          z.setOnes();
        } else if (restart == 1) {
          z.setZero();
          z[l % dz] = 1.0;
        } else {
          for (int i = 0; i < dz; ++i) z[i] = r.cnormal();
        }
        double nz = map_->z_norm(z);
        if (nz > 0) z /= nz;
        set_z(l, z);
      }
    } else {
      const int nt = static_cast<int>(tau_->size());
      for (int l = 0; l < m_; ++l) assign_[l] = (restart == 0) ? l % nt : r.uniform_int(nt);
    }
    for (int l = 0; l < m_; ++l) refresh_y(l);
    normalize();
  }

  void load_witness(const RBoundWitness& w) {
    for (int l = 0; l < m_; ++l) xs_[l] = w.family.members[l];
    if (map_) {
      for (int l = 0; l < m_; ++l) set_z(l, w.zs[l]);
    } else {
      assign_ = w.assignment;
    }
    for (int l = 0; l < m_; ++l) refresh_y(l);
    normalize();
  }

  void run(int rounds, int ascent_iters, double step0) {
    for (int round = 0; round < rounds; ++round) {
      ascent_x(ascent_iters, step0);
      if (map_)
        ascent_z(ascent_iters, step0);
      else
        improve_assignment();
    }
  }

  double ratio() const {
    double n, d;
    pair_nd(n, d);
    return d > 0 ? std::sqrt(n / d) : 0.0;
  }

  RBoundWitness witness() const {
    RBoundWitness w;
    w.family.base = X_;
    w.family.members = xs_;
    if (map_)
      w.zs = zs_;
    else
      w.assignment = assign_;
    return w;
  }

  // Recompute the witness ratio through the public estimator.
  double certify(const RBoundWitness& w) const {
    RadFamily num{X_, {}};
    num.members.reserve(m_);
    for (int l = 0; l < m_; ++l) {
      const CMatrix& op = w.zs.empty() ? (*tau_)[w.assignment[l]].entries
                                       : map_->at(w.zs[l]).entries;
      num.members.push_back(op * w.family.members[l]);
    }
    AverageConfig c = avg_;
    c.seed = mix64(avg_.seed ^ 0xCE27ull);
    double den = rad_norm(w.family, c).value;
    if (den == 0.0) return 0.0;
    return rad_norm(num, c).value / den;
  }

 private:
  const CMatrix& op(int l) const {
    return map_ ? slot_ops_[l] : (*tau_)[assign_[l]].entries;
  }

  void set_z(int l, const CVector& z) {
    zs_[l] = z;
    slot_ops_[l] = map_->at(z).entries;
  }

  void refresh_y(int l) { ys_[l] = op(l) * xs_[l]; }

  template <class F>
  void for_signs(F&& f) const {
    if (exact_) {
      for_each_sign(m_, f);
    } else {
      std::vector<double> s(m_);
      for (Eigen::Index r = 0; r < mc_signs_.rows(); ++r) {
        for (int k = 0; k < m_; ++k) s[k] = mc_signs_(r, k);
        f(s);
      }
    }
  }

  void pair_nd(double& N, double& D) const {
    N = D = 0.0;
    const Eigen::Index d = X_.dim();
    CVector v(d), u(d);
    long count = 0;
    for_signs([&](const std::vector<double>& s) {
      v.setZero();
      u.setZero();
      for (int j = 0; j < m_; ++j) {
        v += s[j] * ys_[j];
        u += s[j] * xs_[j];
      }
      N += X_.norm_sq(v);
      D += X_.norm_sq(u);
      ++count;
    });
    N /= static_cast<double>(count);
    D /= static_cast<double>(count);
    evals_ += count;
  }

  // Joint scaling leaves the ratio invariant; keep the denominator at 1.
  void normalize() {
    double n, d;
    pair_nd(n, d);
    if (d <= 0) return;
    double c = 1.0 / std::sqrt(d);
    for (int l = 0; l < m_; ++l) {
      xs_[l] *= c;
      ys_[l] *= c;
    }
  }

  void ascent_x(int iters, double step0) {
    double step = step0;
    double n, d;
    pair_nd(n, d);
    if (d == 0) return;
    double val = n / d;
    const Eigen::Index dim = X_.dim();
    std::vector<CVector> gn_raw(m_), gd_raw(m_);
    for (int it = 0; it < iters && step > 1e-13; ++it) {
      for (int l = 0; l < m_; ++l) {
        gn_raw[l] = CVector::Zero(dim);
        gd_raw[l] = CVector::Zero(dim);
      }
      double N = 0, D = 0;
      long count = 0;
      CVector v(dim), u(dim);
      for_signs([&](const std::vector<double>& s) {
        v.setZero();
        u.setZero();
        for (int j = 0; j < m_; ++j) {
          v += s[j] * ys_[j];
          u += s[j] * xs_[j];
        }
        N += X_.norm_sq(v);
        D += X_.norm_sq(u);
        CVector gv = X_.norm_sq_grad(v);
        CVector gu = X_.norm_sq_grad(u);
        for (int l = 0; l < m_; ++l) {
          gn_raw[l] += s[l] * gv;
          gd_raw[l] += s[l] * gu;
        }
        ++count;
      });
      evals_ += count;
      N /= count;
      D /= count;
      if (D == 0) return;
      double gnorm2 = 0.0;
      std::vector<CVector> grad(m_);
      for (int l = 0; l < m_; ++l) {
        CVector gn = op(l).adjoint() * (gn_raw[l] / static_cast<double>(count));
        CVector gd = gd_raw[l] / static_cast<double>(count);
        grad[l] = (gn * D - gd * N) / (D * D);
        gnorm2 += grad[l].squaredNorm();
      }
      double gnorm = std::sqrt(gnorm2);
      if (gnorm < 1e-16) return;
      std::vector<CVector> cx(m_), cy(m_);
      bool accepted = false;
      while (step > 1e-13) {
        for (int l = 0; l < m_; ++l) {
          cx[l] = xs_[l] + (step / gnorm) * grad[l];
          cy[l] = op(l) * cx[l];
        }
        double cn = 0, cd = 0;
        std::swap(xs_, cx);
        std::swap(ys_, cy);
        pair_nd(cn, cd);
        if (cd > 0 && cn / cd > val) {
          val = cn / cd;
          normalize();
          step *= 1.25;
          accepted = true;
          break;
        }
        std::swap(xs_, cx);
        std::swap(ys_, cy);
        step *= 0.5;
      }
      if (!accepted) return;
    }
  }

  void improve_assignment() {
    const int nt = static_cast<int>(tau_->size());
    if (nt <= 1) return;
    double best = ratio();
    for (int l = 0; l < m_; ++l) {
      int keep = assign_[l];
      int arg = keep;
      for (int t = 0; t < nt; ++t) {
        if (t == keep) continue;
        assign_[l] = t;
        refresh_y(l);
        double r = ratio();
        if (r > best) {
          best = r;
          arg = t;
        }
      }
      assign_[l] = arg;
      refresh_y(l);
    }
  }

  void ascent_z(int iters, double step0) {
    const int dz = static_cast<int>(map_->basis_ops.size());
    const Eigen::Index dim = X_.dim();
    double step = step0;
    double n, d;
    pair_nd(n, d);
    if (d == 0) return;
    double val = n / d;
    std::vector<CVector> graw(m_);
    for (int it = 0; it < iters && step > 1e-13; ++it) {
      for (int l = 0; l < m_; ++l) graw[l] = CVector::Zero(dim);
      double N = 0, D = 0;
      long count = 0;
      CVector v(dim);
      for_signs([&](const std::vector<double>& s) {
        v.setZero();
        for (int j = 0; j < m_; ++j) v += s[j] * ys_[j];
        N += X_.norm_sq(v);
        CVector gv = X_.norm_sq_grad(v);
        for (int l = 0; l < m_; ++l) graw[l] += s[l] * gv;
        ++count;
      });
      evals_ += count;
      N /= count;
      // D is unchanged by z moves.
      double gnorm2 = 0.0;
      std::vector<CVector> gz(m_);
      for (int l = 0; l < m_; ++l) {
        gz[l].resize(dz);
        for (int i = 0; i < dz; ++i) {
          CVector vx = map_->basis_ops[i].entries * xs_[l];
          gz[l][i] = vx.dot(graw[l] / static_cast<double>(count));
        }
        gnorm2 += gz[l].squaredNorm();
      }
      double gnorm = std::sqrt(gnorm2);
      if (gnorm < 1e-16) return;
      std::vector<CVector> keep = zs_;
      bool accepted = false;
      while (step > 1e-13) {
        for (int l = 0; l < m_; ++l) {
          CVector z = keep[l] + (step / gnorm) * gz[l];
          double nz = map_->z_norm(z);
          if (nz > 1.0) z /= nz;
          set_z(l, z);
          refresh_y(l);
        }
        double cn, cd;
        pair_nd(cn, cd);
        if (cd > 0 && cn / cd > val) {
          val = cn / cd;
          step *= 1.25;
          accepted = true;
          break;
        }
        step *= 0.5;
      }
      if (!accepted) {
        for (int l = 0; l < m_; ++l) {
          set_z(l, keep[l]);
          refresh_y(l);
        }
        return;
      }
    }
  }

  const Space& X_;
  int m_;
  const std::vector<OperatorMatrix>* tau_;
  const RBoundedMap* map_;
  AverageConfig avg_;
  Rng rng_;
  bool exact_ = true;
  RMatrix mc_signs_;
  std::vector<int> assign_;
  std::vector<CVector> zs_;
  std::vector<CMatrix> slot_ops_;
  std::vector<CVector> xs_, ys_;
  mutable long evals_ = 0;
};

RBoundEstimate run_engine(const Space& X, const std::vector<OperatorMatrix>* tau,
                          const RBoundedMap* map, const RBoundConfig& cfg) {
  std::vector<int> sweep = cfg.m_sweep;
  if (std::find(sweep.begin(), sweep.end(), 1) == sweep.end())
    sweep.insert(sweep.begin(), 1);  // m = 1 witnesses keep value >= sup ||T||
  std::sort(sweep.begin(), sweep.end());
  sweep.erase(std::unique(sweep.begin(), sweep.end()), sweep.end());

  RBoundEstimate best;
  Rng root = Rng(cfg.seed).derive(0x72626F756E64ull);
  for (int m : sweep) {
    if (m < 1) continue;
    RBoundSearch search(X, m, tau, map, cfg.avg, root.derive(m));
    for (int r = 0; r < cfg.restarts; ++r) {
      search.init_random(r);
      search.run(cfg.rounds, cfg.ascent_iters, cfg.init_step);
      RBoundWitness w = search.witness();
      double val = search.certify(w);
      best.trace.push_back({m, r, val, search.evals()});
      if (val > best.value) {
        best.value = val;
        best.witness = w;
        best.family_size_used = m;
      }
    }
  }
  for (const RBoundWitness& ws : cfg.warm_starts) {
    int m = static_cast<int>(ws.family.members.size());
    if (m < 1) continue;
    RBoundSearch search(X, m, tau, map, cfg.avg, root.derive(0x7761726Dull, m));
    search.load_witness(ws);
    search.run(1, cfg.ascent_iters, cfg.init_step * 0.25);
    RBoundWitness w = search.witness();
    double val = search.certify(w);
    // A polished warm start can only help; fall back to the raw seed if not.
    double raw = search.certify(ws);
    if (raw > val) {
      val = raw;
      w = ws;
    }
    best.trace.push_back({m, -1, val, search.evals()});
    if (val > best.value) {
      best.value = val;
      best.witness = w;
      best.family_size_used = m;
    }
  }
  return best;
}

}  // namespace

RBoundEstimate r_bound(const std::vector<OperatorMatrix>& tau,
                       const RBoundConfig& cfg) {
  if (tau.empty()) throw PreconditionError("r_bound", "nonempty tau");
  const Space& X = tau[0].domain;
  for (const auto& T : tau) {
    if (!T.domain.same_norm_as(X) || !T.codomain.same_norm_as(X))
      throw PreconditionError("r_bound", "all operators act on a common space");
  }
  return run_engine(X, &tau, nullptr, cfg);
}

RBoundEstimate r_bound_of_map(const RBoundedMap& v, const RBoundConfig& cfg) {
  if (v.basis_ops.empty())
    throw PreconditionError("r_bound_of_map", "nonempty operator basis");
  const Space& X = v.basis_ops[0].domain;
  for (const auto& T : v.basis_ops) {
    if (!T.domain.same_norm_as(X) || !T.codomain.same_norm_as(X))
      throw PreconditionError("r_bound_of_map", "all operators act on a common space");
  }
  if (!v.z_norm) throw PreconditionError("r_bound_of_map", "z_norm provided");
  return run_engine(X, nullptr, &v, cfg);
}

}  // namespace oplab
