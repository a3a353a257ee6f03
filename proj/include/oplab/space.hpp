#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cstdint>
#include <limits>
#include <memory>
#include <string>

namespace oplab {

using Complex = std::complex<double>;
using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;
using RVector = Eigen::VectorXd;
using RMatrix = Eigen::MatrixXd;

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// A finite-dimensional Banach space. Three kinds:
///  - lp(n, p): unweighted l^p_n (stored with all-ones atom weights);
///  - weighted_atoms(n, p, mu): L^p over n atoms of masses mu_i > 0;
///  - rad_model(base, m): the Rademacher average space Rad_m(base), whose
///    coordinates stack a family (x_1..x_m) and whose norm is the exact
///    sign-averaged L^2 norm (avg over {-1,1}^m of ||sum_k s_k x_k||^2)^(1/2).
///    Beyond the enumeration budget a Monte Carlo sign sample is used instead.
///
/// lp(n,p) and weighted_atoms(n,p,1) produce identical norms by construction.
class Space {
 public:
  enum class Kind { lp, weighted_atoms, rad_model };

  Space() { mu_ = RVector::Ones(1); }  // l^2_1

  static Space lp(Eigen::Index n, double p);
  static Space weighted_atoms(Eigen::Index n, double p, RVector mu);
  static Space rad_model(const Space& base, int m);
  static Space rad_model_mc(const Space& base, int m, int samples,
                            std::uint64_t seed);

  Kind kind() const { return kind_; }
  bool is_atoms() const { return kind_ != Kind::rad_model; }
  /// Coordinate dimension (m * base.dim() for rad_model).
  Eigen::Index dim() const;
  /// Exponent p; atoms only.
  double exponent() const;
  const RVector& atom_weights() const;
  const Space& base() const;
  int rad_slots() const { return slots_; }
  bool rad_exact() const { return mc_signs_.rows() == 0; }
  const RMatrix& mc_signs() const { return mc_signs_; }

  double norm(const CVector& x) const;
  double norm_sq(const CVector& x) const;
  /// Wirtinger gradient d||x||^2 / d conj(x); a subgradient at kinks (p=1, inf).
  CVector norm_sq_grad(const CVector& x) const;

  /// True when the norm is a weighted l^2 norm (atoms p=2, or an exact
  /// rad_model over such a base, where sign-orthogonality collapses the
  /// average to the flattened weighted l^2 norm).
  bool is_hilbert() const;
  RVector hilbert_weights() const;

  /// Dual space under the mu-weighted pairing: p -> p/(p-1), same weights.
  Space dual() const;
  /// Natural pairing <x, y> = sum_i mu_i x_i conj(y_i); atoms only.
  Complex pairing(const CVector& x, const CVector& y) const;

  bool same_norm_as(const Space& o) const;
  std::string describe() const;

 private:
  Kind kind_ = Kind::lp;
  double p_ = 2.0;
  RVector mu_;                          // atoms
  std::shared_ptr<const Space> base_;   // rad_model
  int slots_ = 0;                       // rad_model
  RMatrix mc_signs_;                    // rad_model MC: samples x m, entries +-1
};

/// A vector together with the space it lives in.
struct Vec {
  Space space;
  CVector coords;

  Vec() = default;
  Vec(Space s, CVector c);
  double norm() const { return space.norm(coords); }
};

/// Exact norm of x in `space`; checks that x belongs to the space.
double space_norm(const Space& space, const Vec& x);

}  // namespace oplab
