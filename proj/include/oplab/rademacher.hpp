#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "oplab/operators.hpp"
#include "oplab/space.hpp"

namespace oplab {

/// An ordered family x_1..x_k representing sum_k eps_k (x) x_k in Rad(X).
struct RadFamily {
  Space base;
  std::vector<CVector> members;

  CVector stacked() const;  // concatenated coordinates
  static RadFamily from_stacked(const Space& base, const CVector& s, int k);
};

enum class AverageMode { exact, monte_carlo, auto_select };

struct AverageConfig {
  AverageMode mode = AverageMode::auto_select;
  int exact_max_signs = 14;  // 2^14 evaluations at most
  int samples = 20000;
  int gaussian_samples = 20000;
  std::uint64_t seed = 1;
};

struct AverageResult {
  double value = 0.0;
  double stderr_ = 0.0;  // 0 for exact
  bool exact = true;
  long evals = 0;
};

/// (avg over signs of ||sum_k s_k x_k||^2)^(1/2); exact enumeration for
/// k <= exact_max_signs, otherwise an unbiased Monte Carlo estimate of the
/// squared average with delta-method standard error.
AverageResult rad_norm(const RadFamily& fam, const AverageConfig& cfg = {});

/// Gaussian analog with independent standard complex Gaussians (E|g|^2 = 1);
/// always Monte Carlo.
AverageResult gauss_norm(const RadFamily& fam, const AverageConfig& cfg = {});

struct RBoundWitness {
  std::vector<int> assignment;   // slot -> index into tau (discrete search)
  std::vector<CVector> zs;       // slot -> parameter on the unit ball of Z (map search)
  RadFamily family;              // the vectors x_1..x_m
};

struct RestartDiagnostics {
  int m = 0;
  int restart = 0;
  double ratio = 0.0;
  long evals = 0;
};

/// Certified lower bound of an R-bound; `value` always equals the witness
/// ratio recomputed through rad_norm.
struct RBoundEstimate {
  double value = 0.0;
  RBoundWitness witness;
  int family_size_used = 0;
  std::vector<RestartDiagnostics> trace;
};

struct RBoundConfig {
  std::vector<int> m_sweep = {1, 2, 4, 8};  // m = 1 is always included
  int restarts = 10;
  int rounds = 3;        // alternations of vector ascent and assignment moves
  int ascent_iters = 60;
  double init_step = 0.5;
  AverageConfig avg;
  std::uint64_t seed = 1;
  std::vector<RBoundWitness> warm_starts;  // polished and included in the max
};

/// Lower-bound estimate of R(tau) by alternating maximization of
/// rad_norm({T_k x_k}) / rad_norm({x_k}) over assignments of tau members to
/// slots (with repetition) and over vector families.
RBoundEstimate r_bound(const std::vector<OperatorMatrix>& tau,
                       const RBoundConfig& cfg = {});

/// A linear map v(z) = sum_i z_i V_i from a described normed parameter space
/// into B(X); z_norm evaluates the norm on the coordinates of Z.
struct RBoundedMap {
  std::vector<OperatorMatrix> basis_ops;
  std::function<double(const CVector&)> z_norm;
  std::string z_name = "Z";

  OperatorMatrix at(const CVector& z) const;
};

/// Lower bound of R({v(z) : ||z||_Z <= 1}): the slot assignment becomes a
/// continuous optimization over unit-ball parameters z_1..z_m.
RBoundEstimate r_bound_of_map(const RBoundedMap& v, const RBoundConfig& cfg = {});

}  // namespace oplab
