#include <cmath>

#include "doctest.h"
#include "oplab/errors.hpp"
#include "oplab/operators.hpp"
#include "oplab/rng.hpp"
#include "oplab/space.hpp"
#include "support/oracles.hpp"

using namespace oplab;
using oplab::testing::brute_force_op_norm;
using oplab::testing::random_cmatrix;
using oplab::testing::random_cvector;

TEST_CASE("norm: pinned examples") {
  Space l22 = Space::lp(2, 2.0);
  CVector x(2);
  x << 3.0, 4.0;
  CHECK(l22.norm(x) == doctest::Approx(5.0).epsilon(1e-14));

  Space l12 = Space::lp(2, 1.0);
  CVector y(2);
  y << 1.0, 1.0;
  CHECK(l12.norm(y) == doctest::Approx(2.0).epsilon(1e-14));

  RVector mu(2);
  mu << 4.0, 1.0;
  Space w = Space::weighted_atoms(2, 2.0, mu);
  CHECK(w.norm(y) == doctest::Approx(std::sqrt(5.0)).epsilon(1e-14));
}

TEST_CASE("norm: lp equals weighted_atoms with unit weights") {
  Rng rng(7);
  for (double p : {1.0, 1.5, 2.0, 3.0, kInfinity}) {
    Space a = Space::lp(5, p);
    Space b = Space::weighted_atoms(5, p, RVector::Ones(5));
    for (int t = 0; t < 20; ++t) {
      CVector x = random_cvector(rng, 5);
      CHECK(a.norm(x) == doctest::Approx(b.norm(x)).epsilon(1e-15));
    }
  }
}

TEST_CASE("norm: axioms hold to 1e-12 on random spaces") {
  Rng rng(11);
  for (int trial = 0; trial < 60; ++trial) {
    double ps[] = {1.0, 1.3, 2.0, 2.7, 4.0, kInfinity};
    double p = ps[trial % 6];
    int n = 2 + (trial % 4);
    RVector mu(n);
    for (int i = 0; i < n; ++i) mu[i] = 0.25 + rng.uniform01() * 3.0;
    Space s = Space::weighted_atoms(n, p, mu);
    CVector x = random_cvector(rng, n);
    CVector y = random_cvector(rng, n);
    Complex alpha = rng.cnormal();

    CHECK(s.norm(CVector::Zero(n)) == 0.0);
    CHECK(s.norm(x) > 0.0);
    CHECK(s.norm(alpha * x) ==
          doctest::Approx(std::abs(alpha) * s.norm(x)).epsilon(1e-12));
    CHECK(s.norm(x + y) <= s.norm(x) + s.norm(y) + 1e-12);
  }
}

TEST_CASE("norm: dimension mismatch is a structured error") {
  Space s = Space::lp(3, 2.0);
  Vec v{Space::lp(2, 2.0), CVector::Zero(2)};
  CHECK_THROWS_AS(space_norm(s, v), DimensionMismatch);
  try {
    space_norm(s, v);
  } catch (const DimensionMismatch& e) {
    CHECK(e.expected == 3);
    CHECK(e.got == 2);
  }
}

TEST_CASE("norm_sq_grad: matches finite differences away from kinks") {
  Rng rng(13);
  for (double p : {1.5, 2.0, 3.0}) {
    Space s = Space::lp(4, p);
    CVector x = random_cvector(rng, 4);
    CVector g = s.norm_sq_grad(x);
    double f0 = s.norm_sq(x);
    const double h = 1e-6;
    for (int i = 0; i < 4; ++i) {
      CVector dx = CVector::Zero(4);
      dx[i] = h;
      double dre = (s.norm_sq(x + dx) - f0) / h;
      dx[i] = Complex(0, h);
      double dim_ = (s.norm_sq(x + dx) - f0) / h;
      // f(x+eps u) - f(x) ~ 2 eps Re<g, u>
      CHECK(dre == doctest::Approx(2.0 * g[i].real()).epsilon(1e-4));
      CHECK(dim_ == doctest::Approx(2.0 * g[i].imag()).epsilon(1e-4));
    }
  }
}

TEST_CASE("op_norm: identity is exactly 1 on every l^p") {
  for (double p : {1.0, 1.7, 2.0, 3.0, kInfinity}) {
    Space s = Space::lp(3, p);
    NormEstimate est = op_norm(OperatorMatrix::identity(s));
    CHECK(est.value == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("op_norm: nilpotent shift on l^2_2 has norm 1 (SVD path)") {
  Space s = Space::lp(2, 2.0);
  CMatrix a(2, 2);
  a << 0, 1, 0, 0;
  NormEstimate est = op_norm(OperatorMatrix::on(s, a));
  CHECK(est.kind == EstimateKind::exact);
  CHECK(est.value == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("op_norm: l^1 -> l^1 max column sum; brute force agrees") {
  Space s = Space::lp(2, 1.0);
  CMatrix a(2, 2);
  a << 1, 2, 3, 4;
  OperatorMatrix T = OperatorMatrix::on(s, a);
  NormEstimate est = op_norm(T);
  CHECK(est.kind == EstimateKind::exact);
  CHECK(est.value == doctest::Approx(6.0).epsilon(1e-14));
  // independent oracle: sampled maximization over the l^1 unit sphere
  double brute = brute_force_op_norm(T, 4000, 17);
  CHECK(brute == doctest::Approx(6.0).epsilon(1e-9));
  CHECK(brute <= est.value + 1e-9);
}

TEST_CASE("op_norm: ascent path is a lower bound agreeing with SVD on l^2") {
  Rng rng(23);
  OpNormConfig ascent;
  ascent.allow_exact_paths = false;
  for (int trial = 0; trial < 10; ++trial) {
    Space s = Space::lp(3, 2.0);
    OperatorMatrix T = OperatorMatrix::on(s, random_cmatrix(rng, 3, 3));
    double exact = op_norm(T).value;
    NormEstimate low = op_norm(T, ascent);
    CHECK(low.value <= exact * (1.0 + 1e-12));
    CHECK(low.value == doctest::Approx(exact).epsilon(1e-9));
    REQUIRE(!low.witness.empty());
    CHECK(rayleigh_ratio(T, low.witness[0].coords) ==
          doctest::Approx(low.value).epsilon(1e-12));
  }
}

TEST_CASE("op_norm: mixed-exponent estimate stays below interpolation bound") {
  // l^4 -> l^4 has no exact path; the ascent value must stay below the
  // Riesz-Thorin interpolation of the exact 2->2 and inf->inf norms.
  Rng rng(29);
  for (int trial = 0; trial < 6; ++trial) {
    CMatrix a = random_cmatrix(rng, 3, 3);
    OperatorMatrix T4 =
        OperatorMatrix::on(Space::lp(3, 4.0), a);
    double n2 = op_norm(OperatorMatrix::on(Space::lp(3, 2.0), a)).value;
    double ninf = op_norm(OperatorMatrix::on(Space::lp(3, kInfinity), a)).value;
    NormEstimate est = op_norm(T4);
    CHECK(est.kind == EstimateKind::lower_bound);
    CHECK(est.value <= std::pow(n2, 0.5) * std::pow(ninf, 0.5) + 1e-9);
    double brute = brute_force_op_norm(T4, 2000, 31 + trial);
    CHECK(est.value >= brute - 1e-6);
  }
}

TEST_CASE("adjoint: pinned examples and pairing identity") {
  Space s = Space::lp(2, 2.0);
  OperatorMatrix I = OperatorMatrix::identity(s);
  CHECK(adjoint(I).entries.isApprox(I.entries));

  CMatrix a(2, 2);
  a << 0, 1, 0, 0;
  CMatrix at(2, 2);
  at << 0, 0, 1, 0;
  CHECK(adjoint(OperatorMatrix::on(s, a)).entries.isApprox(at));

  Rng rng(37);
  for (double p : {1.0, 1.5, 2.0, 3.0}) {
    RVector mu(3);
    for (int i = 0; i < 3; ++i) mu[i] = 0.5 + rng.uniform01();
    Space dom = Space::weighted_atoms(3, p, mu);
    OperatorMatrix T = OperatorMatrix::on(dom, random_cmatrix(rng, 3, 3));
    OperatorMatrix Ts = adjoint(T);
    for (int t = 0; t < 5; ++t) {
      CVector x = random_cvector(rng, 3);
      CVector y = random_cvector(rng, 3);
      Complex lhs = T.codomain.pairing(T.entries * x, y);
      Complex rhs = T.domain.pairing(x, Ts.entries * y);
      CHECK(std::abs(lhs - rhs) < 1e-12 * (1.0 + std::abs(lhs)));
    }
  }
}

TEST_CASE("adjoint: norm is preserved on exact paths") {
  Rng rng(41);
  for (double p : {1.0, 2.0, kInfinity}) {
    Space s = Space::lp(3, p);
    OperatorMatrix T = OperatorMatrix::on(s, random_cmatrix(rng, 3, 3));
    double n = op_norm(T).value;
    double nstar = op_norm(adjoint(T)).value;
    CHECK(n == doctest::Approx(nstar).epsilon(1e-12));
  }
  // weighted l^2
  RVector mu(3);
  mu << 0.5, 1.25, 2.0;
  Space w = Space::weighted_atoms(3, 2.0, mu);
  OperatorMatrix T = OperatorMatrix::on(w, random_cmatrix(rng, 3, 3));
  CHECK(op_norm(T).value == doctest::Approx(op_norm(adjoint(T)).value).epsilon(1e-12));
}

TEST_CASE("rad_model space: norm averages signs and collapses on Hilbert") {
  Space h = Space::lp(2, 2.0);
  Space r = Space::rad_model(h, 3);
  CHECK(r.dim() == 6);
  CHECK(r.is_hilbert());
  Rng rng(43);
  CVector v = random_cvector(rng, 6);
  double direct = 0.0;
  for (int k = 0; k < 3; ++k) direct += v.segment(2 * k, 2).squaredNorm();
  CHECK(r.norm(v) == doctest::Approx(std::sqrt(direct)).epsilon(1e-13));

  Space l1 = Space::lp(2, 1.0);
  Space r1 = Space::rad_model(l1, 2);
  CHECK(!r1.is_hilbert());
  // avg over 4 sign patterns of ||s1 x1 + s2 x2||_1^2, computed by hand
  CVector w(4);
  w << 1.0, 0.0, 0.0, 1.0;  // x1 = e1, x2 = e2
  // every pattern gives ||(+-1, +-1)||_1 = 2
  CHECK(r1.norm(w) == doctest::Approx(2.0).epsilon(1e-14));
}

TEST_CASE("space constructors reject invalid data") {
  CHECK_THROWS_AS(Space::lp(0, 2.0), ConfigError);
  CHECK_THROWS_AS(Space::lp(2, 0.5), ConfigError);
  RVector bad(2);
  bad << 1.0, -1.0;
  CHECK_THROWS_AS(Space::weighted_atoms(2, 2.0, bad), ConfigError);
}
