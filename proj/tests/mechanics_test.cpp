// Copyright 2026 The sga-games Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include <gtest/gtest.h>

#include <cmath>

#include "sga/catalog.hpp"
#include "sga/mechanics.hpp"
#include "test_util.hpp"

namespace sga {
namespace {

using testing::Rng;

Vector vec(std::initializer_list<double> xs) {
  Vector v(static_cast<Index>(xs.size()));
  Index i = 0;
  for (double x : xs) v[i++] = x;
  return v;
}

Matrix mat2(double a, double b, double c, double d) {
  Matrix m(2, 2);
  m << a, b, c, d;
  return m;
}

Game game(const std::string& id, GameParams params = {}) { return catalog_game(id, params).game(); }

double cos2(const Vector& a, const Vector& b) {
  const double c = a.dot(b);
  return c * c / (a.squaredNorm() * b.squaredNorm());
}

TEST(HelmholtzSplit, Examples) {
  const Decomposition d1 = helmholtz_split(mat2(1, 10, -10, 1));
  EXPECT_EQ(d1.S, Matrix::Identity(2, 2));
  EXPECT_EQ(d1.A, mat2(0, 10, -10, 0));
  EXPECT_EQ(d1.additive_condition_number, 0.0);

  const Decomposition d7 = helmholtz_split(mat2(1, 2, 2, 1));
  EXPECT_TRUE(d7.A.isZero(0.0));
  EXPECT_NEAR(d7.sigma_max(), 3.0, 1e-12);
  EXPECT_NEAR(d7.sigma_min(), -1.0, 1e-12);
  EXPECT_NEAR(d7.additive_condition_number, 4.0, 1e-12);

  const Decomposition dd = decompose(game("fig7_four_player"), Vector::Zero(4));
  EXPECT_LT((dd.S - 0.01 * Matrix::Identity(4, 4)).cwiseAbs().maxCoeff(), 1e-15);
  Matrix anti(4, 4);
  anti << 0, 1, 1, 1, -1, 0, 1, 1, -1, -1, 0, 1, -1, -1, -1, 0;
  EXPECT_EQ(dd.A, anti);
}

TEST(HelmholtzSplit, Errors) {
  EXPECT_THROW(helmholtz_split(Matrix(2, 3)), InvalidArgument);
  EXPECT_THROW(helmholtz_split(Matrix(0, 0)), InvalidArgument);
  EXPECT_THROW(helmholtz_split(mat2(1, NAN, 0, 1)), InvalidArgument);
}

TEST(ClassifyGame, Examples) {
  Rng rng(1);
  std::vector<Vector> pts{Vector::Zero(2), rng.vector(2), rng.vector(2)};
  EXPECT_EQ(classify_game(game("example3"), pts).kind, GameKind::Hamiltonian);
  EXPECT_EQ(classify_game(game("example4"), pts).kind, GameKind::Potential);
  EXPECT_EQ(classify_game(game("fig3_weak_attractor"), pts).kind, GameKind::General);
  EXPECT_EQ(classify_game(game("example7"), pts).kind, GameKind::Potential);
  EXPECT_EQ(classify_game(game("fig4_bilinear"), pts).kind, GameKind::Hamiltonian);
  const GameClass c = classify_game(game("fig3_weak_attractor"), pts);
  EXPECT_EQ(c.max_antisymmetric_norm, 10.0);
  EXPECT_EQ(c.max_symmetric_norm, 1.0);
  EXPECT_THROW(classify_game(game("example4"), {}), InvalidArgument);
}

TEST(StabilityProbe, Examples) {
  EXPECT_DOUBLE_EQ(stability_probe(game("fig3_weak_attractor"), vec({1, 1})), 202.0);
  EXPECT_NEAR(stability_probe(game("example6", {{"epsilon", scalar_param(0.1)}}), vec({1, 0})), -0.101, 1e-12);
  EXPECT_EQ(stability_probe(game("example1"), vec({0.3, -1.7, 2, 0.1})), 0.0);
}

TEST(ClassifyFixedPoint, Examples) {
  const FixedPointReport r7 = classify_fixed_point(game("example7"), Vector::Zero(2));
  EXPECT_EQ(r7.stability, Stability::Indefinite);
  EXPECT_TRUE(r7.is_local_nash);
  ASSERT_EQ(r7.s_eigenvalues.size(), 2u);
  EXPECT_NEAR(r7.s_eigenvalues[0], 3.0, 1e-12);
  EXPECT_NEAR(r7.s_eigenvalues[1], -1.0, 1e-12);

  const FixedPointReport r1 = classify_fixed_point(game("example1"), Vector::Zero(4));
  EXPECT_EQ(r1.stability, Stability::Stable);
  EXPECT_TRUE(r1.is_local_nash);

  const FixedPointReport r6 = classify_fixed_point(game("example6"), Vector::Zero(2));
  EXPECT_EQ(r6.stability, Stability::Unstable);
  EXPECT_FALSE(r6.is_local_nash);
  EXPECT_LT(r6.probe_value, 0.0);

  const FixedPointReport r3 = classify_fixed_point(game("fig3_weak_attractor"), Vector::Zero(2));
  EXPECT_EQ(r3.stability, Stability::Stable);
  EXPECT_GT(r3.probe_value, 0.0);
}

TEST(ClassifyFixedPoint, RejectsNonFixedPoint) {
  EXPECT_THROW(classify_fixed_point(game("example7"), vec({1, 0})), NotAFixedPoint);
  const Game e3 = game("example3", {{"a", scalar_param(1)}, {"b", scalar_param(2)}});
  EXPECT_THROW(classify_fixed_point(e3, Vector::Zero(2)), NotAFixedPoint);
  const FixedPointReport r = classify_fixed_point(e3, vec({1, 2}));
  EXPECT_EQ(r.stability, Stability::Stable);
}

// l1 = x^3: S(0) = diag(0, 2) is PSD, but x < 0 nearby makes it indefinite.
TEST(ClassifyFixedPoint, NonQuadraticNeighborhood) {
  const Game cusp = make_game(
      PlayerPartition({1, 1}),
      {{[](const Vector& w) { return w[0] * w[0] * w[0]; },
        [](const Vector& w) { return vec({3 * w[0] * w[0]}); }},
       {[](const Vector& w) { return w[1] * w[1]; }, [](const Vector& w) { return vec({2 * w[1]}); }}},
      Game::HessianFn([](const Vector& w) { return mat2(6 * w[0], 0, 0, 2); }));
  EXPECT_EQ(classify_fixed_point(cusp, Vector::Zero(2)).stability, Stability::Indefinite);

  const Game bowl = make_game(
      PlayerPartition({1, 1}),
      {{[](const Vector& w) { return w[0] * w[0] + std::pow(w[0], 4); },
        [](const Vector& w) { return vec({2 * w[0] + 4 * std::pow(w[0], 3)}); }},
       {[](const Vector& w) { return w[1] * w[1]; }, [](const Vector& w) { return vec({2 * w[1]}); }}},
      Game::HessianFn([](const Vector& w) { return mat2(2 + 12 * w[0] * w[0], 0, 0, 2); }));
  const FixedPointReport r = classify_fixed_point(bowl, Vector::Zero(2));
  EXPECT_EQ(r.stability, Stability::Stable);
  EXPECT_TRUE(r.is_local_nash);
}

TEST(AlignmentSign, Examples) {
  const Game e6 = game("example6", {{"epsilon", scalar_param(0.1)}});
  const Vector w = vec({2, 0});
  const Vector xi = simultaneous_gradient(e6, w).xi;
  const Vector gh = grad_hamiltonian(e6, w);
  const Vector at = sym_adjustment(e6, w);
  EXPECT_NEAR(xi.dot(gh), -0.404, 1e-12);
  EXPECT_NEAR(at.dot(gh), 4.04, 1e-12);
  EXPECT_EQ(alignment_sign(xi, at, gh, 0.1), -1);
  const Vector w1 = vec({1, 0});
  EXPECT_EQ(alignment_sign(simultaneous_gradient(e6, w1).xi, sym_adjustment(e6, w1), grad_hamiltonian(e6, w1), 0.1),
            1);

  const Game g3 = game("fig3_weak_attractor");
  const Vector p = vec({1, 1});
  EXPECT_EQ(alignment_sign(simultaneous_gradient(g3, p).xi, sym_adjustment(g3, p), grad_hamiltonian(g3, p), 0.1), 1);

  const Vector z = Vector::Zero(3);
  EXPECT_EQ(alignment_sign(z, z, z, 0.1), 1);
  EXPECT_EQ(alignment_sign(z, z, z, 0.0), 1);
}

TEST(AlignmentSign, Errors) {
  EXPECT_THROW(alignment_sign(vec({1}), vec({1, 2}), vec({1}), 0.1), InvalidArgument);
  EXPECT_THROW(alignment_sign(Vector(), Vector(), Vector(), 0.1), InvalidArgument);
  EXPECT_THROW(alignment_sign(vec({1}), vec({1}), vec({1}), -0.1), InvalidArgument);
}

TEST(InfinitesimalAlignment, Examples) {
  EXPECT_DOUBLE_EQ(infinitesimal_alignment(vec({1, 0}), vec({0, 1}), vec({1, 1})), 1.0);
  EXPECT_EQ(infinitesimal_alignment(vec({1, 2}), vec({0, 0}), vec({3, -1})), 0.0);
  EXPECT_THROW(infinitesimal_alignment(vec({0, 0}), vec({0, 1}), vec({1, 1})), InvalidArgument);
  EXPECT_THROW(infinitesimal_alignment(vec({1, 0}), vec({0, 1}), vec({0, 0})), InvalidArgument);
  EXPECT_THROW(infinitesimal_alignment(vec({1, 0}), vec({0}), vec({1, 1})), InvalidArgument);
}

TEST(MechanicsProperties, DecompositionExactAndIdempotent) {
  Rng rng(20);
  for (int k = 0; k < 1000; ++k) {
    const Index d = rng.integer(1, 16);
    const Matrix h = rng.matrix(d, d);
    const Decomposition dec = helmholtz_split(h);
    const double scale = h.cwiseAbs().maxCoeff();
    ASSERT_LE((dec.S + dec.A - h).cwiseAbs().maxCoeff(), 1e-14 * scale);
    ASSERT_EQ(dec.S, Matrix(dec.S.transpose()));
    ASSERT_EQ(dec.A, Matrix(-dec.A.transpose()));
    const Decomposition again = helmholtz_split(dec.S);
    ASSERT_EQ(again.S, dec.S);
    ASSERT_TRUE(again.A.isZero(0.0));
    ASSERT_GE(dec.additive_condition_number, 0.0);
  }
}

TEST(MechanicsProperties, OrthogonalEquivariance) {
  Rng rng(21);
  for (int k = 0; k < 200; ++k) {
    const Index d = rng.integer(1, 12);
    const Matrix h = rng.matrix(d, d);
    const Matrix p = rng.orthogonal(d);
    const Decomposition dec = helmholtz_split(h);
    const Decomposition rot = helmholtz_split(p.transpose() * h * p);
    ASSERT_LE((rot.S - p.transpose() * dec.S * p).cwiseAbs().maxCoeff(), 1e-10);
    ASSERT_LE((rot.A - p.transpose() * dec.A * p).cwiseAbs().maxCoeff(), 1e-10);
    ASSERT_NEAR(rot.additive_condition_number, dec.additive_condition_number, 1e-10);
  }
}

TEST(MechanicsProperties, ConditionNumberZeroIffScaledIdentity) {
  EXPECT_EQ(helmholtz_split(3.5 * Matrix::Identity(4, 4) + Rng(1).antisymmetric(4)).additive_condition_number,
            0.0);
  EXPECT_GT(helmholtz_split(mat2(1, 0, 0, 1.001)).additive_condition_number, 0.0);
}

TEST(MechanicsProperties, ProbeSignMatchesDefiniteness) {
  Rng rng(22);
  for (int k = 0; k < 1000; ++k) {
    const Index d = rng.integer(1, 8);
    const bool positive = k % 2 == 0;
    const Matrix s = positive ? rng.symmetric_with_spectrum(d, 0.1, 3.0)
                              : rng.symmetric_with_spectrum(d, -3.0, -0.1);
    const Matrix h = s + rng.antisymmetric(d);
    const Game g = QuadraticGame::from_hessian(h).game();
    Vector w = rng.vector(d);
    if (w.isZero(0.0)) w[0] = 1;
    const double probe = stability_probe(g, w);
    ASSERT_EQ(probe > 0, positive);
    ASSERT_EQ(probe < 0, !positive);
  }
}

TEST(MechanicsProperties, HamiltonianConservation) {
  Rng rng(23);
  for (const auto& spec : testing::catalog_variants()) {
    const Game g = spec.build().game();
    const std::vector<Vector> pts{rng.vector(g.dim()), rng.vector(g.dim())};
    if (classify_game(g, pts).kind != GameKind::Hamiltonian) continue;
    for (int k = 0; k < 1000; ++k) {
      const Vector w = rng.vector(g.dim(), 3.0);
      const Vector xi = simultaneous_gradient(g, w).xi;
      const Vector gh = grad_hamiltonian(g, w);
      ASSERT_LE(std::abs(xi.dot(gh)), 1e-10 * xi.norm() * gh.norm()) << spec.label();
    }
  }
}

TEST(MechanicsProperties, AlignmentSignLawAndClosedForm) {
  Rng rng(24);
  int checked = 0;
  for (int k = 0; k < 1000; ++k) {
    const Index d = rng.integer(2, 8);
    const Game g = QuadraticGame::from_hessian(rng.matrix(d, d)).game();
    const Vector w = rng.vector(d);
    const Vector xi = simultaneous_gradient(g, w).xi;
    const Vector at = sym_adjustment(g, w);
    const Vector gh = grad_hamiltonian(g, w);
    const double product = xi.dot(gh) * at.dot(gh);
    const double closed = infinitesimal_alignment(xi, at, gh);
    if (product != 0.0) {
      ASSERT_EQ(closed > 0, product > 0);
      ++checked;
    }
    const double h = 1e-6;
    const double fd = (cos2(xi + h * at, gh) - cos2(xi - h * at, gh)) / (2 * h);
    ASSERT_LE(std::abs(fd - closed), 1e-4 * std::abs(closed) + 1e-9);
  }
  EXPECT_GT(checked, 990);
}

TEST(MechanicsProperties, CommutingCaseNeverPointsAway) {
  Rng rng(25);
  for (int k = 0; k < 1000; ++k) {
    const Index d = rng.integer(1, 8);
    const double sigma = rng.uniform(0.0, 3.0);
    const Matrix a = rng.antisymmetric(d);
    const Vector xi = rng.vector(d);
    const Vector gh = (sigma * Matrix::Identity(d, d) + a).transpose() * xi;
    for (double lambda : {0.0, 0.1, 1.0, 10.0}) {
      ASSERT_GE((xi + lambda * a.transpose() * xi).dot(gh), -1e-12 * (1 + xi.squaredNorm() * a.squaredNorm()));
    }
  }
}

TEST(MechanicsProperties, ConditionNumberBound) {
  Rng rng(26);
  for (int k = 0; k < 1000; ++k) {
    const Index d = rng.integer(2, 8);
    const Matrix a = rng.antisymmetric(d);
    const Vector xi = rng.vector(d).normalized();
    const Matrix s_pos = rng.symmetric_with_spectrum(d, 0.0, rng.uniform(0.1, 5.0));
    const double kappa = helmholtz_split(s_pos).additive_condition_number;
    const double lambda = rng.uniform(0.0, 1.0) * 4.0 / kappa;
    const Vector gh = (s_pos + a).transpose() * xi;
    ASSERT_GE((xi + lambda * a.transpose() * xi).dot(gh), -1e-9);

    const Matrix s_neg = -s_pos;
    const Vector gn = (s_neg + a).transpose() * xi;
    ASSERT_LE((xi - lambda * a.transpose() * xi).dot(gn), 1e-9);
  }
}

// Two-player zero-sum quadratics: whenever the origin is a local Nash point
// it is also classified Stable.
TEST(MechanicsProperties, ZeroSumLocalNashIsStable) {
  Rng rng(27);
  int nash = 0;
  for (int k = 0; k < 300; ++k) {
    const Index m = rng.integer(1, 3), n = rng.integer(1, 3);
    const Index d = m + n;
    Matrix b = Matrix::Zero(d, d);
    b.topLeftCorner(m, m) = rng.symmetric_with_spectrum(m, rng.uniform(-1, 0.2), 2);
    b.bottomRightCorner(n, n) = rng.symmetric_with_spectrum(n, -2, rng.uniform(-0.2, 1));
    const Matrix c = rng.matrix(m, n);
    b.topRightCorner(m, n) = c;
    b.bottomLeftCorner(n, m) = c.transpose();
    const QuadraticGame q(PlayerPartition({m, n}), {b, -b}, {Vector::Zero(d), Vector::Zero(d)});
    const FixedPointReport r = classify_fixed_point(q.game(), Vector::Zero(d));
    if (r.is_local_nash) {
      ++nash;
      ASSERT_EQ(r.stability, Stability::Stable);
    }
  }
  EXPECT_GT(nash, 30);
}

TEST(MechanicsProperties, StableImpliesLocalNash) {
  Rng rng(28);
  for (int k = 0; k < 300; ++k) {
    const Index d = rng.integer(2, 6);
    const Matrix h = rng.symmetric_with_spectrum(d, -0.5, 2) + rng.antisymmetric(d);
    const FixedPointReport r = classify_fixed_point(QuadraticGame::from_hessian(h).game(), Vector::Zero(d));
    if (r.stability == Stability::Stable) {
      ASSERT_TRUE(r.is_local_nash);
    }
  }
}

}  // namespace
}  // namespace sga
