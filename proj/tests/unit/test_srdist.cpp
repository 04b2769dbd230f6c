#include <cmath>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "spdsr/errors.hpp"
#include "spdsr/srdist.hpp"

namespace spdsr {
namespace {

using testing::Gen;
using testing::kPi;

SymMat diag(std::initializer_list<double> d) {
  return SymMat::diagonal(std::span<const double>(d.begin(), d.size()));
}

SymMat rotated(const Rotation& r, const SymMat& m) {
  return SymMat::from_matrix(r.matrix() * m.matrix() * r.matrix().transpose());
}

SymMat inverse(const SymMat& m) { return SymMat::from_matrix(m.matrix().inverse()); }

void expect_consistent(const MinimalPairResult& r, const SymMat& x, const SymMat& y, double k = 1.0) {
  EXPECT_LT(frob_norm(r.x_frame.compose().matrix() - x.matrix()), 1e-10);
  EXPECT_LT(frob_norm(r.y_frame.compose().matrix() - y.matrix()), 1e-10);
  EXPECT_NEAR(geo_dist(r.x_frame, r.y_frame, MetricConfig(k)), r.distance, 1e-12);
  const Frame end = geodesic_eval(r.curve, 1.0);
  EXPECT_LT(frob_norm(end.compose().matrix() - y.matrix()), 1e-9);
}

TEST(Classify, Examples) {
  EXPECT_EQ(classify(diag({1, 2, 3})).kind, Multiplicity::kDistinct);
  const MultiplicityClass c = classify(diag({1, 1, 2}));
  EXPECT_EQ(c.kind, Multiplicity::kPair);
  EXPECT_EQ(c.repeated_block, (std::vector<int>{0, 1}));
  EXPECT_EQ(classify(diag({5, 5, 5})).kind, Multiplicity::kTriple);
  EXPECT_EQ(classify(diag({2, 2})).kind, Multiplicity::kPair);
  EXPECT_EQ(to_string(Multiplicity::kTriple), "triple");
}

TEST(SrDistance2, SameMatrix) {
  Gen g(51);
  const SymMat x = g.spd(2);
  const auto r = sr_distance(x, x);
  EXPECT_LT(r.distance, 1e-12);
}

SymMat example_x(double eps) { return diag({std::exp(eps / 2), std::exp(-eps / 2)}); }

TEST(SrDistance2, ClosedFormFamily) {
  for (double eps : {0.1, 0.5, 1.0}) {
    for (double theta = 0.05; theta < kPi / 2; theta += 0.05) {
      const SymMat x = example_x(eps);
      const SymMat y = rotated(Rotation::planar(theta), x);
      const double want = std::min(theta, std::hypot(kPi / 2 - theta, std::sqrt(2.0) * eps));
      const auto r = sr_distance(x, y);
      EXPECT_NEAR(r.distance, want, 1e-10) << eps << " " << theta;
      expect_consistent(r, x, y);
    }
  }
  const SymMat x = example_x(0.5);
  EXPECT_NEAR(sr_distance(x, rotated(Rotation::planar(kPi / 6), x)).distance, kPi / 6, 1e-12);
}

TEST(SrDistance2, TieAtCrossover) {
  for (double eps : {0.1, 0.5, 1.0}) {
    const double theta = kPi / 4 + 2 * eps * eps / kPi;
    const SymMat x = example_x(eps);
    const auto r = sr_distance(x, rotated(Rotation::planar(theta), x));
    EXPECT_NEAR(r.distance, theta, 1e-10);
    ASSERT_EQ(r.ties.size(), 1u);
    EXPECT_NEAR(r.ties[0].distance, r.distance, 1e-12);
    // one pure rotation and one that also swaps the eigenvalues
    const bool chosen_scales = (r.x_frame.D.values() - r.y_frame.D.values()).norm() > 1e-6;
    const bool tie_scales = (r.ties[0].x.D.values() - r.ties[0].y.D.values()).norm() > 1e-6;
    EXPECT_NE(chosen_scales, tie_scales);
  }
}

TEST(SrDistance2, NoTieAwayFromCrossover) {
  const SymMat x = example_x(0.5);
  EXPECT_TRUE(sr_distance(x, rotated(Rotation::planar(0.3), x)).ties.empty());
}

TEST(SrDistance2, Isotropic) {
  const SymMat x = diag({2, 2});
  Gen g(52);
  const SymMat y = g.spd(2);
  const auto r = sr_distance(x, y);
  const auto ey = testing::reference_eig(y);
  const double want = std::hypot(std::log(ey.D(0) / 2), std::log(ey.D(1) / 2));
  EXPECT_NEAR(r.distance, want, 1e-12);
  EXPECT_EQ(r.x_class.kind, Multiplicity::kPair);
  expect_consistent(r, x, y);
  EXPECT_NEAR(sr_distance(y, x).distance, want, 1e-12);
}

TEST(SrDistance2, MatchesCrossFiberOracle) {
  Gen g(53);
  for (int trial = 0; trial < 300; ++trial) {
    const SymMat x = g.spd(2), y = g.spd(2);
    const double k = g.uniform(0.1, 3);
    EXPECT_NEAR(sr_distance(x, y, {MetricConfig(k)}).distance, testing::cross_fiber_min(x, y, k), 1e-7);
  }
}

TEST(MinimalRotation, IdentityAlignment) {
  Gen g(54);
  const Rotation u = g.rotation(3);
  const Rotation r = minimal_rotation(u, u, SignChange::identity(3), Perm::identity(3));
  EXPECT_LT(frob_norm(r.matrix() - Mat::Identity(3, 3)), 1e-14);
}

TEST(MinimalRotation, BeatsGrid) {
  Gen g(55);
  const auto signs = even_signs(3);
  const auto perms = all_perms(3);
  for (int trial = 0; trial < 30; ++trial) {
    const Rotation u = g.rotation(3), v = g.rotation(3);
    const SignChange& s = signs[static_cast<std::size_t>(g.integer(0, 3))];
    const Perm& pi = perms[static_cast<std::size_t>(g.integer(0, 5))];
    const Mat m = sign_matrix(s).matrix() * perm_matrix(pi).matrix().transpose();
    const auto objective = [&](const Mat& r) { return (v.matrix().transpose() * u.matrix() * r * m).trace(); };
    const double best = objective(minimal_rotation(u, v, s, pi).matrix());
    for (int i = 0; i < 10000; ++i) EXPECT_GE(best, objective(testing::plane_rot(2 * kPi * i / 10000)) - 1e-12);
  }
}

TEST(MinimalRotation, ValueIsSumOfSemiSingularValues) {
  Mat u = Mat::Identity(3, 3);
  u(1, 1) = -1;
  u(2, 2) = -1;  // Gamma's leading block is diag(1, -1)
  Mat v = Mat::Identity(3, 3);
  const Rotation r = minimal_rotation(Rotation(u), Rotation(v), SignChange::identity(3), Perm::identity(3));
  const Mat gamma = v.transpose() * u;
  const SemiSvd s = semi_svd2(gamma.topLeftCorner(2, 2));
  EXPECT_NEAR((gamma * r.matrix()).topLeftCorner(2, 2).trace(), s.lambda[0] + s.lambda[1], 1e-14);
}

TEST(MaximizeG, IdentityAlignment) {
  const Rotation u = Rotation::identity(3);
  const GMaximum g = maximize_G(u, u, SignChange::identity(3), Perm::identity(3));
  EXPECT_NEAR(g.theta, 0, 1e-14);
  EXPECT_NEAR(g.phi, 0, 1e-14);
  EXPECT_NEAR(g.value, 3, 1e-14);
}

double grid_max(const Rotation& u, const Rotation& v, const SignChange& s, const Perm& pi, int n) {
  double best = -10;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) best = std::max(best, g_objective(u, v, s, pi, 2 * kPi * i / n, 2 * kPi * j / n));
  return best;
}

TEST(MaximizeG, GridOracleAndMonotone) {
  Gen g(56);
  const auto versions = pair_case_versions();
  for (int trial = 0; trial < 12; ++trial) {
    const Rotation u = g.rotation(3), v = g.rotation(3);
    const auto& [s, pi] = versions[static_cast<std::size_t>(trial % 6)];
    const GMaximum m = maximize_G_multistart(u, v, s, pi);
    EXPECT_NEAR(m.value, g_objective(u, v, s, pi, m.theta, m.phi), 1e-14);
    EXPECT_GE(m.value, grid_max(u, v, s, pi, 200) - 1e-12);
    for (std::size_t i = 1; i < m.history.size(); ++i) EXPECT_GE(m.history[i], m.history[i - 1] - 1e-13);
  }
}

TEST(MaximizeG, ConvergenceErrorCarriesIterate) {
  Gen g(57);
  const Rotation u = g.rotation(3), v = g.rotation(3);
  try {
    maximize_G(u, v, SignChange::identity(3), Perm::identity(3), 0.0, 1);
    FAIL() << "expected ConvergenceError";
  } catch (const ConvergenceError& e) {
    EXPECT_NEAR(e.value(), g_objective(u, v, SignChange::identity(3), Perm::identity(3), e.theta(), e.phi()), 1e-14);
  }
}

TEST(PairCaseVersions, SimpleEigenvalueVisitsEveryPosition) {
  const DiagMat d{1, 1, 7};
  std::vector<int> seen;
  for (const auto& [s, pi] : pair_case_versions()) {
    const DiagMat dp = permute_diag(d, pi);
    for (int i = 0; i < 3; ++i)
      if (dp[i] == 7) seen.push_back(i);
  }
  std::sort(seen.begin(), seen.end());
  EXPECT_EQ(seen, (std::vector<int>{0, 0, 1, 1, 2, 2}));
}

TEST(SrDistance3, SameDiagonal) {
  const SymMat x = diag({1, 2, 3});
  const auto r = sr_distance(x, x);
  EXPECT_EQ(r.distance, 0.0);
  EXPECT_LT(frob_norm(r.y_frame.U.matrix() * r.x_frame.U.matrix().transpose() - Mat::Identity(3, 3)), 1e-15);
}

const Eigen::Vector3d kCase1Axis = Eigen::Vector3d(-0.5272, -0.6871, 0.5).normalized();

TEST(SrDistance3, PureRotationCase) {
  const SymMat x = diag({15, 5, 1});
  const SymMat y = rotated(Rotation::axis_angle(kCase1Axis, kPi / 3), x);
  const auto r = sr_distance(x, y);
  EXPECT_NEAR(r.distance, kPi / 3, 1e-12);
  EXPECT_LT(r.curve.velocity.L.values().norm(), 1e-10);
  EXPECT_NEAR(testing::cross_fiber_min(x, y, 1.0), kPi / 3, 1e-7);
  expect_consistent(r, x, y);
}

TEST(SrDistance3, PureScalingCase) {
  const SymMat x = diag({15, 5, 1}), y = diag({7, 12, 8});
  const auto r = sr_distance(x, y);
  const double want = Eigen::Vector3d(std::log(7.0 / 15), std::log(12.0 / 5), std::log(8.0)).norm();
  EXPECT_NEAR(r.distance, want, 1e-12);
  EXPECT_LT(r.curve.velocity.A.angle(), 1e-10);
}

TEST(SrDistance3, UnorderedEigenvalues) {
  double prev = 1e9;
  for (double eps : {0.5, 0.1, 0.01, 0.001}) {
    const SymMat x = diag({10 + eps, 10 - eps, 1});
    const SymMat y = rotated(Rotation::axis_angle(Eigen::Vector3d::UnitX(), eps * kPi / 4), diag({10 - eps, 10 + eps, 1}));
    const auto r = sr_distance(x, y);
    const double want = std::pow(eps * kPi / 4, 2) + 2 * std::pow(std::log((10 + eps) / (10 - eps)), 2);
    EXPECT_NEAR(r.distance * r.distance, want, 1e-12);
    EXPECT_LT(r.distance, prev);
    prev = r.distance;
  }
}

TEST(SrDistance3, MatchesCrossFiberOracle) {
  Gen g(58);
  for (int trial = 0; trial < 100; ++trial) {
    const SymMat x = g.spd(3), y = g.spd(3);
    const double k = g.uniform(0.1, 3);
    const auto r = sr_distance(x, y, {MetricConfig(k)});
    EXPECT_NEAR(r.distance, testing::cross_fiber_min(x, y, k), 1e-7);
    expect_consistent(r, x, y, k);
  }
}

TEST(SrDistance3, PairAgainstDistinctMatchesOracle) {
  Gen g(59);
  for (int trial = 0; trial < 25; ++trial) {
    const Rotation ux = g.rotation(3);
    const Vec e = g.distinct_eigs(2);
    const Vec dx = Eigen::Vector3d(e(0), e(0), e(1));
    const SymMat x = Gen::compose(ux, dx);
    const Rotation uy = g.rotation(3);
    const Vec dy = g.distinct_eigs(3);
    const SymMat y = Gen::compose(uy, dy);
    const double k = g.uniform(0.2, 2);
    const auto r = sr_distance(x, y, {MetricConfig(k)});
    EXPECT_EQ(r.x_class.kind, Multiplicity::kPair);
    const double oracle = testing::pair_fiber_min(ux.matrix(), dx, uy.matrix(), dy, k);
    EXPECT_NEAR(r.distance, oracle, 1e-9);
    expect_consistent(r, x, y, k);
    // mirror case
    EXPECT_NEAR(sr_distance(y, x, {MetricConfig(k)}).distance, r.distance, 1e-10);
  }
}

TEST(SrDistance3, PairAgainstPairBeatsGrid) {
  Gen g(60);
  const auto signed_perms = testing::proper_signed_permutations(3);
  for (int trial = 0; trial < 4; ++trial) {
    const Rotation ux = g.rotation(3), uy = g.rotation(3);
    const Vec ex = g.distinct_eigs(2), ey = g.distinct_eigs(2);
    const Vec dx = Eigen::Vector3d(ex(0), ex(0), ex(1));
    const Vec dy = Eigen::Vector3d(ey(0), ey(0), ey(1));
    const SymMat x = Gen::compose(ux, dx), y = Gen::compose(uy, dy);
    const auto r = sr_distance(x, y);
    expect_consistent(r, x, y);
    double grid = 1e9;
    const int n = 60;
    for (const Mat& q : signed_perms) {
      const Vec dq = Mat(q.transpose() * Mat(dx.asDiagonal()) * q).diagonal();
      for (int i = 0; i < n; ++i) {
        const Mat a = ux.matrix() * testing::plane_rot(2 * kPi * i / n) * q;
        for (int j = 0; j < n; ++j) {
          grid = std::min(grid, testing::oracle_dist(a, dq, uy.matrix() * testing::plane_rot(2 * kPi * j / n), dy, 1.0));
        }
      }
    }
    EXPECT_LE(r.distance, grid + 1e-12);
    EXPECT_GT(r.distance, grid - 0.2);
  }
}

TEST(SrDistance3, TripleIsPureScaling) {
  Gen g(61);
  const SymMat x = diag({2, 2, 2});
  const SymMat y = g.spd(3);
  const auto ey = testing::reference_eig(y);
  const double want = (ey.D.array() / 2.0).log().matrix().norm();
  const auto r = sr_distance(x, y);
  EXPECT_NEAR(r.distance, want, 1e-12);
  EXPECT_EQ(r.x_class.kind, Multiplicity::kTriple);
  expect_consistent(r, x, y);
  EXPECT_NEAR(sr_distance(y, x).distance, want, 1e-12);
}

TEST(SrDistance, Properties) {
  Gen g(62);
  for (int trial = 0; trial < 100; ++trial) {
    const int p = 2 + trial % 2;
    const SymMat x = g.spd(p), y = g.spd(p);
    const double d = sr_distance(x, y).distance;
    EXPECT_NEAR(sr_distance(y, x).distance, d, 1e-10);
    EXPECT_NEAR(sr_distance(inverse(x), inverse(y)).distance, d, 1e-9);
    const Rotation r = g.rotation(p);
    const double s = g.uniform(0.1, 10);
    const SymMat xs = SymMat::from_matrix(s * rotated(r, x).matrix());
    const SymMat ys = SymMat::from_matrix(s * rotated(r, y).matrix());
    EXPECT_NEAR(sr_distance(xs, ys).distance, d, 1e-9);
    EXPECT_LT(sr_distance(x, x).distance, 1e-10);
  }
}

TEST(SrDistance, TriangleInequalityOnDistinct) {
  Gen g(63);
  for (int trial = 0; trial < 100; ++trial) {
    const int p = 2 + trial % 2;
    const SymMat a = g.spd(p), b = g.spd(p), c = g.spd(p);
    EXPECT_LE(sr_distance(a, c).distance, sr_distance(a, b).distance + sr_distance(b, c).distance + 1e-9);
  }
}

TEST(SrDistance, NonDecreasingInK) {
  const SymMat x = diag({15, 5, 1}), y = diag({7, 12, 8});
  double prev = 0;
  for (double k = 0.05; k <= 1.0; k += 0.01) {
    const double d = sr_distance(x, y, {MetricConfig(k)}).distance;
    EXPECT_GE(d, prev - 1e-12);
    prev = d;
  }
}

TEST(SrDistance, NearMultiplicityFlag) {
  EXPECT_TRUE(sr_distance(diag({1, 1 + 5e-8, 3}), diag({1, 2, 3})).near_multiplicity);
  EXPECT_FALSE(sr_distance(diag({1, 1.5, 3}), diag({1, 2, 3})).near_multiplicity);
}

TEST(SrDistance, InvolutionReported) {
  // rotating diag(3,2,1) by pi about a generic axis: the best version may be a half turn
  const SymMat x = diag({3, 2, 1});
  const SymMat y = rotated(Rotation::axis_angle(Eigen::Vector3d(1, 1, 1), 2 * kPi / 3), x);
  const auto r = sr_distance(x, y);
  EXPECT_EQ(r.involution, log_map(r.x_frame, r.y_frame).involution);
}

TEST(SrDistance, Errors) {
  EXPECT_THROW(sr_distance(diag({1, 2}), diag({1, 2, 3})), InvalidInput);
  EXPECT_THROW(sr_distance(diag({1, -2}), diag({1, 2})), DomainError);
}

}  // namespace
}  // namespace spdsr
