#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "spdsr/errors.hpp"
#include "spdsr/matcore.hpp"

namespace spdsr {
namespace {

using testing::Gen;
using testing::kPi;

Mat diag3(double a, double b, double c) { return Eigen::Vector3d(a, b, c).asDiagonal(); }

TEST(SymMat, FromUpperRowMajor) {
  const double u[] = {1, 2, 3, 4, 5, 6};
  const SymMat m = SymMat::from_upper(3, u);
  EXPECT_EQ(m(0, 2), 3);
  EXPECT_EQ(m(2, 0), 3);
  EXPECT_EQ(m(1, 2), 5);
  EXPECT_EQ(m(2, 2), 6);
  EXPECT_EQ(m.upper(), std::vector<double>(std::begin(u), std::end(u)));
}

TEST(SymMat, RejectsBadInput) {
  const double nan[] = {1, std::nan(""), 1};
  EXPECT_THROW(SymMat::from_upper(2, nan), InvalidInput);
  const double short_[] = {1, 0};
  EXPECT_THROW(SymMat::from_upper(2, short_), InvalidInput);
  const double four[] = {1, 0, 0, 1, 0, 0, 0, 0, 0, 0};
  EXPECT_THROW(SymMat::from_upper(4, four), InvalidInput);
}

TEST(SymMat, SpdCheck) {
  const double neg[] = {1, 2, 1};
  EXPECT_FALSE(SymMat::from_upper(2, neg).is_spd());
  EXPECT_THROW(SymMat::from_upper(2, neg).require_spd("Y"), DomainError);
  EXPECT_TRUE(SymMat::identity(3).is_spd());
}

TEST(Rotation, RejectsNonRotation) {
  EXPECT_THROW(Rotation(Mat(diag3(1, 1, -1))), InvalidInput);
  EXPECT_THROW(Rotation(Mat(diag3(1, 2, 1))), InvalidInput);
}

TEST(SymEig, DiagonalInput) {
  const double d[] = {2, 1};
  const auto [u, l] = sym_eig(SymMat::diagonal(d));
  EXPECT_NEAR(frob_norm(u.matrix() * l.matrix() * u.matrix().transpose() - SymMat::diagonal(d).matrix()), 0, 1e-15);
  EXPECT_NEAR(std::max(l[0], l[1]), 2, 1e-15);
  EXPECT_NEAR(std::min(l[0], l[1]), 1, 1e-15);
}

TEST(SymEig, Identity) {
  const auto [u, l] = sym_eig(SymMat::identity(3));
  EXPECT_NEAR(frob_norm(u.matrix() - Mat::Identity(3, 3)), 0, 1e-15);
  EXPECT_NEAR(frob_norm(l.matrix() - Mat::Identity(3, 3)), 0, 1e-15);
}

TEST(SymEig, RandomSymmetricReconstruction) {
  Gen g(11);
  for (int p : {2, 3}) {
    for (int trial = 0; trial < 500; ++trial) {
      Mat a(p, p);
      for (int i = 0; i < p; ++i)
        for (int j = 0; j < p; ++j) a(i, j) = g.uniform(-5, 5);
      const SymMat m = SymMat::from_matrix(a);
      const auto [u, d] = sym_eig(m);
      EXPECT_NEAR(u.matrix().determinant(), 1.0, 1e-12);
      EXPECT_LT(frob_norm(u.matrix() * d.matrix() * u.matrix().transpose() - m.matrix()), 1e-12);
      // eigenvalues agree with an independent solver
      Eigen::VectorXd mine = d.values();
      std::sort(mine.data(), mine.data() + p);
      const auto ref = testing::reference_eig(m);
      Eigen::VectorXd theirs = ref.D;
      std::sort(theirs.data(), theirs.data() + p);
      EXPECT_LT((mine - theirs).norm(), 1e-12 * (1 + theirs.norm()));
    }
  }
}

TEST(SymEig, NearlyRepeatedEigenvalues) {
  Gen g(12);
  for (int trial = 0; trial < 200; ++trial) {
    const Rotation r = g.rotation(3);
    const SymMat m = Gen::compose(r, Vec(Eigen::Vector3d(3.0, 3.0 + 1e-13, 1.0)));
    const auto [u, d] = sym_eig(m);
    EXPECT_LT(frob_norm(u.matrix() * d.matrix() * u.matrix().transpose() - m.matrix()), 1e-12);
  }
}

TEST(SoExp, ZeroIsIdentity) {
  EXPECT_LT(frob_norm(so_exp(AntiSym::zero(3)).matrix() - Mat::Identity(3, 3)), 1e-15);
}

TEST(SoExp, TraceAtQuarterTurn) {
  const Rotation r = so_exp(AntiSym::from_axis(Eigen::Vector3d(0, 0, kPi / 2)));
  EXPECT_NEAR(r.matrix().trace(), 1.0, 1e-14);
}

TEST(SoExp, LogRoundTrip) {
  Gen g(13);
  for (int trial = 0; trial < 1000; ++trial) {
    const Eigen::Vector3d a = g.unit3() * g.uniform(0, kPi - 1e-3);
    const RotationLog l = so_log(so_exp(AntiSym::from_axis(a)));
    EXPECT_FALSE(l.involution);
    EXPECT_LT((Eigen::Vector3d(l.A.coeffs()) - a).norm(), 1e-12);
  }
  for (int trial = 0; trial < 200; ++trial) {
    const double a = g.uniform(-kPi + 1e-3, kPi - 1e-3);
    EXPECT_NEAR(so_log(so_exp(AntiSym::planar(a))).A.coeffs()(0), a, 1e-13);
  }
}

TEST(SoLog, Identity) {
  const RotationLog l = so_log(Rotation::identity(3));
  EXPECT_FALSE(l.involution);
  EXPECT_EQ(frob_norm(l.A.matrix()), 0.0);
}

TEST(SoLog, ThirdTurnNorm) {
  const RotationLog l = so_log(Rotation::axis_angle(Eigen::Vector3d::UnitZ(), kPi / 3));
  EXPECT_NEAR(frob_norm(l.A.matrix()), std::sqrt(2.0) * kPi / 3, 1e-14);
}

TEST(SoLog, HalfTurnFlagsInvolution) {
  const RotationLog l = so_log(Rotation::axis_angle(Eigen::Vector3d::UnitX(), kPi));
  EXPECT_TRUE(l.involution);
  EXPECT_NEAR(frob_norm(l.A.matrix()), std::sqrt(2.0) * kPi, 1e-12);
  EXPECT_LT(frob_norm(so_exp(l.A).matrix() - Mat(diag3(1, -1, -1))), 1e-12);
  EXPECT_TRUE(so_log(Rotation::planar(kPi)).involution);
}

TEST(SoLog, CloseToHalfTurn) {
  Gen g(14);
  for (int trial = 0; trial < 300; ++trial) {
    const Eigen::Vector3d axis = g.unit3();
    const double angle = kPi - std::pow(10.0, g.uniform(-8, -3));
    const Rotation r = Rotation::axis_angle(axis, angle);
    const RotationLog l = so_log(r);
    EXPECT_FALSE(l.involution);
    EXPECT_NEAR(l.A.angle(), angle, 1e-9);
    EXPECT_LT(frob_norm(so_exp(l.A).matrix() - r.matrix()), 1e-12);
  }
}

TEST(RotationAngle, MatchesTraceFormula) {
  Gen g(15);
  for (int trial = 0; trial < 300; ++trial) {
    const Rotation r = g.rotation(3);
    EXPECT_NEAR(rotation_angle(r), testing::trace_angle(r.matrix()), 1e-7);
  }
}

TEST(Diag, ExpLog) {
  EXPECT_EQ(diag_log(DiagMat{1, 1, 1}).values().norm(), 0.0);
  const DiagMat e = diag_exp(DiagMat{1, -1});
  EXPECT_NEAR(e[0], std::numbers::e, 1e-15);
  EXPECT_NEAR(e[1], 1 / std::numbers::e, 1e-15);
  Gen g(16);
  for (int trial = 0; trial < 100; ++trial) {
    const DiagMat d{g.uniform(0.01, 100), g.uniform(0.01, 100), g.uniform(0.01, 100)};
    EXPECT_LT((diag_exp(diag_log(d)).values() - d.values()).norm(), 1e-14 * d.values().norm());
  }
  EXPECT_THROW(diag_log(DiagMat{1, 0}), DomainError);
}

TEST(Spd, LogExpPower) {
  EXPECT_EQ(frob_norm(spd_log(SymMat::identity(3)).matrix()), 0.0);
  const double d[] = {4, 9};
  const SymMat r = spd_power(SymMat::diagonal(d), 0.5);
  EXPECT_NEAR(r(0, 0), 2, 1e-15);
  EXPECT_NEAR(r(1, 1), 3, 1e-15);
  EXPECT_EQ(r(0, 1), 0);
  Gen g(17);
  for (int p : {2, 3}) {
    for (int trial = 0; trial < 200; ++trial) {
      const SymMat m = g.spd(p);
      EXPECT_LT(frob_norm(spd_exp(spd_log(m)).matrix() - m.matrix()), 1e-11);
    }
  }
}

TEST(Spd, LogRejectsIndefinite) {
  const double u[] = {1, 0, -1};
  EXPECT_THROW(spd_log(SymMat::from_upper(2, u)), DomainError);
}

void check_semi_svd(const Eigen::Matrix2d& g) {
  const SemiSvd s = semi_svd2(g);
  const Eigen::Matrix2d e1 = s.E1.matrix(), e2 = s.E2.matrix();
  EXPECT_NEAR(e1.determinant(), 1, 1e-14);
  EXPECT_NEAR(e2.determinant(), 1, 1e-14);
  EXPECT_LT((e1 * Eigen::Matrix2d(s.lambda.matrix()) * e2.transpose() - g).norm(), 1e-12 * (1 + g.norm()));
  EXPECT_GE(s.lambda[0], std::abs(s.lambda[1]) - 1e-14);
  EXPECT_GE(e1(0, 0), 0.0);
}

TEST(SemiSvd, Identity) {
  const SemiSvd s = semi_svd2(Eigen::Matrix2d::Identity());
  EXPECT_LT((s.E1.matrix() - Mat::Identity(2, 2)).norm(), 1e-15);
  EXPECT_LT((s.E2.matrix() - Mat::Identity(2, 2)).norm(), 1e-15);
  EXPECT_NEAR(s.lambda[0], 1, 1e-15);
  EXPECT_NEAR(s.lambda[1], 1, 1e-15);
}

TEST(SemiSvd, NegativeDeterminant) {
  Eigen::Matrix2d g;
  g << 2, 0, 0, -3;
  const SemiSvd s = semi_svd2(g);
  EXPECT_NEAR(s.lambda[0], 3, 1e-14);
  EXPECT_NEAR(s.lambda[1], -2, 1e-14);
  check_semi_svd(g);
}

TEST(SemiSvd, Random) {
  Gen gen(18);
  for (int trial = 0; trial < 2000; ++trial) {
    Eigen::Matrix2d g;
    g << gen.uniform(-3, 3), gen.uniform(-3, 3), gen.uniform(-3, 3), gen.uniform(-3, 3);
    check_semi_svd(g);
    const SemiSvd s = semi_svd2(g);
    if (g.determinant() < 0) EXPECT_LT(s.lambda[1], 0.0);
  }
}

TEST(SemiSvd, Degenerate) {
  Eigen::Matrix2d g = Eigen::Matrix2d::Zero();
  check_semi_svd(g);
  g << 0, -1, 1, 0;  // scaled rotation: l1 == l2
  check_semi_svd(g);
  g << 1, 0, 0, -1;  // reflection: l1 == -l2
  check_semi_svd(g);
  g << 1, 1, 1, 1;
  check_semi_svd(g);
}

TEST(Frob, Inner) {
  EXPECT_EQ(frob_inner(Mat::Identity(3, 3), Mat::Identity(3, 3)), 3);
  EXPECT_EQ(frob_inner(Mat(Eigen::Vector2d(1, 2).asDiagonal()), Mat(Eigen::Vector2d(3, 4).asDiagonal())), 11);
  const AntiSym a = AntiSym::from_axis(Eigen::Vector3d(0.3, -0.4, 1.2));
  const double theta = Eigen::Vector3d(0.3, -0.4, 1.2).norm();
  EXPECT_NEAR(frob_inner(a.matrix(), a.matrix()), 2 * theta * theta, 1e-14);
  EXPECT_THROW(frob_inner(Mat::Identity(2, 2), Mat::Identity(3, 3)), InvalidInput);
}

}  // namespace
}  // namespace spdsr
