#include "spdsr/matcore.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "spdsr/errors.hpp"

namespace spdsr {

namespace {

bool all_finite(const Mat& m) { return m.allFinite(); }

Mat cross_matrix(const Eigen::Vector3d& a) {
  Mat k(3, 3);
  k << 0.0, -a(2), a(1),
       a(2), 0.0, -a(0),
       -a(1), a(0), 0.0;
  return k;
}

// One Jacobi rotation annihilating a(p, q).  The accumulated basis lives in v.
void jacobi_rotate(Eigen::Matrix3d& a, Eigen::Matrix3d& v, int p, int q) {
  const double apq = a(p, q);
  if (apq == 0.0) return;
  const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
  const double t = std::copysign(1.0, theta) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
  const double c = 1.0 / std::sqrt(t * t + 1.0);
  const double s = t * c;
  Eigen::Matrix3d j = Eigen::Matrix3d::Identity();
  j(p, p) = c;
  j(q, q) = c;
  j(p, q) = s;
  j(q, p) = -s;
  a = j.transpose() * a * j;
  a(p, q) = 0.0;
  a(q, p) = 0.0;
  v = v * j;
}

EigenDecomp eig2(const Mat& m) {
  const double a = m(0, 0), b = m(0, 1), c = m(1, 1);
  if (b == 0.0) {
    return {Rotation::identity(2), DiagMat{a, c}};
  }
  const double phi = 0.5 * std::atan2(2.0 * b, a - c);
  const double cs = std::cos(phi), sn = std::sin(phi);
  const double l1 = a * cs * cs + 2.0 * b * cs * sn + c * sn * sn;
  const double l2 = a * sn * sn - 2.0 * b * cs * sn + c * cs * cs;
  return {Rotation::planar(phi), DiagMat{l1, l2}};
}

EigenDecomp eig3(const Mat& m) {
  Eigen::Matrix3d a = m;
  Eigen::Matrix3d v = Eigen::Matrix3d::Identity();
  constexpr int kMaxSweeps = 64;
  for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
    const double off = a(0, 1) * a(0, 1) + a(0, 2) * a(0, 2) + a(1, 2) * a(1, 2);
    const double diag = a(0, 0) * a(0, 0) + a(1, 1) * a(1, 1) + a(2, 2) * a(2, 2);
    if (off == 0.0 || off <= 1e-34 * diag) break;
    jacobi_rotate(a, v, 0, 1);
    jacobi_rotate(a, v, 0, 2);
    jacobi_rotate(a, v, 1, 2);
  }
  if (v.determinant() < 0.0) v.col(2) = -v.col(2);
  return {Rotation(Mat(v)), DiagMat{a(0, 0), a(1, 1), a(2, 2)}};
}

SymMat map_eigenvalues(const SymMat& m, double (*f)(double, double), double arg) {
  const auto [u, d] = sym_eig(m);
  Vec mapped(d.p());
  for (int i = 0; i < d.p(); ++i) mapped(i) = f(d[i], arg);
  return SymMat::from_matrix(u.matrix() * mapped.asDiagonal() * u.matrix().transpose());
}

}  // namespace

void check_dim(int p) {
  if (p != 2 && p != 3) {
    throw InvalidInput("dimension must be 2 or 3, got " + std::to_string(p));
  }
}

// ---------------------------------------------------------------- SymMat

SymMat SymMat::from_upper(int p, std::span<const double> upper) {
  check_dim(p);
  const std::size_t expected = static_cast<std::size_t>(p * (p + 1) / 2);
  if (upper.size() != expected) {
    throw InvalidInput("expected " + std::to_string(expected) + " upper-triangle values for p=" +
                       std::to_string(p) + ", got " + std::to_string(upper.size()));
  }
  Mat m(p, p);
  std::size_t k = 0;
  for (int i = 0; i < p; ++i) {
    for (int j = i; j < p; ++j) {
      m(i, j) = upper[k];
      m(j, i) = upper[k];
      ++k;
    }
  }
  if (!all_finite(m)) throw InvalidInput("non-finite matrix entry");
  return SymMat(std::move(m));
}

SymMat SymMat::from_matrix(const Mat& m) {
  if (m.rows() != m.cols()) throw InvalidInput("matrix is not square");
  check_dim(static_cast<int>(m.rows()));
  if (!all_finite(m)) throw InvalidInput("non-finite matrix entry");
  return SymMat(Mat(0.5 * (m + m.transpose())));
}

SymMat SymMat::identity(int p) {
  check_dim(p);
  return SymMat(Mat::Identity(p, p));
}

SymMat SymMat::diagonal(std::span<const double> d) {
  Vec v(static_cast<Eigen::Index>(d.size()));
  for (std::size_t i = 0; i < d.size(); ++i) v(static_cast<Eigen::Index>(i)) = d[i];
  return from_matrix(v.asDiagonal());
}

std::vector<double> SymMat::upper() const {
  std::vector<double> out;
  for (int i = 0; i < p(); ++i) {
    for (int j = i; j < p(); ++j) out.push_back(m_(i, j));
  }
  return out;
}

bool SymMat::is_spd(double tol_pd) const {
  const Vec d = sym_eig(*this).D.values();
  const double top = d.maxCoeff();
  return top > 0.0 && d.minCoeff() > tol_pd * top;
}

void SymMat::require_spd(const char* what) const {
  if (!is_spd()) throw DomainError(std::string(what) + " is not symmetric positive-definite");
}

// -------------------------------------------------------------- Rotation

Rotation::Rotation(const Mat& r) : r_(r) {
  if (r.rows() != r.cols()) throw InvalidInput("rotation is not square");
  check_dim(static_cast<int>(r.rows()));
  if (!all_finite(r)) throw InvalidInput("non-finite rotation entry");
  const int p = static_cast<int>(r.rows());
  const double orth = (r.transpose() * r - Mat::Identity(p, p)).cwiseAbs().maxCoeff();
  if (orth > kTolOrth || std::abs(r.determinant() - 1.0) > kTolOrth) {
    throw InvalidInput("matrix is not in SO(p)");
  }
}

Rotation Rotation::identity(int p) {
  check_dim(p);
  return Rotation(Mat::Identity(p, p), Trusted{});
}

Rotation Rotation::planar(double angle) {
  Mat r(2, 2);
  r << std::cos(angle), -std::sin(angle),
       std::sin(angle), std::cos(angle);
  return Rotation(std::move(r), Trusted{});
}

Rotation Rotation::axis_angle(const Eigen::Vector3d& axis, double angle) {
  const double n = axis.norm();
  if (!(n > 0.0)) throw InvalidInput("rotation axis must be nonzero");
  return so_exp(AntiSym::from_axis(axis * (angle / n)));
}

Rotation Rotation::transpose() const { return Rotation(Mat(r_.transpose()), Trusted{}); }

Rotation Rotation::operator*(const Rotation& o) const {
  if (p() != o.p()) throw InvalidInput("rotation dimension mismatch");
  return Rotation(Mat(r_ * o.r_), Trusted{});
}

// --------------------------------------------------------------- AntiSym

AntiSym AntiSym::zero(int p) {
  check_dim(p);
  AntiSym a;
  a.p_ = p;
  a.a_ = Vec::Zero(p == 3 ? 3 : 1);
  return a;
}

AntiSym AntiSym::from_axis(const Eigen::Vector3d& v) {
  AntiSym a;
  a.p_ = 3;
  a.a_ = v;
  return a;
}

AntiSym AntiSym::planar(double angle) {
  AntiSym a;
  a.p_ = 2;
  a.a_ = Vec::Constant(1, angle);
  return a;
}

AntiSym AntiSym::from_matrix(const Mat& m) {
  if (m.rows() != m.cols()) throw InvalidInput("matrix is not square");
  check_dim(static_cast<int>(m.rows()));
  const Mat k = 0.5 * (m - m.transpose());
  if (m.rows() == 2) return planar(k(1, 0));
  return from_axis(Eigen::Vector3d(k(2, 1), k(0, 2), k(1, 0)));
}

Mat AntiSym::matrix() const {
  if (p_ == 2) {
    Mat k(2, 2);
    k << 0.0, -a_(0), a_(0), 0.0;
    return k;
  }
  return cross_matrix(Eigen::Vector3d(a_));
}

double AntiSym::angle() const { return a_.norm(); }

AntiSym AntiSym::scaled(double t) const {
  AntiSym out = *this;
  out.a_ *= t;
  return out;
}

// --------------------------------------------------------------- DiagMat

DiagMat::DiagMat(std::initializer_list<double> d) : d_(static_cast<Eigen::Index>(d.size())) {
  Eigen::Index i = 0;
  for (double x : d) d_(i++) = x;
}

bool DiagMat::is_positive() const { return (d_.array() > 0.0).all(); }

// ------------------------------------------------------------ operations

EigenDecomp sym_eig(const SymMat& m) {
  if (!all_finite(m.matrix())) throw InvalidInput("non-finite matrix entry");
  return m.p() == 2 ? eig2(m.matrix()) : eig3(m.matrix());
}

Rotation so_exp(const AntiSym& a) {
  if (a.p() == 2) return Rotation::planar(a.coeffs()(0));
  const double theta = a.angle();
  if (theta == 0.0) return Rotation::identity(3);
  const Mat k = cross_matrix(Eigen::Vector3d(a.coeffs() / theta));
  return Rotation(Mat(Mat::Identity(3, 3) + std::sin(theta) * k + (1.0 - std::cos(theta)) * k * k));
}

double rotation_angle(const Rotation& r) {
  const Mat& m = r.matrix();
  if (r.p() == 2) return std::abs(std::atan2(m(1, 0) - m(0, 1), m(0, 0) + m(1, 1)));
  // sin from the antisymmetric part, cos from the trace; atan2 keeps full
  // accuracy at both ends of [0, pi].
  const Eigen::Vector3d w(m(2, 1) - m(1, 2), m(0, 2) - m(2, 0), m(1, 0) - m(0, 1));
  const double c = std::clamp(0.5 * (m.trace() - 1.0), -1.0, 1.0);
  return std::atan2(0.5 * w.norm(), c);
}

RotationLog so_log(const Rotation& r) {
  const Mat& m = r.matrix();
  if (r.p() == 2) {
    double angle = std::atan2(m(1, 0) - m(0, 1), m(0, 0) + m(1, 1));
    const bool involution = std::numbers::pi - std::abs(angle) <= kTolInvolution;
    if (angle == -std::numbers::pi) angle = std::numbers::pi;
    return {AntiSym::planar(angle), involution};
  }

  const double theta = rotation_angle(r);
  if (theta == 0.0) return {AntiSym::zero(3), false};

  const Eigen::Vector3d w(m(2, 1) - m(1, 2), m(0, 2) - m(2, 0), m(1, 0) - m(0, 1));
  if (theta <= std::numbers::pi / 2) {
    // (R - R') / 2 = sin(theta) [n]_x
    return {AntiSym::from_axis(w * (theta / (2.0 * std::sin(theta)))), false};
  }

  // Past pi/2 the antisymmetric part loses accuracy; use
  // (R + R') / 2 = cos(theta) I + (1 - cos(theta)) n n'.
  const double c = std::cos(theta);
  Eigen::Matrix3d nn = (0.5 * (m + m.transpose()) - c * Mat::Identity(3, 3)) / (1.0 - c);
  int col = 0;
  nn.diagonal().maxCoeff(&col);
  Eigen::Vector3d n = nn.col(col).normalized();
  const bool involution = std::numbers::pi - theta <= kTolInvolution;
  if (w.norm() > 1e-14) {
    if (n.dot(w) < 0.0) n = -n;
  } else {
    for (int i = 0; i < 3; ++i) {
      if (std::abs(n(i)) > 1e-12) {
        if (n(i) < 0.0) n = -n;
        break;
      }
    }
  }
  return {AntiSym::from_axis(n * theta), involution};
}

DiagMat diag_exp(const DiagMat& l) { return DiagMat(Vec(l.values().array().exp())); }

DiagMat diag_log(const DiagMat& d) {
  if (!d.is_positive()) throw DomainError("logarithm of a non-positive diagonal entry");
  return DiagMat(Vec(d.values().array().log()));
}

SymMat spd_log(const SymMat& m) {
  m.require_spd("spd_log argument");
  return map_eigenvalues(m, [](double x, double) { return std::log(x); }, 0.0);
}

SymMat spd_exp(const SymMat& s) {
  return map_eigenvalues(s, [](double x, double) { return std::exp(x); }, 0.0);
}

SymMat spd_power(const SymMat& m, double alpha) {
  m.require_spd("spd_power argument");
  return map_eigenvalues(m, [](double x, double a) { return std::pow(x, a); }, alpha);
}

SemiSvd semi_svd2(const Eigen::Matrix2d& g) {
  // G = R(phi) diag(q + r, q - r) R(-psi) where (e, h) and (f, k) split G into
  // its rotation-like and reflection-like parts.
  const double e = 0.5 * (g(0, 0) + g(1, 1));
  const double f = 0.5 * (g(0, 0) - g(1, 1));
  const double h = 0.5 * (g(1, 0) - g(0, 1));
  const double k = 0.5 * (g(1, 0) + g(0, 1));
  const double q = std::hypot(e, h);
  const double r = std::hypot(f, k);
  const double s1 = q + r;
  const double s2 = q - r;

  const double scale = std::max(s1, 1e-300);
  double phi = 0.0;
  double psi = 0.0;
  if (q <= 1e-15 * scale && r <= 1e-15 * scale) {
    // G == 0
  } else if (r <= 1e-15 * scale) {
    // Scaled rotation: every E1 works; take E1 = I.
    psi = -std::atan2(h, e);
  } else if (q <= 1e-15 * scale) {
    // Scaled reflection diag(1, -1) R(.): again take E1 = I.
    psi = std::atan2(k, f);
  } else {
    const double a1 = std::atan2(k, f);
    const double a2 = std::atan2(h, e);
    phi = 0.5 * (a2 + a1);
    psi = 0.5 * (a1 - a2);
    // Canonical sign: first column of E1 has nonnegative first component.
    // Rotating both factors by pi leaves the product unchanged.
    const double c = std::cos(phi);
    if (c < 0.0 || (c == 0.0 && std::sin(phi) < 0.0)) {
      phi += std::numbers::pi;
      psi += std::numbers::pi;
    }
  }
  return {Rotation::planar(phi), DiagMat{s1, s2}, Rotation::planar(psi)};
}

double frob_inner(const Mat& x, const Mat& y) {
  if (x.rows() != y.rows() || x.cols() != y.cols()) {
    throw InvalidInput("frob_inner: dimension mismatch");
  }
  return (x.array() * y.array()).sum();
}

double frob_norm(const Mat& x) { return std::sqrt(frob_inner(x, x)); }

}  // namespace spdsr
