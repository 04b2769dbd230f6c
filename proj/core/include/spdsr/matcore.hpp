#ifndef SPDSR_MATCORE_HPP_
#define SPDSR_MATCORE_HPP_

#include <span>
#include <vector>

#include <Eigen/Dense>

namespace spdsr {

// Runtime-sized p x p storage with a compile-time cap of 3, so no heap use.
using Mat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::ColMajor, 3, 3>;
using Vec = Eigen::Matrix<double, Eigen::Dynamic, 1, Eigen::ColMajor, 3, 1>;

inline constexpr double kTolPd = 1e-12;     // relative to the largest eigenvalue
inline constexpr double kTolOrth = 1e-9;
inline constexpr double kTolRecon = 1e-11;
inline constexpr double kTolInvolution = 1e-9;  // on the rotation angle, radians

/// Throws InvalidInput unless p is 2 or 3.
void check_dim(int p);

/// Symmetric p x p matrix, p in {2, 3}.  Only the upper triangle is meaningful
/// on input; the stored matrix is always exactly symmetric.
class SymMat {
 public:
  SymMat() = default;

  /// Upper triangle in row-major order: (m11, m12, m22) for p = 2,
  /// (m11, m12, m13, m22, m23, m33) for p = 3.
  static SymMat from_upper(int p, std::span<const double> upper);

  /// Symmetric part of a square matrix.
  static SymMat from_matrix(const Mat& m);

  static SymMat identity(int p);
  static SymMat diagonal(std::span<const double> d);

  int p() const noexcept { return static_cast<int>(m_.rows()); }
  const Mat& matrix() const noexcept { return m_; }
  double operator()(int i, int j) const { return m_(i, j); }
  std::vector<double> upper() const;

  /// True when every eigenvalue exceeds tol_pd times the largest one.
  bool is_spd(double tol_pd = kTolPd) const;

  /// Throws DomainError naming `what` unless is_spd().
  void require_spd(const char* what = "matrix") const;

 private:
  explicit SymMat(Mat m) : m_(std::move(m)) {}
  Mat m_;
};

/// Element of SO(p), validated on construction against kTolOrth.
class Rotation {
 public:
  Rotation() = default;
  explicit Rotation(const Mat& r);

  static Rotation identity(int p);
  /// Planar rotation by `angle` (counterclockwise).
  static Rotation planar(double angle);
  /// Rotation about `axis` (normalized internally) by `angle`.
  static Rotation axis_angle(const Eigen::Vector3d& axis, double angle);

  int p() const noexcept { return static_cast<int>(r_.rows()); }
  const Mat& matrix() const noexcept { return r_; }
  Rotation transpose() const;
  Rotation operator*(const Rotation& o) const;

 private:
  struct Trusted {};
  Rotation(Mat r, Trusted) : r_(std::move(r)) {}
  Mat r_;
};

/// Element of so(p).  For p = 3 the axis vector a with [a]_x; for p = 2 a
/// single angle a with matrix [[0, -a], [a, 0]].
class AntiSym {
 public:
  AntiSym() = default;

  static AntiSym zero(int p);
  static AntiSym from_axis(const Eigen::Vector3d& a);
  static AntiSym planar(double angle);
  /// Antisymmetric part of a square matrix.
  static AntiSym from_matrix(const Mat& m);

  int p() const noexcept { return p_; }
  /// Length p(p-1)/2: three components for p = 3, one for p = 2.
  const Vec& coeffs() const noexcept { return a_; }
  Mat matrix() const;
  /// Rotation angle |a|, equal to ||A||_F / sqrt(2).
  double angle() const;
  AntiSym scaled(double t) const;
  AntiSym operator-() const { return scaled(-1.0); }

 private:
  int p_ = 0;
  Vec a_;
};

class DiagMat {
 public:
  DiagMat() = default;
  explicit DiagMat(Vec d) : d_(std::move(d)) {}
  DiagMat(std::initializer_list<double> d);

  static DiagMat identity(int p) { return DiagMat(Vec::Ones(p)); }
  static DiagMat zero(int p) { return DiagMat(Vec::Zero(p)); }

  int p() const noexcept { return static_cast<int>(d_.size()); }
  const Vec& values() const noexcept { return d_; }
  double operator[](int i) const { return d_(i); }
  Mat matrix() const { return d_.asDiagonal(); }
  bool is_positive() const;

 private:
  Vec d_;
};

struct EigenDecomp {
  Rotation U;
  DiagMat D;
};

/// U D U' = M with det U = +1.  No ordering is imposed on the eigenvalues.
/// Closed form for p = 2, cyclic Jacobi for p = 3.
EigenDecomp sym_eig(const SymMat& m);

/// Rodrigues' formula (p = 3) or the planar rotation (p = 2).
Rotation so_exp(const AntiSym& a);

struct RotationLog {
  AntiSym A;
  bool involution = false;  // angle is pi: -A is an equally short logarithm
};

/// Minimal-norm logarithm.  At angle pi the axis is taken from the +1
/// eigenvector with its first nonzero component positive, and the involution
/// flag is set.
RotationLog so_log(const Rotation& r);

/// Rotation angle in [0, pi] without forming the logarithm.
double rotation_angle(const Rotation& r);

DiagMat diag_exp(const DiagMat& l);
/// Throws DomainError on a non-positive entry.
DiagMat diag_log(const DiagMat& d);

SymMat spd_log(const SymMat& m);
SymMat spd_exp(const SymMat& s);
SymMat spd_power(const SymMat& m, double alpha);

struct SemiSvd {
  Rotation E1;
  DiagMat lambda;  // lambda1 >= |lambda2| >= 0
  Rotation E2;
};

/// G = E1 diag(l1, l2) E2' with E1, E2 in SO(2) and l1 >= |l2|.  A negative
/// determinant shows up as l2 < 0.  E1's first column always has a nonnegative
/// first component (positive second component when the first is zero); when
/// l1 == |l2| E1 is the identity.
SemiSvd semi_svd2(const Eigen::Matrix2d& g);

/// trace(X Y').  Throws InvalidInput on a shape mismatch.
double frob_inner(const Mat& x, const Mat& y);
double frob_norm(const Mat& x);

}  // namespace spdsr

#endif  // SPDSR_MATCORE_HPP_
