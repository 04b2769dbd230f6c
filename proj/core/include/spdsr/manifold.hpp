#ifndef SPDSR_MANIFOLD_HPP_
#define SPDSR_MANIFOLD_HPP_

#include <utility>
#include <vector>

#include "spdsr/group.hpp"
#include "spdsr/matcore.hpp"

namespace spdsr {

/// A point (U, D) of SO(p) x Diag+(p): one eigen-decomposition of U D U'.
struct Frame {
  Rotation U;
  DiagMat D;

  Frame() = default;
  Frame(Rotation u, DiagMat d);

  int p() const noexcept { return U.p(); }
  /// Eigen-composition U D U'.
  SymMat compose() const;
};

/// Tangent vector (A U, L D) at some frame, stored as (A, L).
struct Tangent {
  AntiSym A;
  DiagMat L;

  static Tangent zero(int p) { return {AntiSym::zero(p), DiagMat::zero(p)}; }
};

/// Weight of the rotational term in the product metric.
class MetricConfig {
 public:
  MetricConfig() = default;
  explicit MetricConfig(double k);

  double k() const noexcept { return k_; }

 private:
  double k_ = 1.0;
};

/// Parameters of the geodesic t -> (exp(A t) U, exp(L t) D) and of its
/// eigen-composition, the scaling-rotation curve.
struct CurveParams {
  Frame base;
  Tangent velocity;
};

/// (exp(A t) U, exp(L t) D).
Frame exp_map(const Frame& base, const Tangent& v, double t = 1.0);

struct LogResult {
  Tangent v;
  bool involution = false;  // V U' has angle pi: two shortest geodesics
};

/// A = log(V U'), L = log(Lambda D^-1).
LogResult log_map(const Frame& base, const Frame& target);

/// sqrt(k theta^2 + ||log(Lambda D^-1)||_F^2), theta the angle of V U'.
double geo_dist(const Frame& a, const Frame& b, const MetricConfig& cfg = {});

/// Squared distance from the rotation angle and the diagonals; shared by the
/// search loops so they avoid building frames.
double geo_dist_sq(double angle, const DiagMat& d, const DiagMat& lambda, double k);

Frame geodesic_eval(const CurveParams& c, double t);

/// geo_dist before and after (U, D) -> (R1 U R2, S D_pi) on both frames.
/// R1 and R2 are only required to be orthogonal.
std::pair<double, double> verify_invariance(const Frame& a, const Frame& b, const MetricConfig& cfg,
                                            const Mat& r1, const Mat& r2, const Perm& pi,
                                            const DiagMat& s);

/// The p! 2^(p-1) parameter sets (U I_sigma P_pi', D_pi, A, L_pi) whose
/// scaling-rotation curves coincide with that of `c`.  The first entry is `c`
/// itself.  Throws MultiplicityError when the curve has repeated eigenvalues
/// at t = 0, 0.5 and 1.
std::vector<CurveParams> equivalent_geodesics(const CurveParams& c, double tol_eq = kTolEq);

}  // namespace spdsr

#endif  // SPDSR_MANIFOLD_HPP_
