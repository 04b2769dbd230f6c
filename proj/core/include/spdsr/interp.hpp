#ifndef SPDSR_INTERP_HPP_
#define SPDSR_INTERP_HPP_

#include <optional>
#include <string_view>
#include <vector>

#include "spdsr/manifold.hpp"
#include "spdsr/matcore.hpp"
#include "spdsr/srdist.hpp"

namespace spdsr {

enum class Scheme { kSR, kE, kLE, kAI };

std::string_view to_string(Scheme s);
/// Parses "SR", "E", "LE" or "AI"; throws InvalidInput otherwise.
Scheme parse_scheme(std::string_view s);

/// chi(t) = exp(A t) U D exp(L t) U' exp(A' t).
SymMat sr_curve_eval(const CurveParams& c, double t);

struct SrInterpolation {
  CurveParams curve;
  /// Curves of the other minimal pairs, if any.
  std::vector<CurveParams> alternatives;
  double distance = 0.0;
};

/// Minimal scaling-rotation curve from X (t = 0) to Y (t = 1).
SrInterpolation sr_interpolate(const SymMat& x, const SymMat& y, const SrConfig& cfg = {});

/// (1 - t) X + t Y.
SymMat euclid_interp(const SymMat& x, const SymMat& y, double t);
/// exp((1 - t) log X + t log Y).
SymMat logeuclid_interp(const SymMat& x, const SymMat& y, double t);
/// X^1/2 exp(t log(X^-1/2 Y X^-1/2)) X^1/2.
SymMat affineinv_interp(const SymMat& x, const SymMat& y, double t);

struct TensorStats {
  double det = 0.0;
  /// Fractional anisotropy.  For p = 2 the two-eigenvalue analogue with a
  /// sqrt(2) normalizer is used; it is not a standard diffusion quantity.
  double fa = 0.0;
  /// Mean diffusivity, trace / p.
  double md = 0.0;
};

TensorStats stats(const SymMat& m);

/// Frame angle arccos((trace(U_t U_0') - 1) / 2) for p = 3 and the planar
/// angle for p = 2; in [0, pi].
double frame_rotation_angle(const Rotation& u_t, const Rotation& u_0);

/// arccos(|u1(t)' u1(0)|) between principal axes, in [0, pi/2].  Throws
/// AmbiguousAxis when either top eigenvalue is repeated.
double axis_rotation_angle(const SymMat& m_t, const SymMat& m_0, double tol_eq = kTolEq);

struct TrajectorySample {
  double t = 0.0;
  SymMat m;
  TensorStats s;
  /// Empty when the principal axis is ambiguous.
  std::optional<double> angle;
};

struct Trajectory {
  Scheme scheme = Scheme::kSR;
  std::vector<TrajectorySample> samples;
};

/// Uniform grid of n_samples points on [0, 1] for one scheme.
Trajectory make_trajectory(const SymMat& x, const SymMat& y, Scheme scheme, int n_samples = 101,
                           const SrConfig& cfg = {});

struct Effects {
  bool swelling = false;
  bool fattening = false;
  bool shrinking = false;

  friend bool operator==(const Effects&, const Effects&) = default;
};

/// Interior determinant above the endpoints (relative 1e-9), interior FA
/// below the endpoints, interior MD below the endpoints (absolute 1e-9).
Effects effect_report(const Trajectory& traj);

}  // namespace spdsr

#endif  // SPDSR_INTERP_HPP_
