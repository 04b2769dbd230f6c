#ifndef SPDSR_SRDIST_HPP_
#define SPDSR_SRDIST_HPP_

#include <string_view>
#include <vector>

#include "spdsr/group.hpp"
#include "spdsr/manifold.hpp"
#include "spdsr/matcore.hpp"

namespace spdsr {

enum class Multiplicity { kDistinct, kPair, kTriple };

std::string_view to_string(Multiplicity m);

/// Eigenvalue multiplicity pattern of an SPD matrix, relative to the
/// eigen-decomposition returned by sym_eig.
struct MultiplicityClass {
  Multiplicity kind = Multiplicity::kDistinct;
  Partition partition;
  /// For kPair, the two indices (into sym_eig's D) sharing an eigenvalue.
  std::vector<int> repeated_block;
};

MultiplicityClass classify(const SymMat& x, double tol_eq = kTolEq);

struct SrConfig {
  MetricConfig metric;
  double tol_eq = kTolEq;
  double tol_tie = 1e-9;
  double tol_g = 1e-12;
  int max_iter = 200;
};

struct MinimalPair {
  Frame x;
  Frame y;
  double distance = 0.0;
  bool involution = false;
};

struct MinimalPairResult {
  double distance = 0.0;
  Frame x_frame;
  Frame y_frame;
  /// base = x_frame, A = log(V U'), L = log(D^-1 Lambda).
  CurveParams curve;
  /// Other minimal pairs within tol_tie of `distance`.
  std::vector<MinimalPair> ties;
  bool involution = false;
  MultiplicityClass x_class;
  MultiplicityClass y_class;
  /// An eigenvalue gap lies between tol_eq and 10 tol_eq: treated as distinct.
  bool near_multiplicity = false;
};

/// 2 x 2 case: four versions of X against one version of Y, or pure scaling
/// when either matrix is isotropic.
MinimalPairResult sr_distance_2(const SymMat& x, const SymMat& y, const SrConfig& cfg = {});

/// blockdiag(E2 E1', 1) where E1 L E2' is the semi-SVD of the leading 2 x 2
/// block of I_sigma P_pi' V' U.  Maximizes trace(V' U R I_sigma P_pi') over
/// rotations R of the first two coordinates.
Rotation minimal_rotation(const Rotation& u, const Rotation& v, const SignChange& sigma, const Perm& pi);

/// Rotation by `angle` in the plane of the first two coordinates of R^3.
Rotation plane_rotation3(double angle);

struct GMaximum {
  double theta = 0.0;
  double phi = 0.0;
  double value = 0.0;
  int iterations = 0;
  /// G after every half-step, starting with the initial value.
  std::vector<double> history;
};

/// G(theta, phi) = trace(U R_theta I_sigma P_pi' R_phi' V').
double g_objective(const Rotation& u, const Rotation& v, const SignChange& sigma, const Perm& pi,
                   double theta, double phi);

/// Alternating exact maximization of G over theta and phi from phi = phi0.
/// Stops when a full sweep changes G by less than tol_g; throws
/// ConvergenceError after max_iter sweeps.
GMaximum maximize_G(const Rotation& u, const Rotation& v, const SignChange& sigma, const Perm& pi,
                    double tol_g = 1e-12, int max_iter = 200, double phi0 = 0.0);

/// maximize_G restarted from phi0 in {0, pi/2, pi, 3pi/2}; best value kept.
GMaximum maximize_G_multistart(const Rotation& u, const Rotation& v, const SignChange& sigma,
                               const Perm& pi, double tol_g = 1e-12, int max_iter = 200);

/// The six (sigma, pi) pairs needed when X has a repeated eigenvalue in
/// coordinates {1, 2}: sigma in {(1,1,1), (-1,1,-1)} and pi placing the simple
/// eigenvalue at position 3, 1 or 2.
std::vector<std::pair<SignChange, Perm>> pair_case_versions();

/// 3 x 3 case with the four multiplicity branches.
MinimalPairResult sr_distance_3(const SymMat& x, const SymMat& y, const SrConfig& cfg = {});

/// Scaling-rotation distance and a minimal pair, p in {2, 3}.
MinimalPairResult sr_distance(const SymMat& x, const SymMat& y, const SrConfig& cfg = {});

}  // namespace spdsr

#endif  // SPDSR_SRDIST_HPP_
