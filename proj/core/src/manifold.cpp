#include "spdsr/manifold.hpp"

#include <cmath>
#include <string>

#include "spdsr/errors.hpp"

namespace spdsr {

Frame::Frame(Rotation u, DiagMat d) : U(std::move(u)), D(std::move(d)) {
  if (U.p() != D.p()) throw InvalidInput("frame: rotation and diagonal dimensions differ");
  if (!D.is_positive()) throw InvalidInput("frame: diagonal must be positive");
}

SymMat Frame::compose() const {
  return SymMat::from_matrix(U.matrix() * D.matrix() * U.matrix().transpose());
}

MetricConfig::MetricConfig(double k) : k_(k) {
  if (!(k > 0.0) || !std::isfinite(k)) throw InvalidInput("metric weight k must be positive");
}

Frame exp_map(const Frame& base, const Tangent& v, double t) {
  const Rotation u = so_exp(v.A.scaled(t)) * base.U;
  const Vec d = (v.L.values() * t).array().exp() * base.D.values().array();
  return Frame(u, DiagMat(d));
}

LogResult log_map(const Frame& base, const Frame& target) {
  if (base.p() != target.p()) throw InvalidInput("log_map: dimension mismatch");
  const RotationLog rl = so_log(target.U * base.U.transpose());
  const Vec l = (target.D.values().array() / base.D.values().array()).log();
  return {{rl.A, DiagMat(l)}, rl.involution};
}

double geo_dist_sq(double angle, const DiagMat& d, const DiagMat& lambda, double k) {
  const double s = (lambda.values().array() / d.values().array()).log().square().sum();
  return k * angle * angle + s;
}

double geo_dist(const Frame& a, const Frame& b, const MetricConfig& cfg) {
  if (a.p() != b.p()) throw InvalidInput("geo_dist: dimension mismatch");
  const double angle = rotation_angle(b.U * a.U.transpose());
  return std::sqrt(geo_dist_sq(angle, a.D, b.D, cfg.k()));
}

Frame geodesic_eval(const CurveParams& c, double t) { return exp_map(c.base, c.velocity, t); }

std::pair<double, double> verify_invariance(const Frame& a, const Frame& b, const MetricConfig& cfg,
                                            const Mat& r1, const Mat& r2, const Perm& pi,
                                            const DiagMat& s) {
  const auto move = [&](const Frame& f) {
    // R1 U R2 has determinant det(R1) det(R2); the distance only sees
    // (R1 V R2)(R1 U R2)' = R1 V U' R1', so the angle is taken directly.
    const Mat u = r1 * f.U.matrix() * r2;
    const Vec d = s.values().array() * permute_diag(f.D, pi).values().array();
    return std::pair<Mat, DiagMat>(u, DiagMat(d));
  };
  const auto [ua, da] = move(a);
  const auto [ub, db] = move(b);
  const Mat rel = ub * ua.transpose();
  // rel is a rotation whenever r1 is orthogonal, whatever det(r1).
  const double angle = rotation_angle(Rotation(rel));
  const double after = std::sqrt(geo_dist_sq(angle, da, db, cfg.k()));
  return {geo_dist(a, b, cfg), after};
}

std::vector<CurveParams> equivalent_geodesics(const CurveParams& c, double tol_eq) {
  bool distinct = false;
  for (double t : {0.0, 0.5, 1.0}) {
    const Vec d = (c.velocity.L.values() * t).array().exp() * c.base.D.values().array();
    if (partition_of(DiagMat(d), tol_eq).all_singletons()) {
      distinct = true;
      break;
    }
  }
  if (!distinct) {
    const Partition part = partition_of(c.base.D, tol_eq);
    throw MultiplicityError("scaling-rotation curve has repeated eigenvalues at every sampled t",
                            part.blocks());
  }
  std::vector<CurveParams> out;
  const auto perms = all_perms(c.base.p());
  for (const auto& sigma : even_signs(c.base.p())) {
    for (const auto& pi : perms) {
      out.push_back({transform_version(c.base, sigma, pi), {c.velocity.A, permute_diag(c.velocity.L, pi)}});
    }
  }
  return out;
}

}  // namespace spdsr
