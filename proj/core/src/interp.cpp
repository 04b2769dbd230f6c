#include "spdsr/interp.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "spdsr/errors.hpp"

namespace spdsr {

namespace {

void check_pair(const SymMat& x, const SymMat& y) {
  if (x.p() != y.p()) throw InvalidInput("interpolation endpoints differ in dimension");
}

double endpoint_tolerance(const SymMat& m, double tol_eq) {
  // Near-multiplicity inputs are decomposed with eigenvalues that are equal
  // only up to tol_eq, which bounds how far the SR endpoint can drift.
  const double scale = 1.0 + frob_norm(m.matrix());
  return 1e-10 * scale + 10.0 * tol_eq * scale;
}

}  // namespace

std::string_view to_string(Scheme s) {
  switch (s) {
    case Scheme::kSR:
      return "SR";
    case Scheme::kE:
      return "E";
    case Scheme::kLE:
      return "LE";
    case Scheme::kAI:
      return "AI";
  }
  return "?";
}

Scheme parse_scheme(std::string_view s) {
  if (s == "SR") return Scheme::kSR;
  if (s == "E") return Scheme::kE;
  if (s == "LE") return Scheme::kLE;
  if (s == "AI") return Scheme::kAI;
  throw InvalidInput("unknown interpolation scheme '" + std::string(s) + "'");
}

SymMat sr_curve_eval(const CurveParams& c, double t) {
  const Mat r = so_exp(c.velocity.A.scaled(t)).matrix() * c.base.U.matrix();
  const Vec d = (c.velocity.L.values() * t).array().exp() * c.base.D.values().array();
  return SymMat::from_matrix(r * d.asDiagonal() * r.transpose());
}

SrInterpolation sr_interpolate(const SymMat& x, const SymMat& y, const SrConfig& cfg) {
  const MinimalPairResult r = sr_distance(x, y, cfg);
  SrInterpolation out;
  out.curve = r.curve;
  out.distance = r.distance;
  for (const auto& t : r.ties) out.alternatives.push_back({t.x, log_map(t.x, t.y).v});
  return out;
}

SymMat euclid_interp(const SymMat& x, const SymMat& y, double t) {
  check_pair(x, y);
  return SymMat::from_matrix((1.0 - t) * x.matrix() + t * y.matrix());
}

SymMat logeuclid_interp(const SymMat& x, const SymMat& y, double t) {
  check_pair(x, y);
  const Mat s = (1.0 - t) * spd_log(x).matrix() + t * spd_log(y).matrix();
  return spd_exp(SymMat::from_matrix(s));
}

SymMat affineinv_interp(const SymMat& x, const SymMat& y, double t) {
  check_pair(x, y);
  y.require_spd("affine-invariant endpoint");
  const Mat xh = spd_power(x, 0.5).matrix();
  const Mat xih = spd_power(x, -0.5).matrix();
  const SymMat inner = SymMat::from_matrix(xih * y.matrix() * xih);
  const SymMat step = spd_exp(SymMat::from_matrix(t * spd_log(inner).matrix()));
  return SymMat::from_matrix(xh * step.matrix() * xh);
}

TensorStats stats(const SymMat& m) {
  const Vec l = sym_eig(m).D.values();
  const double p = static_cast<double>(l.size());
  const double mean = l.sum() / p;
  const double spread = std::sqrt((l.array() - mean).square().sum());
  const double norm = l.norm();
  const double normalizer = l.size() == 3 ? std::sqrt(1.5) : std::sqrt(2.0);
  TensorStats s;
  s.det = l.prod();
  s.md = m.matrix().trace() / p;
  s.fa = norm > 0.0 ? normalizer * spread / norm : 0.0;
  return s;
}

double frame_rotation_angle(const Rotation& u_t, const Rotation& u_0) {
  return rotation_angle(u_t * u_0.transpose());
}

double axis_rotation_angle(const SymMat& m_t, const SymMat& m_0, double tol_eq) {
  const auto principal = [tol_eq](const SymMat& m) {
    const auto [u, d] = sym_eig(m);
    int top = 0;
    d.values().maxCoeff(&top);
    const Partition part = partition_of(d, tol_eq);
    for (const auto& block : part.blocks()) {
      if (block.size() > 1 && std::find(block.begin(), block.end(), top) != block.end()) {
        throw AmbiguousAxis("principal axis is not unique");
      }
    }
    return Vec(u.matrix().col(top));
  };
  const double c = std::abs(principal(m_t).dot(principal(m_0)));
  return std::acos(std::min(1.0, c));
}

Trajectory make_trajectory(const SymMat& x, const SymMat& y, Scheme scheme, int n_samples,
                           const SrConfig& cfg) {
  check_pair(x, y);
  if (n_samples < 2) throw InvalidInput("n_samples must be at least 2");
  x.require_spd("X");
  y.require_spd("Y");

  std::optional<SrInterpolation> sr;
  if (scheme == Scheme::kSR) sr = sr_interpolate(x, y, cfg);

  Trajectory traj;
  traj.scheme = scheme;
  traj.samples.reserve(static_cast<std::size_t>(n_samples));
  for (int i = 0; i < n_samples; ++i) {
    const double t = i == n_samples - 1 ? 1.0 : static_cast<double>(i) / (n_samples - 1);
    TrajectorySample s;
    s.t = t;
    switch (scheme) {
      case Scheme::kSR:
        s.m = sr_curve_eval(sr->curve, t);
        s.angle = frame_rotation_angle(geodesic_eval(sr->curve, t).U, sr->curve.base.U);
        break;
      case Scheme::kE:
        s.m = euclid_interp(x, y, t);
        break;
      case Scheme::kLE:
        s.m = logeuclid_interp(x, y, t);
        break;
      case Scheme::kAI:
        s.m = affineinv_interp(x, y, t);
        break;
    }
    s.s = stats(s.m);
    if (scheme != Scheme::kSR) {
      try {
        s.angle = axis_rotation_angle(s.m, x, cfg.tol_eq);
      } catch (const AmbiguousAxis&) {
        s.angle.reset();
      }
    }
    traj.samples.push_back(std::move(s));
  }

  const double e0 = frob_norm(traj.samples.front().m.matrix() - x.matrix());
  const double e1 = frob_norm(traj.samples.back().m.matrix() - y.matrix());
  if (e0 > endpoint_tolerance(x, cfg.tol_eq) || e1 > endpoint_tolerance(y, cfg.tol_eq)) {
    throw Error(std::string("trajectory endpoints do not reproduce the inputs for scheme ") +
                std::string(to_string(scheme)));
  }
  return traj;
}

Effects effect_report(const Trajectory& traj) {
  const auto& s = traj.samples;
  Effects e;
  if (s.size() < 3) return e;
  const auto& a = s.front().s;
  const auto& b = s.back().s;
  const double det_end = std::max(a.det, b.det);
  const double fa_end = std::min(a.fa, b.fa);
  const double md_end = std::min(a.md, b.md);
  for (std::size_t i = 1; i + 1 < s.size(); ++i) {
    e.swelling = e.swelling || s[i].s.det > det_end * (1.0 + 1e-9);
    e.fattening = e.fattening || s[i].s.fa < fa_end - 1e-9;
    e.shrinking = e.shrinking || s[i].s.md < md_end - 1e-9;
  }
  return e;
}

}  // namespace spdsr
