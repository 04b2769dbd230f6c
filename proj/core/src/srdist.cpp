#include "spdsr/srdist.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>

#include "spdsr/errors.hpp"

namespace spdsr {

namespace {

struct Candidate {
  Frame x;
  Frame y;
};

double pair_distance(const Frame& x, const Frame& y, double k) {
  return std::sqrt(geo_dist_sq(rotation_angle(y.U * x.U.transpose()), x.D, y.D, k));
}

bool involution_between(const Frame& x, const Frame& y) {
  return std::numbers::pi - rotation_angle(y.U * x.U.transpose()) <= kTolInvolution;
}

bool same_frame(const Frame& a, const Frame& b) {
  return (a.U.matrix() - b.U.matrix()).cwiseAbs().maxCoeff() <= kTolOrth &&
         (a.D.values() - b.D.values()).cwiseAbs().maxCoeff() <= kTolOrth * (1.0 + a.D.values().maxCoeff());
}

MinimalPairResult assemble(const Frame& x, const Frame& y, double distance) {
  MinimalPairResult r;
  r.distance = distance;
  r.x_frame = x;
  r.y_frame = y;
  const LogResult lg = log_map(x, y);
  r.curve = {x, lg.v};
  r.involution = lg.involution;
  return r;
}

// Lowest index among the candidates within tol_tie of the minimum wins; the
// remaining near-minimal candidates become ties.
MinimalPairResult pick(const std::vector<Candidate>& cands, const SrConfig& cfg) {
  std::vector<double> dist(cands.size());
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < cands.size(); ++i) {
    dist[i] = pair_distance(cands[i].x, cands[i].y, cfg.metric.k());
    best = std::min(best, dist[i]);
  }
  std::optional<std::size_t> chosen;
  for (std::size_t i = 0; i < cands.size(); ++i) {
    if (dist[i] <= best + cfg.tol_tie) {
      chosen = i;
      break;
    }
  }
  MinimalPairResult r = assemble(cands[*chosen].x, cands[*chosen].y, dist[*chosen]);
  for (std::size_t i = *chosen + 1; i < cands.size(); ++i) {
    if (dist[i] > best + cfg.tol_tie) continue;
    const bool duplicate =
        same_frame(cands[i].x, r.x_frame) && same_frame(cands[i].y, r.y_frame);
    const bool seen = std::any_of(r.ties.begin(), r.ties.end(), [&](const MinimalPair& t) {
      return same_frame(cands[i].x, t.x) && same_frame(cands[i].y, t.y);
    });
    if (duplicate || seen) continue;
    r.ties.push_back({cands[i].x, cands[i].y, dist[i], involution_between(cands[i].x, cands[i].y)});
  }
  return r;
}

MinimalPairResult swapped(const MinimalPairResult& r) {
  MinimalPairResult out = assemble(r.y_frame, r.x_frame, r.distance);
  for (const auto& t : r.ties) out.ties.push_back({t.y, t.x, t.distance, t.involution});
  out.x_class = r.y_class;
  out.y_class = r.x_class;
  out.near_multiplicity = r.near_multiplicity;
  return out;
}

bool near_multiplicity(const SymMat& m, const MultiplicityClass& c, double tol_eq) {
  return classify(m, 10.0 * tol_eq).partition.size() < c.partition.size();
}

// Pure scaling: the isotropic side adopts the other side's eigenvectors.
MinimalPairResult pure_scaling(const Frame& iso, const Frame& other, bool iso_is_x, const SrConfig& cfg) {
  const Frame adopted(other.U, iso.D);
  if (iso_is_x) return pick({{adopted, other}}, cfg);
  return pick({{other, adopted}}, cfg);
}

// Version of f with the repeated block moved to coordinates {0, 1}.
Frame canonical_pair_frame(const Frame& f, const MultiplicityClass& c) {
  const int a = c.repeated_block[0];
  const int b = c.repeated_block[1];
  const int single = 3 - a - b;
  std::vector<int> map(3);
  map[static_cast<std::size_t>(a)] = 0;
  map[static_cast<std::size_t>(b)] = 1;
  map[static_cast<std::size_t>(single)] = 2;
  return transform_version(f, SignChange::identity(3), Perm(map));
}

double plane_angle(const Rotation& r) { return std::atan2(r.matrix()(1, 0), r.matrix()(0, 0)); }

Mat version_matrix(const SignChange& sigma, const Perm& pi) {
  return sign_matrix(sigma).matrix() * perm_matrix(pi).matrix().transpose();
}

}  // namespace

std::string_view to_string(Multiplicity m) {
  switch (m) {
    case Multiplicity::kDistinct:
      return "distinct";
    case Multiplicity::kPair:
      return "pair";
    case Multiplicity::kTriple:
      return "triple";
  }
  return "unknown";
}

MultiplicityClass classify(const SymMat& x, double tol_eq) {
  const auto [u, d] = sym_eig(x);
  MultiplicityClass c;
  c.partition = partition_of(d, tol_eq);
  if (c.partition.all_singletons()) {
    c.kind = Multiplicity::kDistinct;
  } else if (c.partition.size() == 1 && x.p() == 3) {
    c.kind = Multiplicity::kTriple;
  } else {
    c.kind = Multiplicity::kPair;
    for (const auto& b : c.partition.blocks()) {
      if (b.size() == 2) c.repeated_block = b;
    }
  }
  return c;
}

MinimalPairResult sr_distance_2(const SymMat& x, const SymMat& y, const SrConfig& cfg) {
  if (x.p() != 2 || y.p() != 2) throw InvalidInput("sr_distance_2 expects 2 x 2 matrices");
  x.require_spd("X");
  y.require_spd("Y");
  const auto ex = sym_eig(x);
  const auto ey = sym_eig(y);
  const Frame fx(ex.U, ex.D);
  const Frame fy(ey.U, ey.D);
  const MultiplicityClass cx = classify(x, cfg.tol_eq);
  const MultiplicityClass cy = classify(y, cfg.tol_eq);

  MinimalPairResult r;
  if (cx.kind != Multiplicity::kDistinct) {
    r = pure_scaling(fx, fy, true, cfg);
  } else if (cy.kind != Multiplicity::kDistinct) {
    r = pure_scaling(fy, fx, false, cfg);
  } else {
    std::vector<Candidate> cands;
    for (const Frame& v : enumerate_versions(fx)) cands.push_back({v, fy});
    r = pick(cands, cfg);
  }
  r.x_class = cx;
  r.y_class = cy;
  r.near_multiplicity = near_multiplicity(x, cx, cfg.tol_eq) || near_multiplicity(y, cy, cfg.tol_eq);
  return r;
}

Rotation plane_rotation3(double angle) { return so_exp(AntiSym::from_axis(Eigen::Vector3d(0.0, 0.0, angle))); }

Rotation minimal_rotation(const Rotation& u, const Rotation& v, const SignChange& sigma, const Perm& pi) {
  if (u.p() != 3 || v.p() != 3) throw InvalidInput("minimal_rotation expects 3 x 3 rotations");
  const Mat gamma = version_matrix(sigma, pi) * v.matrix().transpose() * u.matrix();
  const SemiSvd s = semi_svd2(gamma.topLeftCorner(2, 2));
  Mat r = Mat::Identity(3, 3);
  r.topLeftCorner(2, 2) = s.E2.matrix() * s.E1.matrix().transpose();
  return Rotation(r);
}

double g_objective(const Rotation& u, const Rotation& v, const SignChange& sigma, const Perm& pi,
                   double theta, double phi) {
  const Mat w = u.matrix() * plane_rotation3(theta).matrix() * version_matrix(sigma, pi);
  return frob_inner(w * plane_rotation3(phi).matrix().transpose(), v.matrix());
}

GMaximum maximize_G(const Rotation& u, const Rotation& v, const SignChange& sigma, const Perm& pi,
                    double tol_g, int max_iter, double phi0) {
  const Mat m = version_matrix(sigma, pi);
  const SignChange plus = SignChange::identity(3);
  const Perm id = Perm::identity(3);
  GMaximum out;
  out.phi = phi0;
  out.theta = 0.0;
  out.value = g_objective(u, v, sigma, pi, out.theta, out.phi);
  out.history.push_back(out.value);
  for (int it = 1; it <= max_iter; ++it) {
    const double before = out.value;
    // theta step: the minimal-rotation problem against V R_phi.
    const Rotation v_phi = v * plane_rotation3(out.phi);
    out.theta = plane_angle(minimal_rotation(u, v_phi, sigma, pi));
    out.history.push_back(g_objective(u, v, sigma, pi, out.theta, out.phi));
    // phi step: same problem with the roles of U and V switched.
    const Rotation w(Mat(u.matrix() * plane_rotation3(out.theta).matrix() * m));
    out.phi = plane_angle(minimal_rotation(v, w, plus, id));
    out.value = g_objective(u, v, sigma, pi, out.theta, out.phi);
    out.history.push_back(out.value);
    out.iterations = it;
    if (std::abs(out.value - before) < tol_g) return out;
  }
  throw ConvergenceError("maximize_G did not converge", out.theta, out.phi, out.value);
}

GMaximum maximize_G_multistart(const Rotation& u, const Rotation& v, const SignChange& sigma,
                               const Perm& pi, double tol_g, int max_iter) {
  std::optional<GMaximum> best;
  for (int s = 0; s < 4; ++s) {
    GMaximum g = maximize_G(u, v, sigma, pi, tol_g, max_iter, s * std::numbers::pi / 2.0);
    if (!best || g.value > best->value + 1e-15) best = std::move(g);
  }
  return *best;
}

std::vector<std::pair<SignChange, Perm>> pair_case_versions() {
  const std::vector<SignChange> sigmas{SignChange{1, 1, 1}, SignChange{-1, 1, -1}};
  // D_pi = diag(d1, d1, d3), diag(d3, d1, d1), diag(d1, d3, d1).
  const std::vector<Perm> perms{Perm{0, 1, 2}, Perm{1, 2, 0}, Perm{0, 2, 1}};
  std::vector<std::pair<SignChange, Perm>> out;
  for (const auto& pi : perms) {
    for (const auto& sigma : sigmas) out.emplace_back(sigma, pi);
  }
  return out;
}

MinimalPairResult sr_distance_3(const SymMat& x, const SymMat& y, const SrConfig& cfg) {
  if (x.p() != 3 || y.p() != 3) throw InvalidInput("sr_distance_3 expects 3 x 3 matrices");
  x.require_spd("X");
  y.require_spd("Y");
  const auto ex = sym_eig(x);
  const auto ey = sym_eig(y);
  const Frame fx(ex.U, ex.D);
  const Frame fy(ey.U, ey.D);
  const MultiplicityClass cx = classify(x, cfg.tol_eq);
  const MultiplicityClass cy = classify(y, cfg.tol_eq);

  MinimalPairResult r;
  if (cx.kind == Multiplicity::kTriple) {
    r = pure_scaling(fx, fy, true, cfg);
  } else if (cy.kind == Multiplicity::kTriple) {
    r = pure_scaling(fy, fx, false, cfg);
  } else if (cx.kind == Multiplicity::kDistinct && cy.kind == Multiplicity::kDistinct) {
    std::vector<Candidate> cands;
    for (const Frame& v : enumerate_versions(fx)) cands.push_back({v, fy});
    r = pick(cands, cfg);
  } else if (cx.kind == Multiplicity::kPair && cy.kind == Multiplicity::kDistinct) {
    const Frame cfx = canonical_pair_frame(fx, cx);
    std::vector<Candidate> cands;
    for (const auto& [sigma, pi] : pair_case_versions()) {
      const Rotation rhat = minimal_rotation(cfx.U, fy.U, sigma, pi);
      const Frame rotated(cfx.U * rhat, cfx.D);
      cands.push_back({transform_version(rotated, sigma, pi), fy});
    }
    r = pick(cands, cfg);
  } else if (cx.kind == Multiplicity::kDistinct && cy.kind == Multiplicity::kPair) {
    return swapped(sr_distance_3(y, x, cfg));
  } else {
    const Frame cfx = canonical_pair_frame(fx, cx);
    const Frame cfy = canonical_pair_frame(fy, cy);
    std::vector<Candidate> cands;
    for (const auto& [sigma, pi] : pair_case_versions()) {
      const GMaximum g = maximize_G_multistart(cfx.U, cfy.U, sigma, pi, cfg.tol_g, cfg.max_iter);
      const Frame rotated(cfx.U * plane_rotation3(g.theta), cfx.D);
      cands.push_back({transform_version(rotated, sigma, pi),
                       Frame(cfy.U * plane_rotation3(g.phi), cfy.D)});
    }
    r = pick(cands, cfg);
  }
  r.x_class = cx;
  r.y_class = cy;
  r.near_multiplicity = near_multiplicity(x, cx, cfg.tol_eq) || near_multiplicity(y, cy, cfg.tol_eq);
  return r;
}

MinimalPairResult sr_distance(const SymMat& x, const SymMat& y, const SrConfig& cfg) {
  if (x.p() != y.p()) throw InvalidInput("sr_distance: dimension mismatch");
  check_dim(x.p());
  return x.p() == 2 ? sr_distance_2(x, y, cfg) : sr_distance_3(x, y, cfg);
}

}  // namespace spdsr
