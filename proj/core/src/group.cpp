#include "spdsr/group.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "spdsr/errors.hpp"
#include "spdsr/manifold.hpp"

namespace spdsr {

namespace {

void check_bijection(const std::vector<int>& m) {
  std::vector<int> sorted = m;
  std::sort(sorted.begin(), sorted.end());
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    if (sorted[i] != static_cast<int>(i)) throw InvalidInput("mapping is not a permutation");
  }
}

std::string describe(const Partition& part) {
  std::string s = "{";
  for (std::size_t b = 0; b < part.blocks().size(); ++b) {
    if (b) s += ",";
    s += "{";
    for (std::size_t i = 0; i < part.blocks()[b].size(); ++i) {
      if (i) s += ",";
      s += std::to_string(part.blocks()[b][i] + 1);
    }
    s += "}";
  }
  return s + "}";
}

}  // namespace

Perm::Perm(std::initializer_list<int> mapping) : Perm(std::vector<int>(mapping)) {}

Perm::Perm(std::vector<int> mapping) : map_(std::move(mapping)) { check_bijection(map_); }

Perm Perm::identity(int p) {
  std::vector<int> m(static_cast<std::size_t>(p));
  std::iota(m.begin(), m.end(), 0);
  return Perm(std::move(m));
}

Perm Perm::inverse() const {
  std::vector<int> inv(map_.size());
  for (std::size_t i = 0; i < map_.size(); ++i) inv[static_cast<std::size_t>(map_[i])] = static_cast<int>(i);
  return Perm(std::move(inv));
}

std::vector<Perm> all_perms(int p) {
  check_dim(p);
  std::vector<int> m(static_cast<std::size_t>(p));
  std::iota(m.begin(), m.end(), 0);
  std::vector<Perm> out;
  do {
    out.emplace_back(m);
  } while (std::next_permutation(m.begin(), m.end()));
  return out;
}

SignChange::SignChange(std::initializer_list<int> signs) : SignChange(std::vector<int>(signs)) {}

SignChange::SignChange(std::vector<int> signs) : signs_(std::move(signs)) {
  for (int s : signs_) {
    if (s != 1 && s != -1) throw InvalidInput("sign entries must be +1 or -1");
  }
}

SignChange SignChange::identity(int p) { return SignChange(std::vector<int>(static_cast<std::size_t>(p), 1)); }

bool SignChange::is_even() const {
  int prod = 1;
  for (int s : signs_) prod *= s;
  return prod == 1;
}

Rotation perm_matrix(const Perm& pi) {
  const int p = pi.p();
  check_dim(p);
  Mat m = Mat::Zero(p, p);
  for (int i = 0; i < p; ++i) m(pi.image(i), i) = 1.0;
  if (m.determinant() < 0.0) m.row(0) = -m.row(0);
  return Rotation(m);
}

DiagMat sign_matrix(const SignChange& sigma) {
  Vec d(sigma.p());
  for (int i = 0; i < sigma.p(); ++i) d(i) = sigma[i];
  return DiagMat(std::move(d));
}

DiagMat permute_diag(const DiagMat& d, const Perm& pi) {
  if (d.p() != pi.p()) throw InvalidInput("permute_diag: dimension mismatch");
  Vec out(d.p());
  for (int i = 0; i < d.p(); ++i) out(pi.image(i)) = d[i];
  return DiagMat(std::move(out));
}

std::vector<SignChange> even_signs(int p) {
  check_dim(p);
  if (p == 2) return {SignChange{1, 1}, SignChange{-1, -1}};
  return {SignChange{1, 1, 1}, SignChange{-1, -1, 1}, SignChange{-1, 1, -1}, SignChange{1, -1, -1}};
}

Partition::Partition(std::vector<std::vector<int>> blocks) : blocks_(std::move(blocks)) {
  std::vector<int> all;
  for (auto& b : blocks_) {
    if (b.empty()) throw InvalidInput("empty partition block");
    std::sort(b.begin(), b.end());
    all.insert(all.end(), b.begin(), b.end());
  }
  check_bijection(all);
  std::sort(blocks_.begin(), blocks_.end(), [](const auto& a, const auto& b) { return a.front() < b.front(); });
}

bool Partition::all_singletons() const {
  return std::all_of(blocks_.begin(), blocks_.end(), [](const auto& b) { return b.size() == 1; });
}

Partition partition_of(const DiagMat& d, double tol_eq) {
  const int p = d.p();
  const double scale = std::max(1.0, d.values().maxCoeff());
  // Union-find over the "close" relation gives the transitive closure.
  std::vector<int> parent(static_cast<std::size_t>(p));
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int i) {
    while (parent[static_cast<std::size_t>(i)] != i) i = parent[static_cast<std::size_t>(i)];
    return i;
  };
  for (int i = 0; i < p; ++i) {
    for (int j = i + 1; j < p; ++j) {
      if (std::abs(d[i] - d[j]) <= tol_eq * scale) parent[static_cast<std::size_t>(find(j))] = find(i);
    }
  }
  std::vector<std::vector<int>> blocks;
  std::vector<int> root_to_block(static_cast<std::size_t>(p), -1);
  for (int i = 0; i < p; ++i) {
    const int r = find(i);
    if (root_to_block[static_cast<std::size_t>(r)] < 0) {
      root_to_block[static_cast<std::size_t>(r)] = static_cast<int>(blocks.size());
      blocks.emplace_back();
    }
    blocks[static_cast<std::size_t>(root_to_block[static_cast<std::size_t>(r)])].push_back(i);
  }
  return Partition(std::move(blocks));
}

Frame transform_version(const Frame& f, const SignChange& sigma, const Perm& pi) {
  const Mat u = f.U.matrix() * sign_matrix(sigma).matrix() * perm_matrix(pi).matrix().transpose();
  return Frame(Rotation(u), permute_diag(f.D, pi));
}

std::vector<Frame> enumerate_versions(const Frame& base) {
  const int p = base.p();
  std::vector<Frame> out;
  const auto perms = all_perms(p);
  for (const auto& sigma : even_signs(p)) {
    for (const auto& pi : perms) out.push_back(transform_version(base, sigma, pi));
  }
  return out;
}

std::vector<Frame> enumerate_versions(const SymMat& x, double tol_eq) {
  x.require_spd("enumerate_versions argument");
  const auto [u, d] = sym_eig(x);
  const Partition part = partition_of(d, tol_eq);
  if (!part.all_singletons()) {
    throw MultiplicityError("repeated eigenvalues, infinite fiber with partition " + describe(part),
                            part.blocks());
  }
  return enumerate_versions(Frame(u, d));
}

}  // namespace spdsr
