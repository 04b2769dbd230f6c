#ifndef SPDSR_GROUP_HPP_
#define SPDSR_GROUP_HPP_

#include <array>
#include <initializer_list>
#include <vector>

#include "spdsr/matcore.hpp"

namespace spdsr {

/// Bijection of {0, .., p-1}; `image(i)` is pi(i).  Indices are 0-based here
/// even though the usual notation counts from 1.
class Perm {
 public:
  Perm() = default;
  Perm(std::initializer_list<int> mapping);
  explicit Perm(std::vector<int> mapping);

  static Perm identity(int p);

  int p() const noexcept { return static_cast<int>(map_.size()); }
  int image(int i) const { return map_[static_cast<std::size_t>(i)]; }
  const std::vector<int>& mapping() const noexcept { return map_; }
  Perm inverse() const;

  friend bool operator==(const Perm&, const Perm&) = default;

 private:
  std::vector<int> map_;
};

/// All p! permutations in lexicographic order of (pi(0), .., pi(p-1)).
std::vector<Perm> all_perms(int p);

/// Sequence of +-1 signs.
class SignChange {
 public:
  SignChange() = default;
  SignChange(std::initializer_list<int> signs);
  explicit SignChange(std::vector<int> signs);

  static SignChange identity(int p);

  int p() const noexcept { return static_cast<int>(signs_.size()); }
  int operator[](int i) const { return signs_[static_cast<std::size_t>(i)]; }
  bool is_even() const;

  friend bool operator==(const SignChange&, const SignChange&) = default;

 private:
  std::vector<int> signs_;
};

/// Permutation matrix with a 1 in row pi(i) of column i, with the first row
/// negated when that would otherwise have determinant -1.  Always in SO(p).
Rotation perm_matrix(const Perm& pi);

DiagMat sign_matrix(const SignChange& sigma);

/// D_pi = P D P': entry pi(i) of the result holds d_i.
DiagMat permute_diag(const DiagMat& d, const Perm& pi);

/// The 2^(p-1) sign patterns with product +1, in a fixed order starting
/// from all +1.
std::vector<SignChange> even_signs(int p);

inline constexpr double kTolEq = 1e-8;

/// Index sets of (transitively) equal diagonal entries; entries i and j are
/// linked when |d_i - d_j| <= tol_eq * max(1, max_k d_k).  Blocks are sorted
/// by their smallest index.
class Partition {
 public:
  Partition() = default;
  explicit Partition(std::vector<std::vector<int>> blocks);

  const std::vector<std::vector<int>>& blocks() const noexcept { return blocks_; }
  std::size_t size() const noexcept { return blocks_.size(); }
  bool all_singletons() const;

  friend bool operator==(const Partition&, const Partition&) = default;

 private:
  std::vector<std::vector<int>> blocks_;
};

Partition partition_of(const DiagMat& d, double tol_eq = kTolEq);

struct Frame;  // manifold.hpp

/// Version (U I_sigma P_pi', D_pi) of the frame (U, D).
Frame transform_version(const Frame& f, const SignChange& sigma, const Perm& pi);

/// All p! 2^(p-1) eigen-decompositions of an SPD matrix with distinct
/// eigenvalues, sigma in the outer loop and pi in the inner loop.  Throws
/// MultiplicityError when the partition has a non-singleton block.
std::vector<Frame> enumerate_versions(const SymMat& x, double tol_eq = kTolEq);

/// Same, starting from a given version of X.
std::vector<Frame> enumerate_versions(const Frame& base);

}  // namespace spdsr

#endif  // SPDSR_GROUP_HPP_
