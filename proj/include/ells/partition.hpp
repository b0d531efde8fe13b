#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "ells/bigint.hpp"

namespace ells {

/// 1-based cell coordinates of a Young diagram box: row i, column j.
struct Box {
  int i = 1;
  int j = 1;
  friend auto operator<=>(const Box&, const Box&) = default;
};

/// Content of a box.
///
/// NOTE the sign convention used throughout this library: c(i,j) = i - j.
/// This is the transpose of the more common j - i. Every downstream formula
/// (Y-observable, characters, shifted arguments x + m*c) assumes i - j.
inline int content(Box b) { return b.i - b.j; }

/// An integer partition λ₁ ≥ λ₂ ≥ … ≥ λ_ℓ > 0. The empty sequence is ∅.
class Partition {
 public:
  Partition() = default;
  /// Validates weak decrease and positivity; throws std::invalid_argument.
  explicit Partition(std::vector<int> rows);

  const std::vector<int>& rows() const { return rows_; }
  long long size() const { return size_; }        // |λ|
  int length() const { return static_cast<int>(rows_.size()); }  // ℓ(λ)
  bool empty() const { return rows_.empty(); }

  /// Row length with λ_i = 0 for i > ℓ. 1-based.
  int row(int i) const {
    return (i >= 1 && i <= length()) ? rows_[i - 1] : 0;
  }
  /// Column length λᵗ_j (number of rows with λ_i ≥ j). 1-based.
  int col(int j) const;

  bool contains(Box b) const {
    return b.i >= 1 && b.j >= 1 && b.j <= row(b.i);
  }

  Partition transpose() const;

  int arm(Box b) const;   // λ_i - j
  int leg(Box b) const;   // λᵗ_j - i
  /// Hook length λ_i - j + λᵗ_j - i + 1. Throws std::domain_error if b ∉ λ.
  int hook(Box b) const;

  std::vector<Box> boxes() const;

  /// (addable, removable) corner boxes; |addable| = |removable| + 1.
  std::pair<std::vector<Box>, std::vector<Box>> boundary() const;

  /// JSON-style row list, e.g. "[3,2]"; ∅ is "[]".
  std::string to_string() const;

  friend auto operator<=>(const Partition&, const Partition&) = default;

 private:
  std::vector<int> rows_;
  long long size_ = 0;
};

BigInt factorial(long long n);

/// Number of standard Young tableaux of shape λ, via N!/∏ hooks.
/// Exact at any size (arbitrary-precision arithmetic).
BigInt dimension(const Partition& lam);

/// ζ(-k) for 1 ≤ k ≤ 12, from a fixed table (ζ(-1) = -1/12, ζ(-2) = 0, …).
/// Throws std::out_of_range outside the table.
BigRat zeta_neg(int k);

/// Regularized Casimir moment
///   p_k[λ] = (1 - 2^{-k}) ζ(-k) + Σ_i [(λ_i - i + ½)^k - (-i + ½)^k],
/// exact rational. k restricted to the ζ table range.
BigRat moment_pk(const Partition& lam, int k);

/// The finite sum part of moment_pk (without the ζ constant).
BigRat moment_pk_sum_part(const Partition& lam, int k);

/// All partitions of n, in lexicographically decreasing row order.
std::vector<Partition> partitions_of(int n);

/// All partitions with |λ| ≤ max_size, grouped by increasing size.
std::vector<Partition> partitions_up_to(int max_size);

}  // namespace ells
