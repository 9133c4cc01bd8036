#pragma once

#include <vector>

namespace fermilat {

/// Integer index into the periodicity cell, one component per axis.
using MultiIndex = std::vector<int>;

/// Diagonal lattice q_1 Z + ... + q_d Z together with its fundamental domain
/// W = { n : 0 <= n_j <= q_j - 1 }. The enumeration order of W (row-major,
/// last axis fastest) is the canonical basis order shared by every matrix and
/// value vector in this library.
class Lattice {
 public:
  explicit Lattice(std::vector<int> periods);

  int dimension() const noexcept { return static_cast<int>(periods_.size()); }
  const std::vector<int>& periods() const noexcept { return periods_; }
  int period(int axis) const { return periods_.at(axis); }
  long cell_size() const noexcept { return cell_size_; }
  bool pairwise_coprime() const noexcept { return pairwise_coprime_; }

  /// All cell_size() reduced indices in canonical order.
  std::vector<MultiIndex> domain() const;

  /// Componentwise modular reduction into [0, q_j - 1]. Idempotent on reduced
  /// indices and invariant under adding lattice vectors.
  MultiIndex reduce(const MultiIndex& index) const;

  /// Position of a reduced index in canonical order.
  long flat_index(const MultiIndex& reduced) const;
  MultiIndex unflatten(long position) const;

  bool operator==(const Lattice& other) const noexcept {
    return periods_ == other.periods_;
  }
  bool operator!=(const Lattice& other) const noexcept {
    return !(*this == other);
  }

 private:
  std::vector<int> periods_;
  long cell_size_ = 1;
  bool pairwise_coprime_ = true;
};

bool pairwise_coprime(const std::vector<int>& periods);

}  // namespace fermilat
