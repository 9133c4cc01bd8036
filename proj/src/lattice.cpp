#include "fermilat/lattice.hpp"

#include <numeric>

#include "fermilat/errors.hpp"

namespace fermilat {

bool pairwise_coprime(const std::vector<int>& periods) {
  for (std::size_t i = 0; i < periods.size(); ++i) {
    for (std::size_t j = i + 1; j < periods.size(); ++j) {
      if (std::gcd(periods[i], periods[j]) != 1) return false;
    }
  }
  return true;
}

Lattice::Lattice(std::vector<int> periods) : periods_(std::move(periods)) {
  if (periods_.empty()) {
    throw PreconditionFailed("lattice needs at least one period");
  }
  for (int q : periods_) {
    if (q < 1) throw PreconditionFailed("lattice periods must be positive");
    cell_size_ *= q;
  }
  pairwise_coprime_ = fermilat::pairwise_coprime(periods_);
}

std::vector<MultiIndex> Lattice::domain() const {
  std::vector<MultiIndex> out;
  out.reserve(static_cast<std::size_t>(cell_size_));
  MultiIndex n(dimension(), 0);
  for (long p = 0; p < cell_size_; ++p) {
    out.push_back(n);
    for (int j = dimension() - 1; j >= 0; --j) {
      if (++n[j] < periods_[j]) break;
      n[j] = 0;
    }
  }
  return out;
}

MultiIndex Lattice::reduce(const MultiIndex& index) const {
  if (static_cast<int>(index.size()) != dimension()) {
    throw DimensionMismatch("index dimension does not match lattice");
  }
  MultiIndex out(index.size());
  for (std::size_t j = 0; j < index.size(); ++j) {
    int r = index[j] % periods_[j];
    out[j] = r < 0 ? r + periods_[j] : r;
  }
  return out;
}

long Lattice::flat_index(const MultiIndex& reduced) const {
  long pos = 0;
  for (std::size_t j = 0; j < reduced.size(); ++j) {
    pos = pos * periods_[j] + reduced[j];
  }
  return pos;
}

MultiIndex Lattice::unflatten(long position) const {
  MultiIndex n(dimension());
  for (int j = dimension() - 1; j >= 0; --j) {
    n[j] = static_cast<int>(position % periods_[j]);
    position /= periods_[j];
  }
  return n;
}

}  // namespace fermilat
