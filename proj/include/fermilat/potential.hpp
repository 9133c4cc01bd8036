#pragma once

#include <complex>
#include <cstdint>
#include <utility>
#include <vector>

#include "fermilat/lattice.hpp"

namespace fermilat {

/// Default absolute bound on the imaginary residue tolerated when
/// reconstructing a real potential from Fourier coefficients.
inline constexpr double kDefaultHermitianTol = 1e-10;

/// Real periodic potential, stored as values on the fundamental domain in
/// canonical order.
struct Potential {
  Lattice lattice;
  std::vector<double> values;

  Potential(Lattice lat, std::vector<double> vals);
};

/// Fourier coefficients of a potential in canonical order. For a real
/// potential they satisfy coeffs(reduce(-l)) == conj(coeffs(l)).
struct FourierCoeffs {
  Lattice lattice;
  std::vector<std::complex<double>> coeffs;

  FourierCoeffs(Lattice lat, std::vector<std::complex<double>> c);
};

/// Split of the d axes into r >= 2 consecutive blocks of sizes parts[j].
class Partition {
 public:
  explicit Partition(std::vector<int> parts);

  const std::vector<int>& parts() const noexcept { return parts_; }
  int block_count() const noexcept { return static_cast<int>(parts_.size()); }
  /// First axis belonging to the given block.
  int offset(int block) const { return offsets_.at(block); }
  int total_dimension() const noexcept;

  void validate_for(const Lattice& lattice) const;

 private:
  std::vector<int> parts_;
  std::vector<int> offsets_;
};

/// Lattice made of the periods of one partition block.
Lattice block_lattice(const Lattice& lattice, const Partition& p, int block);

/// Forward transform with 1/Q normalization:
/// coeffs(l) = (1/Q) sum_n values(n) exp(-2 pi i sum_j l_j n_j / q_j).
FourierCoeffs dft(const Potential& V);

/// Inverse transform; throws HermitianSymmetryViolation when the imaginary
/// residue of any reconstructed value exceeds hermitian_tol.
Potential idft(const FourierCoeffs& F, double hermitian_tol = kDefaultHermitianTol);

/// Cell average [V]; equals the real part of coeffs(0).
double average(const Potential& V);

/// Default coefficient tolerance, 1e-9 * (1 + max |coeff|).
double default_coeff_tol(const FourierCoeffs& F);

struct SeparabilityViolation {
  MultiIndex index;
  double magnitude;
};

struct SeparabilityResult {
  bool separable = false;
  /// Mixed-frequency coefficients above tolerance, largest first.
  std::vector<SeparabilityViolation> violations;
};

/// A potential splits along the partition exactly when every Fourier
/// coefficient with two or more non-zero blocks vanishes.
SeparabilityResult is_separable(const Potential& V, const Partition& p, double tol);
SeparabilityResult is_separable(const Potential& V, const Partition& p);

/// Splits V into one potential per block. Block means are fixed to [V]/r, so
/// the components recombine to V and the output is deterministic. Throws
/// NotSeparable when is_separable fails at the given tolerance.
std::vector<Potential> separate(const Potential& V, const Partition& p, double tol);
std::vector<Potential> separate(const Potential& V, const Partition& p);

/// V(n) = sum_j components[j](block_j(n)). Component periods must concatenate
/// to the target lattice periods; throws ShapeMismatch otherwise.
Potential combine_separable(const std::vector<Potential>& components, const Lattice& lattice);

/// n -> V(reduce(n + shift)).
Potential translate(const Potential& V, const MultiIndex& shift);
/// n -> V(reduce(-n)).
Potential reflect(const Potential& V);
Potential add_constant(const Potential& V, double c);

/// Seeded values, uniform in [-amplitude, amplitude], canonical order.
Potential random_potential(const Lattice& lattice, std::uint64_t seed, double amplitude = 1.0);
Potential constant_potential(const Lattice& lattice, double value);

}  // namespace fermilat
