#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <span>
#include <utility>
#include <vector>

#include "fermilat/potential.hpp"

namespace fermilat {

/// Default seed for internal spot checks; ASCII "FERMI".
inline constexpr std::uint64_t kDefaultSeed = 0x4645524D49ull;

/// Sparse Laurent polynomial in `dims` variables with per-axis exponent
/// bounds. Terms are stored sorted lexicographically by exponent vector and
/// the value is immutable after construction, so evaluation and comparison
/// are deterministic.
class LaurentPoly {
 public:
  /// Zero polynomial.
  LaurentPoly(int dims, std::vector<int> bounds);

  /// Builds from (exponent, coefficient) pairs: validates bounds, sorts,
  /// merges duplicate exponents and drops coefficients with magnitude below
  /// prune_abs, accumulating the discarded mass.
  LaurentPoly(int dims, std::vector<int> bounds,
              std::vector<std::pair<MultiIndex, std::complex<double>>> terms,
              double prune_abs = 0.0);

  int dims() const noexcept { return dims_; }
  const std::vector<int>& bounds() const noexcept { return bounds_; }
  std::size_t term_count() const noexcept { return coeffs_.size(); }

  std::span<const int> exponent(std::size_t term) const;
  std::complex<double> coefficient(std::size_t term) const { return coeffs_[term]; }
  /// Coefficient at an exponent vector, zero when absent.
  std::complex<double> coeff(const MultiIndex& exponent) const;

  /// Sum of coeff * prod z_j^{a_j}, accumulated in sorted-exponent order.
  std::complex<double> eval(const std::vector<std::complex<double>>& z) const;

  double max_coeff_magnitude() const;
  /// Largest |Im coefficient|; for data that is real in exact arithmetic this
  /// is a free estimate of the numerical noise level.
  double imag_residue() const;
  /// Absolute cutoff applied at construction (0 when nothing was pruned away).
  double prune_threshold() const noexcept { return prune_threshold_; }
  /// Sum of |coefficient| over the terms removed by pruning; bounds the
  /// evaluation error introduced by the cutoff at unit-modulus points.
  double pruned_mass() const noexcept { return pruned_mass_; }

 private:
  friend LaurentPoly poly_from_sorted_terms(int, std::vector<int>, std::vector<int>,
                                            std::vector<std::complex<double>>, double, double);

  int dims_;
  std::vector<int> bounds_;
  std::vector<int> exps_;  // term_count * dims, row-major
  std::vector<std::complex<double>> coeffs_;
  double prune_threshold_ = 0.0;
  double pruned_mass_ = 0.0;
};

struct FermiPolyOptions {
  /// Absolute pruning cutoff is prune_rel * (1 + max raw |coefficient|).
  double prune_rel = 1e-9;
  /// Extra roots of unity per axis beyond the minimal alias-free 2b+1.
  int oversample = 0;
  /// Cross-check the result against direct determinant values and the
  /// expected extremal coefficients.
  bool validate = true;
  int eval_checks = 3;
  std::uint64_t check_seed = kDefaultSeed;
};

/// Coefficients of det(build_direct(V, z) - lambda0 I) as a Laurent
/// polynomial in z, recovered by sampling pivoted-LU determinants on the
/// per-axis roots-of-unity grid and inverse transforming. Throws
/// InterpolationInconsistency when validation fails.
LaurentPoly fermi_poly(const Potential& V, std::complex<double> lambda0,
                       const FermiPolyOptions& opts = {});

/// Same polynomial for several lambda values at once. The grid spectral data
/// is computed once (the grid lies on the unit torus, so the matrices are
/// Hermitian and det(D - lambda I) = prod(mu_i - lambda) for every lambda).
std::vector<LaurentPoly> fermi_polys(const Potential& V,
                                     std::span<const std::complex<double>> lambdas,
                                     const FermiPolyOptions& opts = {});

/// Exponent bounds of the fermi polynomial: b_j = Q / q_j.
std::vector<int> fermi_bounds(const Lattice& lattice);

/// Sign carried by the extremal pure powers z_axis^{+-b_axis}:
/// (-1)^{(q_axis - 1) * Q / q_axis}.
double kappa_sign(const Lattice& lattice, int axis);

/// Coefficients at the extremal pure powers, one (plus, minus) pair per axis.
/// Throws MissingLeadingTerm when an expected extremal monomial is absent
/// (pruned or never produced).
std::vector<std::pair<std::complex<double>, std::complex<double>>> leading_terms(
    const LaurentPoly& p);

struct PolyEquality {
  bool equal = false;
  double max_deviation = 0.0;  // normalized by 1 + max |coeff| of either
  MultiIndex worst_exponent;
};

PolyEquality poly_equal(const LaurentPoly& p, const LaurentPoly& q, double tol);

struct PolyTermDelta {
  MultiIndex exponent;
  std::complex<double> lhs;
  std::complex<double> rhs;
  double deviation;  // normalized
};

struct PolyComparison {
  double max_deviation = 0.0;
  double normalizer = 1.0;
  std::vector<PolyTermDelta> worst;  // descending deviation, capped
};

/// Coefficientwise comparison over the union of supports; deviations are
/// |p_a - q_a| / (1 + max coefficient magnitude of either polynomial).
PolyComparison compare_polys(const LaurentPoly& p, const LaurentPoly& q,
                             std::size_t max_witnesses = 10);

/// Recovers a Laurent polynomial with the given exponent bounds from samples
/// of `f` on per-axis roots-of-unity grids of size 2*b_j + 1 + 2*oversample.
/// Exact for any polynomial within the bounds, up to round-off.
LaurentPoly interpolate_unity_grid(
    const std::vector<int>& bounds,
    const std::function<std::complex<double>(std::span<const std::complex<double>>)>& f,
    double prune_rel = 0.0, int oversample = 0);

}  // namespace fermilat
