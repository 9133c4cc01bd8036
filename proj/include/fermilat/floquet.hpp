#pragma once

#include <Eigen/Dense>
#include <complex>
#include <vector>

#include "fermilat/potential.hpp"

namespace fermilat {

enum class Basis { Direct, Fourier };

/// Q x Q matrix of the operator under twisted boundary conditions at a fixed
/// evaluation point z. At unit-modulus z the matrix is Hermitian in either
/// basis.
struct FloquetMatrix {
  Lattice lattice;
  Basis basis;
  std::vector<std::complex<double>> z;
  Eigen::MatrixXcd entries;
};

struct SpectrumSample {
  std::vector<double> k;            // phase per axis, in cycles
  std::vector<double> eigenvalues;  // non-decreasing, multiplicity kept
};

/// Direct basis: functions on the fundamental domain. Interior hops
/// contribute 1; hops leaving the domain wrap with weight z_j (forward) or
/// z_j^{-1} (backward). The diagonal carries V.
FloquetMatrix build_direct(const Potential& V, const std::vector<std::complex<double>>& z);

/// Fourier basis: diagonal sum_j (rho^j_{n_j} z_j + 1/(rho^j_{n_j} z_j)) with
/// rho^j_n = exp(2 pi i n / q_j), plus coeffs(n - n') off the diagonal.
/// Satisfies det(build_fourier(V, z) - lambda I)
///        == det(build_direct(V, z^q) - lambda I) componentwise in z^q.
FloquetMatrix build_fourier(const Potential& V, const std::vector<std::complex<double>>& z);

/// Sorted eigenvalues of the direct-basis matrix at z_j = exp(2 pi i k_j).
SpectrumSample spectrum_at(const Potential& V, const std::vector<double>& k);

std::vector<SpectrumSample> band_structure(const Potential& V,
                                           const std::vector<std::vector<double>>& kpath);

/// det(build_direct(V, z) - lambda I) by pivoted LU.
std::complex<double> char_poly_value(const Potential& V,
                                     const std::vector<std::complex<double>>& z,
                                     std::complex<double> lambda);

namespace detail {

/// z-dependent slot of the direct-basis matrix: entry (row, col) accumulates
/// z_axis^power with power in {+1, -1}.
struct WrapEntry {
  int row;
  int col;
  int axis;
  int power;
};

/// Splits the direct-basis matrix into its z-independent part (unit hops and
/// the potential on the diagonal) and the wrap slots, so grids of evaluation
/// points reuse the static part.
struct DirectTemplate {
  Eigen::MatrixXcd base;
  std::vector<WrapEntry> wraps;
};

DirectTemplate make_direct_template(const Potential& V);

/// out = base with the wrap contributions for z added in.
void apply_wraps(const DirectTemplate& tmpl, const std::vector<std::complex<double>>& z,
                 Eigen::MatrixXcd& out);

void require_nonzero(const std::vector<std::complex<double>>& z);

}  // namespace detail

}  // namespace fermilat
