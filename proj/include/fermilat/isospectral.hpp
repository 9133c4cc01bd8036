#pragma once

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include "fermilat/laurent.hpp"
#include "fermilat/potential.hpp"

namespace fermilat {

enum class CheckMethod { PolyCompare, EigCompare, IdentitySample };

const char* to_string(CheckMethod method);

struct Witness {
  std::string location;
  std::complex<double> lhs;
  std::complex<double> rhs;
};

/// Outcome of one verification: verdict is true exactly when max_deviation is
/// within the tolerance used; witnesses carry the worst discrepancies (always
/// non-empty when the verdict is false).
struct IsospectralityReport {
  bool verdict = false;
  double max_deviation = 0.0;
  double tolerance = 0.0;
  CheckMethod method = CheckMethod::PolyCompare;
  std::vector<Witness> witnesses;
  /// Diagnostic: false when the lattice periods are not pairwise coprime
  /// (the rigidity statements assume they are).
  bool lattice_pairwise_coprime = true;
};

/// Equality of the two polynomials at one energy. Both potentials must share
/// the lattice.
IsospectralityReport fermi_isospectral(const Potential& V, const Potential& Y,
                                       std::complex<double> lambda0, double tol);

/// Sorted-spectrum comparison at explicit sample phases.
IsospectralityReport spectra_agree(const Potential& V, const Potential& Y,
                                   const std::vector<std::vector<double>>& ks, double tol);

/// Equality of the polynomials at Q+1 energies lambda_t = (t + 1/2)/(Q + 1),
/// t = 0..Q. The lambda-degree is exactly Q, so agreement at Q+1 points is
/// agreement everywhere. Sorted spectra at 10 seeded random phases are
/// spot-checked as well.
IsospectralityReport floquet_isospectral(const Potential& V, const Potential& Y, double tol,
                                         std::uint64_t seed = kDefaultSeed);

/// |[V] - [Y]| <= tol. lambda0 is echoed for reporting only.
IsospectralityReport verify_mean_identity(const Potential& V, const Potential& Y,
                                          std::complex<double> lambda0, double tol);

/// Samples the identity between the two double sums
///   sum_{n, n' in W} |coeffs(n - n')|^2 / (S_n(z) S_{n'}(z)),
/// S_n(z) = sum_j rho^j_{n_j} z_j, at random unit-modulus z. Points with any
/// |S_n| < 1e-6 are resampled (up to 1000 * samples attempts in total, then
/// SamplingExhausted). Per-sample deviation is |lhs - rhs| normalized by
/// 1 + max(|lhs|, |rhs|).
IsospectralityReport verify_fourier_quadratic_identity(const Potential& V, const Potential& Y,
                                                       int samples, std::uint64_t seed,
                                                       double tol);

/// Subset of Fourier coefficients summed by fourier_shell_sum.
struct ShellSpec {
  enum class Mode { ZeroPrefix, PairShell };
  Mode mode = Mode::ZeroPrefix;
  /// ZeroPrefix: indices with l_m = 0 for the first `prefix` axes (2 <= prefix <= d).
  int prefix = 0;
  /// PairShell: indices with l_{axis_a} in {la, q_a - la} and
  /// l_{axis_b} in {lb, q_b - lb} (set semantics, no double counting).
  int axis_a = 0;
  int axis_b = 1;
  int la = 0;
  int lb = 0;

  static ShellSpec zero_prefix(int prefix);
  static ShellSpec pair_shell(int la, int lb, int axis_a = 0, int axis_b = 1);
};

double fourier_shell_sum(const Potential& V, const ShellSpec& spec);

/// Shell-sum equality for every ZeroPrefix(d1), 2 <= d1 <= d, and every
/// PairShell value on every axis pair. Requires d >= 3.
IsospectralityReport verify_shell_identities(const Potential& V, const Potential& Y, double tol);

struct UnityTriple {
  MultiIndex l;        // (l1, l2, l3)
  MultiIndex l_prime;  // (l1', l2', l3')
  double abs_det;
  bool matches_case;   // one of the six structural cases holds
};

struct UnityClassification {
  std::vector<UnityTriple> counterexamples;  // tuples where |det| < tol and the
                                             // case list disagree, either way
  long zero_count = 0;                       // tuples with |det| < tol
};

/// Brute-forces the 3x3 determinants with rows (1,1,1), (rho^1_{l1}, rho^2_{l2},
/// rho^3_{l3}), (rho^1_{l1'}, rho^2_{l2'}, rho^3_{l3'}) over all index tuples
/// and classifies the vanishing ones against the six structural cases.
UnityClassification classify_unity_determinants(int q1, int q2, int q3, double tol);

struct AmbarzumianReport {
  IsospectralityReport poly;     // verdict: polynomial distance to zero within tol
  double max_abs_potential = 0;  // sup norm of V, reported alongside
  /// Pruning cutoff of the compared polynomials in the normalized deviation
  /// units used by max_deviation.
  double normalized_prune_floor = 0;
};

/// Distance between the polynomial of V and the polynomial of the zero
/// potential at one energy. Requires d >= 3 and pairwise coprime periods.
AmbarzumianReport ambarzumian_check(const Potential& V, std::complex<double> lambda0,
                                    double tol);

struct CongruenceTransform {
  enum class Kind { Translate, Reflect };
  Kind kind = Kind::Reflect;
  MultiIndex shift;  // Translate only

  static CongruenceTransform translation(MultiIndex shift);
  static CongruenceTransform reflection();
};

Potential apply(const CongruenceTransform& transform, const Potential& V);

/// Combined verdict over the four rigidity assertions.
struct RigidityReport {
  bool verdict = false;
  IsospectralityReport fermi;              // V and Y share the polynomial at lambda0
  IsospectralityReport separability;       // V splits along the partition
  std::vector<IsospectralityReport> components;  // blockwise, mean-matched
  IsospectralityReport prefix_dependence;  // V inherits Y's prefix support
};

/// Builds V as a congruence image of the separable Y and checks, in order:
/// polynomial equality at lambda0, separability of V, blockwise agreement of
/// the components up to a mean-matching constant, and preservation of prefix
/// dependence. Requires d >= 3, pairwise coprime periods, and Y separable
/// along the partition (PreconditionFailed otherwise).
RigidityReport rigidity_suite(const Potential& Y, const Partition& p,
                              const CongruenceTransform& transform,
                              std::complex<double> lambda0, double tol);

}  // namespace fermilat
