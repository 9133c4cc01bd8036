#include "fermilat/laurent.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>

#include "fermilat/errors.hpp"
#include "fermilat/floquet.hpp"
#include "fermilat/parallel.hpp"
#include "fermilat/rng.hpp"

namespace fermilat {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

int compare_rows(std::span<const int> a, std::span<const int> b) {
  for (std::size_t j = 0; j < a.size(); ++j) {
    if (a[j] != b[j]) return a[j] < b[j] ? -1 : 1;
  }
  return 0;
}

// Roots-of-unity sampling grid, one odd size per axis, row-major enumeration
// with the last axis fastest (matching the canonical basis order).
struct UnityGrid {
  std::vector<int> sizes;
  long total = 1;
  std::vector<std::vector<std::complex<double>>> axis_z;

  int dims() const { return static_cast<int>(sizes.size()); }

  void point(long index, std::vector<std::complex<double>>& z) const {
    for (int j = dims() - 1; j >= 0; --j) {
      z[j] = axis_z[j][index % sizes[j]];
      index /= sizes[j];
    }
  }

  // Index of the componentwise conjugate point, m_j -> (N_j - m_j) mod N_j.
  long mirror(long index) const {
    long out = 0;
    std::vector<int> m(dims());
    for (int j = dims() - 1; j >= 0; --j) {
      m[j] = static_cast<int>(index % sizes[j]);
      index /= sizes[j];
    }
    for (int j = 0; j < dims(); ++j) {
      out = out * sizes[j] + (m[j] == 0 ? 0 : sizes[j] - m[j]);
    }
    return out;
  }
};

UnityGrid make_unity_grid(const std::vector<int>& bounds, int oversample) {
  if (oversample < 0) throw PreconditionFailed("oversample must be non-negative");
  UnityGrid g;
  g.sizes.reserve(bounds.size());
  for (int b : bounds) {
    if (b < 0) throw PreconditionFailed("exponent bounds must be non-negative");
    const int n = 2 * b + 1 + 2 * oversample;
    g.sizes.push_back(n);
    g.total *= n;
  }
  g.axis_z.resize(bounds.size());
  for (std::size_t j = 0; j < g.sizes.size(); ++j) {
    g.axis_z[j].resize(g.sizes[j]);
    for (int m = 0; m < g.sizes[j]; ++m) {
      g.axis_z[j][m] = std::polar(1.0, kTwoPi * m / g.sizes[j]);
    }
  }
  return g;
}

// In-place inverse transform along one axis:
// out[a] = (1/N) sum_t in[t] exp(-2 pi i a t / N).
void inverse_axis_transform(std::vector<std::complex<double>>& data,
                            const std::vector<int>& sizes, int axis) {
  const int N = sizes[axis];
  long outer = 1, inner = 1;
  for (int j = 0; j < axis; ++j) outer *= sizes[j];
  for (int j = axis + 1; j < static_cast<int>(sizes.size()); ++j) inner *= sizes[j];

  std::vector<std::complex<double>> twiddle(N);
  for (int s = 0; s < N; ++s) twiddle[s] = std::polar(1.0, -kTwoPi * s / N);

  std::vector<std::complex<double>> line(N);
  for (long o = 0; o < outer; ++o) {
    for (long in = 0; in < inner; ++in) {
      const long base = o * N * inner + in;
      for (int a = 0; a < N; ++a) {
        std::complex<double> acc = 0.0;
        long phase = 0;
        for (int t = 0; t < N; ++t) {
          acc += data[base + t * inner] * twiddle[phase];
          phase += a;
          if (phase >= N) phase -= N;
        }
        line[a] = acc / static_cast<double>(N);
      }
      for (int a = 0; a < N; ++a) data[base + a * inner] = line[a];
    }
  }
}

struct GridStats {
  double max_abs = 0.0;
  double rms = 0.0;
};

GridStats grid_stats(const std::vector<std::complex<double>>& values) {
  GridStats s;
  double sq = 0.0;
  for (const auto& v : values) {
    const double a = std::abs(v);
    s.max_abs = std::max(s.max_abs, a);
    sq += a * a;
  }
  s.rms = values.empty() ? 0.0 : std::sqrt(sq / static_cast<double>(values.size()));
  return s;
}

// values (grid samples) -> recentered coefficient array, in place.
void inverse_grid_transform(const UnityGrid& g, std::vector<std::complex<double>>& values) {
  for (int j = 0; j < g.dims(); ++j) inverse_axis_transform(values, g.sizes, j);
}

std::complex<double> window_coefficient(const UnityGrid& g,
                                        const std::vector<std::complex<double>>& hat,
                                        const MultiIndex& exponent) {
  long index = 0;
  for (int j = 0; j < g.dims(); ++j) {
    const int a = exponent[j];
    index = index * g.sizes[j] + (a >= 0 ? a : a + g.sizes[j]);
  }
  return hat[index];
}

}  // namespace

LaurentPoly poly_from_sorted_terms(int dims, std::vector<int> bounds, std::vector<int> exps,
                                   std::vector<std::complex<double>> coeffs,
                                   double prune_threshold, double pruned_mass) {
  LaurentPoly p(dims, std::move(bounds));
  p.exps_ = std::move(exps);
  p.coeffs_ = std::move(coeffs);
  p.prune_threshold_ = prune_threshold;
  p.pruned_mass_ = pruned_mass;
  return p;
}

namespace {

// Reads the exponent window [-b_j, b_j] out of the recentered coefficient
// array in lexicographic order, pruning magnitudes below the cutoff.
LaurentPoly poly_from_window(const UnityGrid& g, const std::vector<std::complex<double>>& hat,
                             const std::vector<int>& bounds, double prune_rel) {
  const int d = static_cast<int>(bounds.size());
  long window = 1;
  for (int b : bounds) window *= 2L * b + 1;

  double max_abs = 0.0;
  MultiIndex a(d);
  for (int j = 0; j < d; ++j) a[j] = -bounds[j];
  std::vector<std::complex<double>> window_vals(window);
  for (long t = 0; t < window; ++t) {
    window_vals[t] = window_coefficient(g, hat, a);
    max_abs = std::max(max_abs, std::abs(window_vals[t]));
    for (int j = d - 1; j >= 0; --j) {
      if (++a[j] <= bounds[j]) break;
      a[j] = -bounds[j];
    }
  }

  const double threshold = prune_rel > 0.0 ? prune_rel * (1.0 + max_abs) : 0.0;
  std::vector<int> exps;
  std::vector<std::complex<double>> coeffs;
  double pruned_mass = 0.0;
  for (int j = 0; j < d; ++j) a[j] = -bounds[j];
  for (long t = 0; t < window; ++t) {
    const double mag = std::abs(window_vals[t]);
    if (mag >= threshold && mag > 0.0) {
      exps.insert(exps.end(), a.begin(), a.end());
      coeffs.push_back(window_vals[t]);
    } else {
      pruned_mass += mag;
    }
    for (int j = d - 1; j >= 0; --j) {
      if (++a[j] <= bounds[j]) break;
      a[j] = -bounds[j];
    }
  }
  return poly_from_sorted_terms(d, bounds, std::move(exps), std::move(coeffs), threshold,
                                pruned_mass);
}

// det(D_V(z) - lambda0 I) over the grid, one pivoted LU per point. When
// lambda0 is real, values at conjugate grid points are conjugate, so only the
// canonical half is solved.
std::vector<std::complex<double>> lu_grid_values(const Potential& V, const UnityGrid& g,
                                                 std::complex<double> lambda0) {
  const auto tmpl = detail::make_direct_template(V);
  const long Q = V.lattice.cell_size();
  const bool conj_symmetric = lambda0.imag() == 0.0;

  std::vector<long> work;
  work.reserve(g.total);
  for (long m = 0; m < g.total; ++m) {
    if (!conj_symmetric || m <= g.mirror(m)) work.push_back(m);
  }

  std::vector<std::complex<double>> values(g.total);
  detail::parallel_chunks(static_cast<long>(work.size()), [&](long begin, long end) {
    Eigen::MatrixXcd M(Q, Q);
    std::vector<std::complex<double>> z(g.dims());
    for (long w = begin; w < end; ++w) {
      const long m = work[w];
      g.point(m, z);
      detail::apply_wraps(tmpl, z, M);
      M.diagonal().array() -= lambda0;
      values[m] = Eigen::PartialPivLU<Eigen::MatrixXcd>(M).determinant();
    }
  });
  if (conj_symmetric) {
    for (long m : work) {
      const long mm = g.mirror(m);
      if (mm != m) values[mm] = std::conj(values[m]);
    }
  }
  return values;
}

// Eigenvalues of D_V(z) over the grid (Hermitian on the unit torus); Q reals
// per point. Conjugate grid points share a spectrum.
std::vector<double> eig_grid_values(const Potential& V, const UnityGrid& g) {
  const auto tmpl = detail::make_direct_template(V);
  const long Q = V.lattice.cell_size();

  std::vector<long> work;
  work.reserve(g.total);
  for (long m = 0; m < g.total; ++m) {
    if (m <= g.mirror(m)) work.push_back(m);
  }

  std::vector<double> eigs(static_cast<std::size_t>(g.total) * Q);
  detail::parallel_chunks(static_cast<long>(work.size()), [&](long begin, long end) {
    Eigen::MatrixXcd M(Q, Q);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver;
    std::vector<std::complex<double>> z(g.dims());
    for (long w = begin; w < end; ++w) {
      const long m = work[w];
      g.point(m, z);
      detail::apply_wraps(tmpl, z, M);
      solver.compute(M, Eigen::EigenvaluesOnly);
      if (solver.info() != Eigen::Success) {
        throw EigensolverFailure("eigensolver did not converge on the sampling grid");
      }
      std::copy(solver.eigenvalues().data(), solver.eigenvalues().data() + Q,
                eigs.begin() + m * Q);
    }
  });
  for (long m : work) {
    const long mm = g.mirror(m);
    if (mm != m) {
      std::copy(eigs.begin() + m * Q, eigs.begin() + (m + 1) * Q, eigs.begin() + mm * Q);
    }
  }
  return eigs;
}

// Extraction noise floor for coefficients recovered from grid values whose
// relative accuracy is a modest multiple of machine epsilon.
double coefficient_noise(const GridStats& stats, long grid_total) {
  return 100.0 * std::numeric_limits<double>::epsilon() * stats.rms /
         std::sqrt(static_cast<double>(grid_total));
}

void validate_fermi(const LaurentPoly& poly, const UnityGrid& g,
                    const std::vector<std::complex<double>>& hat, const GridStats& stats,
                    const Potential& V, std::complex<double> lambda0,
                    const FermiPolyOptions& opts) {
  const int d = poly.dims();
  const double noise = coefficient_noise(stats, g.total);

  // Extremal pure powers must carry the structural sign. Checked on the raw
  // (pre-pruning) coefficients, and only when the noise floor resolves
  // magnitude-one values.
  if (noise < 1e-2) {
    const double tol = std::max(1e-6, 100.0 * noise);
    for (int j = 0; j < d; ++j) {
      const double kappa = kappa_sign(V.lattice, j);
      for (int sign : {+1, -1}) {
        MultiIndex corner(d, 0);
        corner[j] = sign * poly.bounds()[j];
        const std::complex<double> got = window_coefficient(g, hat, corner);
        if (std::abs(got - kappa) > tol) {
          throw InterpolationInconsistency(
              "extremal coefficient on axis " + std::to_string(j + 1) + " is " +
              std::to_string(got.real()) + " but the structural sign is " +
              std::to_string(kappa));
        }
      }
    }
  }

  // The recovered polynomial must reproduce direct determinant values at
  // fresh points, up to the mass removed by pruning.
  std::uint64_t state = opts.check_seed;
  for (int c = 0; c < opts.eval_checks; ++c) {
    const auto z = detail::random_torus_point(d, state);
    const std::complex<double> lhs = poly.eval(z);
    const std::complex<double> rhs = char_poly_value(V, z, lambda0);
    const double slack =
        1e-8 * (1.0 + std::abs(rhs)) + poly.pruned_mass() + 1e3 * noise;
    if (std::abs(lhs - rhs) > slack) {
      throw InterpolationInconsistency(
          "recovered polynomial deviates from the determinant by " +
          std::to_string(std::abs(lhs - rhs)) + " at a spot-check point (allowed " +
          std::to_string(slack) + ")");
    }
  }
}

}  // namespace

LaurentPoly::LaurentPoly(int dims, std::vector<int> bounds)
    : dims_(dims), bounds_(std::move(bounds)) {
  if (dims_ < 1) throw PreconditionFailed("polynomial needs at least one variable");
  if (static_cast<int>(bounds_.size()) != dims_) {
    throw DimensionMismatch("one exponent bound per variable required");
  }
}

LaurentPoly::LaurentPoly(int dims, std::vector<int> bounds,
                         std::vector<std::pair<MultiIndex, std::complex<double>>> terms,
                         double prune_abs)
    : LaurentPoly(dims, std::move(bounds)) {
  for (const auto& [exp, c] : terms) {
    if (static_cast<int>(exp.size()) != dims_) {
      throw DimensionMismatch("term exponent dimension mismatch");
    }
    for (int j = 0; j < dims_; ++j) {
      if (std::abs(exp[j]) > bounds_[j]) {
        throw PreconditionFailed("term exponent exceeds the declared bounds");
      }
    }
  }
  std::sort(terms.begin(), terms.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });

  prune_threshold_ = prune_abs;
  for (std::size_t i = 0; i < terms.size();) {
    std::complex<double> acc = terms[i].second;
    std::size_t j = i + 1;
    while (j < terms.size() && terms[j].first == terms[i].first) acc += terms[j++].second;
    const double mag = std::abs(acc);
    if (mag > 0.0 && (prune_abs <= 0.0 || mag >= prune_abs)) {
      exps_.insert(exps_.end(), terms[i].first.begin(), terms[i].first.end());
      coeffs_.push_back(acc);
    } else {
      pruned_mass_ += mag;
    }
    i = j;
  }
}

std::span<const int> LaurentPoly::exponent(std::size_t term) const {
  return std::span<const int>(exps_.data() + term * dims_, static_cast<std::size_t>(dims_));
}

std::complex<double> LaurentPoly::coeff(const MultiIndex& exponent) const {
  if (static_cast<int>(exponent.size()) != dims_) {
    throw DimensionMismatch("exponent dimension mismatch");
  }
  long lo = 0, hi = static_cast<long>(term_count()) - 1;
  while (lo <= hi) {
    const long mid = lo + (hi - lo) / 2;
    const int cmp = compare_rows(this->exponent(mid), exponent);
    if (cmp == 0) return coeffs_[mid];
    if (cmp < 0) {
      lo = mid + 1;
    } else {
      hi = mid - 1;
    }
  }
  return 0.0;
}

std::complex<double> LaurentPoly::eval(const std::vector<std::complex<double>>& z) const {
  if (static_cast<int>(z.size()) != dims_) {
    throw DimensionMismatch("evaluation point dimension mismatch");
  }
  detail::require_nonzero(z);

  // Per-axis power table covering [-b_j, b_j], offset by b_j.
  std::vector<std::vector<std::complex<double>>> powers(dims_);
  for (int j = 0; j < dims_; ++j) {
    const int b = bounds_[j];
    powers[j].resize(2 * b + 1);
    powers[j][b] = 1.0;
    const std::complex<double> inv = 1.0 / z[j];
    for (int t = 1; t <= b; ++t) {
      powers[j][b + t] = powers[j][b + t - 1] * z[j];
      powers[j][b - t] = powers[j][b - t + 1] * inv;
    }
  }

  std::complex<double> acc = 0.0;
  for (std::size_t i = 0; i < term_count(); ++i) {
    std::complex<double> term = coeffs_[i];
    const auto e = exponent(i);
    for (int j = 0; j < dims_; ++j) term *= powers[j][e[j] + bounds_[j]];
    acc += term;
  }
  return acc;
}

double LaurentPoly::max_coeff_magnitude() const {
  double m = 0.0;
  for (const auto& c : coeffs_) m = std::max(m, std::abs(c));
  return m;
}

double LaurentPoly::imag_residue() const {
  double m = 0.0;
  for (const auto& c : coeffs_) m = std::max(m, std::abs(c.imag()));
  return m;
}

std::vector<int> fermi_bounds(const Lattice& lattice) {
  std::vector<int> bounds(lattice.dimension());
  for (int j = 0; j < lattice.dimension(); ++j) {
    bounds[j] = static_cast<int>(lattice.cell_size() / lattice.period(j));
  }
  return bounds;
}

double kappa_sign(const Lattice& lattice, int axis) {
  const long exponent =
      static_cast<long>(lattice.period(axis) - 1) * (lattice.cell_size() / lattice.period(axis));
  return exponent % 2 == 0 ? 1.0 : -1.0;
}

LaurentPoly fermi_poly(const Potential& V, std::complex<double> lambda0,
                       const FermiPolyOptions& opts) {
  const auto bounds = fermi_bounds(V.lattice);
  const UnityGrid g = make_unity_grid(bounds, opts.oversample);

  std::vector<std::complex<double>> values = lu_grid_values(V, g, lambda0);
  const GridStats stats = grid_stats(values);
  inverse_grid_transform(g, values);

  LaurentPoly poly = poly_from_window(g, values, bounds, opts.prune_rel);
  if (opts.validate) validate_fermi(poly, g, values, stats, V, lambda0, opts);
  return poly;
}

std::vector<LaurentPoly> fermi_polys(const Potential& V,
                                     std::span<const std::complex<double>> lambdas,
                                     const FermiPolyOptions& opts) {
  std::vector<LaurentPoly> out;
  if (lambdas.empty()) return out;

  const auto bounds = fermi_bounds(V.lattice);
  const UnityGrid g = make_unity_grid(bounds, opts.oversample);
  const long Q = V.lattice.cell_size();
  const std::vector<double> eigs = eig_grid_values(V, g);

  out.reserve(lambdas.size());
  std::vector<std::complex<double>> values(g.total);
  for (const std::complex<double> lambda : lambdas) {
    detail::parallel_chunks(g.total, [&](long begin, long end) {
      for (long m = begin; m < end; ++m) {
        std::complex<double> prod = 1.0;
        const double* mu = eigs.data() + m * Q;
        for (long i = 0; i < Q; ++i) prod *= mu[i] - lambda;
        values[m] = prod;
      }
    });
    const GridStats stats = grid_stats(values);
    std::vector<std::complex<double>> hat = values;
    inverse_grid_transform(g, hat);
    LaurentPoly poly = poly_from_window(g, hat, bounds, opts.prune_rel);
    if (opts.validate) validate_fermi(poly, g, hat, stats, V, lambda, opts);
    out.push_back(std::move(poly));
  }
  return out;
}

std::vector<std::pair<std::complex<double>, std::complex<double>>> leading_terms(
    const LaurentPoly& p) {
  std::vector<std::pair<std::complex<double>, std::complex<double>>> out;
  out.reserve(p.dims());
  for (int j = 0; j < p.dims(); ++j) {
    MultiIndex plus(p.dims(), 0), minus(p.dims(), 0);
    plus[j] = p.bounds()[j];
    minus[j] = -p.bounds()[j];
    const std::complex<double> cp = p.coeff(plus);
    const std::complex<double> cm = p.coeff(minus);
    if (cp == 0.0 || cm == 0.0) {
      throw MissingLeadingTerm("extremal monomial absent on axis " + std::to_string(j + 1) +
                               "; bound or pruning problem");
    }
    out.emplace_back(cp, cm);
  }
  return out;
}

PolyComparison compare_polys(const LaurentPoly& p, const LaurentPoly& q,
                             std::size_t max_witnesses) {
  if (p.dims() != q.dims()) {
    throw DimensionMismatch("cannot compare polynomials in different variable counts");
  }
  PolyComparison cmp;
  cmp.normalizer = 1.0 + std::max(p.max_coeff_magnitude(), q.max_coeff_magnitude());

  auto record = [&](std::span<const int> exp, std::complex<double> lhs,
                    std::complex<double> rhs) {
    const double dev = std::abs(lhs - rhs) / cmp.normalizer;
    cmp.max_deviation = std::max(cmp.max_deviation, dev);
    if (dev == 0.0 && !cmp.worst.empty()) return;
    if (cmp.worst.size() < max_witnesses || dev > cmp.worst.back().deviation) {
      PolyTermDelta delta{MultiIndex(exp.begin(), exp.end()), lhs, rhs, dev};
      auto pos = std::upper_bound(cmp.worst.begin(), cmp.worst.end(), dev,
                                  [](double d, const PolyTermDelta& e) { return d > e.deviation; });
      cmp.worst.insert(pos, std::move(delta));
      if (cmp.worst.size() > max_witnesses) cmp.worst.pop_back();
    }
  };

  std::size_t i = 0, j = 0;
  while (i < p.term_count() || j < q.term_count()) {
    int order;
    if (i == p.term_count()) {
      order = 1;
    } else if (j == q.term_count()) {
      order = -1;
    } else {
      order = compare_rows(p.exponent(i), q.exponent(j));
    }
    if (order < 0) {
      record(p.exponent(i), p.coefficient(i), 0.0);
      ++i;
    } else if (order > 0) {
      record(q.exponent(j), 0.0, q.coefficient(j));
      ++j;
    } else {
      record(p.exponent(i), p.coefficient(i), q.coefficient(j));
      ++i;
      ++j;
    }
  }
  return cmp;
}

PolyEquality poly_equal(const LaurentPoly& p, const LaurentPoly& q, double tol) {
  const PolyComparison cmp = compare_polys(p, q, 1);
  PolyEquality out;
  out.max_deviation = cmp.max_deviation;
  out.equal = cmp.max_deviation <= tol;
  if (!cmp.worst.empty()) out.worst_exponent = cmp.worst.front().exponent;
  return out;
}

LaurentPoly interpolate_unity_grid(
    const std::vector<int>& bounds,
    const std::function<std::complex<double>(std::span<const std::complex<double>>)>& f,
    double prune_rel, int oversample) {
  const UnityGrid g = make_unity_grid(bounds, oversample);
  std::vector<std::complex<double>> values(g.total);
  std::vector<std::complex<double>> z(g.dims());
  for (long m = 0; m < g.total; ++m) {
    g.point(m, z);
    values[m] = f(z);
  }
  inverse_grid_transform(g, values);
  return poly_from_window(g, values, bounds, prune_rel);
}

}  // namespace fermilat
