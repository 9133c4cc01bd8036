#include "fermilat/isospectral.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <sstream>

#include "fermilat/errors.hpp"
#include "fermilat/floquet.hpp"
#include "fermilat/rng.hpp"

namespace fermilat {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kPoleThreshold = 1e-6;
constexpr std::size_t kWitnessCap = 10;

std::string index_string(std::span<const int> index) {
  std::string out = "(";
  for (std::size_t j = 0; j < index.size(); ++j) {
    if (j) out += ",";
    out += std::to_string(index[j]);
  }
  return out + ")";
}

void require_same_lattice(const Potential& V, const Potential& Y) {
  if (V.lattice != Y.lattice) {
    throw LatticeMismatch("potentials live on different lattices");
  }
}

// Keeps the worst entries, descending deviation, capped.
struct WitnessCollector {
  double max_deviation = 0.0;
  std::vector<std::pair<double, Witness>> entries;

  void add(double deviation, Witness witness) {
    max_deviation = std::max(max_deviation, deviation);
    if (entries.size() < kWitnessCap || deviation > entries.back().first) {
      auto pos = std::upper_bound(
          entries.begin(), entries.end(), deviation,
          [](double d, const auto& e) { return d > e.first; });
      entries.insert(pos, {deviation, std::move(witness)});
      if (entries.size() > kWitnessCap) entries.pop_back();
    }
  }

  IsospectralityReport finish(CheckMethod method, double tol, bool coprime) const {
    IsospectralityReport report;
    report.method = method;
    report.tolerance = tol;
    report.max_deviation = max_deviation;
    report.verdict = max_deviation <= tol;
    report.lattice_pairwise_coprime = coprime;
    for (const auto& [dev, w] : entries) report.witnesses.push_back(w);
    if (!report.verdict && report.witnesses.empty()) {
      report.witnesses.push_back({"unspecified", 0.0, 0.0});
    }
    return report;
  }
};

void add_poly_witnesses(WitnessCollector& collector, const PolyComparison& cmp,
                        const std::string& prefix) {
  collector.max_deviation = std::max(collector.max_deviation, cmp.max_deviation);
  for (const auto& delta : cmp.worst) {
    collector.add(delta.deviation,
                  {prefix + "coeff" + index_string(delta.exponent), delta.lhs, delta.rhs});
  }
}

// rho^j_{n_j} factors for every domain point, flattened (point * d + axis).
std::vector<std::complex<double>> rho_table(const Lattice& lattice) {
  const auto W = lattice.domain();
  const int d = lattice.dimension();
  std::vector<std::complex<double>> rho(W.size() * d);
  for (std::size_t i = 0; i < W.size(); ++i) {
    for (int j = 0; j < d; ++j) {
      rho[i * d + j] = std::polar(1.0, kTwoPi * W[i][j] / lattice.period(j));
    }
  }
  return rho;
}

}  // namespace

const char* to_string(CheckMethod method) {
  switch (method) {
    case CheckMethod::PolyCompare: return "PolyCompare";
    case CheckMethod::EigCompare: return "EigCompare";
    case CheckMethod::IdentitySample: return "IdentitySample";
  }
  return "unknown";
}

IsospectralityReport fermi_isospectral(const Potential& V, const Potential& Y,
                                       std::complex<double> lambda0, double tol) {
  require_same_lattice(V, Y);
  const LaurentPoly pv = fermi_poly(V, lambda0);
  const LaurentPoly py = fermi_poly(Y, lambda0);
  WitnessCollector collector;
  add_poly_witnesses(collector, compare_polys(pv, py, kWitnessCap), "");
  return collector.finish(CheckMethod::PolyCompare, tol, V.lattice.pairwise_coprime());
}

IsospectralityReport spectra_agree(const Potential& V, const Potential& Y,
                                   const std::vector<std::vector<double>>& ks, double tol) {
  require_same_lattice(V, Y);
  WitnessCollector collector;
  for (std::size_t s = 0; s < ks.size(); ++s) {
    const SpectrumSample a = spectrum_at(V, ks[s]);
    const SpectrumSample b = spectrum_at(Y, ks[s]);
    for (std::size_t band = 0; band < a.eigenvalues.size(); ++band) {
      const double dev = std::abs(a.eigenvalues[band] - b.eigenvalues[band]);
      if (dev > 0.0 || (s == 0 && band == 0)) {
        collector.add(dev, {"k#" + std::to_string(s) + " band " + std::to_string(band + 1),
                            a.eigenvalues[band], b.eigenvalues[band]});
      }
    }
  }
  return collector.finish(CheckMethod::EigCompare, tol, V.lattice.pairwise_coprime());
}

IsospectralityReport floquet_isospectral(const Potential& V, const Potential& Y, double tol,
                                         std::uint64_t seed) {
  require_same_lattice(V, Y);
  const long Q = V.lattice.cell_size();

  // Q+1 energies pin a polynomial of lambda-degree Q.
  std::vector<std::complex<double>> lambdas(Q + 1);
  for (long t = 0; t <= Q; ++t) {
    lambdas[t] = (static_cast<double>(t) + 0.5) / static_cast<double>(Q + 1);
  }
  const auto pv = fermi_polys(V, lambdas);
  const auto py = fermi_polys(Y, lambdas);

  WitnessCollector collector;
  for (long t = 0; t <= Q; ++t) {
    add_poly_witnesses(collector, compare_polys(pv[t], py[t], 2),
                       "lambda[" + std::to_string(t) + "] ");
  }

  std::uint64_t state = seed;
  std::vector<std::vector<double>> ks;
  for (int s = 0; s < 10; ++s) ks.push_back(detail::random_phases(V.lattice.dimension(), state));
  const IsospectralityReport eig = spectra_agree(V, Y, ks, tol);
  collector.max_deviation = std::max(collector.max_deviation, eig.max_deviation);
  for (const auto& w : eig.witnesses) collector.add(std::abs(w.lhs - w.rhs), w);

  return collector.finish(CheckMethod::PolyCompare, tol, V.lattice.pairwise_coprime());
}

IsospectralityReport verify_mean_identity(const Potential& V, const Potential& Y,
                                          std::complex<double> /*lambda0*/, double tol) {
  require_same_lattice(V, Y);
  const double mv = average(V);
  const double my = average(Y);
  WitnessCollector collector;
  collector.add(std::abs(mv - my), {"cell averages", mv, my});
  return collector.finish(CheckMethod::IdentitySample, tol, V.lattice.pairwise_coprime());
}

IsospectralityReport verify_fourier_quadratic_identity(const Potential& V, const Potential& Y,
                                                       int samples, std::uint64_t seed,
                                                       double tol) {
  require_same_lattice(V, Y);
  if (samples < 1) throw PreconditionFailed("at least one sample required");

  const Lattice& lat = V.lattice;
  const long Q = lat.cell_size();
  const int d = lat.dimension();
  const auto W = lat.domain();
  const auto rho = rho_table(lat);

  const auto FV = dft(V);
  const auto FY = dft(Y);
  std::vector<double> wv(Q), wy(Q);
  for (long i = 0; i < Q; ++i) {
    wv[i] = std::norm(FV.coeffs[i]);
    wy[i] = std::norm(FY.coeffs[i]);
  }

  // diff(i, i2) = flat(reduce(n_i - n_{i2}))
  std::vector<long> diff(Q * Q);
  for (long i = 0; i < Q; ++i) {
    for (long i2 = 0; i2 < Q; ++i2) {
      MultiIndex delta(d);
      for (int j = 0; j < d; ++j) delta[j] = W[i][j] - W[i2][j];
      diff[i * Q + i2] = lat.flat_index(lat.reduce(delta));
    }
  }

  const long attempt_cap = 1000L * samples;
  long attempts = 0;
  std::uint64_t state = seed;
  std::vector<std::complex<double>> inv_s(Q);

  WitnessCollector collector;
  for (int s = 0; s < samples;) {
    if (attempts >= attempt_cap) {
      throw SamplingExhausted("could not draw pole-free evaluation points");
    }
    ++attempts;
    const auto z = detail::random_torus_point(d, state);

    bool pole = false;
    for (long i = 0; i < Q && !pole; ++i) {
      std::complex<double> sum = 0.0;
      for (int j = 0; j < d; ++j) sum += rho[i * d + j] * z[j];
      if (std::abs(sum) < kPoleThreshold) {
        pole = true;
      } else {
        inv_s[i] = 1.0 / sum;
      }
    }
    if (pole) continue;

    std::complex<double> lhs = 0.0, rhs = 0.0;
    for (long i = 0; i < Q; ++i) {
      for (long i2 = 0; i2 < Q; ++i2) {
        const std::complex<double> kernel = inv_s[i] * inv_s[i2];
        const long t = diff[i * Q + i2];
        lhs += wv[t] * kernel;
        rhs += wy[t] * kernel;
      }
    }
    const double dev = std::abs(lhs - rhs) / (1.0 + std::max(std::abs(lhs), std::abs(rhs)));
    collector.add(dev, {"sample " + std::to_string(s), lhs, rhs});
    ++s;
  }
  return collector.finish(CheckMethod::IdentitySample, tol, lat.pairwise_coprime());
}

ShellSpec ShellSpec::zero_prefix(int prefix) {
  ShellSpec spec;
  spec.mode = Mode::ZeroPrefix;
  spec.prefix = prefix;
  return spec;
}

ShellSpec ShellSpec::pair_shell(int la, int lb, int axis_a, int axis_b) {
  ShellSpec spec;
  spec.mode = Mode::PairShell;
  spec.la = la;
  spec.lb = lb;
  spec.axis_a = axis_a;
  spec.axis_b = axis_b;
  return spec;
}

double fourier_shell_sum(const Potential& V, const ShellSpec& spec) {
  const Lattice& lat = V.lattice;
  const int d = lat.dimension();
  const auto F = dft(V);
  const auto W = lat.domain();

  if (spec.mode == ShellSpec::Mode::ZeroPrefix) {
    if (spec.prefix < 2 || spec.prefix > d) {
      throw InvalidShell("zero-prefix length must lie in [2, d]");
    }
    double sum = 0.0;
    for (std::size_t li = 0; li < W.size(); ++li) {
      bool in_shell = true;
      for (int m = 0; m < spec.prefix && in_shell; ++m) in_shell = W[li][m] == 0;
      if (in_shell) sum += std::norm(F.coeffs[li]);
    }
    return sum;
  }

  if (spec.axis_a < 0 || spec.axis_b < 0 || spec.axis_a >= d || spec.axis_b >= d ||
      spec.axis_a == spec.axis_b) {
    throw InvalidShell("pair shell needs two distinct axes");
  }
  const int qa = lat.period(spec.axis_a);
  const int qb = lat.period(spec.axis_b);
  if (spec.la < 1 || spec.la > qa - 1 || spec.lb < 1 || spec.lb > qb - 1) {
    throw InvalidShell("pair shell offsets must lie in [1, q - 1]");
  }
  // Set semantics: {l, q - l} collapses to one value when l = q - l.
  auto in_pair = [](int value, int l, int q) { return value == l || value == q - l; };
  double sum = 0.0;
  for (std::size_t li = 0; li < W.size(); ++li) {
    if (in_pair(W[li][spec.axis_a], spec.la, qa) && in_pair(W[li][spec.axis_b], spec.lb, qb)) {
      sum += std::norm(F.coeffs[li]);
    }
  }
  return sum;
}

IsospectralityReport verify_shell_identities(const Potential& V, const Potential& Y, double tol) {
  require_same_lattice(V, Y);
  const Lattice& lat = V.lattice;
  const int d = lat.dimension();
  if (d < 3) {
    throw DimensionTooSmall("shell identities need at least three axes");
  }

  WitnessCollector collector;
  for (int prefix = 2; prefix <= d; ++prefix) {
    const auto spec = ShellSpec::zero_prefix(prefix);
    const double lhs = fourier_shell_sum(V, spec);
    const double rhs = fourier_shell_sum(Y, spec);
    collector.add(std::abs(lhs - rhs), {"ZeroPrefix(" + std::to_string(prefix) + ")", lhs, rhs});
  }
  for (int a = 0; a < d; ++a) {
    for (int b = a + 1; b < d; ++b) {
      for (int la = 1; la <= lat.period(a) - 1; ++la) {
        for (int lb = 1; lb <= lat.period(b) - 1; ++lb) {
          const auto spec = ShellSpec::pair_shell(la, lb, a, b);
          const double lhs = fourier_shell_sum(V, spec);
          const double rhs = fourier_shell_sum(Y, spec);
          collector.add(std::abs(lhs - rhs),
                        {"PairShell(axes " + std::to_string(a + 1) + "," + std::to_string(b + 1) +
                             "; l=" + std::to_string(la) + "," + std::to_string(lb) + ")",
                         lhs, rhs});
        }
      }
    }
  }
  return collector.finish(CheckMethod::IdentitySample, tol, lat.pairwise_coprime());
}

UnityClassification classify_unity_determinants(int q1, int q2, int q3, double tol) {
  const std::vector<int> q{q1, q2, q3};
  for (int qi : q) {
    if (qi < 1) throw PreconditionFailed("periods must be positive");
  }
  if (!pairwise_coprime(q)) {
    throw NotCoprime("classification requires pairwise coprime periods");
  }

  std::vector<std::vector<std::complex<double>>> rho(3);
  for (int j = 0; j < 3; ++j) {
    rho[j].resize(q[j]);
    for (int l = 0; l < q[j]; ++l) rho[j][l] = std::polar(1.0, kTwoPi * l / q[j]);
  }

  UnityClassification out;
  MultiIndex l(3), lp(3);
  for (l[0] = 0; l[0] < q[0]; ++l[0]) {
    for (l[1] = 0; l[1] < q[1]; ++l[1]) {
      for (l[2] = 0; l[2] < q[2]; ++l[2]) {
        for (lp[0] = 0; lp[0] < q[0]; ++lp[0]) {
          for (lp[1] = 0; lp[1] < q[1]; ++lp[1]) {
            for (lp[2] = 0; lp[2] < q[2]; ++lp[2]) {
              const std::complex<double> a1 = rho[0][l[0]], a2 = rho[1][l[1]], a3 = rho[2][l[2]];
              const std::complex<double> b1 = rho[0][lp[0]], b2 = rho[1][lp[1]], b3 = rho[2][lp[2]];
              // Expansion along the all-ones first row.
              const std::complex<double> det =
                  (a2 * b3 - a3 * b2) - (a1 * b3 - a3 * b1) + (a1 * b2 - a2 * b1);
              const bool vanishes = std::abs(det) < tol;

              const bool l_zero = l[0] == 0 && l[1] == 0 && l[2] == 0;
              const bool lp_zero = lp[0] == 0 && lp[1] == 0 && lp[2] == 0;
              const bool equal = l == lp;
              const bool zz12 = l[0] == 0 && lp[0] == 0 && l[1] == 0 && lp[1] == 0;
              const bool zz13 = l[0] == 0 && lp[0] == 0 && l[2] == 0 && lp[2] == 0;
              const bool zz23 = l[1] == 0 && lp[1] == 0 && l[2] == 0 && lp[2] == 0;
              const bool matches = l_zero || lp_zero || equal || zz12 || zz13 || zz23;

              if (vanishes) ++out.zero_count;
              if (vanishes != matches) {
                out.counterexamples.push_back({l, lp, std::abs(det), matches});
              }
            }
          }
        }
      }
    }
  }
  return out;
}

AmbarzumianReport ambarzumian_check(const Potential& V, std::complex<double> lambda0,
                                    double tol) {
  const Lattice& lat = V.lattice;
  if (lat.dimension() < 3) {
    throw DimensionTooSmall("the vanishing theorem needs at least three axes");
  }
  if (!lat.pairwise_coprime()) {
    throw NotCoprime("the vanishing theorem needs pairwise coprime periods");
  }

  const LaurentPoly pv = fermi_poly(V, lambda0);
  const LaurentPoly p0 = fermi_poly(constant_potential(lat, 0.0), lambda0);
  const PolyComparison cmp = compare_polys(pv, p0, kWitnessCap);

  AmbarzumianReport report;
  WitnessCollector collector;
  add_poly_witnesses(collector, cmp, "");
  report.poly = collector.finish(CheckMethod::PolyCompare, tol, true);
  for (double v : V.values) {
    report.max_abs_potential = std::max(report.max_abs_potential, std::abs(v));
  }
  report.normalized_prune_floor =
      std::max(pv.prune_threshold(), p0.prune_threshold()) / cmp.normalizer;
  return report;
}

CongruenceTransform CongruenceTransform::translation(MultiIndex shift) {
  CongruenceTransform t;
  t.kind = Kind::Translate;
  t.shift = std::move(shift);
  return t;
}

CongruenceTransform CongruenceTransform::reflection() {
  CongruenceTransform t;
  t.kind = Kind::Reflect;
  return t;
}

Potential apply(const CongruenceTransform& transform, const Potential& V) {
  switch (transform.kind) {
    case CongruenceTransform::Kind::Translate: return translate(V, transform.shift);
    case CongruenceTransform::Kind::Reflect: return reflect(V);
  }
  throw PreconditionFailed("unknown transform");
}

namespace {

// Smallest prefix length covering the Fourier support of V; 0 for constants.
int prefix_dependence_length(const FourierCoeffs& F, double threshold) {
  const auto W = F.lattice.domain();
  int last = 0;
  for (std::size_t li = 0; li < W.size(); ++li) {
    if (std::abs(F.coeffs[li]) <= threshold) continue;
    for (int j = F.lattice.dimension() - 1; j >= last; --j) {
      if (W[li][j] != 0) {
        last = j + 1;
        break;
      }
    }
  }
  return last;
}

IsospectralityReport separability_report(const SeparabilityResult& result, double tol,
                                         bool coprime) {
  WitnessCollector collector;
  if (result.violations.empty()) {
    collector.add(0.0, {"no mixed-frequency coefficients above tolerance", 0.0, 0.0});
  }
  for (const auto& v : result.violations) {
    collector.add(v.magnitude, {"coeff" + index_string(v.index), v.magnitude, 0.0});
  }
  return collector.finish(CheckMethod::IdentitySample, tol, coprime);
}

}  // namespace

RigidityReport rigidity_suite(const Potential& Y, const Partition& p,
                              const CongruenceTransform& transform,
                              std::complex<double> lambda0, double tol) {
  const Lattice& lat = Y.lattice;
  if (lat.dimension() < 3) {
    throw DimensionTooSmall("the rigidity statements need at least three axes");
  }
  if (!lat.pairwise_coprime()) {
    throw NotCoprime("the rigidity statements need pairwise coprime periods");
  }
  p.validate_for(lat);

  const double sep_tol = default_coeff_tol(dft(Y));
  if (!is_separable(Y, p, sep_tol).separable) {
    throw PreconditionFailed("the reference potential is not separable along the partition");
  }

  const Potential V = apply(transform, Y);
  const bool coprime = lat.pairwise_coprime();

  RigidityReport report;
  report.fermi = fermi_isospectral(V, Y, lambda0, tol);

  const double sep_tol_v = default_coeff_tol(dft(V));
  const SeparabilityResult sep_v = is_separable(V, p, sep_tol_v);
  report.separability = separability_report(sep_v, sep_tol_v, coprime);

  bool components_ok = true;
  if (sep_v.separable) {
    const auto vs = separate(V, p, sep_tol_v);
    const auto ys = separate(Y, p, sep_tol);
    for (std::size_t j = 0; j < vs.size(); ++j) {
      const double match = average(ys[j]) - average(vs[j]);
      report.components.push_back(floquet_isospectral(add_constant(vs[j], match), ys[j], tol));
      components_ok = components_ok && report.components.back().verdict;
    }
  } else {
    components_ok = false;
  }

  // Prefix dependence: when Y ignores trailing axes, V must too.
  const auto FY = dft(Y);
  const auto FV = dft(V);
  const int prefix = prefix_dependence_length(FY, sep_tol);
  WitnessCollector prefix_collector;
  if (prefix < lat.dimension()) {
    const auto W = lat.domain();
    for (std::size_t li = 0; li < W.size(); ++li) {
      bool outside = false;
      for (int j = prefix; j < lat.dimension() && !outside; ++j) outside = W[li][j] != 0;
      if (outside) {
        const double mag = std::abs(FV.coeffs[li]);
        if (mag > 0.0 || prefix_collector.entries.empty()) {
          prefix_collector.add(mag, {"coeff" + index_string(W[li]), FV.coeffs[li], 0.0});
        }
      }
    }
  } else {
    prefix_collector.add(0.0, {"no prefix restriction detected", 0.0, 0.0});
  }
  report.prefix_dependence =
      prefix_collector.finish(CheckMethod::IdentitySample, std::max(tol, sep_tol_v), coprime);

  report.verdict = report.fermi.verdict && report.separability.verdict && components_ok &&
                   report.prefix_dependence.verdict;
  return report;
}

}  // namespace fermilat
