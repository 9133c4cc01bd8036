#include "fermilat/potential.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <random>

#include "fermilat/errors.hpp"

namespace fermilat {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

std::complex<double> unit_phase(double turns) {
  return std::polar(1.0, kTwoPi * turns);
}

// Fraction of a full turn in the transform kernel for index pair (l, n).
double phase_turns(const Lattice& lattice, const MultiIndex& l, const MultiIndex& n) {
  double t = 0.0;
  for (int j = 0; j < lattice.dimension(); ++j) {
    t += static_cast<double>(l[j]) * static_cast<double>(n[j]) / lattice.period(j);
  }
  return t;
}

// Number of partition blocks with a non-zero component in l.
int nonzero_block_count(const Partition& p, const MultiIndex& l) {
  int blocks = 0;
  for (int b = 0; b < p.block_count(); ++b) {
    for (int j = 0; j < p.parts()[b]; ++j) {
      if (l[p.offset(b) + j] != 0) {
        ++blocks;
        break;
      }
    }
  }
  return blocks;
}

}  // namespace

Potential::Potential(Lattice lat, std::vector<double> vals)
    : lattice(std::move(lat)), values(std::move(vals)) {
  if (static_cast<long>(values.size()) != lattice.cell_size()) {
    throw ShapeMismatch("potential needs one value per cell point");
  }
  for (double v : values) {
    if (!std::isfinite(v)) throw PreconditionFailed("potential values must be finite");
  }
}

FourierCoeffs::FourierCoeffs(Lattice lat, std::vector<std::complex<double>> c)
    : lattice(std::move(lat)), coeffs(std::move(c)) {
  if (static_cast<long>(coeffs.size()) != lattice.cell_size()) {
    throw ShapeMismatch("coefficient vector needs one entry per cell point");
  }
}

Partition::Partition(std::vector<int> parts) : parts_(std::move(parts)) {
  if (parts_.size() < 2) {
    throw PreconditionFailed("partition needs at least two blocks");
  }
  offsets_.reserve(parts_.size());
  int off = 0;
  for (int p : parts_) {
    if (p < 1) throw PreconditionFailed("partition blocks must be non-empty");
    offsets_.push_back(off);
    off += p;
  }
}

int Partition::total_dimension() const noexcept {
  return std::accumulate(parts_.begin(), parts_.end(), 0);
}

void Partition::validate_for(const Lattice& lattice) const {
  if (total_dimension() != lattice.dimension()) {
    throw DimensionMismatch("partition blocks do not sum to lattice dimension");
  }
}

Lattice block_lattice(const Lattice& lattice, const Partition& p, int block) {
  p.validate_for(lattice);
  const int off = p.offset(block);
  const int len = p.parts().at(block);
  std::vector<int> q(lattice.periods().begin() + off,
                     lattice.periods().begin() + off + len);
  return Lattice(std::move(q));
}

FourierCoeffs dft(const Potential& V) {
  const auto W = V.lattice.domain();
  const long Q = V.lattice.cell_size();
  std::vector<std::complex<double>> coeffs(W.size());
  for (std::size_t li = 0; li < W.size(); ++li) {
    std::complex<double> acc = 0.0;
    for (std::size_t ni = 0; ni < W.size(); ++ni) {
      acc += V.values[ni] * unit_phase(-phase_turns(V.lattice, W[li], W[ni]));
    }
    coeffs[li] = acc / static_cast<double>(Q);
  }
  return FourierCoeffs(V.lattice, std::move(coeffs));
}

Potential idft(const FourierCoeffs& F, double hermitian_tol) {
  const auto W = F.lattice.domain();
  std::vector<double> values(W.size());
  double residue = 0.0;
  for (std::size_t ni = 0; ni < W.size(); ++ni) {
    std::complex<double> acc = 0.0;
    for (std::size_t li = 0; li < W.size(); ++li) {
      acc += F.coeffs[li] * unit_phase(phase_turns(F.lattice, W[li], W[ni]));
    }
    residue = std::max(residue, std::abs(acc.imag()));
    values[ni] = acc.real();
  }
  if (residue > hermitian_tol) {
    throw HermitianSymmetryViolation(
        "imaginary residue " + std::to_string(residue) +
        " exceeds tolerance; coefficients are not those of a real potential");
  }
  return Potential(F.lattice, std::move(values));
}

double average(const Potential& V) {
  double sum = std::accumulate(V.values.begin(), V.values.end(), 0.0);
  return sum / static_cast<double>(V.lattice.cell_size());
}

double default_coeff_tol(const FourierCoeffs& F) {
  double m = 0.0;
  for (const auto& c : F.coeffs) m = std::max(m, std::abs(c));
  return 1e-9 * (1.0 + m);
}

SeparabilityResult is_separable(const Potential& V, const Partition& p, double tol) {
  p.validate_for(V.lattice);
  const auto F = dft(V);
  const auto W = V.lattice.domain();
  SeparabilityResult result;
  for (std::size_t li = 0; li < W.size(); ++li) {
    if (nonzero_block_count(p, W[li]) < 2) continue;
    const double mag = std::abs(F.coeffs[li]);
    if (mag > tol) result.violations.push_back({W[li], mag});
  }
  std::sort(result.violations.begin(), result.violations.end(),
            [](const auto& a, const auto& b) { return a.magnitude > b.magnitude; });
  result.separable = result.violations.empty();
  return result;
}

SeparabilityResult is_separable(const Potential& V, const Partition& p) {
  return is_separable(V, p, default_coeff_tol(dft(V)));
}

std::vector<Potential> separate(const Potential& V, const Partition& p, double tol) {
  const auto check = is_separable(V, p, tol);
  if (!check.separable) {
    const auto& worst = check.violations.front();
    std::string where;
    for (int c : worst.index) where += std::to_string(c) + ",";
    throw NotSeparable("mixed-frequency coefficient at (" + where +
                       ") has magnitude " + std::to_string(worst.magnitude));
  }

  const auto F = dft(V);
  const double mean_share = average(V) / p.block_count();
  const int d = V.lattice.dimension();

  std::vector<Potential> components;
  components.reserve(p.block_count());
  for (int b = 0; b < p.block_count(); ++b) {
    const Lattice sub = block_lattice(V.lattice, p, b);
    const auto subW = sub.domain();
    std::vector<std::complex<double>> coeffs(subW.size());
    for (std::size_t li = 0; li < subW.size(); ++li) {
      bool zero = std::all_of(subW[li].begin(), subW[li].end(),
                              [](int c) { return c == 0; });
      if (zero) {
        coeffs[li] = mean_share;
      } else {
        MultiIndex embedded(d, 0);
        std::copy(subW[li].begin(), subW[li].end(), embedded.begin() + p.offset(b));
        coeffs[li] = F.coeffs[V.lattice.flat_index(embedded)];
      }
    }
    double scale = 0.0;
    for (const auto& c : coeffs) scale = std::max(scale, std::abs(c));
    components.push_back(idft(FourierCoeffs(sub, std::move(coeffs)),
                              kDefaultHermitianTol * (1.0 + scale)));
  }
  return components;
}

std::vector<Potential> separate(const Potential& V, const Partition& p) {
  return separate(V, p, default_coeff_tol(dft(V)));
}

Potential combine_separable(const std::vector<Potential>& components, const Lattice& lattice) {
  std::vector<int> concat;
  for (const auto& c : components) {
    concat.insert(concat.end(), c.lattice.periods().begin(), c.lattice.periods().end());
  }
  if (concat != lattice.periods()) {
    throw ShapeMismatch("component periods do not concatenate to the target lattice");
  }

  const auto W = lattice.domain();
  std::vector<double> values(W.size(), 0.0);
  for (std::size_t ni = 0; ni < W.size(); ++ni) {
    int off = 0;
    for (const auto& c : components) {
      const int len = c.lattice.dimension();
      MultiIndex sub(W[ni].begin() + off, W[ni].begin() + off + len);
      values[ni] += c.values[c.lattice.flat_index(sub)];
      off += len;
    }
  }
  return Potential(lattice, std::move(values));
}

Potential translate(const Potential& V, const MultiIndex& shift) {
  if (static_cast<int>(shift.size()) != V.lattice.dimension()) {
    throw DimensionMismatch("shift dimension does not match lattice");
  }
  const auto W = V.lattice.domain();
  std::vector<double> values(W.size());
  for (std::size_t ni = 0; ni < W.size(); ++ni) {
    MultiIndex moved = W[ni];
    for (std::size_t j = 0; j < moved.size(); ++j) moved[j] += shift[j];
    values[ni] = V.values[V.lattice.flat_index(V.lattice.reduce(moved))];
  }
  return Potential(V.lattice, std::move(values));
}

Potential reflect(const Potential& V) {
  const auto W = V.lattice.domain();
  std::vector<double> values(W.size());
  for (std::size_t ni = 0; ni < W.size(); ++ni) {
    MultiIndex neg = W[ni];
    for (int& c : neg) c = -c;
    values[ni] = V.values[V.lattice.flat_index(V.lattice.reduce(neg))];
  }
  return Potential(V.lattice, std::move(values));
}

Potential add_constant(const Potential& V, double c) {
  std::vector<double> values = V.values;
  for (double& v : values) v += c;
  return Potential(V.lattice, std::move(values));
}

Potential random_potential(const Lattice& lattice, std::uint64_t seed, double amplitude) {
  std::mt19937_64 eng(seed);
  std::uniform_real_distribution<double> dist(-amplitude, amplitude);
  std::vector<double> values(static_cast<std::size_t>(lattice.cell_size()));
  for (double& v : values) v = dist(eng);
  return Potential(lattice, std::move(values));
}

Potential constant_potential(const Lattice& lattice, double value) {
  return Potential(lattice,
                   std::vector<double>(static_cast<std::size_t>(lattice.cell_size()), value));
}

}  // namespace fermilat
