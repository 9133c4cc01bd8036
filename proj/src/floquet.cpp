#include "fermilat/floquet.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "fermilat/errors.hpp"

namespace fermilat {

namespace detail {

void require_nonzero(const std::vector<std::complex<double>>& z) {
  for (std::size_t j = 0; j < z.size(); ++j) {
    if (z[j] == std::complex<double>(0.0, 0.0)) {
      throw ZeroComponent("evaluation point component " + std::to_string(j + 1) + " is zero");
    }
  }
}

DirectTemplate make_direct_template(const Potential& V) {
  const Lattice& lat = V.lattice;
  const long Q = lat.cell_size();
  const int d = lat.dimension();
  const auto W = lat.domain();

  DirectTemplate tmpl;
  tmpl.base = Eigen::MatrixXcd::Zero(Q, Q);
  for (long i = 0; i < Q; ++i) tmpl.base(i, i) = V.values[i];

  for (long i = 0; i < Q; ++i) {
    const MultiIndex& n = W[i];
    for (int j = 0; j < d; ++j) {
      MultiIndex up = n;
      if (n[j] < lat.period(j) - 1) {
        ++up[j];
        tmpl.base(i, lat.flat_index(up)) += 1.0;
      } else {
        up[j] = 0;
        tmpl.wraps.push_back({static_cast<int>(i), static_cast<int>(lat.flat_index(up)), j, +1});
      }
      MultiIndex down = n;
      if (n[j] > 0) {
        --down[j];
        tmpl.base(i, lat.flat_index(down)) += 1.0;
      } else {
        down[j] = lat.period(j) - 1;
        tmpl.wraps.push_back({static_cast<int>(i), static_cast<int>(lat.flat_index(down)), j, -1});
      }
    }
  }
  return tmpl;
}

void apply_wraps(const DirectTemplate& tmpl, const std::vector<std::complex<double>>& z,
                 Eigen::MatrixXcd& out) {
  out = tmpl.base;
  for (const WrapEntry& w : tmpl.wraps) {
    out(w.row, w.col) += w.power > 0 ? z[w.axis] : 1.0 / z[w.axis];
  }
}

}  // namespace detail

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

std::vector<std::complex<double>> torus_point(const std::vector<double>& k) {
  std::vector<std::complex<double>> z(k.size());
  for (std::size_t j = 0; j < k.size(); ++j) z[j] = std::polar(1.0, kTwoPi * k[j]);
  return z;
}

}  // namespace

FloquetMatrix build_direct(const Potential& V, const std::vector<std::complex<double>>& z) {
  if (static_cast<int>(z.size()) != V.lattice.dimension()) {
    throw DimensionMismatch("evaluation point dimension does not match lattice");
  }
  detail::require_nonzero(z);
  const auto tmpl = detail::make_direct_template(V);
  Eigen::MatrixXcd entries;
  detail::apply_wraps(tmpl, z, entries);
  return FloquetMatrix{V.lattice, Basis::Direct, z, std::move(entries)};
}

FloquetMatrix build_fourier(const Potential& V, const std::vector<std::complex<double>>& z) {
  const Lattice& lat = V.lattice;
  if (static_cast<int>(z.size()) != lat.dimension()) {
    throw DimensionMismatch("evaluation point dimension does not match lattice");
  }
  detail::require_nonzero(z);

  const long Q = lat.cell_size();
  const int d = lat.dimension();
  const auto W = lat.domain();
  const auto F = dft(V);

  Eigen::MatrixXcd entries(Q, Q);
  for (long i = 0; i < Q; ++i) {
    for (long i2 = 0; i2 < Q; ++i2) {
      MultiIndex diff(d);
      for (int j = 0; j < d; ++j) diff[j] = W[i][j] - W[i2][j];
      entries(i, i2) = F.coeffs[lat.flat_index(lat.reduce(diff))];
    }
    std::complex<double> diag = 0.0;
    for (int j = 0; j < d; ++j) {
      const std::complex<double> rho_z = std::polar(1.0, kTwoPi * W[i][j] / lat.period(j)) * z[j];
      diag += rho_z + 1.0 / rho_z;
    }
    entries(i, i) += diag;
  }
  return FloquetMatrix{lat, Basis::Fourier, z, std::move(entries)};
}

SpectrumSample spectrum_at(const Potential& V, const std::vector<double>& k) {
  const FloquetMatrix M = build_direct(V, torus_point(k));
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(M.entries, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) {
    throw EigensolverFailure("eigensolver did not converge at the requested phase");
  }
  const auto& ev = solver.eigenvalues();
  return SpectrumSample{k, std::vector<double>(ev.data(), ev.data() + ev.size())};
}

std::vector<SpectrumSample> band_structure(const Potential& V,
                                           const std::vector<std::vector<double>>& kpath) {
  std::vector<SpectrumSample> out;
  out.reserve(kpath.size());
  for (std::size_t i = 0; i < kpath.size(); ++i) {
    try {
      out.push_back(spectrum_at(V, kpath[i]));
    } catch (const EigensolverFailure& e) {
      throw EigensolverFailure(std::string(e.what()) + " (path point " + std::to_string(i) + ")");
    }
  }
  return out;
}

std::complex<double> char_poly_value(const Potential& V,
                                     const std::vector<std::complex<double>>& z,
                                     std::complex<double> lambda) {
  FloquetMatrix M = build_direct(V, z);
  M.entries.diagonal().array() -= lambda;
  return Eigen::PartialPivLU<Eigen::MatrixXcd>(M.entries).determinant();
}

}  // namespace fermilat
