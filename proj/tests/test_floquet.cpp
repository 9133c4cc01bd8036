#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>

#include "fermilat/errors.hpp"
#include "fermilat/floquet.hpp"
#include "fermilat/rng.hpp"

using namespace fermilat;
using Complex = std::complex<double>;

namespace {

Complex det_minus_lambda(const FloquetMatrix& M, Complex lambda) {
  Eigen::MatrixXcd A = M.entries;
  A.diagonal().array() -= lambda;
  return Eigen::PartialPivLU<Eigen::MatrixXcd>(A).determinant();
}

double rel_dev(Complex a, Complex b) { return std::abs(a - b) / (1.0 + std::abs(b)); }

}  // namespace

TEST_CASE("three-site chain determinant matches the hand formula") {
  // det(M - lambda I) = -lambda^3 + 3 lambda + z + 1/z
  const Potential V(Lattice({3}), {0, 0, 0});
  std::uint64_t state = 5;
  for (int trial = 0; trial < 10; ++trial) {
    const Complex z(1.0 + detail::unit_interval(detail::mix_seed(state)),
                    detail::unit_interval(detail::mix_seed(state)) - 0.5);
    const Complex lambda(2.0 * detail::unit_interval(detail::mix_seed(state)) - 1.0,
                         detail::unit_interval(detail::mix_seed(state)) - 0.5);
    const Complex expected = -lambda * lambda * lambda + 3.0 * lambda + z + 1.0 / z;
    CHECK(rel_dev(char_poly_value(V, {z}, lambda), expected) < 1e-13);
  }
  CHECK(std::abs(char_poly_value(V, {Complex(1.0)}, Complex(0.0)) - 2.0) < 1e-13);
}

TEST_CASE("one-site lattice: every neighbor wraps onto the diagonal") {
  const Potential V(Lattice({1, 1, 1}), {0.75});
  const std::vector<Complex> z{{2.0, 0.0}, {0.0, 1.0}, {0.5, -0.5}};
  const auto M = build_direct(V, z);
  REQUIRE(M.entries.rows() == 1);
  Complex expected = 0.75;
  for (const auto& zj : z) expected += zj + 1.0 / zj;
  CHECK(std::abs(M.entries(0, 0) - expected) < 1e-14);
  CHECK(std::abs(char_poly_value(V, {Complex(1), Complex(1), Complex(1)}, Complex(6.75))) < 1e-13);
}

TEST_CASE("a constant shifts the matrix by c I exactly") {
  const Lattice lat({2, 3});
  const std::vector<Complex> z{{0.3, 0.4}, {-1.0, 0.25}};
  const auto M0 = build_direct(constant_potential(lat, 0.0), z);
  const auto Mc = build_direct(constant_potential(lat, 2.5), z);
  const Eigen::MatrixXcd diff = Mc.entries - M0.entries;
  CHECK((diff - 2.5 * Eigen::MatrixXcd::Identity(6, 6)).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("two-site chain in the coefficient basis matches the hand matrix") {
  // [[z+1/z+mean, delta], [delta, -z-1/z+mean]] with delta = (v0-v1)/2
  const double v0 = 1.3, v1 = -0.7;
  const Potential V(Lattice({2}), {v0, v1});
  const double mean = (v0 + v1) / 2, delta = (v0 - v1) / 2;
  std::uint64_t state = 8;
  for (int trial = 0; trial < 5; ++trial) {
    const Complex z(1.0 + detail::unit_interval(detail::mix_seed(state)),
                    detail::unit_interval(detail::mix_seed(state)));
    const auto M = build_fourier(V, {z});
    CHECK(std::abs(M.entries(0, 0) - (z + 1.0 / z + mean)) < 1e-13);
    CHECK(std::abs(M.entries(1, 1) - (-z - 1.0 / z + mean)) < 1e-13);
    CHECK(std::abs(M.entries(0, 1) - delta) < 1e-13);
    CHECK(std::abs(M.entries(1, 0) - delta) < 1e-13);

    const Complex lambda(0.4, -0.2);
    const Complex s = z + 1.0 / z;
    const Complex expected = -s * s + (mean - lambda) * (mean - lambda) - delta * delta;
    CHECK(rel_dev(det_minus_lambda(M, lambda), expected) < 1e-13);
  }
}

TEST_CASE("zero potential is diagonal in the coefficient basis") {
  const Lattice lat({2, 3});
  const std::vector<Complex> z{{0.8, 0.1}, {1.1, -0.3}};
  const auto M = build_fourier(constant_potential(lat, 0.0), z);
  for (long i = 0; i < 6; ++i) {
    for (long j = 0; j < 6; ++j) {
      if (i != j) CHECK(std::abs(M.entries(i, j)) < 1e-15);
    }
  }
}

TEST_CASE("cross-basis determinant identity at seeded points") {
  for (const auto& periods : {std::vector<int>{2, 3}, std::vector<int>{2, 3, 5}}) {
    const Lattice lat(periods);
    std::uint64_t state = 100 + lat.dimension();
    for (int trial = 0; trial < 20; ++trial) {
      const Potential V = random_potential(lat, detail::mix_seed(state));
      const auto z = detail::random_torus_point(lat.dimension(), state);
      const Complex lambda(4.0 * detail::unit_interval(detail::mix_seed(state)) - 2.0,
                           2.0 * detail::unit_interval(detail::mix_seed(state)) - 1.0);
      std::vector<Complex> zq(z.size());
      for (std::size_t j = 0; j < z.size(); ++j) zq[j] = std::pow(z[j], lat.period(j));
      const Complex lhs = det_minus_lambda(build_fourier(V, z), lambda);
      const Complex rhs = char_poly_value(V, zq, lambda);
      CHECK(rel_dev(lhs, rhs) < 1e-8);
    }
  }
}

TEST_CASE("spectrum of the one-site lattice is the cosine sum") {
  const Potential V(Lattice({1, 1, 1}), {0.4});
  const std::vector<double> k{0.12, 0.4, 0.77};
  const auto s = spectrum_at(V, k);
  REQUIRE(s.eigenvalues.size() == 1);
  double expected = 0.4;
  for (double kj : k) expected += 2.0 * std::cos(2.0 * std::numbers::pi * kj);
  CHECK(s.eigenvalues[0] == doctest::Approx(expected).epsilon(1e-13));
}

TEST_CASE("free spectrum on (2,3) at k = 0") {
  const auto s = spectrum_at(constant_potential(Lattice({2, 3}), 0.0), {0.0, 0.0});
  const std::vector<double> expected{-3, -3, 0, 1, 1, 4};
  REQUIRE(s.eigenvalues.size() == expected.size());
  for (std::size_t i = 0; i < expected.size(); ++i) {
    CHECK(s.eigenvalues[i] == doctest::Approx(expected[i]).epsilon(1e-12));
  }
  CHECK(std::is_sorted(s.eigenvalues.begin(), s.eigenvalues.end()));
}

TEST_CASE("a constant shifts every eigenvalue by exactly that constant") {
  const Lattice lat({2, 3, 5});
  const Potential V = random_potential(lat, 3);
  const Potential Vc = add_constant(V, 1.75);
  const std::vector<double> k{0.21, 0.13, 0.77};
  const auto a = spectrum_at(V, k);
  const auto b = spectrum_at(Vc, k);
  for (std::size_t i = 0; i < a.eigenvalues.size(); ++i) {
    CHECK(b.eigenvalues[i] == doctest::Approx(a.eigenvalues[i] + 1.75).epsilon(1e-12));
  }
}

TEST_CASE("matrices on the unit torus are Hermitian") {
  const Lattice lat({2, 3, 5});
  std::uint64_t state = 7;
  for (int trial = 0; trial < 200; ++trial) {
    const Potential V = random_potential(lat, detail::mix_seed(state));
    const auto z = detail::random_torus_point(3, state);
    const auto M = build_direct(V, z);
    const double scale = M.entries.cwiseAbs().maxCoeff();
    CHECK((M.entries - M.entries.adjoint()).cwiseAbs().maxCoeff() <= 1e-12 * scale);
  }
  // coefficient basis as well
  const Potential V = random_potential(lat, 911);
  std::uint64_t st2 = 31;
  const auto z = detail::random_torus_point(3, st2);
  const auto M = build_fourier(V, z);
  CHECK((M.entries - M.entries.adjoint()).cwiseAbs().maxCoeff() <=
        1e-12 * M.entries.cwiseAbs().maxCoeff());
}

TEST_CASE("eigenvalues are 1-periodic in each phase component") {
  const Potential V = random_potential(Lattice({2, 3, 5}), 63);
  const std::vector<double> k{0.31, 0.64, 0.05};
  const auto base = spectrum_at(V, k);
  for (int j = 0; j < 3; ++j) {
    auto shifted = k;
    shifted[j] += 1.0;
    const auto s = spectrum_at(V, shifted);
    for (std::size_t i = 0; i < base.eigenvalues.size(); ++i) {
      CHECK(std::abs(s.eigenvalues[i] - base.eigenvalues[i]) < 1e-12);
    }
  }
}

TEST_CASE("spectra of block sums are sum-sets of block spectra") {
  const Lattice lat({2, 3, 5});
  std::uint64_t state = 404;
  for (int trial = 0; trial < 5; ++trial) {
    const Potential a = random_potential(Lattice({2, 3}), detail::mix_seed(state));
    const Potential b = random_potential(Lattice({5}), detail::mix_seed(state));
    const Potential V = combine_separable({a, b}, lat);
    const auto k = detail::random_phases(3, state);

    const auto alpha = spectrum_at(a, {k[0], k[1]});
    const auto beta = spectrum_at(b, {k[2]});
    std::vector<double> sums;
    for (double x : alpha.eigenvalues) {
      for (double y : beta.eigenvalues) sums.push_back(x + y);
    }
    std::sort(sums.begin(), sums.end());

    const auto full = spectrum_at(V, k);
    REQUIRE(full.eigenvalues.size() == sums.size());
    for (std::size_t i = 0; i < sums.size(); ++i) {
      CHECK(std::abs(full.eigenvalues[i] - sums[i]) < 1e-9);
    }
  }
}

TEST_CASE("band structure maps the path in order") {
  const Potential V = constant_potential(Lattice({2, 3}), 0.0);
  CHECK(band_structure(V, {}).empty());

  const std::vector<double> k{0.1, 0.2};
  const auto single = band_structure(V, {k});
  REQUIRE(single.size() == 1);
  CHECK(single[0].eigenvalues == spectrum_at(V, k).eigenvalues);

  std::vector<std::vector<double>> path;
  for (int i = 0; i < 5; ++i) path.push_back({0.1 * i, 0.05 * i});
  const auto samples = band_structure(V, path);
  REQUIRE(samples.size() == 5);
  for (const auto& s : samples) CHECK(s.eigenvalues.size() == 6);
}

TEST_CASE("zero evaluation point components are rejected") {
  const Potential V = constant_potential(Lattice({2, 3}), 0.0);
  CHECK_THROWS_AS(build_direct(V, {Complex(0.0), Complex(1.0)}), ZeroComponent);
  CHECK_THROWS_AS(build_fourier(V, {Complex(1.0), Complex(0.0)}), ZeroComponent);
  CHECK_THROWS_AS(char_poly_value(V, {Complex(1.0), Complex(0.0)}, Complex(0.0)), ZeroComponent);
}
