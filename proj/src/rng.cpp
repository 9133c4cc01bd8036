#include "fermilat/rng.hpp"

#include <numbers>

namespace fermilat::detail {

std::uint64_t mix_seed(std::uint64_t& state) {
  state += 0x9E3779B97F4A7C15ull;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

double unit_interval(std::uint64_t bits) { return (bits >> 11) * 0x1.0p-53; }

std::vector<std::complex<double>> random_torus_point(int dims, std::uint64_t& state) {
  std::vector<std::complex<double>> z(dims);
  for (int j = 0; j < dims; ++j) {
    z[j] = std::polar(1.0, 2.0 * std::numbers::pi * unit_interval(mix_seed(state)));
  }
  return z;
}

std::vector<double> random_phases(int dims, std::uint64_t& state) {
  std::vector<double> k(dims);
  for (int j = 0; j < dims; ++j) k[j] = unit_interval(mix_seed(state));
  return k;
}

}  // namespace fermilat::detail
