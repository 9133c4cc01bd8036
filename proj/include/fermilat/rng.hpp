#pragma once

#include <complex>
#include <cstdint>
#include <vector>

namespace fermilat::detail {

/// splitmix64 step; the canonical way substreams are derived from a seed.
std::uint64_t mix_seed(std::uint64_t& state);

/// Maps 64 random bits to [0, 1).
double unit_interval(std::uint64_t bits);

/// d unit-modulus components with seeded uniform phases.
std::vector<std::complex<double>> random_torus_point(int dims, std::uint64_t& state);

/// d real phases in [0, 1).
std::vector<double> random_phases(int dims, std::uint64_t& state);

}  // namespace fermilat::detail
