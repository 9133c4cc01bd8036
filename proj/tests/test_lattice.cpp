#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>

#include "fermilat/errors.hpp"
#include "fermilat/lattice.hpp"
#include "fermilat/rng.hpp"

using namespace fermilat;

TEST_CASE("domain enumeration is lexicographic with the last axis fastest") {
  const Lattice lat({2, 3});
  const std::vector<MultiIndex> expected{{0, 0}, {0, 1}, {0, 2}, {1, 0}, {1, 1}, {1, 2}};
  CHECK(lat.domain() == expected);
}

TEST_CASE("single-point domain") {
  const Lattice lat({1, 1, 1});
  CHECK(lat.cell_size() == 1);
  CHECK(lat.domain() == std::vector<MultiIndex>{{0, 0, 0}});
}

TEST_CASE("domain has cell_size entries, no duplicates, positions are a bijection") {
  const Lattice lat({2, 3, 5});
  const auto W = lat.domain();
  CHECK(W.size() == 30);
  std::set<MultiIndex> unique(W.begin(), W.end());
  CHECK(unique.size() == W.size());
  std::set<long> positions;
  for (const auto& n : W) positions.insert(lat.flat_index(n));
  CHECK(*positions.begin() == 0);
  CHECK(*positions.rbegin() == 29);
  CHECK(positions.size() == 30);
  for (long p = 0; p < lat.cell_size(); ++p) CHECK(lat.flat_index(lat.unflatten(p)) == p);
}

TEST_CASE("modular reduction") {
  const Lattice lat({2, 3});
  CHECK(lat.reduce({3, -1}) == MultiIndex{1, 2});
  CHECK(lat.reduce({0, 0}) == MultiIndex{0, 0});
  CHECK(Lattice({5}).reduce({-7}) == MultiIndex{3});
  CHECK(lat.reduce(lat.reduce({17, -23})) == lat.reduce({17, -23}));
}

TEST_CASE("reduction is invariant under adding lattice vectors") {
  const Lattice lat({2, 3, 5});
  std::uint64_t state = 99;
  for (int trial = 0; trial < 50; ++trial) {
    MultiIndex a(3), gamma(3);
    for (int j = 0; j < 3; ++j) {
      a[j] = static_cast<int>(detail::mix_seed(state) % 41) - 20;
      gamma[j] = (static_cast<int>(detail::mix_seed(state) % 7) - 3) * lat.period(j);
    }
    MultiIndex shifted(3);
    for (int j = 0; j < 3; ++j) shifted[j] = a[j] + gamma[j];
    CHECK(lat.reduce(shifted) == lat.reduce(a));
  }
}

TEST_CASE("pairwise coprimality") {
  CHECK(Lattice({2, 3, 5}).pairwise_coprime());
  CHECK_FALSE(Lattice({2, 4, 5}).pairwise_coprime());
  CHECK(Lattice({1, 1}).pairwise_coprime());
  // gcd of all is 1 but the pair (2,4) is not coprime
  CHECK_FALSE(Lattice({2, 4, 3}).pairwise_coprime());
}

TEST_CASE("invalid lattices are rejected") {
  CHECK_THROWS_AS(Lattice({}), PreconditionFailed);
  CHECK_THROWS_AS(Lattice({2, 0}), PreconditionFailed);
  CHECK_THROWS_AS(Lattice({-3}), PreconditionFailed);
}
