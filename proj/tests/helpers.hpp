#pragma once

#include <algorithm>
#include <random>

#include "oracles.hpp"
#include "rsieve/selection.hpp"

namespace testing_support {

// Copies a scheme's selections into the oracle's plain representation.
inline oracle::Residues residues_of(const rsieve::SelectionScheme& s) {
  oracle::Residues r;
  r.primes.assign(s.basis().primes().begin(), s.basis().primes().end());
  for (const auto& level : s.levels()) r.selected.emplace_back(level.residues().begin(), level.residues().end());
  return r;
}

inline rsieve::SelectionScheme table_scheme() {
  return rsieve::SelectionScheme::generic(rsieve::PrimeBasis::first(4), {{0}, {0, 2}, {0, 3}, {3, 5}});
}

// Uniform Generic scheme drawn without the library's sampler.
inline rsieve::SelectionScheme random_scheme(std::size_t k, std::mt19937_64& rng) {
  const auto primes = oracle::first_primes(k);
  std::vector<std::vector<std::uint32_t>> levels;
  for (std::size_t h = 0; h < k; ++h) {
    std::uniform_int_distribution<std::uint32_t> pick(0, primes[h] - 1);
    if (h == 0) {
      levels.push_back({pick(rng)});
      continue;
    }
    std::uint32_t a = pick(rng), b = pick(rng);
    while (b == a) b = pick(rng);
    levels.push_back({std::min(a, b), std::max(a, b)});
  }
  return rsieve::SelectionScheme::generic(rsieve::PrimeBasis::first(k), levels);
}

}  // namespace testing_support
