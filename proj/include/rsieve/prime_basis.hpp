#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <gmpxx.h>

namespace rsieve {

using BigInt = mpz_class;
using Rational = mpq_class;

/// Raised for arguments outside an operation's domain (odd x, limit < 2, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Ascending primes in [2, limit]. Bit-array sieve up to 1e8, segmented above.
std::vector<std::uint32_t> primes_up_to(std::uint64_t limit);

/// The first `k` primes.
std::vector<std::uint32_t> first_primes(std::size_t k);

/// Exact product of the first `k` primes.
BigInt primorial(std::size_t k);

/// Ordered modulus system p_1 < ... < p_k (the first k primes) together with
/// the exact primorial m_k. Immutable once built.
class PrimeBasis {
 public:
  /// Basis of the first `k` primes; k >= 1.
  static PrimeBasis first(std::size_t k);

  /// Primes p with p*p < x for an even x >= 6.
  static PrimeBasis for_even(std::uint64_t x);

  std::size_t k() const noexcept { return primes_.size(); }
  std::span<const std::uint32_t> primes() const noexcept { return primes_; }
  /// 1-based accessor matching level numbering: p(1) == 2.
  std::uint32_t p(std::size_t level) const;
  std::uint32_t largest() const noexcept { return primes_.back(); }
  const BigInt& primorial() const noexcept { return primorial_; }
  /// Primorial of the first `level` primes (level <= k).
  BigInt primorial_of(std::size_t level) const;

  /// Basis restricted to the first `level` primes.
  PrimeBasis truncated(std::size_t level) const;

  bool operator==(const PrimeBasis& other) const { return primes_ == other.primes_; }

 private:
  explicit PrimeBasis(std::vector<std::uint32_t> primes);

  std::vector<std::uint32_t> primes_;
  BigInt primorial_;
};

/// Largest r with r*r <= n.
std::uint64_t isqrt(std::uint64_t n) noexcept;

}  // namespace rsieve
