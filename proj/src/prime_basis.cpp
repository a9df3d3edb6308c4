#include "rsieve/prime_basis.hpp"

#include <algorithm>
#include <cmath>

namespace rsieve {

namespace {

constexpr std::uint64_t kPlainSieveLimit = 100'000'000;
constexpr std::uint64_t kMaxLimit = 4'000'000'000ULL;
constexpr std::uint64_t kSegmentSpan = 1 << 22;

// Odd-only bit sieve; bit i stands for 2i+1.
std::vector<std::uint32_t> plain_sieve(std::uint64_t limit) {
  std::vector<std::uint32_t> out;
  if (limit < 2) return out;
  out.push_back(2);
  const std::uint64_t half = (limit - 1) / 2 + 1;
  std::vector<std::uint64_t> composite((half + 63) / 64, 0);
  composite[0] |= 1;  // 1 is not prime
  for (std::uint64_t i = 1; (2 * i + 1) * (2 * i + 1) <= limit; ++i) {
    if (composite[i >> 6] >> (i & 63) & 1) continue;
    const std::uint64_t p = 2 * i + 1;
    for (std::uint64_t j = (p * p) / 2; j < half; j += p) composite[j >> 6] |= 1ULL << (j & 63);
  }
  for (std::uint64_t i = 1; i < half; ++i)
    if (!(composite[i >> 6] >> (i & 63) & 1)) out.push_back(static_cast<std::uint32_t>(2 * i + 1));
  return out;
}

std::vector<std::uint32_t> segmented_sieve(std::uint64_t limit) {
  const auto base = plain_sieve(isqrt(limit));
  std::vector<std::uint32_t> out = base;
  std::vector<std::uint8_t> block(kSegmentSpan);
  for (std::uint64_t lo = isqrt(limit) + 1; lo <= limit; lo += kSegmentSpan) {
    const std::uint64_t hi = std::min(limit, lo + kSegmentSpan - 1);
    std::fill(block.begin(), block.end(), 1);
    for (std::uint32_t p : base) {
      const std::uint64_t pp = static_cast<std::uint64_t>(p) * p;
      if (pp > hi) break;
      std::uint64_t start = std::max(pp, (lo + p - 1) / p * p);
      for (std::uint64_t j = start; j <= hi; j += p) block[j - lo] = 0;
    }
    for (std::uint64_t n = lo; n <= hi; ++n)
      if (block[n - lo]) out.push_back(static_cast<std::uint32_t>(n));
  }
  return out;
}

}  // namespace

std::uint64_t isqrt(std::uint64_t n) noexcept {
  constexpr std::uint64_t kMaxRoot = 0xFFFFFFFFULL;  // floor(sqrt(2^64 - 1))
  auto r = std::min(kMaxRoot, static_cast<std::uint64_t>(std::sqrt(static_cast<double>(n))));
  while (r * r > n) --r;
  while (r < kMaxRoot && (r + 1) * (r + 1) <= n) ++r;
  return r;
}

std::vector<std::uint32_t> primes_up_to(std::uint64_t limit) {
  if (limit < 2) throw DomainError("primes_up_to: limit must be >= 2");
  if (limit > kMaxLimit) throw DomainError("primes_up_to: limit exceeds supported range");
  return limit <= kPlainSieveLimit ? plain_sieve(limit) : segmented_sieve(limit);
}

std::vector<std::uint32_t> first_primes(std::size_t k) {
  if (k == 0) throw DomainError("first_primes: k must be >= 1");
  // p_k < k (ln k + ln ln k) for k >= 6
  std::uint64_t bound = 15;
  if (k >= 6) {
    const double lk = std::log(static_cast<double>(k));
    bound = static_cast<std::uint64_t>(static_cast<double>(k) * (lk + std::log(lk))) + 1;
  }
  auto primes = primes_up_to(bound);
  primes.resize(k);
  return primes;
}

BigInt primorial(std::size_t k) { return PrimeBasis::first(k).primorial(); }

PrimeBasis::PrimeBasis(std::vector<std::uint32_t> primes) : primes_(std::move(primes)), primorial_(1) {
  for (std::uint32_t p : primes_) primorial_ *= p;
}

PrimeBasis PrimeBasis::first(std::size_t k) {
  if (k == 0) throw DomainError("PrimeBasis: k must be >= 1");
  return PrimeBasis(first_primes(k));
}

PrimeBasis PrimeBasis::for_even(std::uint64_t x) {
  if (x % 2 != 0) throw DomainError("basis_for_even: x must be even, got " + std::to_string(x));
  if (x < 6) throw DomainError("basis_for_even: x must be >= 6, got " + std::to_string(x));
  // p*p < x  <=>  p <= isqrt(x - 1)
  auto primes = primes_up_to(std::max<std::uint64_t>(2, isqrt(x - 1)));
  return PrimeBasis(std::move(primes));
}

std::uint32_t PrimeBasis::p(std::size_t level) const {
  if (level == 0 || level > primes_.size())
    throw DomainError("PrimeBasis: level " + std::to_string(level) + " out of range 1.." +
                      std::to_string(primes_.size()));
  return primes_[level - 1];
}

BigInt PrimeBasis::primorial_of(std::size_t level) const {
  if (level > primes_.size()) throw DomainError("PrimeBasis: level out of range");
  BigInt m = 1;
  for (std::size_t i = 0; i < level; ++i) m *= primes_[i];
  return m;
}

PrimeBasis PrimeBasis::truncated(std::size_t level) const {
  if (level == 0 || level > primes_.size()) throw DomainError("PrimeBasis: truncation level out of range");
  return PrimeBasis(std::vector<std::uint32_t>(primes_.begin(), primes_.begin() + static_cast<std::ptrdiff_t>(level)));
}

}  // namespace rsieve
