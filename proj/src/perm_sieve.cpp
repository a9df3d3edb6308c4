#include "rsieve/perm_sieve.hpp"

#include <algorithm>
#include <bit>
#include <future>
#include <string>

namespace rsieve {

Interval::Interval(std::uint64_t lo, std::uint64_t hi) : lo_(lo), hi_(hi) {
  if (lo < 1) throw DomainError("interval: lo must be >= 1");
  if (hi < lo) throw DomainError("interval: hi must be >= lo, got [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
}

bool is_permitted(const SelectionScheme& scheme, std::uint64_t n) {
  const auto primes = scheme.basis().primes();
  const auto levels = scheme.levels();
  for (std::size_t i = 0; i < levels.size(); ++i)
    if (levels[i].contains(static_cast<std::uint32_t>(n % primes[i]))) return false;
  return true;
}

BlockSieve::BlockSieve(const SelectionScheme& scheme) {
  const auto primes = scheme.basis().primes();
  const auto levels = scheme.levels();
  for (std::size_t i = 0; i < levels.size(); ++i) {
    const std::uint32_t p = primes[i];
    if (p < 64) {
      PatternLevel pat{p, std::vector<std::uint64_t>(p, 0)};
      for (std::uint32_t o = 0; o < p; ++o)
        for (std::uint32_t j = 0; j < 64; ++j)
          if (levels[i].contains((o + j) % p)) pat.masks[o] |= 1ULL << j;
      patterns_.push_back(std::move(pat));
    } else {
      strides_.push_back({p, levels[i]});
    }
  }
}

void BlockSieve::fill(std::uint64_t base, std::uint64_t len, std::span<std::uint64_t> words) const {
  const std::size_t nwords = static_cast<std::size_t>((len + 63) / 64);
  std::fill_n(words.begin(), nwords, 0);
  for (const auto& pat : patterns_) {
    const std::uint32_t step = 64 % pat.p;
    std::uint32_t o = static_cast<std::uint32_t>(base % pat.p);
    const std::uint64_t* masks = pat.masks.data();
    for (std::size_t w = 0; w < nwords; ++w) {
      words[w] |= masks[o];
      o += step;
      if (o >= pat.p) o -= pat.p;
    }
  }
  for (const auto& lvl : strides_) {
    const std::uint64_t phase = base % lvl.p;
    for (std::uint32_t r : lvl.sel.residues()) {
      for (std::uint64_t j = (r + lvl.p - phase) % lvl.p; j < len; j += lvl.p) words[j >> 6] |= 1ULL << (j & 63);
    }
  }
  for (std::size_t w = 0; w < nwords; ++w) words[w] = ~words[w];
  if (len % 64 != 0) words[nwords - 1] &= (1ULL << (len % 64)) - 1;
}

void for_each_block(const SelectionScheme& scheme, const Interval& interval, const SieveOptions& opts,
                    const std::function<void(std::uint64_t, std::uint64_t, std::span<const std::uint64_t>)>& fn) {
  const BlockSieve sieve(scheme);
  const std::uint64_t block = std::max<std::uint64_t>(64, opts.segment_bits);
  std::vector<std::uint64_t> words(static_cast<std::size_t>((block + 63) / 64));
  for (std::uint64_t base = interval.lo();; base += block) {
    const std::uint64_t len = std::min(block, interval.hi() - base + 1);
    sieve.fill(base, len, words);
    fn(base, len, std::span<const std::uint64_t>(words.data(), static_cast<std::size_t>((len + 63) / 64)));
    if (interval.hi() - base + 1 <= block) break;
  }
}

namespace {

std::uint64_t count_sequential(const SelectionScheme& scheme, const Interval& interval, const SieveOptions& opts) {
  std::uint64_t total = 0;
  for_each_block(scheme, interval, opts, [&](std::uint64_t, std::uint64_t, std::span<const std::uint64_t> words) {
    for (std::uint64_t w : words) total += static_cast<std::uint64_t>(std::popcount(w));
  });
  return total;
}

template <class Visit>
void walk_bits(std::uint64_t base, std::span<const std::uint64_t> words, Visit&& visit) {
  for (std::size_t w = 0; w < words.size(); ++w) {
    std::uint64_t bits = words[w];
    while (bits) {
      visit(base + 64 * w + static_cast<std::uint64_t>(std::countr_zero(bits)));
      bits &= bits - 1;
    }
  }
}

}  // namespace

std::uint64_t count_permitted(const SelectionScheme& scheme, const Interval& interval, const SieveOptions& opts) {
  const unsigned threads = std::max(1u, opts.threads);
  const std::uint64_t block = std::max<std::uint64_t>(64, opts.segment_bits);
  if (threads == 1 || interval.size() <= block) return count_sequential(scheme, interval, opts);

  // Disjoint block-aligned chunks summed in chunk order.
  const std::uint64_t nblocks = (interval.size() + block - 1) / block;
  const std::uint64_t per = (nblocks + threads - 1) / threads;
  std::vector<std::future<std::uint64_t>> parts;
  for (std::uint64_t b = 0; b < nblocks; b += per) {
    const std::uint64_t lo = interval.lo() + b * block;
    const std::uint64_t hi = std::min(interval.hi(), lo + per * block - 1);
    parts.push_back(std::async(std::launch::async, [&, lo, hi] { return count_sequential(scheme, Interval(lo, hi), opts); }));
  }
  std::uint64_t total = 0;
  for (auto& f : parts) total += f.get();
  return total;
}

std::vector<std::uint64_t> enumerate_permitted(const SelectionScheme& scheme, const Interval& interval,
                                               const SieveOptions& opts) {
  const std::uint64_t count = count_permitted(scheme, interval, opts);
  if (count > opts.enumeration_cap)
    throw CapExceeded("enumeration of " + std::to_string(count) + " indices exceeds cap " +
                          std::to_string(opts.enumeration_cap),
                      BigInt(static_cast<unsigned long>(count)));
  std::vector<std::uint64_t> out;
  out.reserve(static_cast<std::size_t>(count));
  for_each_block(scheme, interval, opts, [&](std::uint64_t base, std::uint64_t, std::span<const std::uint64_t> words) {
    walk_bits(base, words, [&](std::uint64_t n) { out.push_back(n); });
  });
  return out;
}

std::vector<std::uint64_t> residue_histogram(const SelectionScheme& scheme, const Interval& interval, std::uint32_t q,
                                             const SieveOptions& opts) {
  bool prime = q >= 2;
  for (std::uint32_t d = 2; prime && d * d <= q; ++d) prime = q % d != 0;
  if (!prime) throw DomainError("residue_histogram: modulus " + std::to_string(q) + " is not prime");
  std::vector<std::uint64_t> counts(q, 0);
  for_each_block(scheme, interval, opts, [&](std::uint64_t base, std::uint64_t, std::span<const std::uint64_t> words) {
    walk_bits(base, words, [&](std::uint64_t n) { ++counts[n % q]; });
  });
  return counts;
}

namespace naive {

std::uint64_t count_permitted(const SelectionScheme& scheme, const Interval& interval) {
  std::uint64_t c = 0;
  for (std::uint64_t n = interval.lo(); n <= interval.hi(); ++n) c += is_permitted(scheme, n) ? 1 : 0;
  return c;
}

std::vector<std::uint64_t> enumerate_permitted(const SelectionScheme& scheme, const Interval& interval) {
  std::vector<std::uint64_t> out;
  for (std::uint64_t n = interval.lo(); n <= interval.hi(); ++n)
    if (is_permitted(scheme, n)) out.push_back(n);
  return out;
}

}  // namespace naive

}  // namespace rsieve
