#include "rsieve/goldbach.hpp"

#include <algorithm>
#include <bit>
#include <stdexcept>
#include <unordered_set>

#include "rsieve/perm_sieve.hpp"
#include "rsieve/selection.hpp"

namespace rsieve {

bool is_prime_trial(std::uint64_t n) noexcept {
  if (n < 2) return false;
  if (n % 2 == 0) return n == 2;
  if (n % 3 == 0) return n == 3;
  for (std::uint64_t d = 5; d * d <= n; d += 6)
    if (n % d == 0 || n % (d + 2) == 0) return false;
  return true;
}

namespace {

void require_even(std::uint64_t x, std::uint64_t min, const char* op) {
  if (x % 2 != 0 || x < min)
    throw DomainError(std::string(op) + ": x must be even and >= " + std::to_string(min) + ", got " + std::to_string(x));
}

// Bit array over [0, n] with one spare word so 64-bit windows never read past the end.
class Bits {
 public:
  explicit Bits(std::uint64_t n) : words_(static_cast<std::size_t>(n / 64 + 2), 0) {}

  void set(std::uint64_t i) { words_[i >> 6] |= 1ULL << (i & 63); }
  bool test(std::uint64_t i) const { return (words_[i >> 6] >> (i & 63)) & 1; }
  std::uint64_t word(std::size_t w) const { return words_[w]; }
  std::uint64_t& word(std::size_t w) { return words_[w]; }

  // Bits [s, s + 64) packed into one word.
  std::uint64_t window(std::uint64_t s) const {
    const std::size_t w = static_cast<std::size_t>(s >> 6);
    const unsigned b = static_cast<unsigned>(s & 63);
    if (b == 0) return words_[w];
    return (words_[w] >> b) | (words_[w + 1] << (64 - b));
  }

 private:
  std::vector<std::uint64_t> words_;
};

// Mask of bits in word w that fall inside [lo, hi].
std::uint64_t range_mask(std::size_t w, std::uint64_t lo, std::uint64_t hi) {
  const std::uint64_t first = 64 * static_cast<std::uint64_t>(w);
  const std::uint64_t last = first + 63;
  if (hi < first || lo > last) return 0;
  std::uint64_t m = ~0ULL;
  if (lo > first) m &= ~0ULL << (lo - first);
  if (hi < last) m &= ~0ULL >> (last - hi);
  return m;
}

template <class Visit>
void each_bit(std::uint64_t bits, std::uint64_t first, Visit&& visit) {
  while (bits) {
    visit(first + static_cast<std::uint64_t>(std::countr_zero(bits)));
    bits &= bits - 1;
  }
}

// Plain sieve of Eratosthenes kept apart from the library sieves.
std::vector<bool> oracle_prime_table(std::uint64_t n) {
  std::vector<bool> prime(static_cast<std::size_t>(n + 1), true);
  prime[0] = false;
  if (n >= 1) prime[1] = false;
  for (std::uint64_t i = 2; i * i <= n; ++i)
    if (prime[i])
      for (std::uint64_t j = i * i; j <= n; j += i) prime[j] = false;
  return prime;
}

}  // namespace

GoldbachPartitions goldbach_oracle(std::uint64_t x) {
  require_even(x, 4, "goldbach_oracle");
  GoldbachPartitions out;
  for (std::uint64_t p = 2; p <= x / 2; ++p)
    if (is_prime_trial(p) && is_prime_trial(x - p)) out.pairs.emplace_back(p, x - p);
  out.count = out.pairs.size();
  return out;
}

FundamentalOutcome fundamental_check(std::uint64_t x, std::uint64_t p) {
  require_even(x, 4, "fundamental_check");
  if (!is_prime_trial(p)) throw DomainError("fundamental_check: " + std::to_string(p) + " is not prime");
  if (p >= x) throw DomainError("fundamental_check: p must be < x");
  for (std::uint64_t q = 2; q * q < x; ++q) {
    if (!is_prime_trial(q)) continue;
    if (p % q == x % q) return FundamentalHypothesisFails{static_cast<std::uint32_t>(q)};
  }
  const std::uint64_t rest = x - p;
  if (rest != 1 && !is_prime_trial(rest))
    throw std::logic_error("fundamental_check: x - p = " + std::to_string(rest) + " is neither prime nor 1 for x = " +
                           std::to_string(x) + ", p = " + std::to_string(p));
  return FundamentalHolds{rest, rest == 1};
}

std::uint64_t derived_lower_bound(std::uint64_t c_k_x) noexcept { return c_k_x < 2 ? 0 : (c_k_x - 2) / 2; }

PartitionReport partition_candidates(std::uint64_t x) {
  require_even(x, 6, "partition_candidates");
  const auto scheme = SelectionScheme::for_even(x);
  SieveOptions opts;
  opts.enumeration_cap = x;
  PartitionReport r;
  r.x = x;
  r.k = scheme.k();
  r.permitted_indices = enumerate_permitted(scheme, Interval(2, x - 1), opts);
  r.includes_one = is_permitted(scheme, 1);
  r.c_k_x = count_permitted(scheme, Interval(1, x), opts);
  r.oracle_count = goldbach_oracle(x).count;
  r.derived_lower_bound = derived_lower_bound(r.c_k_x);
  return r;
}

std::vector<InvariantViolation> check_report(const PartitionReport& r) {
  std::vector<InvariantViolation> out;
  const std::unordered_set<std::uint64_t> listed(r.permitted_indices.begin(), r.permitted_indices.end());
  for (std::uint64_t n : r.permitted_indices) {
    if (!is_prime_trial(n)) out.push_back({r.x, "index-prime", n, std::to_string(n) + " is not prime"});
    const std::uint64_t rest = r.x - n;
    if (rest != 1 && !is_prime_trial(rest))
      out.push_back({r.x, "complement-prime", n, "x - n = " + std::to_string(rest) + " is neither prime nor 1"});
    const bool partner = rest == 1 ? r.includes_one : listed.count(rest) > 0;
    if (!partner) out.push_back({r.x, "symmetry", n, "x - n = " + std::to_string(rest) + " is not permitted"});
  }
  if (r.includes_one && listed.count(r.x - 1) == 0)
    out.push_back({r.x, "symmetry", 1, "index 1 is permitted but x - 1 is not"});
  if (r.oracle_count < r.derived_lower_bound)
    out.push_back({r.x, "lower-bound", 0,
                   "g(x) = " + std::to_string(r.oracle_count) + " < " + std::to_string(r.derived_lower_bound)});
  return out;
}

ScanSummary scan_range(std::uint64_t x_lo, std::uint64_t x_hi, std::uint64_t stride,
                       const std::function<void(const PartitionReport&)>& on_report, const ScanOptions& opts) {
  require_even(x_lo, 6, "scan_range");
  if (x_hi < x_lo) throw DomainError("scan_range: x_hi must be >= x_lo");
  if (stride == 0 || stride % 2 != 0) throw DomainError("scan_range: stride must be even and >= 2");

  const std::uint64_t N = x_lo + (x_hi - x_lo) / stride * stride;  // last x visited
  ScanSummary sum;
  sum.x_lo = x_lo;
  sum.x_hi = x_hi;
  sum.stride = stride;
  sum.threshold = opts.threshold;

  // Oracle side: primes P, primes-or-one P1, and their mirror images about N.
  const auto is_p = oracle_prime_table(N);
  Bits P(N), RP(N), P1(N), RP1(N);
  for (std::uint64_t i = 0; i <= N; ++i) {
    const bool p = is_p[i];
    if (p) {
      P.set(i);
      RP.set(N - i);
    }
    if (p || i == 1) {
      P1.set(i);
      RP1.set(N - i);
    }
  }

  // Sieve side: Z marks multiples of every basis prime; RZ[i] = Z[N - i].
  const auto basis_primes = primes_up_to(std::max<std::uint64_t>(2, isqrt(N)));
  Bits Z(N), RZ(N);
  std::size_t k = 0;
  std::vector<std::uint64_t> W(static_cast<std::size_t>(N / 64 + 2), 0);

  auto note = [&](InvariantViolation v) {
    ++sum.violation_total;
    if (sum.violations.size() < opts.keep_violations) sum.violations.push_back(std::move(v));
  };

  for (std::uint64_t x = x_lo; x <= N; x += stride) {
    while (k < basis_primes.size() && std::uint64_t{basis_primes[k]} * basis_primes[k] < x) {
      const std::uint64_t p = basis_primes[k++];
      for (std::uint64_t m = 0; m <= N; m += p) {
        Z.set(m);
        RZ.set(N - m);
      }
    }
    const std::uint64_t off = N - x;  // mirror_x(A)[n] = A[x - n] = RA[off + n]
    const std::size_t nwords = static_cast<std::size_t>(x / 64 + 1);

    std::uint64_t c = 0;
    std::uint64_t g = 0;
    for (std::size_t w = 0; w < nwords; ++w) {
      const std::uint64_t first = 64 * static_cast<std::uint64_t>(w);
      // Class 0 from Z, class x mod q from the mirrored Z.
      const std::uint64_t bits = ~(Z.word(w) | RZ.window(off + first)) & range_mask(w, 1, x);
      W[w] = bits;
      c += static_cast<std::uint64_t>(std::popcount(bits));

      const std::uint64_t inner = bits & range_mask(w, 2, x - 1);
      if (const std::uint64_t bad = inner & ~P.word(w)) {
        each_bit(bad, first, [&](std::uint64_t n) { note({x, "index-prime", n, std::to_string(n) + " is not prime"}); });
      }
      if (const std::uint64_t bad = inner & ~RP1.window(off + first)) {
        each_bit(bad, first, [&](std::uint64_t n) {
          note({x, "complement-prime", n, "x - n = " + std::to_string(x - n) + " is neither prime nor 1"});
        });
      }
      g += static_cast<std::uint64_t>(std::popcount(P.word(w) & RP.window(off + first) & range_mask(w, 2, x / 2)));
    }

    const bool includes_one = W[0] & 2;
    for (std::size_t w = 0; w < nwords; ++w) {
      each_bit(W[w] & range_mask(w, 1, x - 1), 64 * static_cast<std::uint64_t>(w), [&](std::uint64_t n) {
        const std::uint64_t m = x - n;
        if (!((W[m >> 6] >> (m & 63)) & 1))
          note({x, "symmetry", n, "x - n = " + std::to_string(m) + " is not permitted"});
      });
    }

    const std::uint64_t bound = derived_lower_bound(c);
    if (g < bound) note({x, "lower-bound", 0, "g(x) = " + std::to_string(g) + " < " + std::to_string(bound)});

    if (sum.reports == 0 || c < sum.min_c_k_x) {
      sum.min_c_k_x = c;
      sum.min_c_k_x_at = x;
    }
    if (sum.reports == 0 || g < sum.min_oracle_count) {
      sum.min_oracle_count = g;
      sum.min_oracle_count_at = x;
    }
    if (x > opts.threshold && (!sum.min_c_above_threshold || c < *sum.min_c_above_threshold)) {
      sum.min_c_above_threshold = c;
      sum.min_c_above_threshold_at = x;
    }
    ++sum.reports;

    if (on_report) {
      PartitionReport r;
      r.x = x;
      r.k = k;
      r.includes_one = includes_one;
      r.c_k_x = c;
      r.oracle_count = g;
      r.derived_lower_bound = bound;
      if (opts.with_indices)
        for (std::size_t w = 0; w < nwords; ++w)
          each_bit(W[w] & range_mask(w, 2, x - 1), 64 * static_cast<std::uint64_t>(w),
                   [&](std::uint64_t n) { r.permitted_indices.push_back(n); });
      on_report(r);
    }
  }
  return sum;
}

}  // namespace rsieve
