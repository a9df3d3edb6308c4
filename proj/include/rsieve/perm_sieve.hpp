#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "rsieve/selection.hpp"

namespace rsieve {

/// Inclusive, 1-based index range [lo, hi]. Empty ranges are unrepresentable.
class Interval {
 public:
  Interval(std::uint64_t lo, std::uint64_t hi);

  std::uint64_t lo() const noexcept { return lo_; }
  std::uint64_t hi() const noexcept { return hi_; }
  std::uint64_t size() const noexcept { return hi_ - lo_ + 1; }
  bool operator==(const Interval&) const = default;

 private:
  std::uint64_t lo_;
  std::uint64_t hi_;
};

struct SieveOptions {
  std::uint64_t segment_bits = 1ULL << 20;
  std::uint64_t enumeration_cap = 10'000'000;
  unsigned threads = 1;
};

/// True iff n mod p_h is unselected at every level.
bool is_permitted(const SelectionScheme& scheme, std::uint64_t n);

/// Number of permitted indices in `interval` (segmented bitmap sieve).
std::uint64_t count_permitted(const SelectionScheme& scheme, const Interval& interval, const SieveOptions& opts = {});

/// Ascending permitted indices; throws CapExceeded (carrying the count) above opts.enumeration_cap.
std::vector<std::uint64_t> enumerate_permitted(const SelectionScheme& scheme, const Interval& interval,
                                               const SieveOptions& opts = {});

/// Permitted counts per residue class modulo a prime q; entries sum to count_permitted.
std::vector<std::uint64_t> residue_histogram(const SelectionScheme& scheme, const Interval& interval, std::uint32_t q,
                                             const SieveOptions& opts = {});

/// Produces the permitted-index bitmap of a scheme block by block. Bit j of a
/// block starting at `base` stands for index base + j.
class BlockSieve {
 public:
  explicit BlockSieve(const SelectionScheme& scheme);

  /// Writes ceil(len/64) words; bits past `len` in the last word are cleared.
  void fill(std::uint64_t base, std::uint64_t len, std::span<std::uint64_t> words) const;

 private:
  // p < 64: one precomputed prohibited-bit mask per word phase (base mod p).
  struct PatternLevel {
    std::uint32_t p;
    std::vector<std::uint64_t> masks;
  };
  struct StrideLevel {
    std::uint32_t p;
    LevelSelection sel;
  };
  std::vector<PatternLevel> patterns_;
  std::vector<StrideLevel> strides_;
};

/// Calls `fn(base, len, words)` for consecutive blocks covering `interval`.
void for_each_block(const SelectionScheme& scheme, const Interval& interval, const SieveOptions& opts,
                    const std::function<void(std::uint64_t, std::uint64_t, std::span<const std::uint64_t>)>& fn);

/// Per-index reference scan, used as the oracle for the segmented path.
namespace naive {
std::uint64_t count_permitted(const SelectionScheme& scheme, const Interval& interval);
std::vector<std::uint64_t> enumerate_permitted(const SelectionScheme& scheme, const Interval& interval);
}  // namespace naive

}  // namespace rsieve
