#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "rsieve/prime_basis.hpp"

namespace rsieve {

struct GoldbachPartitions {
  std::uint64_t count = 0;
  std::vector<std::pair<std::uint64_t, std::uint64_t>> pairs;  // p <= q, ascending p
};

/// Brute-force partition count of an even x >= 4 by trial division. Shares no
/// code with the residue sieve.
GoldbachPartitions goldbach_oracle(std::uint64_t x);

/// Standalone primality by trial division, used by the oracle paths.
bool is_prime_trial(std::uint64_t n) noexcept;

struct FundamentalHolds {
  std::uint64_t complement = 0;  // x - p
  bool complement_is_one = false;
};
struct FundamentalHypothesisFails {
  std::uint32_t q = 0;  // smallest basis prime with p = x (mod q)
};
using FundamentalOutcome = std::variant<FundamentalHolds, FundamentalHypothesisFails>;

/// For prime p < x, with the basis of primes q, q^2 < x: reports the first q
/// with p = x (mod q), otherwise classifies x - p as prime or 1. A complement
/// that is neither throws std::logic_error.
FundamentalOutcome fundamental_check(std::uint64_t x, std::uint64_t p);

/// Permitted indices of the scheme attached to x, with the oracle count.
struct PartitionReport {
  std::uint64_t x = 0;
  std::size_t k = 0;
  std::vector<std::uint64_t> permitted_indices;  // over (1, x); may be left empty by scans
  bool includes_one = false;
  std::uint64_t c_k_x = 0;  // over [1, x]
  std::uint64_t oracle_count = 0;
  std::uint64_t derived_lower_bound = 0;  // max(0, floor((c_k_x - 2) / 2))

  bool operator==(const PartitionReport&) const = default;
};

std::uint64_t derived_lower_bound(std::uint64_t c_k_x) noexcept;

/// Builds the report for an even x >= 6 through the segmented sieve and the oracle.
PartitionReport partition_candidates(std::uint64_t x);

/// One broken invariant, with enough data to reproduce it.
struct InvariantViolation {
  std::uint64_t x = 0;
  std::string invariant;  // "index-prime", "complement-prime", "symmetry", "lower-bound"
  std::uint64_t n = 0;    // offending index, or 0 for count-level invariants
  std::string detail;

  bool operator==(const InvariantViolation&) const = default;
};

/// Checks a report against trial-division primality: each listed n is prime
/// with x - n prime or 1, the list is closed under n -> x - n (index 1 aside),
/// and oracle_count >= derived_lower_bound.
std::vector<InvariantViolation> check_report(const PartitionReport& report);

struct ScanOptions {
  /// Fill permitted_indices in the streamed reports (costly on wide ranges).
  bool with_indices = false;
  /// Summary tracks min c_k_x separately for x above this value (p_35^2).
  std::uint64_t threshold = 22201;
  std::size_t keep_violations = 16;
};

struct ScanSummary {
  std::uint64_t x_lo = 0;
  std::uint64_t x_hi = 0;
  std::uint64_t stride = 0;
  std::uint64_t reports = 0;
  std::uint64_t min_c_k_x = 0;
  std::uint64_t min_c_k_x_at = 0;
  std::uint64_t threshold = 0;
  std::optional<std::uint64_t> min_c_above_threshold;
  std::optional<std::uint64_t> min_c_above_threshold_at;
  std::uint64_t min_oracle_count = 0;
  std::uint64_t min_oracle_count_at = 0;
  std::uint64_t violation_total = 0;
  std::vector<InvariantViolation> violations;  // first keep_violations found

  bool operator==(const ScanSummary&) const = default;
};

/// Walks even x in [x_lo, x_hi] by `stride`. One bitmap of multiples of the
/// current basis primes (and its mirror image) is kept for the whole range, so
/// each x costs O(x / 64) word operations. The permitted set of x is
///   not a multiple of any q  and  not = x (mod q)  for every basis prime q,
/// and the second class is read from the mirrored bitmap. Every x is checked
/// against an independent prime table.
ScanSummary scan_range(std::uint64_t x_lo, std::uint64_t x_hi, std::uint64_t stride,
                       const std::function<void(const PartitionReport&)>& on_report = {},
                       const ScanOptions& opts = {});

}  // namespace rsieve
