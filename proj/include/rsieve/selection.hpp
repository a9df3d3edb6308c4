#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "rsieve/prime_basis.hpp"

namespace rsieve {

/// Residue lists that break the selection rules. The message names the level.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Operation not defined for the scheme's kind (e.g. stepping an x-associated scheme).
class UnsupportedKind : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Type B move would land the moving residue on the fixed one.
class StepBlocked : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Exhaustive walk or materialization refused because the size exceeds the cap.
class CapExceeded : public std::runtime_error {
 public:
  CapExceeded(const std::string& what, BigInt required) : std::runtime_error(what), required_(std::move(required)) {}
  const BigInt& required() const noexcept { return required_; }

 private:
  BigInt required_;
};

enum class SchemeKind { Generic, EvenAssociated };

/// Selected residues of one level, sorted ascending, one or two entries.
struct LevelSelection {
  std::array<std::uint32_t, 2> r{0, 0};
  std::uint8_t count = 0;

  std::span<const std::uint32_t> residues() const noexcept { return {r.data(), count}; }
  bool contains(std::uint32_t v) const noexcept { return r[0] == v || (count == 2 && r[1] == v); }
  bool operator==(const LevelSelection& o) const noexcept {
    return count == o.count && r[0] == o.r[0] && (count < 2 || r[1] == o.r[1]);
  }
};

/// Which residues are selected at each level of a prime basis. Levels are
/// numbered from 1 in the public API. Immutable value type; the basis is
/// shared between copies.
class SelectionScheme {
 public:
  /// Validated Generic scheme: one residue at level 1, two distinct residues
  /// at every other level, each in [0, p_h).
  static SelectionScheme generic(const PrimeBasis& basis, const std::vector<std::vector<std::uint32_t>>& residues);
  static SelectionScheme generic(std::shared_ptr<const PrimeBasis> basis, std::vector<LevelSelection> levels);

  /// Scheme selecting {0, x mod p_h} over the basis of primes below sqrt(x).
  static SelectionScheme for_even(std::uint64_t x);

  SchemeKind kind() const noexcept { return kind_; }
  std::optional<std::uint64_t> even_x() const noexcept { return x_; }
  const PrimeBasis& basis() const noexcept { return *basis_; }
  const std::shared_ptr<const PrimeBasis>& basis_ptr() const noexcept { return basis_; }
  std::size_t k() const noexcept { return levels_.size(); }
  const LevelSelection& level(std::size_t h) const;
  std::span<const LevelSelection> levels() const noexcept { return levels_; }

  /// Generic scheme restricted to levels 1..h.
  SelectionScheme truncated(std::size_t h) const;

  /// Scheme one level deeper with the given residues at level k+1 (Generic only).
  SelectionScheme extended(std::uint32_t r0, std::uint32_t r1) const;

  bool operator==(const SelectionScheme& o) const {
    return kind_ == o.kind_ && x_ == o.x_ && levels_ == o.levels_ && *basis_ == *o.basis_;
  }

 private:
  SelectionScheme(std::shared_ptr<const PrimeBasis> basis, std::vector<LevelSelection> levels, SchemeKind kind,
                  std::optional<std::uint64_t> x);
  static void validate_generic(const PrimeBasis& basis, std::span<const LevelSelection> levels);

  std::shared_ptr<const PrimeBasis> basis_;
  std::vector<LevelSelection> levels_;
  SchemeKind kind_;
  std::optional<std::uint64_t> x_;
};

/// Type A: shift every selected residue of `level` by +1 mod p_h.
SelectionScheme type_a_step(const SelectionScheme& scheme, std::size_t level);

/// Type B: keep `fixed` and move the other residue of `level` by `direction`
/// (+1 or -1) mod p_h. Throws StepBlocked on collision with `fixed`.
SelectionScheme type_b_step(const SelectionScheme& scheme, std::size_t level, std::uint32_t fixed, int direction);

/// N_k = C(p_1,1) * prod_{h>1} C(p_h,2).
BigInt combination_count(std::size_t k);

/// nu_h: number of distinct selections at a level with prime p (2 for level 1).
std::uint64_t level_combinations(std::size_t level, std::uint32_t p) noexcept;

/// Selection number `index` (0-based, lexicographic) among the nu_h choices of a level.
LevelSelection unrank_level(std::size_t level, std::uint32_t p, std::uint64_t index);

struct Exhaustive {};
struct Sample {
  std::uint64_t count = 0;
  std::uint64_t seed = 0;
};
using Strategy = std::variant<Exhaustive, Sample>;

inline constexpr std::uint64_t kDefaultExhaustiveCap = 10'000'000;

/// Single-consumer stream of Generic schemes over a basis.
///
/// Exhaustive order is an odometer: level 1 varies fastest, and every level
/// walks its residue pairs lexicographically. Sample draws each level
/// independently and uniformly; draw i depends only on (seed, i) through a
/// std::mt19937_64 seeded with std::seed_seq{seed_lo, seed_hi, i_lo, i_hi}.
class SchemeIterator {
 public:
  SchemeIterator(const PrimeBasis& basis, Strategy strategy, std::uint64_t exhaustive_cap = kDefaultExhaustiveCap);

  std::optional<SelectionScheme> next();
  /// Number of schemes the stream yields in total.
  std::uint64_t size() const noexcept { return total_; }

  /// Draw `index` of a Sample stream, without walking the stream.
  static SelectionScheme sample_at(const std::shared_ptr<const PrimeBasis>& basis, std::uint64_t seed,
                                   std::uint64_t index);

 private:
  std::shared_ptr<const PrimeBasis> basis_;
  Strategy strategy_;
  std::uint64_t total_ = 0;
  std::uint64_t emitted_ = 0;
  std::vector<std::uint64_t> odometer_;
};

}  // namespace rsieve
