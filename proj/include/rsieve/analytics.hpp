#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "rsieve/perm_sieve.hpp"
#include "rsieve/selection.hpp"

namespace rsieve {

/// Raised when a formula's level hypothesis is not met.
class UnsupportedLevel : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Exact density value (canonical rational) with a double view for display.
/// Comparisons always use the rational.
class DensityValue {
 public:
  DensityValue() : exact_(0) {}
  explicit DensityValue(Rational q) : exact_(std::move(q)) { exact_.canonicalize(); }
  static DensityValue of(const BigInt& num, const BigInt& den);

  const Rational& exact() const noexcept { return exact_; }
  BigInt numerator() const { return exact_.get_num(); }
  BigInt denominator() const { return exact_.get_den(); }
  double approx() const { return exact_.get_d(); }

  auto operator<=>(const DensityValue& o) const { return cmp(exact_, o.exact_) <=> 0; }
  bool operator==(const DensityValue& o) const { return exact_ == o.exact_; }

 private:
  Rational exact_;
};

/// c_k = (p_1 - 1)(p_2 - 2)...(p_k - 2).
BigInt c_closed(std::size_t k);

/// delta_k = c_k p_k / m_k.
DensityValue delta_period(std::size_t k);

/// theta_k = p_{k+1} - p_k - 2, defined for k >= 2.
std::int64_t theta(std::size_t k);

/// delta_k through the theta product:
/// (1/3) [(1 + 1/p_1) prod_{j=2..k} (1 + theta_j/p_j)] p_k / (p_k + theta_k), k >= 2.
DensityValue delta_product_form(std::size_t k);

/// count * p_k / |interval|.
DensityValue interval_density(std::uint64_t count, const Interval& interval, std::uint32_t p_k);

struct DensityBounds {
  DensityValue lower;
  DensityValue upper;
};

/// Sandwich for the density over [1, n] at level k > 2, with q = floor(n / m_k):
///   q m_k / (q m_k + m_k - 1) delta_k  <  delta  <  (q + 1) m_k / (q m_k + 1) delta_k.
DensityBounds interval_density_bounds(std::size_t k, const BigInt& n);

/// Counts and densities over the Left interval [1, p_k^2] and the Right
/// interval [p_k^2 + 1, m_k], measured for a scheme of level h <= k.
struct LeftRightSplit {
  std::size_t h = 0;
  std::size_t k = 0;
  BigInt c_left;
  BigInt c_right;
  DensityValue delta_left;
  DensityValue delta_right;
  /// True when c_right was obtained as (c_h m_k / m_h) - c_left because m_k is
  /// past `materialize_cap`; false when counted directly.
  bool right_derived = false;
};

inline constexpr std::uint64_t kDefaultMaterializeCap = 100'000'000;

/// Split of the first period of level k >= 3 for a Generic scheme of level h <= k.
LeftRightSplit split_left_right(const SelectionScheme& scheme, std::size_t k,
                                std::uint64_t materialize_cap = kDefaultMaterializeCap,
                                const SieveOptions& opts = {});

/// f_h(x) = delta_h - (x - delta_h) p_k^2 / (m_k - p_k^2).
DensityValue bijection_left_to_right(std::size_t h, std::size_t k, const DensityValue& x);
/// f_h^{-1}(y) = delta_h + (delta_h - y) (m_k - p_k^2) / p_k^2.
DensityValue bijection_right_to_left(std::size_t h, std::size_t k, const DensityValue& y);

/// Bounds on delta_h over the Right interval of level k:
///   delta_h (1 - p_k^2 / (c_h p_{h+1}...p_k)) / (1 - p_k^2/m_k)  and  delta_h / (1 - p_k^2/m_k),
/// with the lower bound clamped at 0.
DensityBounds right_density_bounds(std::size_t h, std::size_t k);

struct SurveyOptions {
  std::uint64_t exhaustive_cap = kDefaultExhaustiveCap;
  std::uint64_t materialize_cap = kDefaultMaterializeCap;
  /// Largest level at which Right-interval surveys count directly.
  std::size_t right_max_level = 5;
  SieveOptions sieve;
};

/// Exact mean over the visited schemes of the density over `interval`.
DensityValue average_density_survey(std::size_t k, const Interval& interval, const Strategy& strategy,
                                    const SurveyOptions& opts = {});

enum class IntervalRole { Left, Right };

struct SchemeDensity {
  std::vector<LevelSelection> levels;  // witnessing selection
  BigInt count;
  DensityValue density;
};

/// Report of one extrema survey.
struct ExtremaReport {
  std::size_t k = 0;
  IntervalRole role = IntervalRole::Left;
  std::string strategy;  // "exhaustive" or "sample"
  std::uint64_t samples = 0;
  std::uint64_t seed = 0;
  std::vector<std::uint32_t> primes;
  SchemeDensity min;
  SchemeDensity max;
  DensityValue delta_k;
  /// Left role only: min count > p_k / 2, equivalently min delta_L > delta_4 = 1/2.
  std::optional<bool> min_count_exceeds_half_pk;
  /// Schemes with c <= p_k / 2 on the Left interval; only collected when k >= 35.
  std::vector<SchemeDensity> counterexamples;
  std::uint64_t counterexample_total = 0;

  struct Reference {
    std::size_t h = 0;
    DensityValue delta_h;
    DensityValue min_h;
    DensityValue max_h;
    std::optional<DensityValue> alpha;
    std::optional<DensityValue> beta;
  };
  std::optional<Reference> reference;
  /// Set when a Right survey was requested beyond right_max_level.
  std::optional<std::string> notice;
};

inline constexpr std::size_t kCounterexampleKeep = 16;

/// Min/max density over Left or Right interval of level k across the schemes
/// of `strategy`. With `reference_h` < k also measures the level-h extrema of
/// the truncated schemes over the same interval and inverts the extrema
/// formulas for alpha and beta.
ExtremaReport extrema_survey(std::size_t k, IntervalRole role, const Strategy& strategy,
                             std::optional<std::size_t> reference_h = std::nullopt, const SurveyOptions& opts = {});

struct AsymptoticRatios {
  double c_over_m = 0;
  double pk2_over_c = 0;
  double pk2_over_m = 0;
  /// Exact values for k <= 15.
  std::optional<Rational> c_over_m_exact;
  std::optional<Rational> pk2_over_c_exact;
  std::optional<Rational> pk2_over_m_exact;
};

/// c_k/m_k, p_k^2/c_k, p_k^2/m_k evaluated as sums of logs.
AsymptoticRatios asymptotic_ratios(std::size_t k);

}  // namespace rsieve
