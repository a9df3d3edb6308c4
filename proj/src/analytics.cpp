#include "rsieve/analytics.hpp"

#include <cmath>

namespace rsieve {

namespace {

BigInt big(std::uint64_t v) { return BigInt(static_cast<unsigned long>(v)); }

Rational ratio(const BigInt& num, const BigInt& den) {
  Rational q(num, den);
  q.canonicalize();
  return q;
}

void require_split_level(std::size_t k, const char* op) {
  // m_k > p_k^2 first holds at k = 3 (30 > 25).
  if (k < 3) throw UnsupportedLevel(std::string(op) + ": level k must be >= 3 so that m_k > p_k^2");
}

std::uint64_t to_u64(const BigInt& v) {
  if (!v.fits_ulong_p()) throw CapExceeded("value does not fit in 64 bits: " + v.get_str(), v);
  return v.get_ui();
}

}  // namespace

DensityValue DensityValue::of(const BigInt& num, const BigInt& den) {
  if (den <= 0) throw DomainError("density denominator must be positive");
  return DensityValue(Rational(num, den));
}

BigInt c_closed(std::size_t k) {
  const auto primes = first_primes(k);
  BigInt c = primes[0] - 1;
  for (std::size_t i = 1; i < primes.size(); ++i) c *= primes[i] - 2;
  return c;
}

DensityValue delta_period(std::size_t k) {
  const auto basis = PrimeBasis::first(k);
  return DensityValue::of(c_closed(k) * basis.largest(), basis.primorial());
}

std::int64_t theta(std::size_t k) {
  if (k < 2) throw UnsupportedLevel("theta: defined for k >= 2 (p_k > 2)");
  const auto primes = first_primes(k + 1);
  return static_cast<std::int64_t>(primes[k]) - static_cast<std::int64_t>(primes[k - 1]) - 2;
}

DensityValue delta_product_form(std::size_t k) {
  if (k < 2) throw UnsupportedLevel("delta_product_form: k must be >= 2");
  const auto primes = first_primes(k + 1);
  Rational acc(Rational(1, 3) * Rational(primes[0] + 1, primes[0]));
  std::int64_t th = 0;
  for (std::size_t j = 2; j <= k; ++j) {
    th = static_cast<std::int64_t>(primes[j]) - static_cast<std::int64_t>(primes[j - 1]) - 2;
    acc *= ratio(BigInt(static_cast<long>(primes[j - 1]) + th), primes[j - 1]);
  }
  const std::uint32_t pk = primes[k - 1];
  acc *= ratio(pk, BigInt(static_cast<long>(pk) + th));
  return DensityValue(acc);
}

DensityValue interval_density(std::uint64_t count, const Interval& interval, std::uint32_t p_k) {
  return DensityValue::of(big(count) * p_k, big(interval.size()));
}

DensityBounds interval_density_bounds(std::size_t k, const BigInt& n) {
  if (k <= 2) throw UnsupportedLevel("interval_density_bounds: requires k > 2");
  if (n < 1) throw DomainError("interval_density_bounds: n must be >= 1");
  const auto m = PrimeBasis::first(k).primorial();
  const Rational delta = delta_period(k).exact();
  const BigInt q = n / m;
  const Rational lower = ratio(q * m, q * m + m - 1) * delta;
  const Rational upper = ratio((q + 1) * m, q * m + 1) * delta;
  return {DensityValue(lower), DensityValue(upper)};
}

LeftRightSplit split_left_right(const SelectionScheme& scheme, std::size_t k, std::uint64_t materialize_cap,
                                const SieveOptions& opts) {
  if (scheme.kind() != SchemeKind::Generic) throw UnsupportedKind("split_left_right: Generic schemes only");
  require_split_level(k, "split_left_right");
  const std::size_t h = scheme.k();
  if (h > k) throw DomainError("split_left_right: scheme level exceeds k");
  const auto basis_k = PrimeBasis::first(k);
  const std::uint64_t pk = basis_k.largest();
  const std::uint64_t pk2 = pk * pk;
  const BigInt& mk = basis_k.primorial();
  const std::uint32_t ph = scheme.basis().largest();

  LeftRightSplit out;
  out.h = h;
  out.k = k;
  out.c_left = big(count_permitted(scheme, Interval(1, pk2), opts));
  if (mk <= materialize_cap) {
    out.c_right = big(count_permitted(scheme, Interval(pk2 + 1, to_u64(mk)), opts));
  } else {
    // c_h permitted per period m_h, m_k / m_h periods in [1, m_k].
    const BigInt total = c_closed(h) * (mk / scheme.basis().primorial());
    out.c_right = total - out.c_left;
    out.right_derived = true;
  }
  out.delta_left = DensityValue::of(out.c_left * ph, big(pk2));
  out.delta_right = DensityValue::of(out.c_right * ph, mk - pk2);
  return out;
}

DensityValue bijection_left_to_right(std::size_t h, std::size_t k, const DensityValue& x) {
  require_split_level(k, "bijection_left_to_right");
  if (h == 0 || h > k) throw DomainError("bijection: requires 1 <= h <= k");
  const auto basis = PrimeBasis::first(k);
  const BigInt pk2 = BigInt(basis.largest()) * basis.largest();
  const Rational dh = delta_period(h).exact();
  return DensityValue(dh - (x.exact() - dh) * ratio(pk2, basis.primorial() - pk2));
}

DensityValue bijection_right_to_left(std::size_t h, std::size_t k, const DensityValue& y) {
  require_split_level(k, "bijection_right_to_left");
  if (h == 0 || h > k) throw DomainError("bijection: requires 1 <= h <= k");
  const auto basis = PrimeBasis::first(k);
  const BigInt pk2 = BigInt(basis.largest()) * basis.largest();
  const Rational dh = delta_period(h).exact();
  return DensityValue(dh + (dh - y.exact()) * ratio(basis.primorial() - pk2, pk2));
}

DensityBounds right_density_bounds(std::size_t h, std::size_t k) {
  require_split_level(k, "right_density_bounds");
  if (h == 0 || h > k) throw DomainError("right_density_bounds: requires 1 <= h <= k");
  const auto basis = PrimeBasis::first(k);
  const BigInt pk2 = BigInt(basis.largest()) * basis.largest();
  const BigInt& mk = basis.primorial();
  const Rational dh = delta_period(h).exact();
  // c_h p_{h+1} ... p_k: permitted h-tuples in [1, m_k].
  const BigInt spread = c_closed(h) * (mk / basis.primorial_of(h));
  const Rational shrink = Rational(1) - ratio(pk2, mk);
  Rational lower = dh * (Rational(1) - ratio(pk2, spread)) / shrink;
  if (lower < 0) lower = 0;
  const Rational upper = dh / shrink;
  return {DensityValue(lower), DensityValue(upper)};
}

DensityValue average_density_survey(std::size_t k, const Interval& interval, const Strategy& strategy,
                                    const SurveyOptions& opts) {
  const auto basis = PrimeBasis::first(k);
  SchemeIterator it(basis, strategy, opts.exhaustive_cap);
  if (it.size() == 0) throw DomainError("average_density_survey: strategy visits no schemes");
  BigInt total = 0;
  std::uint64_t visited = 0;
  while (auto s = it.next()) {
    total += big(count_permitted(*s, interval, opts.sieve));
    ++visited;
  }
  return DensityValue::of(total * basis.largest(), big(interval.size()) * big(visited));
}

namespace {

struct Tracker {
  bool seen = false;
  SchemeDensity min;
  SchemeDensity max;

  void offer(const SelectionScheme& s, const BigInt& count, const DensityValue& d) {
    if (!seen || d < min.density) min = {{s.levels().begin(), s.levels().end()}, count, d};
    if (!seen || d > max.density) max = {{s.levels().begin(), s.levels().end()}, count, d};
    seen = true;
  }
};

// (delta_k - extreme_k) delta_h / (delta_k (delta_h - extreme_h)), or nullopt on a zero denominator.
std::optional<DensityValue> invert_extreme(const Rational& dk, const Rational& dh, const Rational& num_k,
                                           const Rational& num_h) {
  if (num_h == 0) return std::nullopt;
  return DensityValue(num_k * dh / (dk * num_h));
}

}  // namespace

ExtremaReport extrema_survey(std::size_t k, IntervalRole role, const Strategy& strategy,
                             std::optional<std::size_t> reference_h, const SurveyOptions& opts) {
  const auto basis = PrimeBasis::first(k);
  ExtremaReport rep;
  rep.k = k;
  rep.primes.assign(basis.primes().begin(), basis.primes().end());
  rep.delta_k = delta_period(k);
  if (const auto* s = std::get_if<Sample>(&strategy)) {
    rep.strategy = "sample";
    rep.samples = s->count;
    rep.seed = s->seed;
  } else {
    rep.strategy = "exhaustive";
  }
  if (reference_h && (*reference_h == 0 || *reference_h >= k))
    throw DomainError("extrema_survey: reference level must satisfy 1 <= h < k");

  if (role == IntervalRole::Right && k > opts.right_max_level) {
    rep.notice = "Right interval at k=" + std::to_string(k) + " exceeds right_max_level=" +
                 std::to_string(opts.right_max_level) + "; survey restricted to the Left interval";
    role = IntervalRole::Left;
  }
  if (role == IntervalRole::Right) require_split_level(k, "extrema_survey");
  rep.role = role;

  const std::uint64_t pk = basis.largest();
  const std::uint64_t pk2 = pk * pk;
  const Interval interval = role == IntervalRole::Left ? Interval(1, pk2) : Interval(pk2 + 1, to_u64(basis.primorial()));

  SchemeIterator it(basis, strategy, opts.exhaustive_cap);
  if (it.size() == 0) throw DomainError("extrema_survey: strategy visits no schemes");
  rep.samples = it.size();
  Tracker at_k;
  Tracker at_h;
  const bool flag_counterexamples = role == IntervalRole::Left && k >= 35;
  while (auto s = it.next()) {
    const BigInt c = big(count_permitted(*s, interval, opts.sieve));
    const auto d = DensityValue::of(c * pk, big(interval.size()));
    at_k.offer(*s, c, d);
    if (flag_counterexamples && 2 * c <= pk) {
      ++rep.counterexample_total;
      if (rep.counterexamples.size() < kCounterexampleKeep)
        rep.counterexamples.push_back({{s->levels().begin(), s->levels().end()}, c, d});
    }
    if (reference_h) {
      const auto t = s->truncated(*reference_h);
      const BigInt ch = big(count_permitted(t, interval, opts.sieve));
      at_h.offer(t, ch, DensityValue::of(ch * t.basis().largest(), big(interval.size())));
    }
  }
  rep.min = at_k.min;
  rep.max = at_k.max;
  if (role == IntervalRole::Left) rep.min_count_exceeds_half_pk = 2 * rep.min.count > pk;

  if (reference_h) {
    ExtremaReport::Reference ref;
    ref.h = *reference_h;
    ref.delta_h = delta_period(*reference_h);
    ref.min_h = at_h.min.density;
    ref.max_h = at_h.max.density;
    const Rational& dk = rep.delta_k.exact();
    const Rational& dh = ref.delta_h.exact();
    const auto from_min = invert_extreme(dk, dh, dk - rep.min.density.exact(), dh - ref.min_h.exact());
    const auto from_max = invert_extreme(dk, dh, rep.max.density.exact() - dk, ref.max_h.exact() - dh);
    // Right: alpha pairs with the minima, beta with the maxima; Left swaps them.
    if (role == IntervalRole::Right) {
      ref.alpha = from_min;
      ref.beta = from_max;
    } else {
      ref.beta = from_min;
      ref.alpha = from_max;
    }
    rep.reference = ref;
  }
  return rep;
}

AsymptoticRatios asymptotic_ratios(std::size_t k) {
  const auto primes = first_primes(k);
  double log_c = std::log(static_cast<double>(primes[0] - 1));
  double log_m = 0;
  for (std::size_t i = 0; i < primes.size(); ++i) {
    log_m += std::log(static_cast<double>(primes[i]));
    if (i > 0) log_c += std::log(static_cast<double>(primes[i] - 2));
  }
  const double log_pk2 = 2 * std::log(static_cast<double>(primes.back()));
  AsymptoticRatios r;
  r.c_over_m = std::exp(log_c - log_m);
  r.pk2_over_c = std::exp(log_pk2 - log_c);
  r.pk2_over_m = std::exp(log_pk2 - log_m);
  if (k <= 15) {
    const BigInt c = c_closed(k);
    const BigInt m = primorial(k);
    const BigInt pk2 = BigInt(primes.back()) * primes.back();
    r.c_over_m_exact = ratio(c, m);
    r.pk2_over_c_exact = ratio(pk2, c);
    r.pk2_over_m_exact = ratio(pk2, m);
  }
  return r;
}

}  // namespace rsieve
