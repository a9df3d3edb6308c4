#include "rsieve/suites.hpp"

#include <random>

namespace rsieve {

namespace {

Json big_json(const BigInt& v) { return v.get_str(); }

Json interval_json(const Interval& i) { return Json::array({i.lo(), i.hi()}); }

std::uint64_t materializable(const BigInt& v, std::uint64_t cap, const char* what) {
  if (v > cap) throw CapExceeded(std::string(what) + " = " + v.get_str() + " exceeds the materialize cap", v);
  return v.get_ui();
}

Strategy strategy_of(const SuiteParams& p) {
  if (p.samples) return Sample{*p.samples, p.seed};
  return Exhaustive{};
}

Json strategy_json(const SuiteParams& p) {
  if (p.samples) return {{"strategy", "sample"}, {"samples", *p.samples}, {"seed", p.seed}};
  return {{"strategy", "exhaustive"}};
}

Json fail_witness(const SelectionScheme& s, const Interval& i, Json expected, Json actual) {
  return {{"scheme", scheme_to_json(s)}, {"interval", interval_json(i)}, {"expected", std::move(expected)},
          {"actual", std::move(actual)}};
}

// count_permitted over one full period equals c_k.
VerificationRecord closed_form(const SuiteParams& p) {
  VerificationRecord rec;
  const std::size_t k = p.k.value_or(6);
  const std::uint64_t samples = p.samples.value_or(50);
  rec.params = {{"k", k}, {"samples", samples}, {"seed", p.seed}};
  const auto basis = std::make_shared<const PrimeBasis>(PrimeBasis::first(k));
  const Interval period(1, materializable(basis->primorial(), p.survey.materialize_cap, "m_k"));
  const BigInt expected = c_closed(k);
  for (std::uint64_t i = 0; i < samples; ++i) {
    const auto s = SchemeIterator::sample_at(basis, p.seed, i);
    const BigInt got(static_cast<unsigned long>(count_permitted(s, period, p.survey.sieve)));
    if (got != expected) {
      rec.outcome = Outcome::Fail;
      rec.witness = fail_witness(s, period, big_json(expected), big_json(got));
      break;
    }
  }
  rec.details = {{"c_k", big_json(expected)}, {"m_k", big_json(basis->primorial())}};
  return rec;
}

// Mean density over an interval across all schemes equals delta_k.
VerificationRecord average_density(const SuiteParams& p) {
  VerificationRecord rec;
  const std::size_t k = p.k.value_or(4);
  const Interval interval(p.lo.value_or(1), p.hi.value_or(100));
  rec.params = {{"k", k}, {"interval", interval_json(interval)}};
  rec.params.update(strategy_json(p));
  const auto mean = average_density_survey(k, interval, strategy_of(p), p.survey);
  const auto delta = delta_period(k);
  rec.details = {{"mean", to_json(mean)}, {"delta_k", to_json(delta)}};
  if (p.samples) {
    rec.outcome = Outcome::ReportOnly;
  } else if (mean != delta) {
    rec.outcome = Outcome::Fail;
    rec.witness = Json{{"interval", interval_json(interval)}, {"expected", to_json(delta)}, {"actual", to_json(mean)}};
  }
  return rec;
}

// Measured density over [1, n] strictly inside the sandwich, n drawn from [m_k, 16 m_k].
VerificationRecord interval_bounds(const SuiteParams& p) {
  VerificationRecord rec;
  const std::size_t k = p.k.value_or(4);
  const std::uint64_t samples = p.samples.value_or(200);
  rec.params = {{"k", k}, {"samples", samples}, {"seed", p.seed}};
  const auto basis = std::make_shared<const PrimeBasis>(PrimeBasis::first(k));
  const std::uint64_t m = materializable(basis->primorial() * 16, p.survey.materialize_cap, "16 m_k") / 16;
  std::mt19937_64 rng(p.seed);
  std::uniform_int_distribution<std::uint64_t> pick_n(m, 16 * m);
  std::uint64_t checked = 0;
  for (std::uint64_t i = 0; i < samples; ++i) {
    const auto s = SchemeIterator::sample_at(basis, p.seed, i);
    const std::uint64_t n = pick_n(rng);
    const Interval interval(1, n);
    const auto measured = interval_density(count_permitted(s, interval, p.survey.sieve), interval, basis->largest());
    const auto b = interval_density_bounds(k, BigInt(static_cast<unsigned long>(n)));
    ++checked;
    if (!(b.lower < measured && measured < b.upper)) {
      rec.outcome = Outcome::Fail;
      rec.witness = fail_witness(s, interval, {{"lower", to_json(b.lower)}, {"upper", to_json(b.upper)}},
                                 to_json(measured));
      break;
    }
  }
  rec.details = {{"checked", checked}, {"n_range", Json::array({m, 16 * m})}};
  return rec;
}

// Permitted indices spread evenly over the residues of the next prime.
VerificationRecord uniform_residues(const SuiteParams& p) {
  VerificationRecord rec;
  const std::size_t k = p.k.value_or(4);
  const std::uint64_t samples = p.samples.value_or(10);
  rec.params = {{"k", k}, {"samples", samples}, {"seed", p.seed}};
  const auto basis = std::make_shared<const PrimeBasis>(PrimeBasis::first(k));
  const std::uint32_t q = PrimeBasis::first(k + 1).largest();
  const Interval interval(1, materializable(basis->primorial() * q, p.survey.materialize_cap, "p_{k+1} m_k"));
  const BigInt expected = c_closed(k);
  for (std::uint64_t i = 0; i < samples; ++i) {
    const auto s = SchemeIterator::sample_at(basis, p.seed, i);
    const auto hist = residue_histogram(s, interval, q, p.survey.sieve);
    for (std::uint32_t r = 0; r < q; ++r) {
      if (BigInt(static_cast<unsigned long>(hist[r])) != expected) {
        rec.outcome = Outcome::Fail;
        rec.witness = fail_witness(s, interval, big_json(expected),
                                   {{"residue", r}, {"modulus", q}, {"count", hist[r]}});
        break;
      }
    }
    if (rec.witness) break;
  }
  rec.details = {{"modulus", q}, {"per_residue", big_json(expected)}};
  return rec;
}

// Left and Right counts sum to c_k, and f_k carries each Left density to the Right one.
VerificationRecord bijection(const SuiteParams& p) {
  VerificationRecord rec;
  const std::size_t k = p.k.value_or(4);
  rec.params = {{"k", k}};
  rec.params.update(strategy_json(p));
  SchemeIterator it(PrimeBasis::first(k), strategy_of(p), p.survey.exhaustive_cap);
  const BigInt total = c_closed(k);
  std::optional<LeftRightSplit> min_l, max_l, min_r, max_r;
  std::uint64_t visited = 0;
  while (auto s = it.next()) {
    const auto split = split_left_right(*s, k, p.survey.materialize_cap, p.survey.sieve);
    ++visited;
    const auto mapped = bijection_left_to_right(k, k, split.delta_left);
    if (split.c_left + split.c_right != total || mapped != split.delta_right) {
      rec.outcome = Outcome::Fail;
      rec.witness = Json{{"scheme", scheme_to_json(*s)},
                         {"expected", {{"c_total", big_json(total)}, {"delta_right", to_json(mapped)}}},
                         {"actual",
                          {{"c_left", big_json(split.c_left)},
                           {"c_right", big_json(split.c_right)},
                           {"delta_right", to_json(split.delta_right)}}}};
      return rec;
    }
    if (!min_l || split.delta_left < min_l->delta_left) min_l = split;
    if (!max_l || split.delta_left > max_l->delta_left) max_l = split;
    if (!min_r || split.delta_right < min_r->delta_right) min_r = split;
    if (!max_r || split.delta_right > max_r->delta_right) max_r = split;
  }
  const auto f_min = bijection_left_to_right(k, k, min_l->delta_left);
  const auto f_max = bijection_left_to_right(k, k, max_l->delta_left);
  rec.details = {{"schemes", visited},
                 {"min_left", to_json(min_l->delta_left)},
                 {"max_left", to_json(max_l->delta_left)},
                 {"min_right", to_json(min_r->delta_right)},
                 {"max_right", to_json(max_r->delta_right)},
                 {"f_min_left", to_json(f_min)},
                 {"f_max_left", to_json(f_max)}};
  if (f_min != max_r->delta_right || f_max != min_r->delta_right) {
    rec.outcome = Outcome::Fail;
    rec.witness = Json{{"expected", {{"max_right", to_json(f_min)}, {"min_right", to_json(f_max)}}},
                       {"actual", {{"max_right", to_json(max_r->delta_right)}, {"min_right", to_json(min_r->delta_right)}}}};
  }
  return rec;
}

// Every truncated scheme's Right density at level h lies within the bounds.
VerificationRecord right_bounds(const SuiteParams& p) {
  VerificationRecord rec;
  const std::size_t k = p.k.value_or(4);
  rec.params = {{"k", k}};
  rec.params.update(strategy_json(p));
  std::vector<DensityBounds> bounds;
  for (std::size_t h = 1; h <= k; ++h) bounds.push_back(right_density_bounds(h, k));
  SchemeIterator it(PrimeBasis::first(k), strategy_of(p), p.survey.exhaustive_cap);
  std::uint64_t checked = 0;
  while (auto s = it.next()) {
    for (std::size_t h = 1; h <= k; ++h) {
      const auto t = s->truncated(h);
      const auto split = split_left_right(t, k, p.survey.materialize_cap, p.survey.sieve);
      const auto& b = bounds[h - 1];
      ++checked;
      if (split.delta_right < b.lower || split.delta_right > b.upper) {
        rec.outcome = Outcome::Fail;
        rec.witness = Json{{"scheme", scheme_to_json(t)},
                           {"k", k},
                           {"expected", {{"lower", to_json(b.lower)}, {"upper", to_json(b.upper)}}},
                           {"actual", to_json(split.delta_right)}};
        return rec;
      }
    }
  }
  Json per_level = Json::array();
  for (std::size_t h = 1; h <= k; ++h)
    per_level.push_back({{"h", h}, {"lower", to_json(bounds[h - 1].lower)}, {"upper", to_json(bounds[h - 1].upper)}});
  rec.details = {{"checked", checked}, {"bounds", per_level}};
  return rec;
}

// Left-interval minimum against p_k / 2; informational only.
VerificationRecord left_threshold_survey(const SuiteParams& p) {
  VerificationRecord rec;
  const std::size_t k = p.k.value_or(35);
  SuiteParams q = p;
  if (!q.samples) q.samples = 10000;
  rec.params = {{"k", k}, {"role", "left"}};
  rec.params.update(strategy_json(q));
  const auto rep = extrema_survey(k, IntervalRole::Left, strategy_of(q), std::nullopt, p.survey);
  rec.outcome = Outcome::ReportOnly;
  rec.details = to_json(rep);
  return rec;
}

// Desk-scale scan of the even-x pipeline, plus c_k_x >= 3 above the threshold.
VerificationRecord goldbach_scan(const SuiteParams& p) {
  VerificationRecord rec;
  const std::uint64_t lo = p.lo.value_or(6);
  const std::uint64_t hi = p.hi.value_or(1'000'000);
  const std::uint64_t stride = p.stride.value_or(2);
  rec.params = {{"lo", lo}, {"hi", hi}, {"stride", stride}};
  const auto sum = scan_range(lo, hi, stride);
  rec.details = to_json(sum);
  rec.details.erase("violations");
  if (!sum.violations.empty()) {
    rec.outcome = Outcome::Fail;
    rec.witness = to_json(sum.violations.front());
  } else if (sum.min_c_above_threshold && *sum.min_c_above_threshold < 3) {
    rec.outcome = Outcome::Fail;
    rec.witness = Json{{"x", *sum.min_c_above_threshold_at},
                       {"expected", "c_k_x >= 3"},
                       {"actual", *sum.min_c_above_threshold}};
  }
  return rec;
}

}  // namespace

const std::vector<SuiteInfo>& suite_list() {
  static const std::vector<SuiteInfo> list = {
      {"prop-2.14", "count over [1, m_k] equals c_k = (p_1 - 1)(p_2 - 2)...(p_k - 2)"},
      {"thm-4.13", "mean density over an interval across all schemes equals delta_k"},
      {"lemma-5.2", "density over [1, n] lies strictly inside the q = floor(n / m_k) sandwich"},
      {"prop-2.16", "permitted indices over [1, p_{k+1} m_k] are uniform modulo p_{k+1}"},
      {"lemma-6.2", "c_L + c_R = c_k and f_k maps Left extrema onto Right extrema"},
      {"lemma-7.1", "Right-interval densities of truncated schemes stay within their bounds"},
      {"lemma-7.6-survey", "Left-interval minimum count versus p_k / 2 (report only)"},
      {"thm-8.8-scan", "even-x soundness, symmetry and g(x) >= floor((c - 2) / 2); c >= 3 above p_35^2"},
  };
  return list;
}

VerificationRecord run_suite(const std::string& id, const SuiteParams& params) {
  VerificationRecord rec;
  if (id == "prop-2.14") rec = closed_form(params);
  else if (id == "thm-4.13") rec = average_density(params);
  else if (id == "lemma-5.2") rec = interval_bounds(params);
  else if (id == "prop-2.16") rec = uniform_residues(params);
  else if (id == "lemma-6.2") rec = bijection(params);
  else if (id == "lemma-7.1") rec = right_bounds(params);
  else if (id == "lemma-7.6-survey") rec = left_threshold_survey(params);
  else if (id == "thm-8.8-scan") rec = goldbach_scan(params);
  else throw ValidationError("unknown suite '" + id + "' (see verify --list)");
  rec.suite = id;
  return rec;
}

}  // namespace rsieve
