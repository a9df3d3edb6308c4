#include "rsieve/selection.hpp"

#include <algorithm>
#include <random>

namespace rsieve {

namespace {

std::string level_tag(std::size_t h) { return "level " + std::to_string(h); }

LevelSelection make_level(std::uint32_t a, std::uint32_t b) {
  LevelSelection sel;
  sel.count = 2;
  sel.r = {std::min(a, b), std::max(a, b)};
  return sel;
}

LevelSelection make_single(std::uint32_t a) {
  LevelSelection sel;
  sel.count = 1;
  sel.r = {a, a};
  return sel;
}

void require_generic(const SelectionScheme& s, const char* op) {
  if (s.kind() != SchemeKind::Generic)
    throw UnsupportedKind(std::string(op) + ": only defined for Generic schemes");
}

}  // namespace

SelectionScheme::SelectionScheme(std::shared_ptr<const PrimeBasis> basis, std::vector<LevelSelection> levels,
                                 SchemeKind kind, std::optional<std::uint64_t> x)
    : basis_(std::move(basis)), levels_(std::move(levels)), kind_(kind), x_(x) {}

void SelectionScheme::validate_generic(const PrimeBasis& basis, std::span<const LevelSelection> levels) {
  if (levels.size() != basis.k())
    throw ValidationError("scheme has " + std::to_string(levels.size()) + " levels but basis has " +
                          std::to_string(basis.k()));
  for (std::size_t i = 0; i < levels.size(); ++i) {
    const std::size_t h = i + 1;
    const std::uint32_t p = basis.p(h);
    const auto& sel = levels[i];
    const std::size_t want = h == 1 ? 1 : 2;
    if (sel.count != want)
      throw ValidationError(level_tag(h) + " must have exactly " + std::to_string(want) + " selected residue" +
                            (want == 1 ? "" : "s") + ", got " + std::to_string(sel.count));
    for (std::uint32_t r : sel.residues())
      if (r >= p) throw ValidationError(level_tag(h) + ": residue " + std::to_string(r) + " >= p = " + std::to_string(p));
    if (sel.count == 2 && sel.r[0] >= sel.r[1])
      throw ValidationError(level_tag(h) + ": residues must be distinct and sorted");
  }
}

SelectionScheme SelectionScheme::generic(const PrimeBasis& basis,
                                         const std::vector<std::vector<std::uint32_t>>& residues) {
  std::vector<LevelSelection> levels;
  levels.reserve(residues.size());
  for (std::size_t i = 0; i < residues.size(); ++i) {
    const auto& list = residues[i];
    if (list.empty() || list.size() > 2)
      throw ValidationError(level_tag(i + 1) + " must have " + (i == 0 ? "exactly 1" : "exactly 2") +
                            " selected residue" + (i == 0 ? "" : "s") + ", got " + std::to_string(list.size()));
    if (list.size() == 2 && list[0] == list[1])
      throw ValidationError(level_tag(i + 1) + ": duplicate residue " + std::to_string(list[0]));
    levels.push_back(list.size() == 1 ? make_single(list[0]) : make_level(list[0], list[1]));
  }
  return generic(std::make_shared<const PrimeBasis>(basis), std::move(levels));
}

SelectionScheme SelectionScheme::generic(std::shared_ptr<const PrimeBasis> basis, std::vector<LevelSelection> levels) {
  validate_generic(*basis, levels);
  return SelectionScheme(std::move(basis), std::move(levels), SchemeKind::Generic, std::nullopt);
}

SelectionScheme SelectionScheme::for_even(std::uint64_t x) {
  auto basis = std::make_shared<const PrimeBasis>(PrimeBasis::for_even(x));
  std::vector<LevelSelection> levels;
  levels.reserve(basis->k());
  for (std::uint32_t p : basis->primes()) {
    const auto b = static_cast<std::uint32_t>(x % p);
    levels.push_back(b == 0 ? make_single(0) : make_level(0, b));
  }
  return SelectionScheme(std::move(basis), std::move(levels), SchemeKind::EvenAssociated, x);
}

const LevelSelection& SelectionScheme::level(std::size_t h) const {
  if (h == 0 || h > levels_.size()) throw DomainError("scheme level " + std::to_string(h) + " out of range");
  return levels_[h - 1];
}

SelectionScheme SelectionScheme::truncated(std::size_t h) const {
  require_generic(*this, "truncated");
  if (h == 0 || h > levels_.size()) throw DomainError("truncation level out of range");
  if (h == levels_.size()) return *this;
  auto basis = std::make_shared<const PrimeBasis>(basis_->truncated(h));
  return SelectionScheme(std::move(basis), std::vector<LevelSelection>(levels_.begin(), levels_.begin() + static_cast<std::ptrdiff_t>(h)),
                         SchemeKind::Generic, std::nullopt);
}

SelectionScheme SelectionScheme::extended(std::uint32_t r0, std::uint32_t r1) const {
  require_generic(*this, "extended");
  if (r0 == r1) throw ValidationError(level_tag(k() + 1) + ": duplicate residue " + std::to_string(r0));
  auto basis = std::make_shared<const PrimeBasis>(PrimeBasis::first(k() + 1));
  auto levels = levels_;
  levels.push_back(make_level(r0, r1));
  return generic(std::move(basis), std::move(levels));
}

SelectionScheme type_a_step(const SelectionScheme& scheme, std::size_t level) {
  require_generic(scheme, "type_a_step");
  const std::uint32_t p = scheme.basis().p(level);
  auto levels = std::vector<LevelSelection>(scheme.levels().begin(), scheme.levels().end());
  auto& sel = levels[level - 1];
  if (sel.count == 1) {
    sel = make_single((sel.r[0] + 1) % p);
  } else {
    sel = make_level((sel.r[0] + 1) % p, (sel.r[1] + 1) % p);
  }
  return SelectionScheme::generic(scheme.basis_ptr(), std::move(levels));
}

SelectionScheme type_b_step(const SelectionScheme& scheme, std::size_t level, std::uint32_t fixed, int direction) {
  require_generic(scheme, "type_b_step");
  if (level < 2) throw DomainError("type_b_step: level must be > 1");
  if (direction != 1 && direction != -1) throw DomainError("type_b_step: direction must be +1 or -1");
  const std::uint32_t p = scheme.basis().p(level);
  const auto& cur = scheme.level(level);
  if (!cur.contains(fixed))
    throw DomainError("type_b_step: " + std::to_string(fixed) + " is not selected at " + level_tag(level));
  const std::uint32_t moving = cur.r[0] == fixed ? cur.r[1] : cur.r[0];
  const std::uint32_t moved = direction == 1 ? (moving + 1) % p : (moving + p - 1) % p;
  if (moved == fixed)
    throw StepBlocked("type_b_step: moving " + std::to_string(moving) + " by " + std::to_string(direction) +
                      " collides with fixed residue " + std::to_string(fixed) + " at " + level_tag(level));
  auto levels = std::vector<LevelSelection>(scheme.levels().begin(), scheme.levels().end());
  levels[level - 1] = make_level(fixed, moved);
  return SelectionScheme::generic(scheme.basis_ptr(), std::move(levels));
}

std::uint64_t level_combinations(std::size_t level, std::uint32_t p) noexcept {
  return level == 1 ? p : static_cast<std::uint64_t>(p) * (p - 1) / 2;
}

LevelSelection unrank_level(std::size_t level, std::uint32_t p, std::uint64_t index) {
  if (index >= level_combinations(level, p)) throw DomainError("unrank_level: index out of range");
  if (level == 1) return make_single(static_cast<std::uint32_t>(index));
  std::uint32_t a = 0;
  while (index >= p - 1 - a) {
    index -= p - 1 - a;
    ++a;
  }
  return make_level(a, a + 1 + static_cast<std::uint32_t>(index));
}

BigInt combination_count(std::size_t k) {
  const auto basis = PrimeBasis::first(k);
  BigInt n = 1;
  for (std::size_t h = 1; h <= k; ++h) n *= level_combinations(h, basis.p(h));
  return n;
}

SchemeIterator::SchemeIterator(const PrimeBasis& basis, Strategy strategy, std::uint64_t exhaustive_cap)
    : basis_(std::make_shared<const PrimeBasis>(basis)), strategy_(strategy) {
  if (std::holds_alternative<Exhaustive>(strategy_)) {
    BigInt n = 1;
    for (std::size_t h = 1; h <= basis.k(); ++h) n *= level_combinations(h, basis.p(h));
    if (n > exhaustive_cap)
      throw CapExceeded("exhaustive walk needs N_k = " + n.get_str() + " schemes, cap is " +
                            std::to_string(exhaustive_cap),
                        n);
    total_ = n.get_ui();
    odometer_.assign(basis.k(), 0);
  } else {
    total_ = std::get<Sample>(strategy_).count;
  }
}

std::optional<SelectionScheme> SchemeIterator::next() {
  if (emitted_ >= total_) return std::nullopt;
  const std::uint64_t index = emitted_++;
  if (const auto* s = std::get_if<Sample>(&strategy_)) return sample_at(basis_, s->seed, index);

  std::vector<LevelSelection> levels;
  levels.reserve(odometer_.size());
  for (std::size_t i = 0; i < odometer_.size(); ++i) levels.push_back(unrank_level(i + 1, basis_->p(i + 1), odometer_[i]));
  for (std::size_t i = 0; i < odometer_.size(); ++i) {
    if (++odometer_[i] < level_combinations(i + 1, basis_->p(i + 1))) break;
    odometer_[i] = 0;
  }
  return SelectionScheme::generic(basis_, std::move(levels));
}

SelectionScheme SchemeIterator::sample_at(const std::shared_ptr<const PrimeBasis>& basis, std::uint64_t seed,
                                          std::uint64_t index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
  std::mt19937_64 rng(seq);
  std::vector<LevelSelection> levels;
  levels.reserve(basis->k());
  for (std::size_t h = 1; h <= basis->k(); ++h) {
    const std::uint32_t p = basis->p(h);
    std::uniform_int_distribution<std::uint64_t> pick(0, level_combinations(h, p) - 1);
    levels.push_back(unrank_level(h, p, pick(rng)));
  }
  return SelectionScheme::generic(basis, std::move(levels));
}

}  // namespace rsieve
