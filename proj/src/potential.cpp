#include "thermo/potential.hpp"

#include "thermo/sft.hpp"

#include <algorithm>
#include <cmath>

namespace thermo {

namespace {

void check_keys(const Language& space, std::size_t range, const std::vector<Word>& keys, const std::vector<Word>& expected) {
  if (range == 0) throw SpecError("potential range must be >= 1");
  for (const Word& w : keys)
    if (w.size() != range || !space.contains(w))
      throw SpecError("potential value on '" + format_word(w, space.alphabet()) + "' which is not an allowable " +
                      std::to_string(range) + "-block");
  if (keys != expected) throw SpecError("potential must define a value on every allowable " + std::to_string(range) + "-block");
}

}  // namespace

LocallyConstantPotential::LocallyConstantPotential(std::shared_ptr<const Language> space, std::size_t range,
                                                   std::map<Word, double> values)
    : space_(std::move(space)), range_(range) {
  std::vector<Word> keys;
  for (const auto& [w, v] : values) {
    if (!std::isfinite(v)) throw SpecError("potential values must be finite");
    keys.push_back(w);
  }
  windows_ = space_->blocks(range_);
  check_keys(*space_, range_, keys, windows_);
  for (const Word& w : windows_) values_.push_back(values.at(w));
  index_windows();
}

LocallyConstantPotential::LocallyConstantPotential(std::shared_ptr<const Language> space, std::size_t range,
                                                   std::map<Word, LogLinear> values)
    : space_(std::move(space)), range_(range) {
  std::vector<Word> keys;
  for (const auto& [w, v] : values) keys.push_back(w);
  windows_ = space_->blocks(range_);
  check_keys(*space_, range_, keys, windows_);
  for (const Word& w : windows_) {
    exact_.push_back(values.at(w));
    values_.push_back(exact_.back().to_double());
  }
  index_windows();
}

LocallyConstantPotential LocallyConstantPotential::zero(std::shared_ptr<const Language> space, std::size_t range) {
  std::map<Word, LogLinear> values;
  for (Word& w : space->blocks(range)) values.emplace(std::move(w), LogLinear{});
  return LocallyConstantPotential(std::move(space), range, std::move(values));
}

void LocallyConstantPotential::index_windows() {
  code_to_slot_.assign(code_space(space_->alphabet_size(), range_), -1);
  for (std::size_t i = 0; i < windows_.size(); ++i)
    code_to_slot_[encode(windows_[i], space_->alphabet_size())] = static_cast<long>(i);
}

std::size_t LocallyConstantPotential::index(std::span<const Symbol> window) const {
  if (window.size() != range_) throw SpecError("potential window has the wrong length");
  for (Symbol s : window)
    if (s >= space_->alphabet_size()) throw SpecError("potential window has an unknown symbol");
  long slot = code_to_slot_[encode(window, space_->alphabet_size())];
  if (slot < 0) throw SpecError("potential evaluated on a non-allowable window");
  return static_cast<std::size_t>(slot);
}

double LocallyConstantPotential::value(std::span<const Symbol> window) const { return values_[index(window)]; }

const LogLinear& LocallyConstantPotential::exact_value(std::span<const Symbol> window) const {
  if (!exact()) throw SpecError("potential has no exact values");
  return exact_[index(window)];
}

bool LocallyConstantPotential::is_zero() const {
  if (exact()) return std::all_of(exact_.begin(), exact_.end(), [](const LogLinear& v) { return v.is_zero(); });
  return std::all_of(values_.begin(), values_.end(), [](double v) { return v == 0.0; });
}

double LocallyConstantPotential::max_value() const { return *std::max_element(values_.begin(), values_.end()); }
double LocallyConstantPotential::min_value() const { return *std::min_element(values_.begin(), values_.end()); }

double birkhoff_on_word(const LocallyConstantPotential& f, std::span<const Symbol> word, std::size_t n) {
  const std::size_t r = f.range();
  if (word.size() < n + r - 1) throw SpecError("word too short for the requested Birkhoff sum");
  double total = 0;
  for (std::size_t i = 0; i < n; ++i) total += f.value(word.subspan(i, r));
  return total;
}

namespace {

LogLinear exact_on_word(const LocallyConstantPotential& f, std::span<const Symbol> word, std::size_t n) {
  LogLinear total;
  for (std::size_t i = 0; i < n; ++i) total += f.exact_value(word.subspan(i, f.range()));
  return total;
}

template <class Pick>
double birkhoff_extremum(const LocallyConstantPotential& f, std::span<const Symbol> u, Pick pick) {
  if (u.empty()) throw SpecError("Birkhoff sums need a word of length >= 1");
  if (!f.space().contains(u)) throw SpecError("word '" + format_word(u, f.space().alphabet()) + "' is not allowable");
  const std::size_t r = f.range();
  const std::size_t n = u.size();
  if (r == 1) return birkhoff_on_word(f, u, n);
  const std::size_t inner = n >= r ? n - r + 1 : 0;
  double base = inner ? birkhoff_on_word(f, u, inner) : 0.0;
  bool first = true;
  double best = 0;
  Word full(u.begin(), u.end());
  for (const Word& e : f.space().extensions(u, r - 1)) {
    full.resize(n);
    full.insert(full.end(), e.begin(), e.end());
    double tail = 0;
    for (std::size_t i = inner; i < n; ++i) tail += f.value(std::span<const Symbol>(full).subspan(i, r));
    best = first ? tail : pick(best, tail);
    first = false;
  }
  return base + best;
}

}  // namespace

double birkhoff_sup(const LocallyConstantPotential& f, std::span<const Symbol> u) {
  return birkhoff_extremum(f, u, [](double a, double b) { return std::max(a, b); });
}

double birkhoff_inf(const LocallyConstantPotential& f, std::span<const Symbol> u) {
  return birkhoff_extremum(f, u, [](double a, double b) { return std::min(a, b); });
}

LogLinear birkhoff_sup_exact(const LocallyConstantPotential& f, std::span<const Symbol> u) {
  if (u.empty()) throw SpecError("Birkhoff sums need a word of length >= 1");
  if (!f.space().contains(u)) throw SpecError("word '" + format_word(u, f.space().alphabet()) + "' is not allowable");
  const std::size_t r = f.range();
  const std::size_t n = u.size();
  if (r == 1) return exact_on_word(f, u, n);
  std::optional<LogLinear> best;
  Word full(u.begin(), u.end());
  for (const Word& e : f.space().extensions(u, r - 1)) {
    full.resize(n);
    full.insert(full.end(), e.begin(), e.end());
    LogLinear s = exact_on_word(f, full, n);
    if (!best || s > *best) best = std::move(s);
  }
  return *best;
}

LogLinear birkhoff_on_word_exact(const LocallyConstantPotential& f, std::span<const Symbol> word, std::size_t n) {
  if (word.size() < n + f.range() - 1) throw SpecError("word too short for the Birkhoff sum");
  return exact_on_word(f, word, n);
}

double periodic_birkhoff(const LocallyConstantPotential& f, std::span<const Symbol> block, std::size_t n) {
  Word w = repeat(block, (n + f.range() - 1) / block.size() + 1);
  return birkhoff_on_word(f, w, n);
}

LogLinear periodic_birkhoff_exact(const LocallyConstantPotential& f, std::span<const Symbol> block, std::size_t n) {
  Word w = repeat(block, (n + f.range() - 1) / block.size() + 1);
  return exact_on_word(f, w, n);
}

CylinderSumTable cylinder_sum_table(const LocallyConstantPotential& f, std::size_t n) {
  CylinderSumTable t;
  t.depth = n;
  t.words = f.space().blocks(n);
  for (const Word& u : t.words) {
    t.sup.push_back(birkhoff_sup(f, u));
    t.inf.push_back(birkhoff_inf(f, u));
  }
  return t;
}

double log_variation_constant(const LocallyConstantPotential& f, std::size_t n) {
  if (n == 0) throw SpecError("variation constants start at depth 1");
  const std::size_t r = f.range();
  if (r == 1) return 0.0;
  // On an SFT with no stranded symbols, the spread over [u] depends only on
  // the last r-1 symbols once n >= r-1, and every (r-1)-block is such a suffix.
  if (dynamic_cast<const Sft*>(&f.space()) && n >= r - 1) {
    double worst = 0;
    for (const Word& s : f.space().blocks(r - 1)) worst = std::max(worst, birkhoff_sup(f, s) - birkhoff_inf(f, s));
    return worst;
  }
  double worst = 0;
  for (const Word& u : f.space().blocks(n)) worst = std::max(worst, birkhoff_sup(f, u) - birkhoff_inf(f, u));
  return worst;
}

}  // namespace thermo
