#include "thermo/factor.hpp"

#include <algorithm>
#include <bit>

namespace thermo {

ImageLanguage::ImageLanguage(std::shared_ptr<const Sft> domain, std::vector<std::string> alphabet,
                             std::vector<Symbol> symbol_map)
    : domain_(std::move(domain)), alphabet_(std::move(alphabet)), map_(std::move(symbol_map)) {
  preimage_mask_.assign(alphabet_.size(), 0);
  for (std::size_t s = 0; s < map_.size(); ++s) preimage_mask_.at(map_[s]) |= std::uint64_t{1} << s;
}

std::uint64_t ImageLanguage::step(std::uint64_t set, Symbol c) const {
  std::uint64_t next = 0;
  std::uint64_t targets = preimage_mask_[c];
  while (targets) {
    int t = std::countr_zero(targets);
    targets &= targets - 1;
    std::uint64_t from = set;
    while (from) {
      int s = std::countr_zero(from);
      from &= from - 1;
      if (domain_->allowed(static_cast<Symbol>(s), static_cast<Symbol>(t))) {
        next |= std::uint64_t{1} << t;
        break;
      }
    }
  }
  return next;
}

std::uint64_t ImageLanguage::last_symbol_set(std::span<const Symbol> y) const {
  if (y.empty()) return domain_->size() == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << domain_->size()) - 1;
  for (Symbol c : y)
    if (c >= alphabet_.size()) return 0;
  std::uint64_t set = preimage_mask_[y[0]];
  for (std::size_t i = 1; i < y.size() && set; ++i) set = step(set, y[i]);
  return set;
}

bool ImageLanguage::contains(std::span<const Symbol> y) const { return last_symbol_set(y) != 0; }

std::vector<Word> ImageLanguage::blocks(std::size_t n) const {
  if (n == 0) return {Word{}};
  std::vector<Word> out;
  Word cur;
  auto rec = [&](auto&& self, std::uint64_t set) -> void {
    if (cur.size() == n) {
      out.push_back(cur);
      return;
    }
    for (std::size_t c = 0; c < alphabet_.size(); ++c) {
      std::uint64_t next = cur.empty() ? preimage_mask_[c] : step(set, static_cast<Symbol>(c));
      if (!next) continue;
      cur.push_back(static_cast<Symbol>(c));
      self(self, next);
      cur.pop_back();
    }
  };
  rec(rec, 0);
  return out;
}

bool ImageLanguage::contains_periodic(std::span<const Symbol> block) const {
  // Nodes (domain symbol s, phase i) with π(s) = block[i]; b^∞ ∈ Y iff this
  // finite graph has a cycle. Prune nodes without successors to a fixpoint.
  const std::size_t q = block.size();
  const std::size_t L = domain_->size();
  if (q == 0) return false;
  std::vector<std::vector<char>> alive(q, std::vector<char>(L, 0));
  for (std::size_t i = 0; i < q; ++i)
    for (std::size_t s = 0; s < L; ++s) alive[i][s] = map_[s] == block[i];
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t i = 0; i < q; ++i)
      for (std::size_t s = 0; s < L; ++s) {
        if (!alive[i][s]) continue;
        bool has_next = false;
        for (std::size_t t = 0; t < L && !has_next; ++t)
          has_next = alive[(i + 1) % q][t] && domain_->allowed(static_cast<Symbol>(s), static_cast<Symbol>(t));
        if (!has_next) {
          alive[i][s] = 0;
          changed = true;
        }
      }
  }
  for (const auto& row : alive)
    for (char a : row)
      if (a) return true;
  return false;
}

OneBlockFactor::OneBlockFactor(std::shared_ptr<const Sft> domain, std::vector<std::string> target_alphabet,
                               std::vector<Symbol> symbol_map)
    : domain_(std::move(domain)), target_(std::move(target_alphabet)), map_(std::move(symbol_map)) {
  if (map_.size() != domain_->size()) throw SpecError("symbol map must be total on the domain alphabet");
  std::vector<char> hit(target_.size(), 0);
  for (Symbol t : map_) {
    if (t >= target_.size()) throw SpecError("symbol map points outside the target alphabet");
    hit[t] = 1;
  }
  if (std::find(hit.begin(), hit.end(), 0) != hit.end()) throw SpecError("symbol map is not surjective");
  for (std::size_t i = 0; i < target_.size(); ++i) {
    if (target_[i].empty() || target_[i].find('.') != std::string::npos)
      throw SpecError("symbol names must be non-empty and contain no '.'");
    for (std::size_t j = 0; j < i; ++j)
      if (target_[i] == target_[j]) throw SpecError("duplicate target symbol '" + target_[i] + "'");
  }
  image_ = std::make_shared<ImageLanguage>(domain_, target_, map_);
}

OneBlockFactor OneBlockFactor::from_names(std::shared_ptr<const Sft> domain,
                                          const std::map<std::string, std::string>& map) {
  std::vector<std::string> target;
  std::vector<Symbol> sym;
  for (const auto& name : domain->alphabet()) {
    auto it = map.find(name);
    if (it == map.end()) throw SpecError("symbol map has no entry for '" + name + "'");
    auto pos = std::find(target.begin(), target.end(), it->second);
    if (pos == target.end()) {
      target.push_back(it->second);
      pos = target.end() - 1;
    }
    sym.push_back(static_cast<Symbol>(pos - target.begin()));
  }
  if (map.size() != domain->size()) throw SpecError("symbol map has entries for unknown domain symbols");
  return OneBlockFactor(std::move(domain), std::move(target), std::move(sym));
}

OneBlockFactor OneBlockFactor::identity(std::shared_ptr<const Sft> domain) {
  std::vector<Symbol> sym(domain->size());
  for (std::size_t i = 0; i < sym.size(); ++i) sym[i] = static_cast<Symbol>(i);
  auto names = domain->alphabet();
  return OneBlockFactor(std::move(domain), std::move(names), std::move(sym));
}

Word OneBlockFactor::map(std::span<const Symbol> u) const {
  Word out;
  out.reserve(u.size());
  for (Symbol s : u) out.push_back(map_.at(s));
  return out;
}

std::vector<Symbol> OneBlockFactor::preimages(Symbol c) const {
  std::vector<Symbol> out;
  for (std::size_t s = 0; s < map_.size(); ++s)
    if (map_[s] == c) out.push_back(static_cast<Symbol>(s));
  return out;
}

bool OneBlockFactor::is_identity() const {
  for (std::size_t s = 0; s < map_.size(); ++s)
    if (map_[s] != s) return false;
  return target_.size() == map_.size();
}

std::vector<Word> OneBlockFactor::image_blocks(std::size_t n) const { return image_->blocks(n); }

std::vector<Word> OneBlockFactor::fiber_words(std::span<const Symbol> y) const {
  std::vector<Word> out;
  for (Symbol c : y)
    if (c >= target_.size()) return out;
  Word cur;
  auto rec = [&](auto&& self) -> void {
    if (cur.size() == y.size()) {
      out.push_back(cur);
      return;
    }
    for (Symbol s : preimages(y[cur.size()])) {
      if (!cur.empty() && !domain_->allowed(cur.back(), s)) continue;
      cur.push_back(s);
      self(self);
      cur.pop_back();
    }
  };
  rec(rec);
  return out;
}

FiberTable OneBlockFactor::fiber_table(std::size_t n) const {
  FiberTable table;
  table.depth = n;
  for (Word& u : domain_->blocks(n)) table.fibers[map(u)].push_back(std::move(u));
  return table;
}

std::vector<PeriodicPoint> OneBlockFactor::image_periodic_points(std::size_t max_period) const {
  if (max_period == 0) throw SpecError("max_period must be >= 1");
  std::vector<PeriodicPoint> out;
  for (std::size_t q = 1; q <= max_period; ++q)
    for (Word& b : image_->blocks(q))
      if (is_canonical_primitive(b) && image_->contains_periodic(b)) out.push_back({std::move(b)});
  return out;
}

namespace {

void require_same_space(const MarkovMeasure& mu, const OneBlockFactor& pi) {
  if (!(mu.space() == pi.domain())) throw SpecError("measure does not live on the factor's domain");
}

// Neumaier summation.
double compensated_sum(const std::vector<double>& xs) {
  double sum = 0, comp = 0;
  for (double x : xs) {
    double t = sum + x;
    if (std::abs(sum) >= std::abs(x))
      comp += (sum - t) + x;
    else
      comp += (x - t) + sum;
    sum = t;
  }
  return sum + comp;
}

template <class T, class Pi, class P>
std::vector<T> forward_pass(const MarkovMeasure& mu, const OneBlockFactor& pi, std::span<const Symbol> y,
                            const Pi& stationary, const P& transition) {
  const auto& states = mu.states();
  const std::size_t k = mu.order();
  std::vector<T> v(states.size(), T(0));
  for (std::size_t s = 0; s < states.size(); ++s) {
    bool match = true;
    for (std::size_t i = 0; i < std::min(k, y.size()) && match; ++i) match = pi.map(states[s][i]) == y[i];
    if (match) v[s] = stationary[s];
  }
  if (y.size() <= k) return v;  // states whose prefix matches y
  for (std::size_t i = k; i < y.size(); ++i) {
    std::vector<T> next(states.size(), T(0));
    for (std::size_t s = 0; s < states.size(); ++s) {
      if (v[s] == T(0)) continue;
      for (Symbol c : pi.preimages(y[i])) {
        auto t = mu.successor(s, c);
        if (!t) continue;
        next[*t] += v[s] * transition[s][*t];
      }
    }
    v = std::move(next);
  }
  return v;
}

}  // namespace

double pushforward_cylinder(const MarkovMeasure& mu, const OneBlockFactor& pi, std::span<const Symbol> y) {
  require_same_space(mu, pi);
  if (mu.exact()) return to_double(pushforward_cylinder_exact(mu, pi, y));
  if (y.empty()) return 1.0;
  return compensated_sum(forward_pass<double>(mu, pi, y, mu.stationary(), mu.transition()));
}

Rational pushforward_cylinder_exact(const MarkovMeasure& mu, const OneBlockFactor& pi, std::span<const Symbol> y) {
  require_same_space(mu, pi);
  if (y.empty()) return 1;
  Rational total = 0;
  for (const auto& x : forward_pass<Rational>(mu, pi, y, mu.exact_stationary(), mu.exact_transition())) total += x;
  return total;
}

}  // namespace thermo
