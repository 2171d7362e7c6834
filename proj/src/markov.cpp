#include "thermo/markov.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace thermo {

namespace {

constexpr double kRowTol = 1e-12;

template <class T>
void reorder_lex(std::vector<Word>& states, std::vector<std::vector<T>>& p, std::vector<T>& pi) {
  std::vector<std::size_t> perm(states.size());
  std::iota(perm.begin(), perm.end(), 0);
  std::sort(perm.begin(), perm.end(), [&](std::size_t a, std::size_t b) { return states[a] < states[b]; });
  std::vector<Word> s2;
  std::vector<std::vector<T>> p2(states.size(), std::vector<T>(states.size()));
  std::vector<T> pi2;
  for (std::size_t i = 0; i < perm.size(); ++i) {
    s2.push_back(states[perm[i]]);
    pi2.push_back(pi[perm[i]]);
    for (std::size_t j = 0; j < perm.size(); ++j) p2[i][j] = p[perm[i]][perm[j]];
  }
  states = std::move(s2);
  p = std::move(p2);
  pi = std::move(pi2);
}

template <class T>
void check_shape(const Sft& space, std::size_t order, const std::vector<Word>& states,
                 const std::vector<std::vector<T>>& p, const std::vector<T>& pi) {
  if (order == 0) throw SpecError("Markov order must be >= 1");
  if (states != space.blocks(order))
    throw SpecError("Markov states must be exactly the allowable blocks of length " + std::to_string(order));
  if (p.size() != states.size() || pi.size() != states.size())
    throw SpecError("Markov transition matrix / stationary vector size mismatch");
  for (const auto& row : p)
    if (row.size() != states.size()) throw SpecError("Markov transition matrix must be square");
}

}  // namespace

MarkovMeasure::MarkovMeasure(std::shared_ptr<const Sft> space, std::size_t order, std::vector<Word> states,
                             std::vector<std::vector<double>> transition, std::vector<double> stationary)
    : space_(std::move(space)), order_(order), states_(std::move(states)),
      transition_(std::move(transition)), stationary_(std::move(stationary)) {
  if (transition_.size() == states_.size() && stationary_.size() == states_.size())
    reorder_lex(states_, transition_, stationary_);
  check_shape(*space_, order_, states_, transition_, stationary_);
  index_states();
  validate_float();
}

MarkovMeasure::MarkovMeasure(std::shared_ptr<const Sft> space, std::size_t order, std::vector<Word> states,
                             std::vector<std::vector<Rational>> transition, std::vector<Rational> stationary)
    : space_(std::move(space)), order_(order), states_(std::move(states)) {
  if (transition.size() == states_.size() && stationary.size() == states_.size())
    reorder_lex(states_, transition, stationary);
  check_shape(*space_, order_, states_, transition, stationary);
  exact_transition_ = std::move(transition);
  exact_stationary_ = std::move(stationary);
  for (const auto& row : *exact_transition_) {
    transition_.emplace_back();
    for (const auto& q : row) transition_.back().push_back(to_double(q));
  }
  for (const auto& q : *exact_stationary_) stationary_.push_back(to_double(q));
  index_states();
  validate_exact();
}

MarkovMeasure MarkovMeasure::bernoulli(std::shared_ptr<const Sft> space, std::vector<Rational> weights) {
  const std::size_t n = space->size();
  if (weights.size() != n) throw SpecError("Bernoulli weights must cover the alphabet");
  Rational total = 0;
  for (const auto& w : weights) {
    if (w < 0) throw SpecError("Bernoulli weights must be nonnegative");
    total += w;
  }
  if (total == 0) throw SpecError("Bernoulli weights must not all vanish");
  std::vector<Rational> probs;
  for (const auto& w : weights) probs.push_back(w / total);
  std::vector<std::vector<Rational>> p(n, probs);
  std::vector<Word> states;
  for (std::size_t i = 0; i < n; ++i) states.push_back({static_cast<Symbol>(i)});
  return MarkovMeasure(std::move(space), 1, std::move(states), std::move(p), probs);
}

const std::vector<std::vector<Rational>>& MarkovMeasure::exact_transition() const {
  if (!exact_transition_) throw SpecError("measure has no exact data");
  return *exact_transition_;
}

const std::vector<Rational>& MarkovMeasure::exact_stationary() const {
  if (!exact_stationary_) throw SpecError("measure has no exact data");
  return *exact_stationary_;
}

void MarkovMeasure::index_states() {
  const std::size_t L = space_->size();
  code_to_state_.assign(code_space(L, order_), -1);
  for (std::size_t i = 0; i < states_.size(); ++i) code_to_state_[encode(states_[i], L)] = static_cast<long>(i);
}

std::optional<std::size_t> MarkovMeasure::state_index(std::span<const Symbol> block) const {
  if (block.size() != order_) return std::nullopt;
  for (Symbol s : block)
    if (s >= space_->size()) return std::nullopt;
  long idx = code_to_state_[encode(block, space_->size())];
  if (idx < 0) return std::nullopt;
  return static_cast<std::size_t>(idx);
}

std::optional<std::size_t> MarkovMeasure::successor(std::size_t from, Symbol s) const {
  const Word& st = states_[from];
  if (!space_->allowed(st.back(), s)) return std::nullopt;
  Word next(st.begin() + 1, st.end());
  next.push_back(s);
  return state_index(next);
}

void MarkovMeasure::validate_float() const {
  const std::size_t n = states_.size();
  double pi_total = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (!(stationary_[i] >= 0) || !std::isfinite(stationary_[i])) throw SpecError("stationary vector must be nonnegative");
    pi_total += stationary_[i];
    double row = 0;
    for (std::size_t j = 0; j < n; ++j) {
      double p = transition_[i][j];
      if (!(p >= 0) || !std::isfinite(p)) throw SpecError("transition probabilities must be nonnegative");
      if (p > 0) {
        Word cat = states_[i];
        cat.push_back(states_[j].back());
        if (!std::equal(states_[i].begin() + 1, states_[i].end(), states_[j].begin()) || !space_->contains(cat))
          throw SpecError("transition probability on a disallowed transition");
      }
      row += p;
    }
    if (std::abs(row - 1.0) > kRowTol) throw SpecError("transition matrix rows must sum to 1");
  }
  if (std::abs(pi_total - 1.0) > kRowTol) throw SpecError("stationary vector must sum to 1");
  for (std::size_t j = 0; j < n; ++j) {
    double acc = 0;
    for (std::size_t i = 0; i < n; ++i) acc += stationary_[i] * transition_[i][j];
    if (std::abs(acc - stationary_[j]) > kRowTol) throw SpecError("stationary vector is not invariant");
  }
}

void MarkovMeasure::validate_exact() const {
  const auto& p = *exact_transition_;
  const auto& pi = *exact_stationary_;
  const std::size_t n = states_.size();
  Rational pi_total = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (pi[i] < 0) throw SpecError("stationary vector must be nonnegative");
    pi_total += pi[i];
    Rational row = 0;
    for (std::size_t j = 0; j < n; ++j) {
      if (p[i][j] < 0) throw SpecError("transition probabilities must be nonnegative");
      if (p[i][j] > 0) {
        Word cat = states_[i];
        cat.push_back(states_[j].back());
        if (!std::equal(states_[i].begin() + 1, states_[i].end(), states_[j].begin()) || !space_->contains(cat))
          throw SpecError("transition probability on a disallowed transition");
      }
      row += p[i][j];
    }
    if (row != 1) throw SpecError("transition matrix rows must sum to exactly 1");
  }
  if (pi_total != 1) throw SpecError("stationary vector must sum to exactly 1");
  for (std::size_t j = 0; j < n; ++j) {
    Rational acc = 0;
    for (std::size_t i = 0; i < n; ++i) acc += pi[i] * p[i][j];
    if (acc != pi[j]) throw SpecError("stationary vector is not invariant");
  }
}

double MarkovMeasure::cylinder(std::span<const Symbol> u) const {
  if (exact()) return to_double(cylinder_exact(u));
  if (!space_->contains(u)) return 0.0;
  if (u.size() < order_) {
    double total = 0;
    for (std::size_t i = 0; i < states_.size(); ++i)
      if (std::equal(u.begin(), u.end(), states_[i].begin())) total += stationary_[i];
    return total;
  }
  auto idx = state_index(u.first(order_));
  if (!idx) return 0.0;
  double mass = stationary_[*idx];
  std::size_t cur = *idx;
  for (std::size_t i = order_; i < u.size() && mass > 0; ++i) {
    auto next = successor(cur, u[i]);
    if (!next) return 0.0;
    mass *= transition_[cur][*next];
    cur = *next;
  }
  return mass;
}

Rational MarkovMeasure::cylinder_exact(std::span<const Symbol> u) const {
  const auto& p = exact_transition();
  const auto& pi = exact_stationary();
  if (!space_->contains(u)) return 0;
  if (u.size() < order_) {
    Rational total = 0;
    for (std::size_t i = 0; i < states_.size(); ++i)
      if (std::equal(u.begin(), u.end(), states_[i].begin())) total += pi[i];
    return total;
  }
  auto idx = state_index(u.first(order_));
  if (!idx) return 0;
  Rational mass = pi[*idx];
  std::size_t cur = *idx;
  for (std::size_t i = order_; i < u.size() && mass != 0; ++i) {
    auto next = successor(cur, u[i]);
    if (!next) return 0;
    mass *= p[cur][*next];
    cur = *next;
  }
  return mass;
}

}  // namespace thermo
