#pragma once

#include "thermo/sft.hpp"

#include <memory>
#include <optional>
#include <vector>

namespace thermo {

/// Stationary Markov measure of order k on a one-step SFT, stored as a
/// 1-step chain on the k-block states (lexicographic order).
///
/// The exact form keeps rational transition data alongside its float image;
/// every float query is then derived from the rationals.
class MarkovMeasure {
 public:
  MarkovMeasure(std::shared_ptr<const Sft> space, std::size_t order, std::vector<Word> states,
                std::vector<std::vector<double>> transition, std::vector<double> stationary);
  MarkovMeasure(std::shared_ptr<const Sft> space, std::size_t order, std::vector<Word> states,
                std::vector<std::vector<Rational>> transition, std::vector<Rational> stationary);

  /// i.i.d. measure with the given symbol weights; the SFT must allow every
  /// transition between positively weighted symbols.
  static MarkovMeasure bernoulli(std::shared_ptr<const Sft> space, std::vector<Rational> weights);

  bool exact() const { return exact_transition_.has_value(); }
  std::size_t order() const { return order_; }
  const Sft& space() const { return *space_; }
  std::shared_ptr<const Sft> space_ptr() const { return space_; }
  const std::vector<Word>& states() const { return states_; }
  const std::vector<std::vector<double>>& transition() const { return transition_; }
  const std::vector<double>& stationary() const { return stationary_; }
  const std::vector<std::vector<Rational>>& exact_transition() const;
  const std::vector<Rational>& exact_stationary() const;

  std::optional<std::size_t> state_index(std::span<const Symbol> block) const;
  /// Index of the state reached from `from` by appending symbol s, if s may follow.
  std::optional<std::size_t> successor(std::size_t from, Symbol s) const;

  /// μ[u]; 1 for the empty word, 0 for non-allowable words.
  double cylinder(std::span<const Symbol> u) const;
  Rational cylinder_exact(std::span<const Symbol> u) const;

 private:
  void index_states();
  void validate_float() const;
  void validate_exact() const;

  std::shared_ptr<const Sft> space_;
  std::size_t order_;
  std::vector<Word> states_;
  std::vector<long> code_to_state_;
  std::vector<std::vector<double>> transition_;
  std::vector<double> stationary_;
  std::optional<std::vector<std::vector<Rational>>> exact_transition_;
  std::optional<std::vector<Rational>> exact_stationary_;
};

}  // namespace thermo
