#pragma once

#include "thermo/language.hpp"
#include "thermo/numeric.hpp"

#include <optional>
#include <string>
#include <vector>

namespace thermo {

/// A periodic point (block)^∞, stored by its repeating block.
struct PeriodicPoint {
  Word block;
  std::size_t period() const { return block.size(); }
  friend bool operator==(const PeriodicPoint&, const PeriodicPoint&) = default;
};

/// One-step shift of finite type given by a 0/1 transition matrix.
///
/// Construction rejects stranded symbols (no outgoing or no incoming
/// transition), so every allowable word extends to a point in both
/// directions and B_0 = {ε} is never the whole language.
class Sft final : public Language {
 public:
  Sft(std::vector<std::string> alphabet, std::vector<std::vector<int>> transitions);

  static Sft full_shift(const std::vector<std::string>& alphabet);

  const std::vector<std::string>& alphabet() const override { return alphabet_; }
  bool contains(std::span<const Symbol> w) const override;
  std::vector<Word> blocks(std::size_t n) const override;

  std::size_t size() const { return alphabet_.size(); }
  bool allowed(Symbol a, Symbol b) const { return transitions_[a][b] != 0; }
  const std::vector<std::vector<int>>& transitions() const { return transitions_; }

  /// Strong connectivity of the transition digraph.
  bool is_irreducible() const;
  /// Smallest p such that any two allowable words can be joined by a bridge
  /// of length at most p; absent iff the shift is reducible.
  std::optional<std::size_t> weak_spec_number() const;
  /// Shortest, then lexicographically least, w with |w| <= max_gap and uwv
  /// allowable.
  std::optional<Word> bridge(std::span<const Symbol> u, std::span<const Symbol> v, std::size_t max_gap) const;
  /// Primitive periodic orbits of period <= max_period, one per rotation
  /// class (least rotation), ordered by period then lexicographically.
  std::vector<PeriodicPoint> periodic_points(std::size_t max_period) const;

  /// |B_n| computed as the entry sum of A^(n-1).
  BigInt block_count(std::size_t n) const;
  /// Number of points of period dividing q, i.e. trace(A^q).
  BigInt fixed_point_count(std::size_t q) const;

  friend bool operator==(const Sft& a, const Sft& b) {
    return a.alphabet_ == b.alphabet_ && a.transitions_ == b.transitions_;
  }

 private:
  std::vector<std::vector<BigInt>> matrix_power(std::size_t k) const;
  // Least path length (>= 1 edge) between every ordered pair, 0 if none.
  std::vector<std::vector<std::size_t>> distances() const;

  std::vector<std::string> alphabet_;
  std::vector<std::vector<int>> transitions_;
};

/// True iff block is its own least rotation and is not a proper power.
bool is_canonical_primitive(std::span<const Symbol> block);

}  // namespace thermo
