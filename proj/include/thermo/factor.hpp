#pragma once

#include "thermo/markov.hpp"
#include "thermo/sft.hpp"

#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <vector>

namespace thermo {

/// The language B(Y) of the image Y = π(X) of a one-block code on an SFT.
/// Membership runs the subset construction over preimage symbols.
class ImageLanguage final : public Language {
 public:
  ImageLanguage(std::shared_ptr<const Sft> domain, std::vector<std::string> alphabet, std::vector<Symbol> symbol_map);

  const std::vector<std::string>& alphabet() const override { return alphabet_; }
  bool contains(std::span<const Symbol> y) const override;
  std::vector<Word> blocks(std::size_t n) const override;

  /// Domain symbols that can sit at the last position of a preimage of y.
  std::uint64_t last_symbol_set(std::span<const Symbol> y) const;
  /// True iff block^∞ is a point of Y.
  bool contains_periodic(std::span<const Symbol> block) const;

 private:
  std::uint64_t step(std::uint64_t set, Symbol c) const;

  std::shared_ptr<const Sft> domain_;
  std::vector<std::string> alphabet_;
  std::vector<Symbol> map_;
  std::vector<std::uint64_t> preimage_mask_;  // per target symbol
};

/// Image words of length n with their preimage words.
struct FiberTable {
  std::size_t depth = 0;
  std::map<Word, std::vector<Word>> fibers;
};

/// One-block factor map π: X → Y = π(X). Y is never given independently;
/// the target alphabet is the set of symbols actually hit.
class OneBlockFactor {
 public:
  /// `symbol_map[i]` is the target index of domain symbol i; every target
  /// symbol must be hit.
  OneBlockFactor(std::shared_ptr<const Sft> domain, std::vector<std::string> target_alphabet,
                 std::vector<Symbol> symbol_map);
  /// Target alphabet in order of first appearance along the domain alphabet.
  static OneBlockFactor from_names(std::shared_ptr<const Sft> domain, const std::map<std::string, std::string>& map);
  static OneBlockFactor identity(std::shared_ptr<const Sft> domain);

  const Sft& domain() const { return *domain_; }
  std::shared_ptr<const Sft> domain_ptr() const { return domain_; }
  const std::vector<std::string>& target_alphabet() const { return target_; }
  const ImageLanguage& image() const { return *image_; }
  std::shared_ptr<const ImageLanguage> image_ptr() const { return image_; }
  Symbol map(Symbol s) const { return map_[s]; }
  const std::vector<Symbol>& symbol_map() const { return map_; }
  Word map(std::span<const Symbol> u) const;
  /// Domain symbols mapping to target symbol c, ascending.
  std::vector<Symbol> preimages(Symbol c) const;
  bool is_identity() const;

  /// B_n(Y), sorted.
  std::vector<Word> image_blocks(std::size_t n) const;
  /// All u in B_n(X) with π(u) = y, lexicographic; empty iff y ∉ B_n(Y).
  std::vector<Word> fiber_words(std::span<const Symbol> y) const;
  FiberTable fiber_table(std::size_t n) const;
  /// Canonical primitive blocks b with b^∞ ∈ Y, period <= max_period.
  std::vector<PeriodicPoint> image_periodic_points(std::size_t max_period) const;

 private:
  std::shared_ptr<const Sft> domain_;
  std::vector<std::string> target_;
  std::vector<Symbol> map_;
  std::shared_ptr<const ImageLanguage> image_;
};

/// πμ[y] as the sum of μ over the fiber of y, by a forward pass over the
/// chain states. Float path uses compensated summation.
double pushforward_cylinder(const MarkovMeasure& mu, const OneBlockFactor& pi, std::span<const Symbol> y);
Rational pushforward_cylinder_exact(const MarkovMeasure& mu, const OneBlockFactor& pi, std::span<const Symbol> y);

}  // namespace thermo
