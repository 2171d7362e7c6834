#pragma once

#include "thermo/word.hpp"

#include <string>
#include <vector>

namespace thermo {

/// A factorial, right-extendable language: the set of finite blocks of a
/// one-sided subshift over a finite alphabet.
class Language {
 public:
  virtual ~Language() = default;

  virtual const std::vector<std::string>& alphabet() const = 0;
  virtual bool contains(std::span<const Symbol> w) const = 0;
  /// All words of length n, lexicographic in symbol indices. n = 0 gives {ε}.
  virtual std::vector<Word> blocks(std::size_t n) const;

  std::size_t alphabet_size() const { return alphabet().size(); }
  /// Allowable words e of length len with w·e in the language, lexicographic.
  std::vector<Word> extensions(std::span<const Symbol> w, std::size_t len) const;
};

}  // namespace thermo
