#pragma once

#include "thermo/language.hpp"
#include "thermo/log_linear.hpp"

#include <map>
#include <memory>
#include <optional>
#include <vector>

namespace thermo {

/// f(x) = values[x_1 … x_r] on a subshift language. Values are natural logs
/// of multiplicative weights. An exact potential carries LogLinear values and
/// their float images.
class LocallyConstantPotential {
 public:
  LocallyConstantPotential(std::shared_ptr<const Language> space, std::size_t range, std::map<Word, double> values);
  LocallyConstantPotential(std::shared_ptr<const Language> space, std::size_t range,
                           std::map<Word, LogLinear> values);
  static LocallyConstantPotential zero(std::shared_ptr<const Language> space, std::size_t range = 1);

  std::size_t range() const { return range_; }
  const Language& space() const { return *space_; }
  std::shared_ptr<const Language> space_ptr() const { return space_; }
  const std::vector<Word>& windows() const { return windows_; }

  double value(std::span<const Symbol> window) const;
  bool exact() const { return !exact_.empty(); }
  const LogLinear& exact_value(std::span<const Symbol> window) const;
  bool is_zero() const;
  double max_value() const;
  double min_value() const;

 private:
  std::size_t index(std::span<const Symbol> window) const;
  void index_windows();

  std::shared_ptr<const Language> space_;
  std::size_t range_;
  std::vector<Word> windows_;      // B_r, lexicographic
  std::vector<long> code_to_slot_;
  std::vector<double> values_;     // aligned with windows_
  std::vector<LogLinear> exact_;   // empty unless exact
};

/// sup of S_n f over the cylinder [u], n = |u| >= 1.
double birkhoff_sup(const LocallyConstantPotential& f, std::span<const Symbol> u);
double birkhoff_inf(const LocallyConstantPotential& f, std::span<const Symbol> u);
LogLinear birkhoff_sup_exact(const LocallyConstantPotential& f, std::span<const Symbol> u);

/// Σ_{i<n} f(word[i..i+r)); requires |word| >= n + r - 1.
double birkhoff_on_word(const LocallyConstantPotential& f, std::span<const Symbol> word, std::size_t n);
LogLinear birkhoff_on_word_exact(const LocallyConstantPotential& f, std::span<const Symbol> word, std::size_t n);
/// S_n f at the periodic point block^∞.
double periodic_birkhoff(const LocallyConstantPotential& f, std::span<const Symbol> block, std::size_t n);
LogLinear periodic_birkhoff_exact(const LocallyConstantPotential& f, std::span<const Symbol> block, std::size_t n);

/// Per-cylinder extrema of S_n f over B_n.
struct CylinderSumTable {
  std::size_t depth = 0;
  std::vector<Word> words;
  std::vector<double> sup;
  std::vector<double> inf;
};
CylinderSumTable cylinder_sum_table(const LocallyConstantPotential& f, std::size_t n);

/// log M_n = max over n-cylinders of (sup − inf) of S_n f.
double log_variation_constant(const LocallyConstantPotential& f, std::size_t n);

}  // namespace thermo
