#pragma once

#include "thermo/factor.hpp"
#include "thermo/log_linear.hpp"
#include "thermo/potential.hpp"

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace thermo {

enum class SeqKind { FiberSum, Potential, Imported };
enum class NumericMode { Auto, Exact, Float };

std::string to_string(SeqKind kind);
std::string to_string(NumericMode mode);
NumericMode parse_numeric_mode(const std::string& text);

/// Per-depth values of a sequence {log f_n} that is locally constant at each
/// depth: log f_n(y) depends only on y_1 … y_n.
///
/// Level n stores the words of the underlying language of length n as
/// sorted codes, so level membership is language membership. On the counting
/// path each level also holds exact integer values f_n(y).
class SeqTable {
 public:
  struct Level {
    std::vector<std::uint64_t> codes;
    std::vector<double> log_values;
    std::vector<BigInt> counts;  // empty unless exact
  };

  SeqTable(SeqKind kind, std::vector<std::string> alphabet, std::vector<Level> levels,
           std::vector<double> log_variation = {});

  /// Builds a float table from explicit word values; depths 1..levels.size().
  static SeqTable from_values(SeqKind kind, std::vector<std::string> alphabet,
                              const std::vector<std::map<Word, double>>& levels);

  SeqKind kind() const { return kind_; }
  const std::vector<std::string>& alphabet() const { return alphabet_; }
  std::size_t alphabet_size() const { return alphabet_.size(); }
  std::size_t depth_max() const { return levels_.size(); }
  bool exact() const { return exact_; }

  const Level& level(std::size_t n) const;
  std::size_t size(std::size_t n) const { return level(n).codes.size(); }
  std::optional<std::size_t> find(std::size_t n, std::uint64_t code) const;
  std::optional<std::size_t> find(std::span<const Symbol> word) const;
  Word word(std::size_t n, std::size_t idx) const { return decode(level(n).codes[idx], n, alphabet_size()); }
  double log_value(std::size_t n, std::size_t idx) const { return level(n).log_values[idx]; }
  /// log f_{|w|}(w); throws if w is not in the table.
  double log_value(std::span<const Symbol> w) const;
  const BigInt& count(std::size_t n, std::size_t idx) const;
  LogLinear exact_log(std::size_t n, std::size_t idx) const;
  LogLinear exact_log(std::span<const Symbol> w) const;
  /// log M_n attached at construction, if any.
  std::optional<double> log_variation(std::size_t n) const;

 private:
  SeqKind kind_;
  std::vector<std::string> alphabet_;
  std::vector<Level> levels_;
  std::vector<double> log_variation_;
  bool exact_ = false;
};

/// The language spanned by a table's words. Beyond the stored depth a word
/// belongs iff all of its windows of length depth_max do.
class TableLanguage final : public Language {
 public:
  explicit TableLanguage(std::shared_ptr<const SeqTable> table) : table_(std::move(table)) {}

  const std::vector<std::string>& alphabet() const override { return table_->alphabet(); }
  bool contains(std::span<const Symbol> w) const override;
  std::vector<Word> blocks(std::size_t n) const override;

 private:
  std::shared_ptr<const SeqTable> table_;
};

/// g-table: log g_n(y) = log Σ_{u ∈ fiber(y)} exp(sup_[u] S_n f).
///
/// Representative points in the fiber are chosen independently per
/// cylinder, so the sup of the sum is the sum of per-cylinder sups. Values
/// are produced by a forward pass over (r-1)-block states of X along each
/// image word. Exact mode (f ≡ 0) yields integer fiber counts.
SeqTable build_g_table(const OneBlockFactor& pi, const LocallyConstantPotential& f, std::size_t depth_max,
                       NumericMode mode = NumericMode::Auto);

/// The direct potential sequence log f_n(u) = sup_[u] S_n f on B_n(X);
/// f must live on an SFT.
SeqTable build_potential_table(const LocallyConstantPotential& f, std::size_t depth_max,
                               NumericMode mode = NumericMode::Auto);

/// Upper limit on stored words across all levels.
inline constexpr std::size_t kMaxTableWords = std::size_t{1} << 25;

}  // namespace thermo
